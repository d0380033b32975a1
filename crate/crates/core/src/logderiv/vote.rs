use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::scalar::{random_large_prime, PrimeField};

/// Result of running a computation over several random primes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vote<T> {
    pub value: T,
    /// Primes whose run succeeded, in the order drawn.
    pub primes: Vec<u64>,
    /// How many of them produced `value`.
    pub agreeing: usize,
    pub warnings: Vec<String>,
}

const MAX_DRAWS: usize = 12;

/// Runs `run` over two random 31-bit primes drawn from `seed`; on
/// disagreement a third prime decides by majority. Errors for which
/// `retry` holds (a bad reduction, say) discard the prime and draw another.
/// With `fixed` the single given prime is used.
pub fn vote_over_primes<T: PartialEq + Clone, E>(
    seed: u64,
    fixed: Option<u64>,
    run: impl Fn(PrimeField) -> Result<T, E>,
    retry: impl Fn(&E) -> bool,
) -> Result<Vote<T>, E> {
    if let Some(p) = fixed {
        let value = run(PrimeField::new(p))?;
        return Ok(Vote { value, primes: vec![p], agreeing: 1, warnings: Vec::new() });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut primes = Vec::new();
    let mut values: Vec<T> = Vec::new();
    let mut warnings = Vec::new();
    let mut last_err = None;
    for _ in 0..MAX_DRAWS {
        let want = if values.len() == 2 && values[0] != values[1] { 3 } else { 2 };
        if values.len() >= want {
            break;
        }
        let p = random_large_prime(31, &mut rng).expect("31-bit primes exist");
        if primes.contains(&p) {
            continue;
        }
        match run(PrimeField::new(p)) {
            Ok(v) => {
                primes.push(p);
                values.push(v);
            }
            Err(e) if retry(&e) => {
                warnings.push(format!("prime {p} discarded: bad reduction"));
                last_err = Some(e);
            }
            Err(e) => return Err(e),
        }
    }
    if values.is_empty() {
        return Err(last_err.expect("every draw failed"));
    }
    let count = |v: &T| values.iter().filter(|w| *w == v).count();
    let (best, agreeing) = values.iter().map(|v| (v.clone(), count(v))).max_by_key(|(_, c)| *c).expect("nonempty");
    if agreeing < values.len() {
        warnings.push(format!("primes {primes:?} disagree; majority of {agreeing} used"));
    }
    Ok(Vote { value: best, primes, agreeing, warnings })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn agreeing_primes() {
        let v = vote_over_primes(3, None, |f| Ok::<_, ()>(f.modulus() > 0), |_| false).unwrap();
        assert!(v.value);
        assert_eq!(v.primes.len(), 2);
        assert_eq!(v.agreeing, 2);
        assert!(v.warnings.is_empty());
        let again = vote_over_primes(3, None, |f| Ok::<_, ()>(f.modulus() > 0), |_| false).unwrap();
        assert_eq!(v.primes, again.primes);
    }

    #[test]
    fn majority_breaks_ties() {
        let first = vote_over_primes(5, None, |f| Ok::<_, ()>(f.modulus()), |_| false).unwrap();
        let bad = first.primes[0];
        let v = vote_over_primes(5, None, |f| Ok::<_, ()>(f.modulus() == bad), |_| false).unwrap();
        assert_eq!(v.primes.len(), 3);
        assert!(!v.value);
        assert_eq!(v.agreeing, 2);
        assert_eq!(v.warnings.len(), 1);
    }

    #[test]
    fn bad_reductions_are_redrawn() {
        let first = vote_over_primes(9, None, |f| Ok::<_, ()>(f.modulus()), |_| false).unwrap();
        let bad = first.primes[0];
        let v = vote_over_primes(9, None, |f| if f.modulus() == bad { Err("bad") } else { Ok(1) }, |_| true).unwrap();
        assert!(!v.primes.contains(&bad));
        assert_eq!(v.primes.len(), 2);
    }
}
