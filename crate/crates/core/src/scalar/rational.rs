use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::{Backend, Field, FieldElement, PrimeField, ScalarError};

/// The rational numbers, backed by reduced `BigRational`s.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Rationals;

impl Field for Rationals {
    type Elem = BigRational;

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn from_i64(&self, n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }
    fn from_rational(&self, q: &BigRational) -> Option<BigRational> {
        Some(q.clone())
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn inv(&self, a: &BigRational) -> Option<BigRational> {
        (!a.is_zero()).then(|| a.recip())
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn is_one(&self, a: &BigRational) -> bool {
        a.is_one()
    }
    fn characteristic(&self) -> u64 {
        0
    }
    fn backend(&self) -> Backend {
        Backend::Rational
    }
    fn to_element(&self, a: &BigRational) -> FieldElement {
        FieldElement::Rational(a.clone())
    }
    fn from_element(&self, e: &FieldElement) -> Option<BigRational> {
        match e {
            FieldElement::Rational(q) => Some(q.clone()),
            _ => None,
        }
    }
    fn sqrt(&self, a: &BigRational) -> Option<BigRational> {
        if a.is_negative() {
            return None;
        }
        let n = exact_isqrt(a.numer())?;
        let d = exact_isqrt(a.denom())?;
        Some(BigRational::new(n, d))
    }
    fn shadow(&self, a: &BigRational, p: &PrimeField) -> Option<u64> {
        p.from_rational(a)
    }
    fn sub_mul_assign(&self, a: &mut BigRational, c: &BigRational, b: &BigRational) {
        *a -= c * b;
    }
}

fn exact_isqrt(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    (&r * &r == *n).then_some(r)
}

/// Renders `a/b`, or `a` for integers.
pub fn render_rational(q: &BigRational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Parses `a` or `a/b` (optional sign, surrounding whitespace ignored).
pub fn parse_rational(s: &str) -> Result<BigRational, ScalarError> {
    let err = || ScalarError::Parse { input: s.to_string(), backend: "Q".into() };
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if t.is_empty() {
        return Err(err());
    }
    let (num, den) = match t.split_once('/') {
        Some((n, d)) => (n, d),
        None => (t.as_str(), "1"),
    };
    let num: BigInt = num.parse().map_err(|_| err())?;
    let den: BigInt = den.parse().map_err(|_| err())?;
    if den.is_zero() {
        return Err(ScalarError::DivisionByZero);
    }
    Ok(BigRational::new(num, den))
}

/// Square-free decomposition `n = s * r^2` of a nonzero integer by trial
/// division, with `s` carrying the sign. `None` if `n` has a prime factor
/// above `limit` that is not a square (the radicand cannot be certified).
pub(crate) fn squarefree_decompose(n: &BigInt, limit: u64) -> Option<(BigInt, BigInt)> {
    assert!(!n.is_zero());
    let mut rest = n.abs();
    let mut square = BigInt::one();
    let mut free = if n.is_negative() { -BigInt::one() } else { BigInt::one() };
    let mut q: u64 = 2;
    while q <= limit {
        let qb = BigInt::from(q);
        if &qb * &qb > rest {
            break;
        }
        let mut e = 0u32;
        while (&rest % &qb).is_zero() {
            rest /= &qb;
            e += 1;
        }
        if e > 0 {
            square *= qb.pow(e / 2);
            if e % 2 == 1 {
                free *= &qb;
            }
        }
        q += if q == 2 { 1 } else { 2 };
    }
    if rest.is_one() {
        return Some((free, square));
    }
    let r = rest.sqrt();
    if &r * &r == rest {
        return Some((free, square * r));
    }
    // Remaining cofactor is prime if it is below limit^2; otherwise give up.
    let lim = BigInt::from(limit);
    if rest < &lim * &lim {
        return Some((free * rest, square));
    }
    None
}
