//! Kernels of integer matrices over `Q` by multi-modular reduced echelon
//! forms, rational reconstruction and exact verification.
//!
//! The result is certified: every returned vector is checked to lie in the
//! kernel over `Z`, the vectors are independent (they carry an identity
//! block on the free columns) and their number equals the kernel dimension
//! modulo some prime, which bounds the rational kernel dimension from above.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::modp::ModMatrix;
use super::LogDerivError;
use crate::scalar::is_prime_u64;

/// Sparse integer matrix given by its columns.
pub(crate) struct IntColumns {
    pub nrows: usize,
    pub cols: Vec<Vec<(usize, BigInt)>>,
}

const MAX_PRIMES: usize = 400;

/// 31-bit primes in decreasing order starting at `2^31 - 1`.
pub(crate) fn lifting_primes() -> impl Iterator<Item = u64> {
    (1u64 << 30..1u64 << 31).rev().filter(|&n| is_prime_u64(n))
}

pub(crate) fn reduce(n: &BigInt, p: u64) -> u64 {
    let r = n.mod_floor(&BigInt::from(p));
    r.try_into().expect("residue fits")
}

impl IntColumns {
    pub fn ncols(&self) -> usize {
        self.cols.len()
    }

    pub fn reduce(&self, p: u64) -> ModMatrix {
        let mut m = ModMatrix::zeros(p, self.nrows, self.cols.len());
        for (j, col) in self.cols.iter().enumerate() {
            for (i, v) in col {
                m.add_at(*i, j, reduce(v, p));
            }
        }
        m
    }

    fn annihilates(&self, v: &[BigInt]) -> bool {
        let mut acc = vec![BigInt::zero(); self.nrows];
        for (j, c) in v.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (i, x) in &self.cols[j] {
                acc[*i] += c * x;
            }
        }
        acc.iter().all(Zero::is_zero)
    }
}

/// `x / y` with `x ≡ a y (mod m)` and `|x|, |y| <= sqrt(m / 2)`, if any.
pub(crate) fn rational_reconstruction(a: &BigInt, m: &BigInt) -> Option<BigRational> {
    let bound = (m / 2u32).sqrt();
    let (mut r0, mut r1) = (m.clone(), a.mod_floor(m));
    let (mut t0, mut t1) = (BigInt::zero(), BigInt::one());
    while r1 > bound {
        let q = &r0 / &r1;
        let r2 = &r0 - &q * &r1;
        let t2 = &t0 - &q * &t1;
        (r0, r1, t0, t1) = (r1, r2, t1, t2);
    }
    if t1.is_zero() || t1.abs() > bound || !r1.gcd(&t1).is_one() {
        return None;
    }
    Some(BigRational::new(r1, t1))
}

fn crt(r: &BigInt, m: &BigInt, s: u64, p: u64) -> BigInt {
    let rp = reduce(r, p);
    let mp = reduce(m, p);
    let inv = modinv(mp, p);
    let k = (s + p - rp) % p * inv % p;
    r + m * BigInt::from(k)
}

fn modinv(a: u64, p: u64) -> u64 {
    let e = num_bigint::BigUint::from(p - 2);
    let r = num_bigint::BigUint::from(a).modpow(&e, &num_bigint::BigUint::from(p));
    r.try_into().expect("fits")
}

struct Accumulator {
    pivots: Vec<usize>,
    free: Vec<usize>,
    modulus: BigInt,
    /// `values[v][r]`: entry of kernel vector `v` at pivot column `pivots[r]`.
    values: Vec<Vec<BigInt>>,
    primes: usize,
}

fn try_lift(m: &IntColumns, acc: &Accumulator) -> Option<Vec<Vec<BigInt>>> {
    let mut out = Vec::with_capacity(acc.free.len());
    for (v, &j) in acc.free.iter().enumerate() {
        let mut q = vec![BigRational::zero(); m.ncols()];
        q[j] = BigRational::one();
        for (r, &c) in acc.pivots.iter().enumerate() {
            q[c] = rational_reconstruction(&acc.values[v][r], &acc.modulus)?;
        }
        let den = q.iter().fold(BigInt::one(), |l, x| l.lcm(x.denom()));
        let mut ints: Vec<BigInt> = q.iter().map(|x| (x * BigRational::from_integer(den.clone())).to_integer()).collect();
        let g = ints.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
        if !g.is_one() && !g.is_zero() {
            for x in &mut ints {
                *x /= &g;
            }
        }
        if !m.annihilates(&ints) {
            return None;
        }
        out.push(ints);
    }
    Some(out)
}

/// Primitive integer basis of the rational kernel of `m`.
pub(crate) fn certified_kernel(m: &IntColumns) -> Result<Vec<Vec<BigInt>>, LogDerivError> {
    let mut acc: Option<Accumulator> = None;
    let mut next_attempt = 1;
    for (tried, p) in lifting_primes().enumerate() {
        if tried >= MAX_PRIMES {
            break;
        }
        let (pivots, basis) = m.reduce(p).kernel();
        let better = match &acc {
            None => true,
            Some(a) => pivots.len() > a.pivots.len() || (pivots.len() == a.pivots.len() && pivots < a.pivots),
        };
        if better {
            let free: Vec<usize> = (0..m.ncols()).filter(|j| !pivots.contains(j)).collect();
            let values = basis.iter().map(|v| pivots.iter().map(|&c| BigInt::from(v[c])).collect()).collect();
            acc = Some(Accumulator { pivots, free, modulus: BigInt::from(p), values, primes: 1 });
            next_attempt = 1;
        } else {
            let a = acc.as_mut().expect("set above");
            if pivots != a.pivots {
                continue;
            }
            for (vals, v) in a.values.iter_mut().zip(&basis) {
                for (x, &c) in vals.iter_mut().zip(&a.pivots) {
                    *x = crt(x, &a.modulus, v[c], p);
                }
            }
            a.modulus *= p;
            a.primes += 1;
        }
        let a = acc.as_ref().expect("set above");
        if a.free.is_empty() {
            return Ok(Vec::new());
        }
        if a.primes >= next_attempt {
            if let Some(lifted) = try_lift(m, a) {
                return Ok(lifted);
            }
            next_attempt = a.primes + (a.primes / 4).max(1);
        }
    }
    Err(LogDerivError::LiftFailed(MAX_PRIMES))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cols(rows: &[&[i64]]) -> IntColumns {
        let nrows = rows.len();
        let ncols = rows[0].len();
        let cols = (0..ncols)
            .map(|j| (0..nrows).filter(|&i| rows[i][j] != 0).map(|i| (i, BigInt::from(rows[i][j]))).collect())
            .collect();
        IntColumns { nrows, cols }
    }

    #[test]
    fn reconstruction() {
        let p = 1_000_003u64;
        let x = BigRational::new(BigInt::from(-355), BigInt::from(113));
        let a = (x.numer() * BigInt::from(modinv(reduce(x.denom(), p), p))).mod_floor(&BigInt::from(p));
        assert_eq!(rational_reconstruction(&a, &BigInt::from(p)), Some(x));
        // 5 = -1/1 modulo 6, but 3 has no small representation modulo 10
        assert_eq!(rational_reconstruction(&BigInt::from(5), &BigInt::from(6)), Some(BigRational::from_integer((-1).into())));
        assert_eq!(rational_reconstruction(&BigInt::from(3), &BigInt::from(10)), None);
    }

    #[test]
    fn kernel_with_large_entries() {
        let (a, b): (i64, i64) = (987_654_321, 123_456_789);
        let m = cols(&[&[a, b, 0], &[0, 0, 1]]);
        let k = certified_kernel(&m).unwrap();
        assert_eq!(k.len(), 1);
        let g = num_integer::gcd(a, b);
        // free column 1 carries the positive entry
        assert_eq!(k[0], vec![BigInt::from(-b / g), BigInt::from(a / g), BigInt::zero()]);
    }

    #[test]
    fn full_rank_has_empty_kernel() {
        let m = cols(&[&[1, 2], &[3, 4]]);
        assert!(certified_kernel(&m).unwrap().is_empty());
    }

    #[test]
    fn bad_primes_are_outvoted() {
        // entry 2^31 - 1 vanishes modulo the first prime tried
        let p: i64 = (1 << 31) - 1;
        let m = cols(&[&[p, 1, 0], &[0, 1, 1]]);
        let k = certified_kernel(&m).unwrap();
        assert_eq!(k.len(), 1);
        assert!(m.annihilates(&k[0]));
        assert!(!k[0][0].is_zero());
    }
}
