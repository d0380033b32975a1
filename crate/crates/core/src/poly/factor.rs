//! Univariate and binary-form factorization.
//!
//! Over finite fields: square-free decomposition, distinct-degree
//! factorization and Cantor–Zassenhaus equal-degree splitting, with a seeded
//! RNG so results are reproducible. Over `Q`: linear factors by the
//! rational-root test and quadratic factors by Kronecker's method; anything
//! left is returned unsplit.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{BinaryForm, PolyError, UniPoly};
use crate::scalar::{ExtensionField, Field, PrimeField, Rationals};

/// A finite field that supports random sampling and `p`-th roots.
pub trait FiniteField: Field {
    fn order(&self) -> BigUint;
    fn random_elem(&self, rng: &mut ChaCha8Rng) -> Self::Elem;
    /// Inverse of the Frobenius `a -> a^p`.
    fn pth_root(&self, a: &Self::Elem) -> Self::Elem;
}

impl FiniteField for PrimeField {
    fn order(&self) -> BigUint {
        BigUint::from(self.modulus())
    }
    fn random_elem(&self, rng: &mut ChaCha8Rng) -> u64 {
        rng.gen_range(0..self.modulus())
    }
    fn pth_root(&self, a: &u64) -> u64 {
        *a
    }
}

impl FiniteField for ExtensionField {
    fn order(&self) -> BigUint {
        BigUint::from(self.base().modulus()).pow(self.degree() as u32)
    }
    fn random_elem(&self, rng: &mut ChaCha8Rng) -> Vec<u64> {
        (0..self.degree()).map(|_| rng.gen_range(0..self.base().modulus())).collect()
    }
    fn pth_root(&self, a: &Vec<u64>) -> Vec<u64> {
        // a^(p^(k-1))
        let p = self.base().modulus();
        (1..self.degree()).fold(a.clone(), |acc, _| self.pow(&acc, p))
    }
}

/// Factors with multiplicities. `complete` is false when some factor could
/// not be certified irreducible.
#[derive(Debug, Clone, PartialEq)]
pub struct Factorization<P> {
    pub factors: Vec<(P, usize)>,
    pub complete: bool,
}

fn pth_root_poly<F: FiniteField>(f: &UniPoly<F>) -> UniPoly<F> {
    let p = f.field().characteristic() as usize;
    let coeffs = f.coeffs().iter().step_by(p).map(|c| f.field().pth_root(c)).collect();
    UniPoly::new(f.field().clone(), coeffs)
}

/// Square-free decomposition of a monic polynomial: `(g_i, i)` with
/// `f = prod g_i^i` and the `g_i` square-free and pairwise coprime.
fn squarefree_decomposition<F: FiniteField>(f: &UniPoly<F>) -> Vec<(UniPoly<F>, usize)> {
    let p = f.field().characteristic() as usize;
    let mut out = Vec::new();
    let d = f.derivative();
    if d.is_zero() {
        if f.degree().unwrap_or(0) > 0 {
            for (g, m) in squarefree_decomposition(&pth_root_poly(f)) {
                out.push((g, m * p));
            }
        }
        return out;
    }
    let mut c = f.gcd(&d);
    let mut w = f.div_exact(&c).unwrap();
    let mut i = 1;
    while w.degree().unwrap_or(0) > 0 {
        let y = w.gcd(&c);
        let z = w.div_exact(&y).unwrap();
        if z.degree().unwrap_or(0) > 0 {
            out.push((z, i));
        }
        i += 1;
        c = c.div_exact(&y).unwrap();
        w = y;
    }
    if c.degree().unwrap_or(0) > 0 {
        for (g, m) in squarefree_decomposition(&pth_root_poly(&c)) {
            out.push((g, m * p));
        }
    }
    out
}

/// Distinct-degree factorization of a monic square-free polynomial.
fn distinct_degree<F: FiniteField>(f: &UniPoly<F>) -> Vec<(UniPoly<F>, usize)> {
    let q = f.field().order();
    let x = UniPoly::x(f.field().clone());
    let mut rest = f.clone();
    let mut h = x.rem(&rest);
    let mut out = Vec::new();
    let mut i = 1;
    while rest.degree().unwrap_or(0) >= 2 * i {
        h = h.pow_mod(&q, &rest);
        let g = rest.gcd(&h.sub(&x));
        if g.degree().unwrap_or(0) > 0 {
            rest = rest.div_exact(&g).unwrap();
            h = h.rem(&rest);
            out.push((g, i));
        }
        i += 1;
    }
    if let Some(n) = rest.degree().filter(|&n| n > 0) {
        out.push((rest, n));
    }
    out
}

/// Splits a monic square-free product of irreducibles of degree `d`.
fn equal_degree<F: FiniteField>(f: &UniPoly<F>, d: usize, rng: &mut ChaCha8Rng) -> Vec<UniPoly<F>> {
    let field = f.field().clone();
    let n = f.degree().unwrap();
    if n == d {
        return vec![f.clone()];
    }
    let q = field.order();
    let one = UniPoly::one(field.clone());
    let odd = field.characteristic() != 2;
    let exponent = (q.pow(d as u32) - 1u32) / 2u32;
    let mut parts = vec![f.clone()];
    while parts.len() < n / d {
        let h = UniPoly::new(field.clone(), (0..n).map(|_| field.random_elem(rng)).collect());
        if h.degree().unwrap_or(0) == 0 {
            continue;
        }
        let g = if odd {
            h.pow_mod(&exponent, f).sub(&one)
        } else {
            // absolute trace to F_2
            let bits = q.bits() as usize - 1;
            let mut acc = h.rem(f);
            let mut pw = acc.clone();
            for _ in 1..bits * d {
                pw = pw.mul(&pw).rem(f);
                acc = acc.add(&pw);
            }
            acc
        };
        let mut next = Vec::with_capacity(parts.len() + 1);
        for u in parts {
            if u.degree().unwrap() == d {
                next.push(u);
                continue;
            }
            let s = u.gcd(&g.rem(&u));
            match s.degree() {
                Some(k) if k > 0 && k < u.degree().unwrap() => {
                    next.push(u.div_exact(&s).unwrap().monic());
                    next.push(s);
                }
                _ => next.push(u),
            }
        }
        parts = next;
    }
    parts
}

fn sort_key<F: Field>(p: &UniPoly<F>) -> (usize, Vec<String>) {
    let coeffs = p.coeffs().iter().rev().map(|c| p.field().render(c)).collect();
    (p.degree().unwrap_or(0), coeffs)
}

/// Complete factorization into monic irreducibles over a finite field, in a
/// canonical order (by degree, then coefficients). The leading coefficient is
/// dropped.
pub fn factor_finite<F: FiniteField>(f: &UniPoly<F>, seed: u64) -> Result<Factorization<UniPoly<F>>, PolyError> {
    if f.is_zero() {
        return Err(PolyError::ZeroForm);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut factors = Vec::new();
    for (g, mult) in squarefree_decomposition(&f.monic()) {
        for (h, d) in distinct_degree(&g) {
            for irr in equal_degree(&h, d, &mut rng) {
                factors.push((irr, mult));
            }
        }
    }
    factors.sort_by_cached_key(|(p, m)| (sort_key(p), *m));
    Ok(Factorization { factors, complete: true })
}

fn homogenize_factors<F: Field>(
    u: &BinaryForm<F>,
    fact: Factorization<UniPoly<F>>,
) -> Result<Factorization<BinaryForm<F>>, PolyError> {
    let inf = u.infinity_multiplicity()?;
    let mut factors: Vec<(BinaryForm<F>, usize)> = Vec::new();
    if inf > 0 {
        factors.push((BinaryForm::t(u.field().clone()), inf));
    }
    for (g, m) in fact.factors {
        let d = g.degree().unwrap();
        factors.push((BinaryForm::homogenize(&g, d), m));
    }
    Ok(Factorization { factors, complete: fact.complete })
}

/// Factors a binary form over a finite field. The root `[1:0]` appears as
/// the factor `t`; every other factor is the homogenization of a monic
/// irreducible in `X = s/t`.
pub fn factor_binary_finite<F: FiniteField>(
    u: &BinaryForm<F>,
    seed: u64,
) -> Result<Factorization<BinaryForm<F>>, PolyError> {
    u.infinity_multiplicity()?;
    homogenize_factors(u, factor_finite(&u.finite_part(), seed)?)
}

/// Factors a binary form over `Q` as far as [`factor_rational`] can.
pub fn factor_binary_rational(u: &BinaryForm<Rationals>) -> Result<Factorization<BinaryForm<Rationals>>, PolyError> {
    u.infinity_multiplicity()?;
    homogenize_factors(u, factor_rational(&u.finite_part())?)
}

// Integer values beyond this are not factored by trial division.
const TRIAL_DIVISION_LIMIT: u64 = 100_000_000_000_000;
// Cap on Kronecker candidate triples for one quadratic search.
const KRONECKER_GUARD: usize = 200_000;

fn divisors(n: &BigInt) -> Option<Vec<BigInt>> {
    let n = n.abs().to_u64().filter(|&n| n > 0 && n <= TRIAL_DIVISION_LIMIT)?;
    let mut primes: Vec<(u64, u32)> = Vec::new();
    let mut m = n;
    let mut d = 2u64;
    while d * d <= m {
        let mut e = 0;
        while m % d == 0 {
            m /= d;
            e += 1;
        }
        if e > 0 {
            primes.push((d, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if m > 1 {
        primes.push((m, 1));
    }
    let mut out = vec![1u64];
    for (p, e) in primes {
        let prev = out.clone();
        let mut pk = 1u64;
        for _ in 0..e {
            pk *= p;
            out.extend(prev.iter().map(|x| x * pk));
        }
    }
    out.sort_unstable();
    Some(out.into_iter().map(BigInt::from).collect())
}

/// Integer coefficients with content 1 and positive leading coefficient.
fn primitive_integer(f: &UniPoly<Rationals>) -> Vec<BigInt> {
    let lcm = f.coeffs().iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = f.coeffs().iter().map(|c| (c * BigRational::from_integer(lcm.clone())).to_integer()).collect();
    let mut g = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    if ints.last().is_some_and(|c| c.is_negative()) {
        g = -g;
    }
    ints.into_iter().map(|c| c / &g).collect()
}

fn from_ints(cs: &[BigInt]) -> UniPoly<Rationals> {
    UniPoly::new(Rationals, cs.iter().map(|c| BigRational::from_integer(c.clone())).collect())
}

fn eval_int(cs: &[BigInt], x: &BigInt) -> BigInt {
    cs.iter().rev().fold(BigInt::zero(), |acc, c| acc * x + c)
}

/// A rational root of `f`, by the rational-root test. `Err(())` if the
/// coefficients are too large to enumerate candidates.
fn rational_root(f: &UniPoly<Rationals>) -> Result<Option<BigRational>, ()> {
    let cs = primitive_integer(f);
    if cs[0].is_zero() {
        return Ok(Some(BigRational::zero()));
    }
    let num = divisors(&cs[0]).ok_or(())?;
    let den = divisors(cs.last().unwrap()).ok_or(())?;
    for q in &den {
        for p in &num {
            for sign in [1, -1] {
                let r = BigRational::new(p * sign, q.clone());
                if f.eval(&r).is_zero() {
                    return Ok(Some(r));
                }
            }
        }
    }
    Ok(None)
}

/// A monic quadratic factor of a primitive integer polynomial with no
/// rational roots, by interpolation through `x = 0, 1, -1`.
fn quadratic_factor(f: &UniPoly<Rationals>) -> Result<Option<UniPoly<Rationals>>, ()> {
    let cs = primitive_integer(f);
    let vals: Vec<BigInt> = [0i64, 1, -1].iter().map(|&x| eval_int(&cs, &BigInt::from(x))).collect();
    let d0 = divisors(&vals[0]).ok_or(())?;
    let d1 = divisors(&vals[1]).ok_or(())?;
    let dm = divisors(&vals[2]).ok_or(())?;
    if d0.len() * d1.len() * dm.len() * 4 > KRONECKER_GUARD {
        return Err(());
    }
    let lc = cs.last().unwrap();
    let two = BigInt::from(2);
    for c in &d0 {
        for v1 in &d1 {
            for vm in &dm {
                for (s1, sm) in [(1i64, 1i64), (1, -1), (-1, 1), (-1, -1)] {
                    let (v1, vm) = (v1 * s1, vm * sm);
                    let sum = &v1 + &vm;
                    let diff = &v1 - &vm;
                    if !sum.is_even() || !diff.is_even() {
                        continue;
                    }
                    let a = &sum / &two - c;
                    let b = &diff / &two;
                    if a.is_zero() || !(lc % &a).is_zero() {
                        continue;
                    }
                    let cand = from_ints(&[c.clone(), b, a]);
                    if f.rem(&cand).is_zero() {
                        return Ok(Some(cand.monic()));
                    }
                }
            }
        }
    }
    Ok(None)
}

/// Square-free decomposition in characteristic zero (Yun).
fn yun(f: &UniPoly<Rationals>) -> Vec<(UniPoly<Rationals>, usize)> {
    let mut out = Vec::new();
    let d = f.derivative();
    let a = f.gcd(&d);
    let mut b = f.div_exact(&a).unwrap();
    let mut c = d.div_exact(&a).unwrap();
    let mut i = 1;
    while b.degree().unwrap_or(0) > 0 {
        let dd = c.sub(&b.derivative());
        let g = b.gcd(&dd);
        b = b.div_exact(&g).unwrap();
        c = dd.div_exact(&g).unwrap();
        if g.degree().unwrap_or(0) > 0 {
            out.push((g.monic(), i));
        }
        i += 1;
    }
    out
}

/// Factorization over `Q` into monic factors. Linear and quadratic factors
/// are always extracted when coefficients allow; a remaining factor of degree
/// at most 5 with no linear or quadratic divisor is irreducible. Larger
/// leftovers are returned unsplit with `complete = false`.
pub fn factor_rational(f: &UniPoly<Rationals>) -> Result<Factorization<UniPoly<Rationals>>, PolyError> {
    if f.is_zero() {
        return Err(PolyError::ZeroForm);
    }
    let mut factors = Vec::new();
    let mut complete = true;
    for (g, mult) in yun(&f.monic()) {
        let mut rest = g;
        let mut blocked = false;
        while rest.degree().unwrap() >= 1 && !blocked {
            match rational_root(&rest) {
                Ok(Some(r)) => {
                    let lin = UniPoly::new(Rationals, vec![-r, BigRational::one()]);
                    rest = rest.div_exact(&lin).unwrap();
                    factors.push((lin, mult));
                }
                Ok(None) => break,
                Err(()) => blocked = true,
            }
        }
        while rest.degree().unwrap() >= 4 && !blocked {
            match quadratic_factor(&rest) {
                Ok(Some(q)) => {
                    rest = rest.div_exact(&q).unwrap();
                    factors.push((q, mult));
                }
                Ok(None) => break,
                Err(()) => blocked = true,
            }
        }
        let n = rest.degree().unwrap();
        if n >= 1 {
            if blocked || n > 5 {
                complete = false;
            }
            factors.push((rest, mult));
        }
    }
    factors.sort_by_cached_key(|(p, m)| (sort_key(p), *m));
    Ok(Factorization { factors, complete })
}

#[cfg(test)]
mod tests {
    use proptest::prelude::*;
    use rand::Rng;

    use super::*;

    fn q(cs: &[i64]) -> UniPoly<Rationals> {
        UniPoly::new(Rationals, cs.iter().map(|&c| Rationals.from_i64(c)).collect())
    }

    fn product<F: Field>(field: &F, fs: &Factorization<UniPoly<F>>) -> UniPoly<F> {
        fs.factors.iter().fold(UniPoly::one(field.clone()), |acc, (g, m)| acc.mul(&g.pow(*m as u32)))
    }

    #[test]
    fn rational_linear_and_quadratic() {
        // s^2 - t^2
        let u = BinaryForm::new(Rationals, vec![1, 0, -1].into_iter().map(|c| Rationals.from_i64(c)).collect());
        let fs = factor_binary_rational(&u).unwrap();
        assert!(fs.complete);
        assert_eq!(fs.factors.len(), 2);
        assert!(fs.factors.iter().all(|(g, m)| g.degree() == 1 && *m == 1));
        // s^2 - 2 t^2 stays a quadratic
        let u = BinaryForm::new(Rationals, vec![1, 0, -2].into_iter().map(|c| Rationals.from_i64(c)).collect());
        let fs = factor_binary_rational(&u).unwrap();
        assert_eq!(fs.factors.len(), 1);
        assert_eq!(fs.factors[0].0.degree(), 2);
    }

    #[test]
    fn rational_quartic_splits_into_quadratics() {
        // (x^2 - 2)(x^2 + x + 3)^2 (3x - 1)
        let f = q(&[-2, 0, 1]).mul(&q(&[3, 1, 1]).pow(2)).mul(&q(&[-1, 3]));
        let fs = factor_rational(&f).unwrap();
        assert!(fs.complete);
        assert_eq!(fs.factors.len(), 3);
        assert_eq!(product(&Rationals, &fs), f.monic());
    }

    #[test]
    fn rational_irreducible_sextic_is_unsplit() {
        let f = q(&[2, 0, 0, 0, 0, 0, 1]);
        let fs = factor_rational(&f).unwrap();
        assert_eq!(fs.factors.len(), 1);
        assert!(!fs.complete);
    }

    #[test]
    fn degree_six_over_f31() {
        let f = PrimeField::new(31);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let g = UniPoly::new(f, (0..7).map(|_| rng.gen_range(1..31)).collect());
        let fs = factor_finite(&g, 5).unwrap();
        assert_eq!(product(&f, &fs), g.monic());
    }

    #[test]
    fn finite_multiplicity_divisible_by_p() {
        // (x + 1)^5 (x^2 + 2) over F_5
        let f = PrimeField::new(5);
        let g = UniPoly::new(f, vec![1, 1]).pow(5).mul(&UniPoly::new(f, vec![2, 0, 1]));
        let fs = factor_finite(&g, 0).unwrap();
        assert_eq!(fs.factors, vec![(UniPoly::new(f, vec![1, 1]), 5), (UniPoly::new(f, vec![2, 0, 1]), 1)]);
    }

    #[test]
    fn characteristic_two() {
        let f = PrimeField::new(2);
        // x (x + 1)(x^2 + x + 1)(x^3 + x + 1)
        let g = UniPoly::new(f, vec![0, 1])
            .mul(&UniPoly::new(f, vec![1, 1]))
            .mul(&UniPoly::new(f, vec![1, 1, 1]))
            .mul(&UniPoly::new(f, vec![1, 1, 0, 1]));
        let fs = factor_finite(&g, 3).unwrap();
        assert_eq!(fs.factors.len(), 4);
        assert_eq!(product(&f, &fs), g);
    }

    #[test]
    fn factoring_over_an_extension() {
        // x^2 + 1 over F_7[i]/(i^2 + 1) splits as (x - i)(x + i)
        let k = ExtensionField::new(PrimeField::new(7), vec![1, 0, 1]).unwrap();
        let g = UniPoly::new(k.clone(), vec![k.one(), k.zero(), k.one()]);
        let fs = factor_finite(&g, 1).unwrap();
        assert_eq!(fs.factors.len(), 2);
        assert_eq!(product(&k, &fs), g);
    }

    #[test]
    fn seeded_results_are_stable() {
        let f = PrimeField::new(1_000_003);
        let g = UniPoly::new(f, vec![5, 7, 0, 3, 1, 9, 1]);
        assert_eq!(factor_finite(&g, 1).unwrap(), factor_finite(&g, 2).unwrap());
    }

    proptest! {
        #[test]
        fn multiply_back_mod_p(cs in prop::collection::vec(0u64..97, 2..10)) {
            let f = PrimeField::new(97);
            let g = UniPoly::new(f, cs);
            prop_assume!(!g.is_zero());
            let fs = factor_finite(&g, 9).unwrap();
            prop_assert_eq!(product(&f, &fs), g.monic());
            for (h, _) in &fs.factors {
                // irreducible factors of degree > 1 have no roots
                if h.degree().unwrap() > 1 {
                    prop_assert!((0..97).all(|x| h.eval(&x) != 0));
                }
            }
        }
    }
}
