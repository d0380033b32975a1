use std::sync::Arc;

use num_rational::BigRational;

use super::{Backend, Field, FieldElement, PrimeField, ScalarError};

/// `F_p[X]/(g)` for a monic irreducible `g` of degree `k`. Elements are
/// coefficient vectors of length `k`, low degree first.
///
/// Irreducibility of `g` is trusted; the extension is built from factors
/// produced by [`crate::poly::factor_finite`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtensionField {
    base: PrimeField,
    modulus: Arc<[u64]>,
}

impl ExtensionField {
    pub fn new(base: PrimeField, modulus: Vec<u64>) -> Result<Self, ScalarError> {
        if modulus.len() < 2 || *modulus.last().unwrap() != 1 {
            return Err(ScalarError::InvalidField(
                "extension modulus must be monic of degree >= 1".into(),
            ));
        }
        if modulus.iter().any(|&c| c >= base.modulus()) {
            return Err(ScalarError::InvalidField("modulus coefficient out of range".into()));
        }
        Ok(Self { base, modulus: modulus.into() })
    }

    pub fn base(&self) -> &PrimeField {
        &self.base
    }

    pub fn degree(&self) -> usize {
        self.modulus.len() - 1
    }

    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    /// The class of `X`, a root of the modulus.
    pub fn generator(&self) -> Vec<u64> {
        let mut v = vec![0; self.degree()];
        if self.degree() == 1 {
            // X = -g_0 in F_p
            v[0] = self.base.neg(&self.modulus[0]);
        } else {
            v[1] = 1;
        }
        v
    }

    pub fn embed(&self, a: u64) -> Vec<u64> {
        let mut v = vec![0; self.degree()];
        v[0] = a;
        v
    }

    fn reduce(&self, mut prod: Vec<u64>) -> Vec<u64> {
        let k = self.degree();
        let f = &self.base;
        while prod.len() > k {
            let lead = prod.pop().unwrap();
            if lead != 0 {
                let shift = prod.len() - k;
                for (i, &m) in self.modulus[..k].iter().enumerate() {
                    f.sub_mul_assign(&mut prod[shift + i], &lead, &m);
                }
            }
        }
        prod.resize(k, 0);
        prod
    }
}

fn trim(v: &mut Vec<u64>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

/// Polynomial division remainder over `F_p` (`b` nonzero, trimmed).
fn poly_rem(f: &PrimeField, a: &[u64], b: &[u64]) -> Vec<u64> {
    let mut r = a.to_vec();
    trim(&mut r);
    let lead_inv = f.inv_raw(*b.last().unwrap()).unwrap();
    while r.len() >= b.len() {
        let c = f.mul_raw(*r.last().unwrap(), lead_inv);
        let shift = r.len() - b.len();
        for (i, &bi) in b.iter().enumerate() {
            f.sub_mul_assign(&mut r[shift + i], &c, &bi);
        }
        trim(&mut r);
    }
    r
}

fn poly_divrem(f: &PrimeField, a: &[u64], b: &[u64]) -> (Vec<u64>, Vec<u64>) {
    let mut r = a.to_vec();
    trim(&mut r);
    if r.len() < b.len() {
        return (vec![], r);
    }
    let mut q = vec![0u64; r.len() - b.len() + 1];
    let lead_inv = f.inv_raw(*b.last().unwrap()).unwrap();
    while r.len() >= b.len() {
        let c = f.mul_raw(*r.last().unwrap(), lead_inv);
        let shift = r.len() - b.len();
        q[shift] = c;
        for (i, &bi) in b.iter().enumerate() {
            f.sub_mul_assign(&mut r[shift + i], &c, &bi);
        }
        trim(&mut r);
    }
    (q, r)
}

fn poly_mul(f: &PrimeField, a: &[u64], b: &[u64]) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = f.add_raw(out[i + j], f.mul_raw(x, y));
        }
    }
    out
}

fn poly_sub(f: &PrimeField, a: &[u64], b: &[u64]) -> Vec<u64> {
    let n = a.len().max(b.len());
    let mut out: Vec<u64> = (0..n)
        .map(|i| f.sub_raw(*a.get(i).unwrap_or(&0), *b.get(i).unwrap_or(&0)))
        .collect();
    trim(&mut out);
    out
}

impl Field for ExtensionField {
    type Elem = Vec<u64>;

    fn zero(&self) -> Vec<u64> {
        vec![0; self.degree()]
    }
    fn one(&self) -> Vec<u64> {
        self.embed(1)
    }
    fn from_i64(&self, n: i64) -> Vec<u64> {
        self.embed(self.base.reduce_i64(n))
    }
    fn from_rational(&self, q: &BigRational) -> Option<Vec<u64>> {
        Some(self.embed(self.base.from_rational(q)?))
    }
    fn add(&self, a: &Vec<u64>, b: &Vec<u64>) -> Vec<u64> {
        a.iter().zip(b).map(|(&x, &y)| self.base.add_raw(x, y)).collect()
    }
    fn sub(&self, a: &Vec<u64>, b: &Vec<u64>) -> Vec<u64> {
        a.iter().zip(b).map(|(&x, &y)| self.base.sub_raw(x, y)).collect()
    }
    fn mul(&self, a: &Vec<u64>, b: &Vec<u64>) -> Vec<u64> {
        self.reduce(poly_mul(&self.base, a, b))
    }
    fn neg(&self, a: &Vec<u64>) -> Vec<u64> {
        a.iter().map(|x| self.base.neg(x)).collect()
    }
    fn inv(&self, a: &Vec<u64>) -> Option<Vec<u64>> {
        let f = &self.base;
        let mut r0 = self.modulus.to_vec();
        let mut r1 = a.clone();
        trim(&mut r1);
        if r1.is_empty() {
            return None;
        }
        let mut t0: Vec<u64> = vec![];
        let mut t1: Vec<u64> = vec![1];
        while !r1.is_empty() {
            let (q, r) = poly_divrem(f, &r0, &r1);
            let t = poly_sub(f, &t0, &poly_mul(f, &q, &t1));
            r0 = std::mem::replace(&mut r1, r);
            t0 = std::mem::replace(&mut t1, t);
        }
        // r0 is a nonzero constant when the modulus is irreducible.
        if r0.len() != 1 {
            return None;
        }
        let c = f.inv_raw(r0[0])?;
        let scaled: Vec<u64> = t0.iter().map(|&x| f.mul_raw(x, c)).collect();
        Some(self.reduce(poly_rem(f, &scaled, &self.modulus)))
    }
    fn is_zero(&self, a: &Vec<u64>) -> bool {
        a.iter().all(|&x| x == 0)
    }
    fn characteristic(&self) -> u64 {
        self.base.modulus()
    }
    fn backend(&self) -> Backend {
        Backend::Extension { p: self.base.modulus(), modulus: self.modulus.to_vec() }
    }
    fn to_element(&self, a: &Vec<u64>) -> FieldElement {
        FieldElement::Extension {
            coeffs: a.clone(),
            p: self.base.modulus(),
            modulus: self.modulus.clone(),
        }
    }
    fn from_element(&self, e: &FieldElement) -> Option<Vec<u64>> {
        match e {
            FieldElement::Extension { coeffs, p, modulus }
                if *p == self.base.modulus() && **modulus == *self.modulus =>
            {
                Some(coeffs.clone())
            }
            FieldElement::Prime { value, p } if *p == self.base.modulus() => Some(self.embed(*value)),
            FieldElement::Rational(q) => self.from_rational(q),
            _ => None,
        }
    }
}
