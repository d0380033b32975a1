use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{Backend, Field, FieldElement, PrimeField, ScalarError};

/// `a + b * sqrt(d)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Quad {
    pub a: BigRational,
    pub b: BigRational,
}

impl Quad {
    pub fn rational(a: BigRational) -> Self {
        Self { a, b: BigRational::zero() }
    }
}

/// `Q(sqrt(d))` for a square-free integer `d`; `d = 1` is `Q` itself and then
/// every element has `b = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct QuadraticField {
    d: i64,
}

impl QuadraticField {
    pub fn new(d: i64) -> Result<Self, ScalarError> {
        if d == 0 || (d != 1 && !is_squarefree(d)) {
            return Err(ScalarError::InvalidField(format!("{d} is not square-free")));
        }
        Ok(Self { d })
    }

    pub fn radicand(&self) -> i64 {
        self.d
    }

    pub fn sqrt_d(&self) -> Quad {
        if self.d == 1 {
            Quad::rational(BigRational::one())
        } else {
            Quad { a: BigRational::zero(), b: BigRational::one() }
        }
    }

    fn d_big(&self) -> BigRational {
        BigRational::from_integer(BigInt::from(self.d))
    }

    /// `a^2 - d b^2`
    pub fn norm(&self, x: &Quad) -> BigRational {
        &x.a * &x.a - self.d_big() * &x.b * &x.b
    }

    pub fn conjugate(&self, x: &Quad) -> Quad {
        Quad { a: x.a.clone(), b: -&x.b }
    }
}

fn is_squarefree(d: i64) -> bool {
    let n = d.unsigned_abs();
    let mut q = 2u64;
    while q * q <= n {
        if n % (q * q) == 0 {
            return false;
        }
        q += 1;
    }
    true
}

impl Field for QuadraticField {
    type Elem = Quad;

    fn zero(&self) -> Quad {
        Quad::rational(BigRational::zero())
    }
    fn one(&self) -> Quad {
        Quad::rational(BigRational::one())
    }
    fn from_i64(&self, n: i64) -> Quad {
        Quad::rational(BigRational::from_integer(n.into()))
    }
    fn from_rational(&self, q: &BigRational) -> Option<Quad> {
        Some(Quad::rational(q.clone()))
    }
    fn add(&self, x: &Quad, y: &Quad) -> Quad {
        Quad { a: &x.a + &y.a, b: &x.b + &y.b }
    }
    fn sub(&self, x: &Quad, y: &Quad) -> Quad {
        Quad { a: &x.a - &y.a, b: &x.b - &y.b }
    }
    fn mul(&self, x: &Quad, y: &Quad) -> Quad {
        if x.b.is_zero() && y.b.is_zero() {
            return Quad::rational(&x.a * &y.a);
        }
        Quad {
            a: &x.a * &y.a + self.d_big() * &x.b * &y.b,
            b: &x.a * &y.b + &x.b * &y.a,
        }
    }
    fn neg(&self, x: &Quad) -> Quad {
        Quad { a: -&x.a, b: -&x.b }
    }
    fn inv(&self, x: &Quad) -> Option<Quad> {
        if self.is_zero(x) {
            return None;
        }
        let n = self.norm(x);
        Some(Quad { a: &x.a / &n, b: -&x.b / &n })
    }
    fn is_zero(&self, x: &Quad) -> bool {
        x.a.is_zero() && x.b.is_zero()
    }
    fn characteristic(&self) -> u64 {
        0
    }
    fn backend(&self) -> Backend {
        Backend::Quadratic { d: self.d }
    }
    fn to_element(&self, x: &Quad) -> FieldElement {
        FieldElement::Quadratic { a: x.a.clone(), b: x.b.clone(), d: self.d }
    }
    fn from_element(&self, e: &FieldElement) -> Option<Quad> {
        match e {
            FieldElement::Quadratic { a, b, d } if *d == self.d => {
                Some(Quad { a: a.clone(), b: b.clone() })
            }
            FieldElement::Rational(q) => Some(Quad::rational(q.clone())),
            _ => None,
        }
    }
    fn shadow(&self, x: &Quad, p: &PrimeField) -> Option<u64> {
        if x.b.is_zero() {
            p.from_rational(&x.a)
        } else {
            None
        }
    }
}
