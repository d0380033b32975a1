//! Exact field arithmetic.
//!
//! Computations are written against the [`Field`] trait, a field *descriptor*
//! that owns whatever context the elements need (a modulus, a square-free
//! radicand, an irreducible polynomial). Elements themselves are plain data.
//! [`FieldElement`] is the dynamically tagged counterpart used at API
//! boundaries, in reports and for points whose field is only known at runtime.

mod element;
mod extension;
mod prime;
mod primes;
mod quadratic;
mod rational;

use std::fmt;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

pub(crate) use element::with_field;
pub use element::FieldElement;
pub use extension::ExtensionField;
pub use prime::PrimeField;
pub use primes::{is_prime_u64, random_large_prime};
pub use quadratic::{Quad, QuadraticField};
pub(crate) use rational::squarefree_decompose;
pub use rational::{parse_rational, render_rational, Rationals};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ScalarError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("mixed field backends: {0} and {1}")]
    MixedBackends(String, String),
    #[error("prime size of {0} bits is outside the supported range 20..=62")]
    PrimeBitsOutOfRange(u32),
    #[error("cannot parse {input:?} as an element of {backend}")]
    Parse { input: String, backend: String },
    #[error("invalid field: {0}")]
    InvalidField(String),
}

/// Identifies a concrete field. Two elements can be combined only when their
/// backends are equal.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Backend {
    Rational,
    Prime { p: u64 },
    /// `Q(sqrt(d))` with `d` square-free; `d = 1` denotes `Q` itself.
    Quadratic { d: i64 },
    /// `F_p[X]/(modulus)`, modulus monic, coefficients low to high.
    Extension { p: u64, modulus: Vec<u64> },
}

impl fmt::Display for Backend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Backend::Rational => write!(f, "Q"),
            Backend::Prime { p } => write!(f, "F_{p}"),
            Backend::Quadratic { d } => write!(f, "Q(sqrt({d}))"),
            Backend::Extension { p, modulus } => {
                write!(f, "F_{p}[X]/(degree {} modulus)", modulus.len().saturating_sub(1))
            }
        }
    }
}

/// A field descriptor. All arithmetic goes through the descriptor so that
/// elements never need to carry their modulus around.
pub trait Field: Clone + fmt::Debug + PartialEq + Send + Sync {
    type Elem: Clone + PartialEq + fmt::Debug + Send + Sync;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_i64(&self, n: i64) -> Self::Elem;
    /// `None` when the denominator is not invertible in this field.
    fn from_rational(&self, q: &BigRational) -> Option<Self::Elem>;

    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
    fn is_zero(&self, a: &Self::Elem) -> bool;

    /// 0 for characteristic zero.
    fn characteristic(&self) -> u64;
    fn backend(&self) -> Backend;
    fn to_element(&self, a: &Self::Elem) -> FieldElement;
    fn from_element(&self, e: &FieldElement) -> Option<Self::Elem>;

    /// Square root when one exists in the field and the backend can find it.
    fn sqrt(&self, _a: &Self::Elem) -> Option<Self::Elem> {
        None
    }

    /// Image of `a` in `F_p`, for exact characteristic-zero backends that can
    /// be shadowed by a prime field. `None` if unsupported or `p` divides a
    /// denominator.
    fn shadow(&self, _a: &Self::Elem, _p: &PrimeField) -> Option<u64> {
        None
    }

    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Option<Self::Elem> {
        Some(self.mul(a, &self.inv(b)?))
    }

    /// `a <- a - c * b`
    fn sub_mul_assign(&self, a: &mut Self::Elem, c: &Self::Elem, b: &Self::Elem) {
        *a = self.sub(a, &self.mul(c, b));
    }

    fn pow(&self, a: &Self::Elem, mut n: u64) -> Self::Elem {
        let mut base = a.clone();
        let mut acc = self.one();
        while n > 0 {
            if n & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            n >>= 1;
        }
        acc
    }

    fn render(&self, a: &Self::Elem) -> String {
        self.to_element(a).to_string()
    }
}
