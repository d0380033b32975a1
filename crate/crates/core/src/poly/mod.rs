//! Polynomials: homogeneous forms in `k[x, y, z]`, binary forms in `(s, t)`
//! and dense univariate polynomials.

mod binary;
mod factor;
mod homogeneous;
mod monomial;
mod parse;
mod univariate;

pub use binary::BinaryForm;
pub use factor::{
    factor_binary_finite, factor_binary_rational, factor_finite, factor_rational, Factorization,
    FiniteField,
};
pub use homogeneous::{HomogeneousPoly, RationalPoly};
pub use monomial::{basis, dim_s, Monomial, Var};
pub use parse::{parse_poly, parse_rational_poly};
pub use univariate::UniPoly;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PolyError {
    #[error("degree mismatch: {left} vs {right}")]
    DegreeMismatch { left: u32, right: u32 },
    #[error("parse error at column {column}: {msg}")]
    Parse { column: usize, msg: String },
    #[error("polynomial is not homogeneous")]
    NotHomogeneous,
    #[error("binary form is identically zero")]
    ZeroForm,
}
