pub mod addel;
pub mod curve;
pub mod linalg;
pub mod logderiv;
pub mod poly;
pub mod scalar;
pub mod singular;

#[cfg(test)]
mod testutil;
