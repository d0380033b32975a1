use crate::curve::ReducedCurve;
use crate::poly::parse_rational_poly;
use crate::scalar::Rationals;

pub fn curve(srcs: &[&str]) -> ReducedCurve<Rationals> {
    ReducedCurve::from_polys(srcs.iter().map(|s| parse_rational_poly(s).unwrap()).collect()).unwrap()
}

pub const OCTIC_2_5: [&str; 5] = ["x - y", "x + y", "x^2 + y^2 - z^2", "2*y^2 - z^2", "2*x^2 - z^2"];

/// A free curve of degree 14 with exponents (6, 7).
pub const CURVE_6_7: [&str; 9] = [
    "x^2 + 2*x*y + y^2 + x*z",
    "x^2 + x*z + y*z",
    "x^2 + x*y + z^2",
    "x + y - z",
    "y",
    "x + z",
    "2*x + y",
    "x^2 - y^2 + x*z + 2*y*z",
    "x^2 + 2*x*y - x*z + y*z",
];
