use std::fmt;
use std::sync::Arc;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::{parse_rational, render_rational, Backend, Field, PrimeField, ScalarError};

/// A field element tagged with its backend.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum FieldElement {
    Rational(BigRational),
    Prime { value: u64, p: u64 },
    Quadratic { a: BigRational, b: BigRational, d: i64 },
    Extension { coeffs: Vec<u64>, p: u64, modulus: Arc<[u64]> },
}

/// Runs `$body` with `$f` bound to the concrete field of `$backend` and the
/// operands converted into its element type.
macro_rules! with_field {
    ($backend:expr, |$f:ident| $body:expr) => {
        match $backend {
            $crate::scalar::Backend::Rational => {
                let $f = $crate::scalar::Rationals;
                $body
            }
            $crate::scalar::Backend::Prime { p } => {
                let $f = $crate::scalar::PrimeField::new(p);
                $body
            }
            $crate::scalar::Backend::Quadratic { d } => {
                let $f = $crate::scalar::QuadraticField::new(d).expect("backend radicand is square-free");
                $body
            }
            $crate::scalar::Backend::Extension { p, modulus } => {
                let $f = $crate::scalar::ExtensionField::new($crate::scalar::PrimeField::new(p), modulus)
                    .expect("backend modulus is valid");
                $body
            }
        }
    };
}
pub(crate) use with_field;

impl FieldElement {
    pub fn backend(&self) -> Backend {
        match self {
            FieldElement::Rational(_) => Backend::Rational,
            FieldElement::Prime { p, .. } => Backend::Prime { p: *p },
            FieldElement::Quadratic { d, .. } => Backend::Quadratic { d: *d },
            FieldElement::Extension { p, modulus, .. } => {
                Backend::Extension { p: *p, modulus: modulus.to_vec() }
            }
        }
    }

    pub fn zero(backend: &Backend) -> Self {
        with_field!(backend.clone(), |f| f.to_element(&f.zero()))
    }

    pub fn one(backend: &Backend) -> Self {
        with_field!(backend.clone(), |f| f.to_element(&f.one()))
    }

    pub fn from_rational(q: &BigRational, backend: &Backend) -> Result<Self, ScalarError> {
        with_field!(backend.clone(), |f| f
            .from_rational(q)
            .map(|e| f.to_element(&e))
            .ok_or(ScalarError::DivisionByZero))
    }

    pub fn is_zero(&self) -> bool {
        match self {
            FieldElement::Rational(q) => q.is_zero(),
            FieldElement::Prime { value, .. } => *value == 0,
            FieldElement::Quadratic { a, b, .. } => a.is_zero() && b.is_zero(),
            FieldElement::Extension { coeffs, .. } => coeffs.iter().all(|&c| c == 0),
        }
    }

    fn binary(
        &self,
        other: &Self,
        op: impl Fn(&Backend, &Self, &Self) -> Result<Self, ScalarError>,
    ) -> Result<Self, ScalarError> {
        let (ba, bb) = (self.backend(), other.backend());
        if ba != bb {
            return Err(ScalarError::MixedBackends(ba.to_string(), bb.to_string()));
        }
        op(&ba, self, other)
    }

    pub fn add(&self, other: &Self) -> Result<Self, ScalarError> {
        self.binary(other, |b, x, y| {
            with_field!(b.clone(), |f| {
                let (x, y) = (f.from_element(x).unwrap(), f.from_element(y).unwrap());
                Ok(f.to_element(&f.add(&x, &y)))
            })
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self, ScalarError> {
        self.binary(other, |b, x, y| {
            with_field!(b.clone(), |f| {
                let (x, y) = (f.from_element(x).unwrap(), f.from_element(y).unwrap());
                Ok(f.to_element(&f.sub(&x, &y)))
            })
        })
    }

    pub fn mul(&self, other: &Self) -> Result<Self, ScalarError> {
        self.binary(other, |b, x, y| {
            with_field!(b.clone(), |f| {
                let (x, y) = (f.from_element(x).unwrap(), f.from_element(y).unwrap());
                Ok(f.to_element(&f.mul(&x, &y)))
            })
        })
    }

    pub fn div(&self, other: &Self) -> Result<Self, ScalarError> {
        self.mul(&other.inverse()?)
    }

    pub fn inverse(&self) -> Result<Self, ScalarError> {
        with_field!(self.backend(), |f| {
            let x = f.from_element(self).unwrap();
            f.inv(&x).map(|i| f.to_element(&i)).ok_or(ScalarError::DivisionByZero)
        })
    }

    pub fn neg(&self) -> Self {
        with_field!(self.backend(), |f| {
            let x = f.from_element(self).unwrap();
            f.to_element(&f.neg(&x))
        })
    }

    /// Parses the textual form produced by `Display` for the given backend.
    ///
    /// * `Q`: `a` or `a/b`
    /// * `F_p`: an integer, reduced mod `p`
    /// * `Q(sqrt(d))`: `a`, `b*sqrt(d)`, or `a + b*sqrt(d)` / `a - b*sqrt(d)`
    /// * `F_p[X]/(g)`: `[c0, c1, ..., c_{k-1}]`
    pub fn parse(s: &str, backend: &Backend) -> Result<Self, ScalarError> {
        let err = || ScalarError::Parse { input: s.to_string(), backend: backend.to_string() };
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        match backend {
            Backend::Rational => Ok(FieldElement::Rational(parse_rational(&t)?)),
            Backend::Prime { p } => {
                let q = parse_rational(&t).map_err(|_| err())?;
                FieldElement::from_rational(&q, &Backend::Prime { p: *p })
            }
            Backend::Quadratic { d } => {
                let marker = format!("sqrt({d})");
                let Some(pos) = t.find(&marker) else {
                    return Ok(FieldElement::Quadratic {
                        a: parse_rational(&t).map_err(|_| err())?,
                        b: BigRational::zero(),
                        d: *d,
                    });
                };
                if pos + marker.len() != t.len() {
                    return Err(err());
                }
                let head = &t[..pos];
                // head is "<a><sign><b>*" or "<b>*" or "<sign>" or ""
                let head = head.strip_suffix('*').unwrap_or(head);
                let split = head
                    .char_indices()
                    .skip(1)
                    .filter(|&(i, c)| (c == '+' || c == '-') && !head[..i].ends_with('/'))
                    .map(|(i, _)| i)
                    .last();
                let (a_txt, b_txt) = match split {
                    Some(i) => (&head[..i], &head[i..]),
                    None => ("0", head),
                };
                let b = match b_txt {
                    "" | "+" => BigRational::one(),
                    "-" => -BigRational::one(),
                    other => parse_rational(other.strip_prefix('+').unwrap_or(other))
                        .map_err(|_| err())?,
                };
                let a = parse_rational(a_txt).map_err(|_| err())?;
                Ok(FieldElement::Quadratic { a, b, d: *d })
            }
            Backend::Extension { p, modulus } => {
                let inner = t.strip_prefix('[').and_then(|r| r.strip_suffix(']')).ok_or_else(err)?;
                let f = PrimeField::new(*p);
                let coeffs = inner
                    .split(',')
                    .map(|c| parse_rational(c).ok().and_then(|q| f.from_rational(&q)))
                    .collect::<Option<Vec<u64>>>()
                    .ok_or_else(err)?;
                if coeffs.len() + 1 != modulus.len() {
                    return Err(err());
                }
                Ok(FieldElement::Extension { coeffs, p: *p, modulus: modulus.clone().into() })
            }
        }
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldElement::Rational(q) => write!(f, "{}", render_rational(q)),
            FieldElement::Prime { value, .. } => write!(f, "{value}"),
            FieldElement::Quadratic { a, b, d } => {
                if b.is_zero() {
                    return write!(f, "{}", render_rational(a));
                }
                let b_txt = if b.abs().is_one() {
                    String::new()
                } else {
                    format!("{}*", render_rational(&b.abs()))
                };
                if a.is_zero() {
                    let sign = if b.is_negative() { "-" } else { "" };
                    write!(f, "{sign}{b_txt}sqrt({d})")
                } else {
                    let sign = if b.is_negative() { "-" } else { "+" };
                    write!(f, "{} {sign} {b_txt}sqrt({d})", render_rational(a))
                }
            }
            FieldElement::Extension { coeffs, .. } => {
                let parts: Vec<String> = coeffs.iter().map(|c| c.to_string()).collect();
                write!(f, "[{}]", parts.join(", "))
            }
        }
    }
}
