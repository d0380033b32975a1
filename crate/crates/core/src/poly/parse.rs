use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{HomogeneousPoly, Monomial, PolyError, RationalPoly};
use crate::scalar::{Field, Rationals};

struct Cursor {
    chars: Vec<(usize, char)>,
    pos: usize,
}

impl Cursor {
    fn new(src: &str) -> Self {
        let chars = src
            .chars()
            .enumerate()
            .filter(|(_, c)| !c.is_whitespace())
            .map(|(i, c)| (i + 1, c))
            .collect();
        Self { chars, pos: 0 }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).map(|&(_, c)| c)
    }

    fn column(&self) -> usize {
        self.chars.get(self.pos).map(|&(i, _)| i).unwrap_or_else(|| {
            self.chars.last().map(|&(i, _)| i + 1).unwrap_or(1)
        })
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek();
        self.pos += 1;
        c
    }

    fn err(&self, msg: impl Into<String>) -> PolyError {
        PolyError::Parse { column: self.column(), msg: msg.into() }
    }

    fn integer(&mut self) -> Result<BigInt, PolyError> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected a number"));
        }
        let digits: String = self.chars[start..self.pos].iter().map(|&(_, c)| c).collect();
        Ok(digits.parse().expect("ascii digits"))
    }

    fn exponent(&mut self) -> Result<u32, PolyError> {
        if self.peek() != Some('^') {
            return Ok(1);
        }
        self.bump();
        let col = self.column();
        let n = self.integer()?;
        u32::try_from(n).map_err(|_| PolyError::Parse { column: col, msg: "exponent too large".into() })
    }

    /// `factor ('*' factor)*` where a factor is `a`, `a/b` or `v^n`.
    fn term(&mut self) -> Result<(BigRational, Monomial), PolyError> {
        let mut coeff = BigRational::one();
        let mut mono = Monomial::ONE;
        loop {
            match self.peek() {
                Some(c) if c.is_ascii_digit() => {
                    let num = self.integer()?;
                    let mut q = BigRational::from_integer(num);
                    if self.peek() == Some('/') {
                        self.bump();
                        let den = self.integer()?;
                        if den.is_zero() {
                            return Err(self.err("zero denominator"));
                        }
                        q /= BigRational::from_integer(den);
                    }
                    coeff *= q;
                }
                Some(c @ ('x' | 'y' | 'z')) => {
                    self.bump();
                    let e = self.exponent()?;
                    mono.0[(c as u8 - b'x') as usize] += e;
                }
                Some(c) => return Err(self.err(format!("unexpected character {c:?}"))),
                None => return Err(self.err("unexpected end of input")),
            }
            if self.peek() == Some('*') {
                self.bump();
            } else {
                return Ok((coeff, mono));
            }
        }
    }
}

/// Parses the polynomial text grammar over `Q`.
///
/// Terms are `[+|-] c [* x^i][* y^j][* z^k]` with `c` an integer or `a/b`;
/// whitespace is ignored. All terms must share one total degree.
pub fn parse_rational_poly(src: &str) -> Result<RationalPoly, PolyError> {
    let mut cur = Cursor::new(src);
    if cur.peek().is_none() {
        return Err(cur.err("empty polynomial"));
    }
    let mut terms = Vec::new();
    let mut degree = None;
    let mut first = true;
    while cur.peek().is_some() {
        let mut negate = false;
        match cur.peek() {
            Some('+') => {
                cur.bump();
            }
            Some('-') => {
                cur.bump();
                negate = true;
            }
            _ if first => {}
            Some(c) => return Err(cur.err(format!("expected '+' or '-', found {c:?}"))),
            None => unreachable!(),
        }
        first = false;
        let col = cur.column();
        let (mut c, m) = cur.term()?;
        if negate {
            c = -c;
        }
        match degree {
            None => degree = Some(m.degree()),
            Some(d) if d != m.degree() => {
                return Err(PolyError::Parse {
                    column: col,
                    msg: format!("term of degree {} in a polynomial of degree {d}", m.degree()),
                })
            }
            _ => {}
        }
        terms.push((m, c));
    }
    HomogeneousPoly::from_terms(Rationals, degree.unwrap_or(0), terms)
}

/// Parses over `Q` and maps into `field`.
pub fn parse_poly<F: Field>(field: &F, src: &str) -> Result<HomogeneousPoly<F>, PolyError> {
    let q = parse_rational_poly(src)?;
    q.reduce(field).ok_or(PolyError::Parse {
        column: 1,
        msg: format!("a denominator is not invertible in {}", field.backend()),
    })
}

#[cfg(test)]
mod tests {
    use proptest::prelude::*;

    use super::*;
    use crate::poly::basis;
    use crate::scalar::PrimeField;

    #[test]
    fn parses_and_renders() {
        let f = parse_rational_poly("2*y^2 - z^2").unwrap();
        assert_eq!(f.to_string(), "2*y^2 - z^2");
        let g = parse_rational_poly(" x^2+3 * y^2 + 7*x*y - x*z - 2*y*z").unwrap();
        assert_eq!(g.to_string(), "x^2 + 7*x*y - x*z + 3*y^2 - 2*y*z");
        assert_eq!(parse_rational_poly("-1/2*x").unwrap().to_string(), "-1/2*x");
        assert_eq!(parse_rational_poly("x*x*y").unwrap(), parse_rational_poly("x^2*y").unwrap());
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(parse_rational_poly("x^2 + y"), Err(PolyError::Parse { column: 7, .. })));
        assert!(matches!(parse_rational_poly("x + w"), Err(PolyError::Parse { column: 5, .. })));
        assert!(matches!(parse_rational_poly("x/0"), Err(PolyError::Parse { .. })));
        assert!(matches!(parse_rational_poly(""), Err(PolyError::Parse { .. })));
        assert!(matches!(parse_rational_poly("x y"), Err(PolyError::Parse { .. })));
    }

    #[test]
    fn denominators_must_be_invertible() {
        assert!(parse_poly(&PrimeField::new(7), "1/7*x").is_err());
        let f = parse_poly(&PrimeField::new(7), "1/2*x").unwrap();
        assert_eq!(f.to_string(), "4*x");
    }

    fn rational_poly(deg: u32) -> impl Strategy<Value = RationalPoly> {
        let n = basis(deg).len();
        prop::collection::vec((-20i64..20, 1i64..6), n).prop_map(move |cs| {
            let terms = basis(deg).into_iter().zip(cs).map(|(m, (a, b))| {
                (m, BigRational::new(a.into(), b.into()))
            });
            HomogeneousPoly::from_terms(Rationals, deg, terms).unwrap()
        })
    }

    proptest! {
        #[test]
        fn render_parse_round_trip(f in (1u32..5).prop_flat_map(rational_poly)) {
            prop_assume!(!f.is_zero());
            prop_assert_eq!(parse_rational_poly(&f.to_string()).unwrap(), f);
        }
    }
}
