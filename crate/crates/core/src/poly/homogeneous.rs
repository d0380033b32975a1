use std::collections::BTreeMap;
use std::fmt;

use num_rational::BigRational;

use super::monomial::{basis, dim_s, Monomial, Var};
use super::PolyError;
use crate::scalar::{Field, Rationals};

/// A homogeneous polynomial in `k[x, y, z]`.
///
/// The degree is an explicit tag, so the zero polynomial of degree 3 and the
/// zero polynomial of degree 5 are different values. Only nonzero
/// coefficients are stored.
pub struct HomogeneousPoly<F: Field> {
    field: F,
    degree: u32,
    terms: BTreeMap<Monomial, F::Elem>,
}

pub type RationalPoly = HomogeneousPoly<Rationals>;

impl<F: Field> Clone for HomogeneousPoly<F> {
    fn clone(&self) -> Self {
        Self { field: self.field.clone(), degree: self.degree, terms: self.terms.clone() }
    }
}

impl<F: Field> PartialEq for HomogeneousPoly<F> {
    fn eq(&self, other: &Self) -> bool {
        self.degree == other.degree && self.terms == other.terms
    }
}

impl<F: Field> fmt::Debug for HomogeneousPoly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "HomogeneousPoly(deg {}: {})", self.degree, self)
    }
}

impl<F: Field> HomogeneousPoly<F> {
    pub fn zero(field: F, degree: u32) -> Self {
        Self { field, degree, terms: BTreeMap::new() }
    }

    pub fn constant(field: F, c: F::Elem) -> Self {
        Self::monomial(field, Monomial::ONE, c)
    }

    pub fn monomial(field: F, m: Monomial, c: F::Elem) -> Self {
        let mut terms = BTreeMap::new();
        if !field.is_zero(&c) {
            terms.insert(m, c);
        }
        Self { field, degree: m.degree(), terms }
    }

    pub fn var(field: F, v: Var) -> Self {
        let one = field.one();
        Self::monomial(field, Monomial::var(v), one)
    }

    /// Linear form `a x + b y + c z`.
    pub fn linear(field: F, coeffs: [F::Elem; 3]) -> Self {
        let terms = Var::ALL.iter().zip(coeffs).map(|(&v, c)| (Monomial::var(v), c));
        Self::from_terms(field, 1, terms).expect("linear monomials have degree 1")
    }

    /// Sums repeated monomials; fails if any monomial has the wrong degree.
    pub fn from_terms(
        field: F,
        degree: u32,
        terms: impl IntoIterator<Item = (Monomial, F::Elem)>,
    ) -> Result<Self, PolyError> {
        let mut map: BTreeMap<Monomial, F::Elem> = BTreeMap::new();
        for (m, c) in terms {
            if m.degree() != degree {
                return Err(PolyError::NotHomogeneous);
            }
            let entry = map.entry(m).or_insert_with(|| field.zero());
            *entry = field.add(entry, &c);
        }
        map.retain(|_, c| !field.is_zero(c));
        Ok(Self { field, degree, terms: map })
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &F::Elem)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, m: &Monomial) -> F::Elem {
        self.terms.get(m).cloned().unwrap_or_else(|| self.field.zero())
    }

    /// Leading term in graded-lex order.
    pub fn leading(&self) -> Option<(&Monomial, &F::Elem)> {
        self.terms.iter().next_back()
    }

    pub fn add(&self, other: &Self) -> Result<Self, PolyError> {
        if self.degree != other.degree {
            return Err(PolyError::DegreeMismatch { left: self.degree, right: other.degree });
        }
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(*m, c);
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self, PolyError> {
        self.add(&other.neg())
    }

    fn add_term(&mut self, m: Monomial, c: &F::Elem) {
        let f = &self.field;
        match self.terms.get_mut(&m) {
            Some(e) => {
                *e = f.add(e, c);
                if f.is_zero(e) {
                    self.terms.remove(&m);
                }
            }
            None => {
                if !f.is_zero(c) {
                    self.terms.insert(m, c.clone());
                }
            }
        }
    }

    pub fn neg(&self) -> Self {
        self.map_coeffs(|c| self.field.neg(c))
    }

    pub fn scale(&self, c: &F::Elem) -> Self {
        if self.field.is_zero(c) {
            return Self::zero(self.field.clone(), self.degree);
        }
        self.map_coeffs(|x| self.field.mul(x, c))
    }

    fn map_coeffs(&self, g: impl Fn(&F::Elem) -> F::Elem) -> Self {
        Self {
            field: self.field.clone(),
            degree: self.degree,
            terms: self.terms.iter().map(|(m, c)| (*m, g(c))).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let f = &self.field;
        let mut out = Self::zero(f.clone(), self.degree + other.degree);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.mul(m2), &f.mul(c1, c2));
            }
        }
        out
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::constant(self.field.clone(), self.field.one());
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    /// Formal partial derivative. A constant maps to the zero polynomial of
    /// degree 0.
    pub fn partial(&self, v: Var) -> Self {
        let f = &self.field;
        let mut out = Self::zero(f.clone(), self.degree.saturating_sub(1));
        for (m, c) in &self.terms {
            let e = m.0[v.index()];
            if e == 0 {
                continue;
            }
            let mut dm = *m;
            dm.0[v.index()] -= 1;
            out.add_term(dm, &f.mul(c, &f.from_i64(e as i64)));
        }
        out
    }

    pub fn eval(&self, point: &[F::Elem; 3]) -> F::Elem {
        let f = &self.field;
        let mut acc = f.zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for v in 0..3 {
                if m.0[v] > 0 {
                    t = f.mul(&t, &f.pow(&point[v], m.0[v] as u64));
                }
            }
            acc = f.add(&acc, &t);
        }
        acc
    }

    /// `g(v) = self(T v)`: substitutes each variable by the corresponding row
    /// of `t` read as a linear form.
    pub fn compose_linear(&self, t: &[[F::Elem; 3]; 3]) -> Self {
        let f = &self.field;
        let images: Vec<Self> =
            (0..3).map(|i| Self::linear(f.clone(), t[i].clone())).collect();
        let mut powers: Vec<Vec<Self>> = Vec::new();
        for img in &images {
            let mut p = vec![Self::constant(f.clone(), f.one())];
            for k in 1..=self.degree {
                let next = p[k as usize - 1].mul(img);
                p.push(next);
            }
            powers.push(p);
        }
        let mut out = Self::zero(f.clone(), self.degree);
        for (m, c) in &self.terms {
            let term = powers[0][m.0[0] as usize]
                .mul(&powers[1][m.0[1] as usize])
                .mul(&powers[2][m.0[2] as usize])
                .scale(c);
            for (mm, cc) in term.terms {
                out.add_term(mm, &cc);
            }
        }
        out
    }

    /// Coefficient vector in the dense basis of its degree.
    pub fn to_dense(&self) -> Vec<F::Elem> {
        let mut v = vec![self.field.zero(); dim_s(self.degree as i64)];
        for (m, c) in &self.terms {
            v[m.dense_index()] = c.clone();
        }
        v
    }

    pub fn from_dense(field: F, degree: u32, v: &[F::Elem]) -> Self {
        assert_eq!(v.len(), dim_s(degree as i64));
        let terms = basis(degree)
            .into_iter()
            .zip(v)
            .filter(|(_, c)| !field.is_zero(c))
            .map(|(m, c)| (m, c.clone()))
            .collect();
        Self { field, degree, terms }
    }

    /// Coefficient-wise image in another field. `None` if some coefficient
    /// has no image.
    pub fn map_field<G: Field>(
        &self,
        target: &G,
        conv: impl Fn(&F::Elem) -> Option<G::Elem>,
    ) -> Option<HomogeneousPoly<G>> {
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            let d = conv(c)?;
            if !target.is_zero(&d) {
                terms.insert(*m, d);
            }
        }
        Some(HomogeneousPoly { field: target.clone(), degree: self.degree, terms })
    }

    /// True when `self = c * other` for some nonzero scalar `c`
    /// (cross-multiplication of coefficient vectors).
    pub fn is_associate(&self, other: &Self) -> bool {
        if self.degree != other.degree || self.terms.len() != other.terms.len() {
            return false;
        }
        let (Some((ma, ca)), Some((mb, cb))) = (self.leading(), other.leading()) else {
            return self.is_zero() && other.is_zero();
        };
        if ma != mb {
            return false;
        }
        let f = &self.field;
        self.terms.iter().all(|(m, a)| match other.terms.get(m) {
            Some(b) => f.mul(a, cb) == f.mul(b, ca),
            None => false,
        })
    }
}

impl RationalPoly {
    /// Image in a field that accepts rational constants.
    pub fn reduce<G: Field>(&self, target: &G) -> Option<HomogeneousPoly<G>> {
        self.map_field(target, |c| target.from_rational(c))
    }

    /// Scales to a primitive integer polynomial with positive leading
    /// coefficient.
    pub fn primitive(&self) -> RationalPoly {
        use num_integer::Integer;
        use num_traits::{One, Signed, Zero};
        let mut lcm = num_bigint::BigInt::one();
        for c in self.terms.values() {
            lcm = lcm.lcm(c.denom());
        }
        let mut g = num_bigint::BigInt::zero();
        for c in self.terms.values() {
            g = g.gcd(&(c * BigRational::from_integer(lcm.clone())).to_integer());
        }
        if g.is_zero() {
            return self.clone();
        }
        let lead_neg = self.leading().map(|(_, c)| c.is_negative()).unwrap_or(false);
        let mut scale = BigRational::new(lcm, g);
        if lead_neg {
            scale = -scale;
        }
        self.scale(&scale)
    }
}

impl<F: Field> fmt::Display for HomogeneousPoly<F> {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(out, "0");
        }
        let f = &self.field;
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            let text = f.render(c);
            let compound = text.contains(' ');
            let (neg, mag) = match text.strip_prefix('-') {
                Some(rest) if !compound => (true, rest.to_string()),
                _ => (false, text),
            };
            let mag = if compound { format!("({mag})") } else { mag };
            match (i, neg) {
                (0, true) => write!(out, "-")?,
                (0, false) => {}
                (_, true) => write!(out, " - ")?,
                (_, false) => write!(out, " + ")?,
            }
            if *m == Monomial::ONE {
                write!(out, "{mag}")?;
            } else if mag == "1" {
                write!(out, "{m}")?;
            } else {
                write!(out, "{mag}*{m}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use proptest::prelude::*;

    use super::*;
    use crate::poly::{parse_rational_poly, BinaryForm};
    use crate::scalar::PrimeField;

    fn q(src: &str) -> RationalPoly {
        parse_rational_poly(src).unwrap()
    }

    #[test]
    fn partials() {
        let c = q("y^2 - x*z");
        assert_eq!(c.partial(Var::X), q("-z"));
        assert_eq!(c.partial(Var::Y), q("2*y"));
        let k = q("5");
        assert_eq!(k.partial(Var::X), HomogeneousPoly::zero(Rationals, 0));
    }

    #[test]
    fn euler_identity() {
        let f = q("x^3 + y^3 + z^3");
        let mut sum = HomogeneousPoly::zero(Rationals, 3);
        for v in Var::ALL {
            sum = sum.add(&HomogeneousPoly::var(Rationals, v).mul(&f.partial(v))).unwrap();
        }
        assert_eq!(sum, f.scale(&Rationals.from_i64(3)));
    }

    #[test]
    fn ring_operations() {
        assert_eq!(q("x + y").mul(&q("x - y")), q("x^2 - y^2"));
        let zero = HomogeneousPoly::zero(Rationals, 2);
        let p = q("x + y").mul(&zero);
        assert!(p.is_zero());
        assert_eq!(p.degree(), 3);
        assert_eq!(q("y^2 - x*z").pow(2).degree(), 4);
        assert_eq!(
            q("x").add(&q("x^2")),
            Err(PolyError::DegreeMismatch { left: 1, right: 2 })
        );
    }

    #[test]
    fn associates_and_primitive() {
        assert!(q("x").is_associate(&q("2*x")));
        assert!(!q("x + y").is_associate(&q("x - y")));
        assert_eq!(q("-1/2*x + 3/4*y").primitive(), q("2*x - 3*y"));
    }

    #[test]
    fn linear_change_of_coordinates() {
        // swap x and z
        let one = Rationals.one();
        let z = Rationals.zero();
        let t = [[z.clone(), z.clone(), one.clone()], [z.clone(), one.clone(), z.clone()], [one, z.clone(), z]];
        assert_eq!(q("x^2 + y*z").compose_linear(&t), q("z^2 + x*y"));
    }

    fn poly_mod_p(deg: u32) -> impl Strategy<Value = HomogeneousPoly<PrimeField>> {
        prop::collection::vec(0u64..101, basis(deg).len())
            .prop_map(move |cs| HomogeneousPoly::from_dense(PrimeField::new(101), deg, &cs))
    }

    /// Reduces modulo `y^2 - x z` (monic in `y`) to `a(x, z) + y b(x, z)`.
    fn reduce_mod_conic(f: &HomogeneousPoly<PrimeField>) -> HomogeneousPoly<PrimeField> {
        let terms = f.terms().map(|(m, c)| {
            let [i, j, k] = m.0;
            (Monomial([i + j / 2, j % 2, k + j / 2]), *c)
        });
        HomogeneousPoly::from_terms(*f.field(), f.degree(), terms).unwrap()
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]

        #[test]
        fn mixed_partials_commute(f in (2u32..6).prop_flat_map(poly_mod_p)) {
            prop_assert_eq!(f.partial(Var::X).partial(Var::Y), f.partial(Var::Y).partial(Var::X));
        }

        #[test]
        fn conic_restriction_detects_divisibility(
            g in (1u32..4).prop_flat_map(poly_mod_p),
            h in (3u32..6).prop_flat_map(poly_mod_p),
        ) {
            let conic = parse_rational_poly("y^2 - x*z").unwrap().reduce(&PrimeField::new(101)).unwrap();
            let multiple = conic.mul(&g);
            prop_assert!(BinaryForm::substitute_standard_conic(&multiple).is_zero());
            prop_assert!(reduce_mod_conic(&multiple).is_zero());
            prop_assert_eq!(
                BinaryForm::substitute_standard_conic(&h).is_zero(),
                reduce_mod_conic(&h).is_zero()
            );
        }
    }
}
