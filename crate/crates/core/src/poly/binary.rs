use std::fmt;

use super::{HomogeneousPoly, PolyError, UniPoly, Var};
use crate::scalar::Field;

/// A binary form `sum_i c_i s^(deg-i) t^i` of fixed degree.
///
/// The point `[s:t] = [1:0]` is a root of multiplicity equal to the number of
/// leading zero coefficients; the remaining roots are those of the finite
/// part `sum_i c_i X^(deg-i)` at `[X:1]`.
pub struct BinaryForm<F: Field> {
    field: F,
    coeffs: Vec<F::Elem>,
}

impl<F: Field> Clone for BinaryForm<F> {
    fn clone(&self) -> Self {
        Self { field: self.field.clone(), coeffs: self.coeffs.clone() }
    }
}

impl<F: Field> PartialEq for BinaryForm<F> {
    fn eq(&self, other: &Self) -> bool {
        self.coeffs == other.coeffs
    }
}

impl<F: Field> fmt::Debug for BinaryForm<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BinaryForm(deg {}: {})", self.degree(), self)
    }
}

impl<F: Field> BinaryForm<F> {
    /// `coeffs[i]` multiplies `s^(deg-i) t^i`; `deg = coeffs.len() - 1`.
    pub fn new(field: F, coeffs: Vec<F::Elem>) -> Self {
        assert!(!coeffs.is_empty(), "a binary form needs at least one coefficient");
        Self { field, coeffs }
    }

    pub fn zero(field: F, degree: usize) -> Self {
        let coeffs = vec![field.zero(); degree + 1];
        Self { field, coeffs }
    }

    pub fn s(field: F) -> Self {
        let coeffs = vec![field.one(), field.zero()];
        Self { field, coeffs }
    }

    pub fn t(field: F) -> Self {
        let coeffs = vec![field.zero(), field.one()];
        Self { field, coeffs }
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[F::Elem] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| self.field.is_zero(c))
    }

    pub fn add(&self, other: &Self) -> Result<Self, PolyError> {
        if self.degree() != other.degree() {
            return Err(PolyError::DegreeMismatch {
                left: self.degree() as u32,
                right: other.degree() as u32,
            });
        }
        let f = &self.field;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| f.add(a, b)).collect();
        Ok(Self::new(f.clone(), coeffs))
    }

    pub fn scale(&self, c: &F::Elem) -> Self {
        let coeffs = self.coeffs.iter().map(|x| self.field.mul(x, c)).collect();
        Self::new(self.field.clone(), coeffs)
    }

    pub fn mul(&self, other: &Self) -> Self {
        let f = &self.field;
        let mut out = vec![f.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if f.is_zero(a) {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = f.add(&out[i + j], &f.mul(a, b));
            }
        }
        Self::new(f.clone(), out)
    }

    pub fn eval(&self, s: &F::Elem, t: &F::Elem) -> F::Elem {
        let f = &self.field;
        let n = self.degree() as u64;
        let mut acc = f.zero();
        for (i, c) in self.coeffs.iter().enumerate() {
            if f.is_zero(c) {
                continue;
            }
            let term = f.mul(c, &f.mul(&f.pow(s, n - i as u64), &f.pow(t, i as u64)));
            acc = f.add(&acc, &term);
        }
        acc
    }

    /// Multiplicity of the root `[1:0]`, i.e. the largest power of `t`
    /// dividing the form.
    pub fn infinity_multiplicity(&self) -> Result<usize, PolyError> {
        self.coeffs.iter().position(|c| !self.field.is_zero(c)).ok_or(PolyError::ZeroForm)
    }

    /// Dehomogenization at `t = 1` in the variable `X = s/t`.
    pub fn finite_part(&self) -> UniPoly<F> {
        UniPoly::new(self.field.clone(), self.coeffs.iter().rev().cloned().collect())
    }

    /// `t^deg p(s/t)`; requires `deg >= deg p`.
    pub fn homogenize(p: &UniPoly<F>, degree: usize) -> Self {
        let f = p.field().clone();
        let mut coeffs = vec![f.zero(); degree + 1];
        for (j, c) in p.coeffs().iter().enumerate() {
            coeffs[degree - j] = c.clone();
        }
        Self::new(f, coeffs)
    }

    /// Product of the distinct linear factors over the algebraic closure,
    /// up to a unit. Assumes the degree is below the characteristic.
    pub fn squarefree_part(&self) -> Result<Self, PolyError> {
        let inf = self.infinity_multiplicity()?;
        let finite = self.finite_part().squarefree_part();
        let fd = finite.degree().expect("nonzero form has a nonzero finite part");
        let mut out = Self::homogenize(&finite, fd);
        if inf > 0 {
            out = out.mul(&Self::t(self.field.clone()));
        }
        Ok(out)
    }

    /// Number of distinct roots in `P^1` over the algebraic closure.
    pub fn distinct_root_count(&self) -> Result<usize, PolyError> {
        Ok(self.squarefree_part()?.degree())
    }

    /// `f(p_x, p_y, p_z)` for binary forms `p` of a common degree.
    pub fn restrict(f: &HomogeneousPoly<F>, param: &[Self; 3]) -> Self {
        let field = f.field().clone();
        let k = param[0].degree();
        assert!(param.iter().all(|p| p.degree() == k), "parametrization degrees differ");
        let n = f.degree() as usize;
        let one = Self::new(field.clone(), vec![field.one()]);
        let powers: Vec<Vec<Self>> = param
            .iter()
            .map(|p| {
                let mut v = vec![one.clone()];
                for i in 1..=n {
                    let next = v[i - 1].mul(p);
                    v.push(next);
                }
                v
            })
            .collect();
        let mut out = Self::zero(field.clone(), n * k);
        for (m, c) in f.terms() {
            let term = powers[0][m.0[0] as usize]
                .mul(&powers[1][m.0[1] as usize])
                .mul(&powers[2][m.0[2] as usize]);
            for (o, x) in out.coeffs.iter_mut().zip(&term.coeffs) {
                *o = field.add(o, &field.mul(c, x));
            }
        }
        out
    }

    /// `f(s^2, s t, t^2)`: restriction to the conic `y^2 = x z`.
    pub fn substitute_standard_conic(f: &HomogeneousPoly<F>) -> Self {
        let field = f.field().clone();
        let (o, z) = (field.one(), field.zero());
        let param = [
            Self::new(field.clone(), vec![o.clone(), z.clone(), z.clone()]),
            Self::new(field.clone(), vec![z.clone(), o.clone(), z.clone()]),
            Self::new(field.clone(), vec![z.clone(), z, o]),
        ];
        Self::restrict(f, &param)
    }

    /// Linear parametrization of the line `a x + b y + c z = 0`:
    /// `(s, t, -(a s + b t)/c)` if `c != 0`, else `(s, -a s/b, t)` if
    /// `b != 0`, else `(0, s, t)`.
    pub fn line_param(line: &HomogeneousPoly<F>) -> [Self; 3] {
        assert_eq!(line.degree(), 1, "a line is a linear form");
        let f = line.field().clone();
        let coeff = |v: Var| line.coeff(&super::Monomial::var(v));
        let (a, b, c) = (coeff(Var::X), coeff(Var::Y), coeff(Var::Z));
        let z = f.zero();
        let s = Self::s(f.clone());
        let t = Self::t(f.clone());
        let lin = |u: F::Elem, v: F::Elem| Self::new(f.clone(), vec![u, v]);
        if !f.is_zero(&c) {
            let ic = f.inv(&c).unwrap();
            let r = lin(f.neg(&f.mul(&a, &ic)), f.neg(&f.mul(&b, &ic)));
            [s, t, r]
        } else if !f.is_zero(&b) {
            let ib = f.inv(&b).unwrap();
            [s, lin(f.neg(&f.mul(&a, &ib)), z), t]
        } else {
            assert!(!f.is_zero(&a), "zero linear form");
            [lin(z.clone(), z), s, t]
        }
    }

    pub fn substitute_line_param(f: &HomogeneousPoly<F>, line: &HomogeneousPoly<F>) -> Self {
        Self::restrict(f, &Self::line_param(line))
    }
}

impl<F: Field> fmt::Display for BinaryForm<F> {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        let f = &self.field;
        let n = self.degree();
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if f.is_zero(c) {
                continue;
            }
            if !first {
                write!(out, " + ")?;
            }
            first = false;
            write!(out, "({})", f.render(c))?;
            match n - i {
                0 => {}
                1 => write!(out, "*s")?,
                e => write!(out, "*s^{e}")?,
            }
            match i {
                0 => {}
                1 => write!(out, "*t")?,
                e => write!(out, "*t^{e}")?,
            }
        }
        if first {
            write!(out, "0")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use proptest::prelude::*;

    use super::*;
    use crate::poly::parse_rational_poly;
    use crate::scalar::{PrimeField, Rationals};

    fn q(src: &str) -> HomogeneousPoly<Rationals> {
        parse_rational_poly(src).unwrap()
    }

    fn bf(cs: &[i64]) -> BinaryForm<Rationals> {
        BinaryForm::new(Rationals, cs.iter().map(|&c| Rationals.from_i64(c)).collect())
    }

    #[test]
    fn standard_conic_substitution() {
        assert!(BinaryForm::substitute_standard_conic(&q("y^2 - x*z")).is_zero());
        assert_eq!(BinaryForm::substitute_standard_conic(&q("x")), bf(&[1, 0, 0]));
        let u = BinaryForm::substitute_standard_conic(&q("x + z"));
        assert_eq!(u, bf(&[1, 0, 1]));
        assert_eq!(u.distinct_root_count(), Ok(2));
    }

    #[test]
    fn line_substitution() {
        let u = BinaryForm::substitute_line_param(&q("x^2 + y^2"), &q("z"));
        assert_eq!(u, bf(&[1, 0, 1]));
        let l = q("x - 2*y + z");
        let g = l.mul(&q("x^2 + y*z"));
        assert!(BinaryForm::substitute_line_param(&g, &l).is_zero());
        let u = BinaryForm::substitute_line_param(&q("y^2 - x*z"), &q("x"));
        assert_eq!(u.distinct_root_count(), Ok(1));
    }

    #[test]
    fn root_counts() {
        // s^2 t^2
        assert_eq!(bf(&[0, 0, 1, 0, 0]).distinct_root_count(), Ok(2));
        // (s - t)^3
        assert_eq!(bf(&[1, -3, 3, -1]).distinct_root_count(), Ok(1));
        // s^4 + t^4
        assert_eq!(bf(&[1, 0, 0, 0, 1]).distinct_root_count(), Ok(4));
        // t^3
        assert_eq!(bf(&[0, 0, 0, 1]).distinct_root_count(), Ok(1));
        assert_eq!(bf(&[0, 0]).distinct_root_count(), Err(PolyError::ZeroForm));
    }

    fn form_mod_p(deg: usize) -> impl Strategy<Value = BinaryForm<PrimeField>> {
        prop::collection::vec(0u64..101, deg + 1)
            .prop_map(|cs| BinaryForm::new(PrimeField::new(101), cs))
    }

    proptest! {
        #[test]
        fn root_count_subadditive(u in form_mod_p(4), v in form_mod_p(3)) {
            prop_assume!(!u.is_zero() && !v.is_zero());
            let uv = u.mul(&v);
            let (a, b, c) = (
                u.distinct_root_count().unwrap(),
                v.distinct_root_count().unwrap(),
                uv.distinct_root_count().unwrap(),
            );
            prop_assert!(c <= a + b);
            let coprime_finite = u.finite_part().gcd(&v.finite_part()).degree() == Some(0);
            let coprime_inf = u.infinity_multiplicity().unwrap() == 0
                || v.infinity_multiplicity().unwrap() == 0;
            if coprime_finite && coprime_inf {
                prop_assert_eq!(c, a + b);
            }
        }
    }
}
