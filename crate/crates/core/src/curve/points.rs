use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;

use super::{find_conic_point, normalize_conic, normalize_conic_at, Component, ComponentKind, CurveError, ReducedCurve};
use crate::poly::{factor_binary_finite, factor_binary_rational, BinaryForm, HomogeneousPoly, Monomial};
use crate::scalar::{
    squarefree_decompose, with_field, Backend, ExtensionField, Field, FieldElement, PrimeField,
    Rationals,
};

/// A projective point, normalized so that its last nonzero coordinate is 1.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ProjPoint {
    coords: [FieldElement; 3],
}

impl ProjPoint {
    /// `None` when all coordinates vanish. Panics on mixed backends.
    pub fn new(coords: [FieldElement; 3]) -> Option<Self> {
        let last = coords.iter().rev().find(|c| !c.is_zero())?.clone();
        let inv = last.inverse().ok()?;
        let coords = coords.map(|c| c.mul(&inv).expect("coordinates share a backend"));
        Some(Self { coords })
    }

    pub fn rational(coords: [BigRational; 3]) -> Option<Self> {
        Self::new(coords.map(FieldElement::Rational))
    }

    pub fn coords(&self) -> &[FieldElement; 3] {
        &self.coords
    }

    pub fn backend(&self) -> Backend {
        self.coords[2].backend()
    }

    /// The point in another backend its coordinates embed into.
    pub fn coerce(&self, backend: &Backend) -> Option<Self> {
        let coords = with_field!(backend.clone(), |k| {
            let c: Option<Vec<FieldElement>> = self
                .coords
                .iter()
                .map(|e| k.from_element(e).map(|x| k.to_element(&x)))
                .collect();
            c?
        });
        Self::new([coords[0].clone(), coords[1].clone(), coords[2].clone()])
    }
}

impl fmt::Display for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}:{}:{}]", self.coords[0], self.coords[1], self.coords[2])
    }
}

/// Image of `p` in the field `k`, coefficient by coefficient.
pub(crate) fn lift_poly<F: Field, K: Field>(p: &HomogeneousPoly<F>, k: &K) -> HomogeneousPoly<K> {
    p.map_field(k, |c| k.from_element(&p.field().to_element(c))).expect("the point field extends the base field")
}

fn lift_form<F: Field, K: Field>(u: &BinaryForm<F>, k: &K) -> BinaryForm<K> {
    let coeffs = u
        .coeffs()
        .iter()
        .map(|c| k.from_element(&u.field().to_element(c)).expect("the point field extends the base field"))
        .collect();
    BinaryForm::new(k.clone(), coeffs)
}

/// `p` evaluated at `pt`, in the field of the point.
pub fn eval_at<F: Field>(p: &HomogeneousPoly<F>, pt: &ProjPoint) -> FieldElement {
    with_field!(pt.backend(), |k| {
        let c: [_; 3] = std::array::from_fn(|i| k.from_element(&pt.coords[i]).unwrap());
        k.to_element(&lift_poly(p, &k).eval(&c))
    })
}

/// A root `[s:t]` of a binary form. `orbit` is the number of geometric roots
/// it stands for: 1, or the degree of an irreducible factor over `F_p` whose
/// roots are represented by the class of `X` in `F_p[X]/(g)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Root {
    pub s: FieldElement,
    pub t: FieldElement,
    pub orbit: usize,
}

/// Base fields over which intersection points can be located.
pub trait BaseField: Field {
    /// The roots of a nonzero binary form, one entry per point or orbit.
    fn binary_roots(&self, u: &BinaryForm<Self>, seed: u64) -> Result<Vec<Root>, CurveError>;
}

/// The two roots of `a X^2 + b X + c` (`a != 0`) in `Q` or `Q(sqrt D)`.
fn quadratic_roots(a: &BigRational, b: &BigRational, c: &BigRational) -> Option<[FieldElement; 2]> {
    let disc = b * b - BigRational::from_integer(4.into()) * a * c;
    let two_a = a + a;
    let re = -b / &two_a;
    if disc.is_zero() {
        return Some([FieldElement::Rational(re.clone()), FieldElement::Rational(re)]);
    }
    let (num, den) = (disc.numer().clone(), disc.denom().clone());
    let (d, k) = squarefree_decompose(&(num * &den), 1 << 20)?;
    // sqrt(disc) = k sqrt(d) / den
    let im = BigRational::new(k, den) / &two_a;
    if d == BigInt::one() {
        return Some([FieldElement::Rational(&re + &im), FieldElement::Rational(re - im)]);
    }
    let d = i64::try_from(d).ok()?;
    Some([
        FieldElement::Quadratic { a: re.clone(), b: im.clone(), d },
        FieldElement::Quadratic { a: re, b: -im, d },
    ])
}

/// A point of a smooth conic over `Q` or a quadratic extension: a rational
/// point when the height search finds one, otherwise a point on a
/// coordinate line.
pub fn conic_point_over_quadratic(q: &HomogeneousPoly<Rationals>, height_bound: u64) -> Option<ProjPoint> {
    if let Some(p) = find_conic_point(q, height_bound) {
        return ProjPoint::rational(p);
    }
    // restriction to x_k = 0 as a binary quadratic in the other two
    for k in (0..3).rev() {
        let (i, j) = ((k + 1) % 3, (k + 2) % 3);
        let mono = |ei: u32, ej: u32| {
            let mut e = [0; 3];
            e[i] = ei;
            e[j] = ej;
            q.coeff(&Monomial(e))
        };
        let (a, b, c) = (mono(2, 0), mono(1, 1), mono(0, 2));
        let unit = |n: usize| std::array::from_fn(|m| BigRational::from_integer(BigInt::from((m == n) as i64)));
        if a.is_zero() {
            return ProjPoint::rational(unit(i));
        }
        let [r, _] = quadratic_roots(&a, &b, &c)?;
        let backend = r.backend();
        let mut coords: [FieldElement; 3] = std::array::from_fn(|_| FieldElement::zero(&backend));
        coords[i] = r;
        coords[j] = FieldElement::one(&backend);
        return ProjPoint::new(coords);
    }
    None
}

fn linear_root<F: Field>(g: &BinaryForm<F>) -> Root {
    // a s + b t = 0 at [-b : a]
    let f = g.field();
    let (a, b) = (&g.coeffs()[0], &g.coeffs()[1]);
    Root { s: f.to_element(&f.neg(b)), t: f.to_element(a), orbit: 1 }
}

impl BaseField for Rationals {
    fn binary_roots(&self, u: &BinaryForm<Self>, _seed: u64) -> Result<Vec<Root>, CurveError> {
        let fact = factor_binary_rational(&u.squarefree_part()?)?;
        let mut out = Vec::new();
        for (g, _) in &fact.factors {
            match g.degree() {
                1 => out.push(linear_root(g)),
                2 => {
                    let [a, b, c] = [&g.coeffs()[0], &g.coeffs()[1], &g.coeffs()[2]];
                    let one = FieldElement::Rational(BigRational::one());
                    for s in quadratic_roots(a, b, c).ok_or(CurveError::UnsupportedPointField(2))? {
                        let t = FieldElement::from_rational(&BigRational::one(), &s.backend()).unwrap_or(one.clone());
                        out.push(Root { s, t, orbit: 1 });
                    }
                }
                n => return Err(CurveError::UnsupportedPointField(n)),
            }
        }
        Ok(out)
    }
}

impl BaseField for PrimeField {
    fn binary_roots(&self, u: &BinaryForm<Self>, seed: u64) -> Result<Vec<Root>, CurveError> {
        let fact = factor_binary_finite(&u.squarefree_part()?, seed)?;
        let mut out = Vec::new();
        for (g, _) in &fact.factors {
            if g.degree() == 1 {
                out.push(linear_root(g));
                continue;
            }
            // homogenized monic factor: coefficients of X^i are g.coeffs()[deg - i]
            let modulus: Vec<u64> = g.coeffs().iter().rev().copied().collect();
            let k = ExtensionField::new(*self, modulus).expect("monic factor");
            out.push(Root { s: k.to_element(&k.generator()), t: k.to_element(&k.one()), orbit: g.degree() });
        }
        Ok(out)
    }
}

/// Parametrization `P^1 -> component` by binary forms: linear for a line,
/// quadratic (via [`normalize_conic`]) for a smooth conic.
pub fn component_parametrization<F: Field>(c: &Component<F>, height_bound: u64) -> Result<[BinaryForm<F>; 3], CurveError> {
    match c.kind {
        ComponentKind::Line => Ok(BinaryForm::line_param(&c.poly)),
        ComponentKind::Conic => Ok(normalize_conic(&c.poly, height_bound)?.param),
        ComponentKind::General => Err(CurveError::NonSmoothComponent(0)),
    }
}

/// An intersection point (or Galois orbit of points) with the indices of all
/// components through it.
#[derive(Debug, Clone, PartialEq)]
pub struct IntersectionPoint {
    pub point: ProjPoint,
    pub orbit: usize,
    pub incident: Vec<usize>,
}

pub(crate) fn point_from_root<F: Field>(param: &[BinaryForm<F>; 3], root: &Root) -> ProjPoint {
    let coords = with_field!(root.s.backend(), |k| {
        let s = k.from_element(&root.s).unwrap();
        let t = k.from_element(&root.t).unwrap();
        param.clone().map(|p| k.to_element(&lift_form(&p, &k).eval(&s, &t)))
    });
    ProjPoint::new(coords).expect("a parametrization does not vanish at a point of P^1")
}

fn incident_components<F: Field>(curve: &ReducedCurve<F>, pt: &ProjPoint) -> Vec<usize> {
    (0..curve.components().len()).filter(|&j| eval_at(&curve.components()[j].poly, pt).is_zero()).collect()
}

/// Points of component `host` that lie on some other component, restricted
/// to those whose smallest incident index is `host` so that every point is
/// reported by exactly one host.
pub fn points_on_host<F: BaseField>(
    curve: &ReducedCurve<F>,
    host: usize,
    height_bound: u64,
    seed: u64,
) -> Result<Vec<IntersectionPoint>, CurveError> {
    let comp = &curve.components()[host];
    let param = component_parametrization(comp, height_bound).map_err(|e| match e {
        CurveError::NonSmoothComponent(_) => CurveError::NonSmoothComponent(host),
        e => e,
    })?;
    if curve.components().len() == 1 {
        return Ok(Vec::new());
    }
    let u = BinaryForm::restrict(&curve.product_without(host), &param);
    if u.is_zero() {
        return Err(CurveError::NonSmoothComponent(host));
    }
    let mut out = Vec::new();
    for root in curve.field().binary_roots(&u, seed)? {
        let point = point_from_root(&param, &root);
        let incident = incident_components(curve, &point);
        debug_assert!(incident.contains(&host) && incident.len() >= 2);
        if incident[0] == host {
            out.push(IntersectionPoint { point, orbit: root.orbit, incident });
        }
    }
    Ok(out)
}

/// All points where two or more components meet, each reported once.
pub fn pairwise_intersection_points<F: BaseField>(
    curve: &ReducedCurve<F>,
    height_bound: u64,
    seed: u64,
) -> Result<Vec<IntersectionPoint>, CurveError> {
    if let Some(i) = curve.components().iter().position(|c| !c.is_smooth()) {
        return Err(CurveError::NonSmoothComponent(i));
    }
    let per_host: Vec<Vec<IntersectionPoint>> = (0..curve.components().len())
        .into_par_iter()
        .map(|i| points_on_host(curve, i, height_bound, seed))
        .collect::<Result<_, _>>()?;
    Ok(per_host.into_iter().flatten().collect())
}

/// `|C' ∩ C|` for a smooth conic `C` that is not a component of `C'`.
pub fn conic_intersection_count<F: Field>(
    curve: &ReducedCurve<F>,
    conic: &HomogeneousPoly<F>,
    height_bound: u64,
) -> Result<usize, CurveError> {
    if curve.find_component(conic).is_some() {
        return Err(CurveError::ComponentEqualsConic);
    }
    let frame = match normalize_conic(conic, height_bound) {
        Err(CurveError::NoRationalPointFound(h)) if curve.field().backend() == Backend::Rational => {
            return conic_count_over_extension(curve, conic, h);
        }
        other => other?,
    };
    restricted_root_count(curve.poly(), &frame.param)
}

fn restricted_root_count<F: Field>(f: &HomogeneousPoly<F>, param: &[BinaryForm<F>; 3]) -> Result<usize, CurveError> {
    let u = BinaryForm::restrict(f, param);
    if u.is_zero() {
        return Err(CurveError::ComponentEqualsConic);
    }
    Ok(u.distinct_root_count()?)
}

/// The count over `Q` for a conic without a small rational point, using a
/// parametrization defined over a quadratic extension.
fn conic_count_over_extension<F: Field>(
    curve: &ReducedCurve<F>,
    conic: &HomogeneousPoly<F>,
    height_bound: u64,
) -> Result<usize, CurveError> {
    let to_q = |p: &HomogeneousPoly<F>| p.map_field(&Rationals, |c| Rationals.from_element(&p.field().to_element(c))).unwrap();
    let q = to_q(conic);
    let pt = conic_point_over_quadratic(&q, height_bound).ok_or(CurveError::NoRationalPointFound(height_bound))?;
    with_field!(pt.backend(), |k| {
        let p: [_; 3] = std::array::from_fn(|i| k.from_element(&pt.coords[i]).unwrap());
        let frame = normalize_conic_at(&lift_poly(&q, &k), &p)?;
        restricted_root_count(&lift_poly(&to_q(curve.poly()), &k), &frame.param)
    })
}

/// `|C' ∩ L|` for a line `L` that is not a component of `C'`.
pub fn line_intersection_count<F: Field>(curve: &ReducedCurve<F>, line: &HomogeneousPoly<F>) -> Result<usize, CurveError> {
    if curve.find_component(line).is_some() {
        return Err(CurveError::ComponentEqualsLine);
    }
    let u = BinaryForm::substitute_line_param(curve.poly(), line);
    if u.is_zero() {
        return Err(CurveError::ComponentEqualsLine);
    }
    Ok(u.distinct_root_count()?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{parse_poly, parse_rational_poly};

    fn curve(srcs: &[&str]) -> ReducedCurve<Rationals> {
        ReducedCurve::from_polys(srcs.iter().map(|s| parse_rational_poly(s).unwrap()).collect()).unwrap()
    }

    fn q(src: &str) -> HomogeneousPoly<Rationals> {
        parse_rational_poly(src).unwrap()
    }

    fn pt(c: [i64; 3]) -> ProjPoint {
        ProjPoint::rational(c.map(|x| BigRational::from_integer(x.into()))).unwrap()
    }

    #[test]
    fn normalization() {
        assert_eq!(pt([2, -4, -2]), pt([1, -2, -1]));
        assert_eq!(pt([1, -2, -1]).to_string(), "[-1:2:1]");
        assert_eq!(pt([3, 0, 0]).to_string(), "[1:0:0]");
    }

    #[test]
    fn conic_counts_tangent_and_secant() {
        assert_eq!(conic_intersection_count(&curve(&["x"]), &q("y^2 - x*z"), 20), Ok(1));
        assert_eq!(line_intersection_count(&curve(&["y^2 - x*z"]), &q("z")), Ok(1));
        assert_eq!(line_intersection_count(&curve(&["y^2 - x*z"]), &q("y")), Ok(2));
        assert_eq!(line_intersection_count(&curve(&["x", "y"]), &q("z")), Ok(2));
        assert_eq!(
            conic_intersection_count(&curve(&["x", "y^2 - x*z"]), &q("2*y^2 - 2*x*z"), 20),
            Err(CurveError::ComponentEqualsConic)
        );
        assert_eq!(line_intersection_count(&curve(&["x", "y"]), &q("-y")), Err(CurveError::ComponentEqualsLine));
    }

    #[test]
    fn triangle_vertices() {
        let pts = pairwise_intersection_points(&curve(&["x", "y", "z"]), 20, 0).unwrap();
        let mut got: Vec<String> = pts.iter().map(|p| p.point.to_string()).collect();
        got.sort();
        assert_eq!(got, ["[0:0:1]", "[0:1:0]", "[1:0:0]"]);
        assert!(pts.iter().all(|p| p.incident.len() == 2 && p.orbit == 1));
    }

    #[test]
    fn tangent_line_and_secant_through_a_conic_point() {
        // x is tangent to y^2 = xz at [0:0:1]; x + z meets it at [1:±i:-1]
        let c = curve(&["x", "x + z", "y^2 - x*z"]);
        let pts = pairwise_intersection_points(&c, 20, 0).unwrap();
        let origin = pts.iter().find(|p| p.point == pt([0, 0, 1])).unwrap();
        assert_eq!(origin.incident, vec![0, 2]);
        // x ∩ (x+z) = [0:1:0]; two conjugate points in Q(i)
        assert_eq!(pts.len(), 4);
        let imaginary: Vec<_> = pts.iter().filter(|p| p.point.backend() == Backend::Quadratic { d: -1 }).collect();
        assert_eq!(imaginary.len(), 2);
        for p in imaginary {
            assert_eq!(p.incident, vec![1, 2]);
        }
    }

    #[test]
    fn generic_lines_have_all_pairwise_points() {
        let c = curve(&["x", "y", "z", "x + y + z", "x + 2*y + 5*z"]);
        assert_eq!(pairwise_intersection_points(&c, 20, 0).unwrap().len(), 10);
    }

    #[test]
    fn orbits_mod_p() {
        // x^2 + y^2 - 3 z^2 meets z over F_7 in the orbit x^2 + y^2 = 0 (-1 is a non-square mod 7)
        let f = PrimeField::new(7);
        let c = ReducedCurve::from_polys(vec![parse_poly(&f, "z").unwrap(), parse_poly(&f, "x^2 + y^2 - 3*z^2").unwrap()]).unwrap();
        let pts = pairwise_intersection_points(&c, 20, 1).unwrap();
        assert_eq!(pts.len(), 1);
        assert_eq!(pts[0].orbit, 2);
        assert_eq!(pts[0].incident, vec![0, 1]);
    }

    #[test]
    fn counts_against_a_five_component_base() {
        let c = curve(&["x - y", "x + y", "x^2 + y^2 - z^2", "2*y^2 - z^2", "2*x^2 - z^2"]);
        assert_eq!(conic_intersection_count(&c, &q("x^2 + 3*y^2 - 2*z^2"), 20), Ok(4));
        assert_eq!(conic_intersection_count(&c, &q("x^2 + 2*y^2 - z^2"), 20), Ok(12));
        assert_eq!(conic_intersection_count(&c.without(2).unwrap(), &q("x^2 + y^2 - z^2"), 20), Ok(4));
    }

    #[test]
    fn high_multiplicity_points() {
        let c = curve(&[
            "x^2 + 2*x*y + y^2 + x*z",
            "x^2 + x*z + y*z",
            "x^2 + x*y + z^2",
            "x + y - z",
            "y",
            "x + z",
            "2*x + y",
            "x^2 - y^2 + x*z + 2*y*z",
            "x^2 + 2*x*y - x*z + y*z",
        ]);
        let pts = pairwise_intersection_points(&c, 20, 0).unwrap();
        let p1 = pts.iter().find(|p| p.point == pt([0, 0, 1])).unwrap();
        assert_eq!(p1.incident.len(), 6);
        let p2 = pts.iter().find(|p| p.point == pt([1, -2, -1])).unwrap();
        assert_eq!(p2.incident.len(), 7);
        assert_eq!(pts.len(), 19);
        assert_eq!(pts.iter().filter(|p| p.incident.len() >= 6).count(), 2);
    }

    #[test]
    fn non_smooth_component_is_rejected() {
        let c = curve(&["x", "y^3 - x^2*z"]);
        assert_eq!(pairwise_intersection_points(&c, 20, 0), Err(CurveError::NonSmoothComponent(1)));
    }
}
