//! Milnor and Tjurina numbers of plane curve singularities, the defect
//! `epsilon = mu - tau` from quasihomogeneity, and its pairwise version.

use rayon::prelude::*;
use thiserror::Error;

use crate::curve::{
    component_parametrization, eval_at, point_from_root, BaseField, CurveError, ProjPoint, ReducedCurve,
};
use crate::logderiv::{classify, ClassifyOptions, GradedDims, LogDerivError};
use crate::poly::{dim_s, BinaryForm, HomogeneousPoly, Var};
use crate::scalar::{with_field, Field};

mod local;

pub use local::local_algebra_dim;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SingularError {
    #[error("the local algebra does not stabilize within {0} steps: the point is not an isolated singularity")]
    NonIsolated(u32),
    #[error("{0} is not a singular point of the curve")]
    NotSingularPoint(String),
    #[error("component {0} of the second curve is also a component of the first")]
    SharedComponent(usize),
    #[error("the Jacobian algebra does not stabilize: the curve is not reduced")]
    NonReducedOrNonIsolated,
    #[error("graded dimensions up to degree {0} are needed")]
    DimsTooShort(u32),
    #[error("the point {0} does not lie in a field extending the coefficient field")]
    PointField(String),
    #[error(transparent)]
    Curve(#[from] CurveError),
    #[error(transparent)]
    LogDeriv(#[from] LogDerivError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SingularityInvariants {
    pub point: ProjPoint,
    pub mu: usize,
    pub tau: usize,
    pub epsilon: usize,
}

/// Contribution of one intersection point (or Galois orbit of `orbit`
/// points) to the pairwise defect.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointDefect {
    pub point: ProjPoint,
    pub orbit: usize,
    /// Invariants of the union at the point.
    pub union: SingularityInvariants,
    /// Invariants of the first curve, `None` where it is smooth.
    pub base: Option<SingularityInvariants>,
    /// `epsilon(C1 ∪ C2, p) - epsilon(C1, p)` for a single point of the orbit.
    pub value: i64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairDefect {
    pub points: Vec<PointDefect>,
    pub total: i64,
}

/// Linear map `(u, v, w) -> P^2` sending `[0:0:1]` to `p` and the affine
/// chart `w = 1` onto the chart of the last nonzero coordinate of `p`.
fn chart<K: Field>(k: &K, p: &[K::Elem; 3]) -> [[K::Elem; 3]; 3] {
    let j = (0..3).rev().find(|&i| !k.is_zero(&p[i])).expect("a projective point");
    let mut rows: [[K::Elem; 3]; 3] = std::array::from_fn(|_| [k.zero(), k.zero(), k.zero()]);
    let mut local = 0;
    for i in 0..3 {
        rows[i][2] = p[i].clone();
        if i != j {
            rows[i][local] = k.one();
            local += 1;
        }
    }
    rows
}

/// `(mu, tau)` of the curve `f = 0` at `pt`.
fn mu_tau<F: Field>(f: &HomogeneousPoly<F>, pt: &ProjPoint) -> Result<(usize, usize), SingularError> {
    with_field!(pt.backend(), |k| {
        let p: Option<Vec<_>> = pt.coords().iter().map(|c| k.from_element(c)).collect();
        let g = f.map_field(&k, |c| k.from_element(&f.field().to_element(c)));
        let (Some(p), Some(g)) = (p, g) else {
            return Err(SingularError::PointField(pt.to_string()));
        };
        let g = g.compose_linear(&chart(&k, &[p[0].clone(), p[1].clone(), p[2].clone()]));
        let (gu, gv) = (g.partial(Var::X), g.partial(Var::Y));
        let origin = [k.zero(), k.zero(), k.one()];
        if [&g, &gu, &gv].iter().any(|h| !k.is_zero(&h.eval(&origin))) {
            return Err(SingularError::NotSingularPoint(pt.to_string()));
        }
        let d = f.degree();
        let guard = (d - 1) * (d - 1) + 3;
        let zero = || [k.zero(), k.zero()];
        let mu = local_algebra_dim(&[gu.clone(), gv.clone()], zero(), guard)?;
        let tau = local_algebra_dim(&[g, gu, gv], zero(), guard)?;
        Ok((mu, tau))
    })
}

pub fn singularity_invariants_poly<F: Field>(
    f: &HomogeneousPoly<F>,
    pt: &ProjPoint,
) -> Result<SingularityInvariants, SingularError> {
    let (mu, tau) = mu_tau(f, pt)?;
    debug_assert!(mu >= tau);
    Ok(SingularityInvariants { point: pt.clone(), mu, tau, epsilon: mu - tau })
}

pub fn singularity_invariants<F: Field>(
    curve: &ReducedCurve<F>,
    pt: &ProjPoint,
) -> Result<SingularityInvariants, SingularError> {
    singularity_invariants_poly(curve.poly(), pt)
}

pub fn milnor_number<F: Field>(curve: &ReducedCurve<F>, pt: &ProjPoint) -> Result<usize, SingularError> {
    Ok(mu_tau(curve.poly(), pt)?.0)
}

pub fn tjurina_number<F: Field>(curve: &ReducedCurve<F>, pt: &ProjPoint) -> Result<usize, SingularError> {
    Ok(mu_tau(curve.poly(), pt)?.1)
}

pub fn epsilon_point<F: Field>(curve: &ReducedCurve<F>, pt: &ProjPoint) -> Result<usize, SingularError> {
    Ok(singularity_invariants(curve, pt)?.epsilon)
}

/// True when all partial derivatives of `f` vanish at `pt`.
pub fn is_singular_point<F: Field>(f: &HomogeneousPoly<F>, pt: &ProjPoint) -> bool {
    Var::ALL.iter().all(|&v| eval_at(&f.partial(v), pt).is_zero())
}

fn point_defect<F: Field>(
    base: &ReducedCurve<F>,
    union: &ReducedCurve<F>,
    point: ProjPoint,
    orbit: usize,
) -> Result<PointDefect, SingularError> {
    let u = singularity_invariants(union, &point)?;
    let b = if is_singular_point(base.poly(), &point) { Some(singularity_invariants(base, &point)?) } else { None };
    let value = u.epsilon as i64 - b.as_ref().map_or(0, |b| b.epsilon as i64);
    Ok(PointDefect { point, orbit, union: u, base: b, value })
}

fn union_of<F: Field>(c1: &ReducedCurve<F>, c2: &ReducedCurve<F>) -> Result<ReducedCurve<F>, SingularError> {
    for (j, c) in c2.components().iter().enumerate() {
        if c1.find_component(&c.poly).is_some() {
            return Err(SingularError::SharedComponent(j));
        }
    }
    Ok(ReducedCurve::new(c1.components().iter().chain(c2.components()).cloned().collect())?)
}

fn collect_defects<F: Field>(
    c1: &ReducedCurve<F>,
    union: &ReducedCurve<F>,
    points: Vec<(ProjPoint, usize)>,
) -> Result<PairDefect, SingularError> {
    let points: Vec<PointDefect> = points
        .into_par_iter()
        .map(|(p, orbit)| point_defect(c1, union, p, orbit))
        .collect::<Result<_, _>>()?;
    let total = points.iter().map(|p| p.value * p.orbit as i64).sum();
    Ok(PairDefect { points, total })
}

/// `epsilon(C1, C2)` summed over the points of `C1 ∩ C2`, which are located
/// on the components of `C2` (lines or smooth conics).
pub fn epsilon_pair<F: BaseField>(
    c1: &ReducedCurve<F>,
    c2: &ReducedCurve<F>,
    height_bound: u64,
    seed: u64,
) -> Result<PairDefect, SingularError> {
    let union = union_of(c1, c2)?;
    let offset = c1.components().len();
    let mut points = Vec::new();
    for (j, comp) in c2.components().iter().enumerate() {
        let param = component_parametrization(comp, height_bound).map_err(|e| match e {
            CurveError::NonSmoothComponent(_) => CurveError::NonSmoothComponent(offset + j),
            e => e,
        })?;
        let u = BinaryForm::restrict(c1.poly(), &param);
        if u.is_zero() {
            return Err(SingularError::SharedComponent(j));
        }
        for root in c1.field().binary_roots(&u, seed)? {
            let pt = point_from_root(&param, &root);
            if c2.components()[..j].iter().any(|c| eval_at(&c.poly, &pt).is_zero()) {
                continue;
            }
            points.push((pt, root.orbit));
        }
    }
    collect_defects(c1, &union, points)
}

/// As [`epsilon_pair`] at explicitly given points; those not on both curves
/// are ignored.
pub fn epsilon_pair_at<F: Field>(
    c1: &ReducedCurve<F>,
    c2: &ReducedCurve<F>,
    points: &[ProjPoint],
) -> Result<PairDefect, SingularError> {
    let union = union_of(c1, c2)?;
    let on_both = points
        .iter()
        .filter(|p| eval_at(c1.poly(), p).is_zero() && eval_at(c2.poly(), p).is_zero())
        .map(|p| (p.clone(), 1))
        .collect();
    collect_defects(c1, &union, on_both)
}

/// `dim M(f)_k` of the Jacobian algebra `S/(f_x, f_y, f_z)` of a degree `d`
/// curve, from the graded dimensions of its derivation module.
pub fn jacobian_algebra_dim(d: u32, dims: &GradedDims, k: i64) -> Option<usize> {
    let e = k - d as i64 + 1;
    let d0 = if e < 0 { 0 } else { dims.get(e as u32)? };
    Some(dim_s(k) + d0 - 3 * dim_s(e))
}

/// `sum_p tau(C, p)`, read off the Jacobian algebra in degrees `3d - 5` and
/// `3d - 4`, where it has stabilized for a reduced curve.
pub fn total_tjurina_from_dims(d: u32, dims: &GradedDims) -> Result<usize, SingularError> {
    let k = 3 * d as i64 - 5;
    let need = (k + 1 - d as i64 + 1).max(0) as u32;
    let (Some(a), Some(b)) = (jacobian_algebra_dim(d, dims, k), jacobian_algebra_dim(d, dims, k + 1)) else {
        return Err(SingularError::DimsTooShort(need));
    };
    if a != b {
        return Err(SingularError::NonReducedOrNonIsolated);
    }
    Ok(a)
}

pub fn total_tjurina<F: Field>(curve: &ReducedCurve<F>) -> Result<usize, SingularError> {
    let cl = classify(curve, ClassifyOptions { cap: None, full_range: true })?;
    total_tjurina_from_dims(curve.degree(), &cl.dims)
}

/// `epsilon(C1, C2)` for a smooth irreducible `C2` from global data: the
/// Milnor numbers at the `meet` points of `C1 ∩ C2` grow by
/// `2 (C1 . C2)_p - 1`, so the defect is
/// `2 d1 d2 - meet - (tau(C1 ∪ C2) - tau(C1))`.
pub fn pair_defect_from_totals(d1: u32, d2: u32, meet: usize, tau_union: usize, tau_base: usize) -> i64 {
    2 * (d1 * d2) as i64 - meet as i64 - (tau_union as i64 - tau_base as i64)
}
