//! Deletion and addition of a smooth conic: predictions from the exponents
//! of a free curve, and their validation against a direct classification.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::curve::{
    conic_intersection_count, is_smooth_conic, line_intersection_count, BaseField, Component, ComponentKind,
    CurveError, ReducedCurve,
};
use crate::logderiv::{classify, Classification, ClassifyOptions, CurveClass, LogDerivError, ResolutionData};
use crate::poly::HomogeneousPoly;
use crate::singular::{epsilon_pair, pair_defect_from_totals, total_tjurina_from_dims, SingularError};

mod predict;

pub use predict::{
    check_conic_count_constraints, check_line_count_constraints, hs_added, hs_deleted, predict_addition,
    predict_deletion, Incidence, Predicted, Prediction,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AddelError {
    #[error("the source curve is {0}, not free")]
    SourceNotFree(CurveClass),
    #[error("the conic is singular")]
    NotSmoothConic,
    #[error("the conic is not a component of the curve")]
    ConicNotComponent,
    #[error("the effective intersection count {0} is not positive")]
    NonPositiveK(i64),
    #[error("defect {points} from the intersection points disagrees with {global} from the Tjurina numbers")]
    InconsistentDefect { points: i64, global: i64 },
    #[error(transparent)]
    Curve(#[from] CurveError),
    #[error(transparent)]
    Singular(#[from] SingularError),
    #[error(transparent)]
    LogDeriv(#[from] LogDerivError),
}

impl AddelError {
    /// True for failures caused by a computational limit rather than by
    /// the input: the degree cap or an unsupported field of points.
    pub fn is_limitation(&self) -> bool {
        matches!(
            self,
            AddelError::LogDeriv(LogDerivError::CapTooSmall { .. } | LogDerivError::LiftFailed(_))
                | AddelError::Curve(CurveError::UnsupportedPointField(_) | CurveError::NoRationalPointFound(_))
                | AddelError::Singular(
                    SingularError::DimsTooShort(_)
                        | SingularError::Curve(CurveError::UnsupportedPointField(_) | CurveError::NoRationalPointFound(_))
                )
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    Deletion,
    Addition,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TripleOptions {
    pub cap: Option<u32>,
    pub height_bound: u64,
    pub seed: u64,
}

impl Default for TripleOptions {
    fn default() -> Self {
        Self { cap: None, height_bound: 100, seed: 0 }
    }
}

/// Contribution of one intersection point (or orbit) to a defect.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointContribution {
    pub point: String,
    pub orbit: usize,
    pub mu: usize,
    pub tau: usize,
    /// `(mu, tau)` of the curve without the added component, when singular
    /// there.
    pub base: Option<(usize, usize)>,
    pub value: i64,
}

/// The defect `epsilon(C', X)` of a smooth component `X` against `C'`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Defect {
    pub total: i64,
    /// Per-point values, when the intersection points could be located.
    pub points: Option<Vec<PointContribution>>,
}

fn point_defect<F: BaseField>(
    base: &ReducedCurve<F>,
    other: &HomogeneousPoly<F>,
    opts: &TripleOptions,
) -> Result<Option<Defect>, AddelError> {
    let other = ReducedCurve::new(vec![Component::infer(other.clone())])?;
    match epsilon_pair(base, &other, opts.height_bound, opts.seed) {
        Ok(d) => {
            let points = d
                .points
                .iter()
                .map(|p| PointContribution {
                    point: p.point.to_string(),
                    orbit: p.orbit,
                    mu: p.union.mu,
                    tau: p.union.tau,
                    base: p.base.as_ref().map(|b| (b.mu, b.tau)),
                    value: p.value,
                })
                .collect();
            Ok(Some(Defect { total: d.total, points: Some(points) }))
        }
        Err(SingularError::Curve(CurveError::UnsupportedPointField(_) | CurveError::NoRationalPointFound(_))) => {
            Ok(None)
        }
        Err(e) => Err(e.into()),
    }
}

/// Summary of one classified curve.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassSummary {
    pub degree: u32,
    pub class: CurveClass,
    pub resolution: ResolutionData,
    pub dims: Vec<usize>,
    pub total_tjurina: usize,
}

impl ClassSummary {
    fn new<F: crate::scalar::Field>(degree: u32, cl: &Classification<F>) -> Result<Self, AddelError> {
        Ok(Self {
            degree,
            class: cl.class,
            resolution: cl.resolution.clone(),
            dims: cl.dims.dims.clone(),
            total_tjurina: total_tjurina_from_dims(degree, &cl.dims)?,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesCheck {
    pub series: String,
    /// Largest degree compared.
    pub up_to: u32,
    pub first_mismatch: Option<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TripleReport {
    pub direction: Direction,
    pub conic: String,
    pub source: ClassSummary,
    pub target: ClassSummary,
    /// `|C''| = |C' ∩ C_0|`.
    pub intersection_count: usize,
    pub epsilon: Defect,
    pub k: u32,
    pub quasihomogeneous: bool,
    pub prediction: Prediction,
    /// Closed-form series against the computed dimensions of the target.
    pub series_check: Option<SeriesCheck>,
    pub agreement: bool,
}

impl TripleReport {
    /// The exact data a run must reproduce in any field: classes, `k`,
    /// the defect and the prediction.
    pub fn fingerprint(&self) -> (CurveClass, CurveClass, usize, i64, u32, Predicted, bool) {
        (
            self.source.class,
            self.target.class,
            self.intersection_count,
            self.epsilon.total,
            self.k,
            self.prediction.outcome,
            self.agreement,
        )
    }
}

fn classify_opts(cap: Option<u32>) -> ClassifyOptions {
    ClassifyOptions { cap, full_range: true }
}

/// Runs the deletion (`curve` contains `conic`) or addition (`curve` does
/// not) of a smooth conic: the predictor from the free source and the
/// direct classification of the target.
pub fn run_triple<F: BaseField>(
    curve: &ReducedCurve<F>,
    conic: &HomogeneousPoly<F>,
    direction: Direction,
    opts: &TripleOptions,
) -> Result<TripleReport, AddelError> {
    if !is_smooth_conic(conic)? {
        return Err(AddelError::NotSmoothConic);
    }
    let (big, small) = match direction {
        Direction::Deletion => {
            let i = curve.find_component(conic).ok_or(AddelError::ConicNotComponent)?;
            (curve.clone(), curve.without(i)?)
        }
        Direction::Addition => {
            if curve.find_component(conic).is_some() {
                return Err(CurveError::ComponentEqualsConic.into());
            }
            let c = Component { poly: conic.clone(), kind: ComponentKind::Conic };
            (curve.with(c)?, curve.clone())
        }
    };
    let source_cl = classify(curve, classify_opts(opts.cap))?;
    let CurveClass::Free { a, b } = source_cl.class else {
        return Err(AddelError::SourceNotFree(source_cl.class));
    };
    let (target_curve, source_deg) = match direction {
        Direction::Deletion => (&small, big.degree()),
        Direction::Addition => (&big, small.degree()),
    };
    let target_cl = classify(target_curve, classify_opts(opts.cap))?;
    let source = ClassSummary::new(source_deg, &source_cl)?;
    let target = ClassSummary::new(target_curve.degree(), &target_cl)?;
    let (tau_big, tau_small) = match direction {
        Direction::Deletion => (source.total_tjurina, target.total_tjurina),
        Direction::Addition => (target.total_tjurina, source.total_tjurina),
    };

    let meet = conic_intersection_count(&small, conic, opts.height_bound)?;
    let global = pair_defect_from_totals(small.degree(), 2, meet, tau_big, tau_small);
    let epsilon = match point_defect(&small, conic, opts)? {
        Some(d) if d.total != global => return Err(AddelError::InconsistentDefect { points: d.total, global }),
        Some(d) => d,
        None => Defect { total: global, points: None },
    };
    let k = meet as i64 + epsilon.total;
    let k = u32::try_from(k).ok().filter(|&k| k >= 1).ok_or(AddelError::NonPositiveK(k))?;
    let prediction = match direction {
        Direction::Deletion => predict_deletion(a, b, k),
        Direction::Addition => predict_addition(a, b, k),
    };
    let quasihomogeneous = epsilon.total == 0;
    let series_check = prediction.series.as_ref().map(|s| SeriesCheck {
        series: s.to_string(),
        up_to: target_cl.dims.bound(),
        first_mismatch: s.first_mismatch(&target_cl.dims),
    });
    let series_ok = !quasihomogeneous || series_check.as_ref().map_or(true, |c| c.first_mismatch.is_none());
    let agreement = prediction.outcome.agrees_with(&target.class) && series_ok;
    Ok(TripleReport {
        direction,
        conic: conic.to_string(),
        source,
        target,
        intersection_count: meet,
        epsilon,
        k,
        quasihomogeneous,
        prediction,
        series_check,
        agreement,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RoundTrip {
    pub addition: TripleReport,
    pub deletion: TripleReport,
    /// The deletion recovers the original curve's classification.
    pub identical: bool,
}

/// Adds `conic` to the free curve `curve`, then deletes it again.
pub fn round_trip<F: BaseField>(
    curve: &ReducedCurve<F>,
    conic: &HomogeneousPoly<F>,
    opts: &TripleOptions,
) -> Result<RoundTrip, AddelError> {
    let addition = run_triple(curve, conic, Direction::Addition, opts)?;
    let c = Component { poly: conic.clone(), kind: ComponentKind::Conic };
    let deletion = run_triple(&curve.with(c)?, conic, Direction::Deletion, opts)?;
    let identical = deletion.target == addition.source && deletion.source == addition.target;
    Ok(RoundTrip { addition, deletion, identical })
}

/// A count constraint evaluated for one line or conic.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstraintCheck {
    pub kind: ComponentKind,
    pub polynomial: String,
    pub incidence: Incidence,
    /// `|C' ∩ X|` for a component `X`, `|C ∩ X|` otherwise.
    pub count: usize,
    pub epsilon: i64,
    /// `None` when no constraint applies to the class.
    pub satisfied: Option<bool>,
}

/// The defect of `x` against `base`, from the intersection points when
/// they can be located and from the Tjurina numbers otherwise.
fn defect_against<F: BaseField>(
    base: &ReducedCurve<F>,
    x: &HomogeneousPoly<F>,
    meet: usize,
    opts: &TripleOptions,
) -> Result<i64, AddelError> {
    if let Some(d) = point_defect(base, x, opts)? {
        return Ok(d.total);
    }
    let union = base.with(Component::infer(x.clone()))?;
    let tau = |c: &ReducedCurve<F>| -> Result<usize, AddelError> {
        let cl = classify(c, classify_opts(opts.cap))?;
        Ok(total_tjurina_from_dims(c.degree(), &cl.dims)?)
    };
    Ok(pair_defect_from_totals(base.degree(), x.degree(), meet, tau(&union)?, tau(base)?))
}

/// Checks the count constraints for a line or smooth conic `x` against
/// `curve` of class `class`, as a component when `x` is one.
pub fn check_constraints<F: BaseField>(
    curve: &ReducedCurve<F>,
    class: &CurveClass,
    x: &HomogeneousPoly<F>,
    opts: &TripleOptions,
) -> Result<ConstraintCheck, AddelError> {
    let kind = Component::infer(x.clone()).kind;
    let (base, incidence) = match curve.find_component(x) {
        Some(i) => (curve.without(i)?, Incidence::Component),
        None => (curve.clone(), Incidence::NonComponent),
    };
    let count = match kind {
        ComponentKind::Line => line_intersection_count(&base, x)?,
        ComponentKind::Conic => conic_intersection_count(&base, x, opts.height_bound)?,
        ComponentKind::General => return Err(CurveError::NonSmoothComponent(0).into()),
    };
    let applies = match (kind, class) {
        (ComponentKind::Line, CurveClass::Free { .. }) => true,
        (ComponentKind::Line, CurveClass::PlusOneGenerated { .. }) => incidence == Incidence::Component,
        (ComponentKind::Conic, CurveClass::Free { .. }) => true,
        _ => false,
    };
    let epsilon = if applies { defect_against(&base, x, count, opts)? } else { 0 };
    let satisfied = if !applies {
        None
    } else {
        match kind {
            ComponentKind::Line => check_line_count_constraints(class, count, epsilon, incidence),
            _ => {
                let (a, b) = class.exponents();
                let k = count as i64 + epsilon;
                Some(k >= 0 && check_conic_count_constraints(a, b, k as u32, incidence))
            }
        }
    };
    Ok(ConstraintCheck { kind, polynomial: x.to_string(), incidence, count, epsilon, satisfied })
}

/// [`check_constraints`] for every line and smooth conic component.
pub fn component_constraints<F: BaseField>(
    curve: &ReducedCurve<F>,
    class: &CurveClass,
    opts: &TripleOptions,
) -> Result<Vec<ConstraintCheck>, AddelError> {
    if curve.components().len() < 2 {
        return Ok(Vec::new());
    }
    curve
        .components()
        .iter()
        .filter(|c| c.kind != ComponentKind::General)
        .map(|c| check_constraints(curve, class, &c.poly, opts))
        .collect()
}
