use std::time::Instant;

use serde_json::{json, Value};

use addel_core::addel::{component_constraints, run_triple, AddelError, Direction, TripleOptions, TripleReport};
use addel_core::curve::{
    is_smooth_conic, pairwise_intersection_points, BaseField, CurveError, CurveSpec, ProjPoint, ReducedCurve,
};
use addel_core::logderiv::{classify, hilbert_series_from_resolution, ClassifyOptions};
use addel_core::poly::{parse_rational_poly, RationalPoly};
use addel_core::scalar::Rationals;
use addel_core::singular::{is_singular_point, singularity_invariants, total_tjurina_from_dims};

use crate::config::RunConfig;
use crate::error::CliError;
use crate::field::{curve_over, poly_over, run_job, Job};
use crate::report::{AnalyzeReport, ComponentInfo, Payload, PointInfo, Report};

pub struct AnalyzeJob {
    pub spec: CurveSpec,
    pub cap: Option<u32>,
    pub opts: TripleOptions,
}

fn point_info<F: BaseField>(curve: &ReducedCurve<F>, p: &ProjPoint, orbit: usize) -> Result<PointInfo, CliError> {
    let incident = (0..curve.components().len())
        .filter(|&j| addel_core::curve::eval_at(&curve.components()[j].poly, p).is_zero())
        .collect();
    let (mu, tau) = if is_singular_point(curve.poly(), p) {
        let inv = singularity_invariants(curve, p)?;
        (inv.mu, inv.tau)
    } else {
        (0, 0)
    };
    Ok(PointInfo { point: p.to_string(), orbit, incident, mu, tau })
}

impl Job for AnalyzeJob {
    type Output = AnalyzeReport;

    fn run<F: BaseField>(&self, field: &F) -> Result<AnalyzeReport, CliError> {
        let curve = curve_over(&self.spec, field)?;
        let cl = classify(&curve, ClassifyOptions { cap: self.cap, full_range: true })?;
        let series = hilbert_series_from_resolution(&cl.resolution)?;
        let d = curve.degree();
        let mut notes = Vec::new();
        let total_tjurina = match total_tjurina_from_dims(d, &cl.dims) {
            Ok(t) => Some(t),
            Err(e) => {
                notes.push(format!("total tjurina number: {e}"));
                None
            }
        };
        let constraints = match component_constraints(&curve, &cl.class, &self.opts) {
            Ok(c) => c,
            Err(e) if e.is_limitation() => {
                notes.push(format!("count constraints skipped: {e}"));
                Vec::new()
            }
            Err(e) => return Err(e.into()),
        };
        let singular_points = match pairwise_intersection_points(&curve, self.opts.height_bound, self.opts.seed) {
            Ok(pts) => {
                let infos: Result<Vec<_>, _> = pts.iter().map(|p| point_info(&curve, &p.point, p.orbit)).collect();
                Some(infos?)
            }
            Err(e @ (CurveError::NonSmoothComponent(_) | CurveError::UnsupportedPointField(_))) => {
                notes.push(format!("singular points not listed: {e}"));
                None
            }
            Err(e) => return Err(e.into()),
        };
        let backend = field.backend();
        let mut requested_points = Vec::new();
        for coords in &self.spec.points {
            let p = ProjPoint::rational(coords.clone())
                .and_then(|p| p.coerce(&backend))
                .ok_or_else(|| CliError::BadReduction(format!("a requested point has no image in {backend}")))?;
            requested_points.push(point_info(&curve, &p, 1)?);
        }
        Ok(AnalyzeReport {
            degree: d,
            components: curve
                .components()
                .iter()
                .zip(&self.spec.components)
                .map(|(c, (p, _))| ComponentInfo { kind: c.kind, polynomial: p.to_string() })
                .collect(),
            class: cl.class,
            resolution: cl.resolution.clone(),
            hilbert_series: series.to_string(),
            dims: cl.dims.dims.clone(),
            settled_at: cl.settled_at,
            complete: cl.complete,
            hilbert_identity: series.first_mismatch(&cl.dims).is_none(),
            witnesses: cl.witnesses.iter().map(|w| w.to_string()).collect(),
            witnesses_verified: cl.witnesses.iter().all(|w| w.apply(curve.poly()).is_zero()),
            total_tjurina,
            constraints,
            singular_points,
            requested_points,
            notes,
        })
    }

    fn key(a: &AnalyzeReport) -> Value {
        let constraints: Vec<Value> = a
            .constraints
            .iter()
            .map(|c| json!([c.kind, c.incidence, c.count, c.epsilon, c.satisfied]))
            .collect();
        // orbits split differently over different primes; count points
        let mut local: Vec<(usize, usize)> = a
            .singular_points
            .iter()
            .flatten()
            .flat_map(|p| std::iter::repeat((p.mu, p.tau)).take(p.orbit))
            .collect();
        local.sort_unstable();
        json!({
            "class": a.class,
            "resolution": a.resolution,
            "dims": a.dims,
            "total_tjurina": a.total_tjurina,
            "hilbert_identity": a.hilbert_identity,
            "constraints": constraints,
            "local": local,
        })
    }
}

pub struct TripleJob {
    pub spec: CurveSpec,
    pub conic: RationalPoly,
    pub direction: Direction,
    pub opts: TripleOptions,
}

/// Precondition failures over a prime field of an input that passed them
/// over `Q` are bad reductions.
pub(crate) fn triple_error<F: BaseField>(field: &F, e: AddelError) -> CliError {
    let reduction = field.characteristic() != 0
        && matches!(
            e,
            AddelError::NotSmoothConic
                | AddelError::ConicNotComponent
                | AddelError::Curve(CurveError::ComponentEqualsConic | CurveError::DuplicateComponent(..))
        );
    let e = CliError::from(e);
    if reduction {
        e.as_reduction()
    } else {
        e
    }
}

pub(crate) fn triple_key(t: &TripleReport) -> Value {
    let mut values: Vec<i64> = t.epsilon.points.iter().flatten().map(|p| p.value).filter(|&v| v != 0).collect();
    values.sort_unstable();
    json!({ "fingerprint": t.fingerprint(), "case": t.prediction.case, "point_values": values })
}

impl Job for TripleJob {
    type Output = TripleReport;

    fn run<F: BaseField>(&self, field: &F) -> Result<TripleReport, CliError> {
        let curve = curve_over(&self.spec, field)?;
        let conic = poly_over(&self.conic, field)?;
        run_triple(&curve, &conic, self.direction, &self.opts).map_err(|e| triple_error(field, e))
    }

    fn key(t: &TripleReport) -> Value {
        triple_key(t)
    }
}

pub fn load_curve(text: &str) -> Result<CurveSpec, CliError> {
    let spec = addel_core::curve::parse_curve_file(text)?;
    // validation over Q, before any modular run
    spec.to_curve(&Rationals)?;
    Ok(spec)
}

fn elapsed(start: Instant) -> Option<u64> {
    Some(start.elapsed().as_millis() as u64)
}

pub fn analyze(spec: CurveSpec, cfg: &RunConfig) -> Result<Report, CliError> {
    cfg.validate()?;
    let degree = spec.to_curve(&Rationals)?.degree();
    cfg.check_cap(degree)?;
    let start = Instant::now();
    let job = AnalyzeJob { spec, cap: cfg.cap, opts: cfg.triple_options() };
    let out = run_job(&job, cfg)?;
    let mut r = Report::new("analyze", out.field, out.warnings, Payload::Analyze(out.value));
    r.elapsed_ms = elapsed(start);
    Ok(r)
}

pub fn triple(spec: CurveSpec, conic: &str, direction: Direction, cfg: &RunConfig) -> Result<Report, CliError> {
    cfg.validate()?;
    let conic = parse_rational_poly(conic)?;
    let curve = spec.to_curve(&Rationals)?;
    let source_degree = curve.degree();
    let q = conic.reduce(&Rationals).expect("rational");
    if q.degree() != 2 || !is_smooth_conic(&q)? {
        return Err(AddelError::NotSmoothConic.into());
    }
    let member = curve.find_component(&q).is_some();
    match direction {
        Direction::Deletion if !member => return Err(AddelError::ConicNotComponent.into()),
        Direction::Addition if member => return Err(CurveError::ComponentEqualsConic.into()),
        _ => {}
    }
    cfg.check_cap(source_degree.max(if direction == Direction::Addition { source_degree + 2 } else { 0 }))?;
    let start = Instant::now();
    let job = TripleJob { spec, conic, direction, opts: cfg.triple_options() };
    let out = run_job(&job, cfg)?;
    let command = match direction {
        Direction::Deletion => "delete",
        Direction::Addition => "add",
    };
    let mut r = Report::new(command, out.field, out.warnings, Payload::Triple(out.value));
    r.elapsed_ms = elapsed(start);
    Ok(r)
}
