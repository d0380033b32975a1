use std::fmt::Write;

use serde::{Deserialize, Serialize};

use addel_core::addel::{ConstraintCheck, TripleReport};
use addel_core::curve::ComponentKind;
use addel_core::logderiv::{CurveClass, ResolutionData};

use crate::field::FieldInfo;
use crate::search::SearchSummary;
use crate::suite::SuiteReport;

pub const SCHEMA: u32 = 1;

/// Envelope of every report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema: u32,
    pub tool: String,
    pub version: String,
    pub command: String,
    pub field: FieldInfo,
    /// Wall time; omitted where output must be reproducible byte for byte.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u64>,
    pub warnings: Vec<String>,
    pub result: Payload,
}

impl Report {
    pub fn new(command: &str, field: FieldInfo, warnings: Vec<String>, result: Payload) -> Self {
        Self {
            schema: SCHEMA,
            tool: "addel".into(),
            version: env!("CARGO_PKG_VERSION").into(),
            command: command.into(),
            field,
            elapsed_ms: None,
            warnings,
            result,
        }
    }

    /// True when the result contradicts an expectation: a prediction that
    /// disagrees with the direct classification, a failed scenario or a
    /// violated constraint.
    pub fn is_mismatch(&self) -> bool {
        match &self.result {
            Payload::Analyze(a) => !a.consistent(),
            Payload::Triple(t) => !t.agreement,
            Payload::Suite(s) => s.failed > 0,
            Payload::Search(s) => s.constraint_violations > 0 || s.triple_disagreements > 0,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    pub fn render(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "addel {} {} over {}", self.version, self.command, self.field.describe());
        match &self.result {
            Payload::Analyze(a) => render_analyze(&mut s, a),
            Payload::Triple(t) => render_triple(&mut s, t),
            Payload::Suite(r) => crate::suite::render(&mut s, r),
            Payload::Search(r) => crate::search::render(&mut s, r),
        }
        for w in &self.warnings {
            let _ = writeln!(s, "warning: {w}");
        }
        if let Some(ms) = self.elapsed_ms {
            let _ = writeln!(s, "elapsed: {ms} ms");
        }
        s
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Payload {
    Analyze(AnalyzeReport),
    Triple(TripleReport),
    Suite(SuiteReport),
    Search(SearchSummary),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentInfo {
    pub kind: ComponentKind,
    pub polynomial: String,
}

/// Milnor and Tjurina numbers at a point (or at each point of an orbit).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointInfo {
    pub point: String,
    pub orbit: usize,
    /// Indices of the components through the point.
    pub incident: Vec<usize>,
    pub mu: usize,
    pub tau: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnalyzeReport {
    pub degree: u32,
    pub components: Vec<ComponentInfo>,
    pub class: CurveClass,
    pub resolution: ResolutionData,
    pub hilbert_series: String,
    /// `dim D_0(C)_e` for `e = 0, 1, ...`.
    pub dims: Vec<usize>,
    pub settled_at: u32,
    pub complete: bool,
    /// The resolution-derived series reproduces `dims`.
    pub hilbert_identity: bool,
    /// Generators of `D_0(C)` as `(a, b, c)` with `a f_x + b f_y + c f_z = 0`.
    pub witnesses: Vec<String>,
    /// Every witness annihilates `f`.
    pub witnesses_verified: bool,
    pub total_tjurina: Option<usize>,
    pub constraints: Vec<ConstraintCheck>,
    /// Singular points, when every component is a line or a smooth conic
    /// and the points could be located.
    pub singular_points: Option<Vec<PointInfo>>,
    /// Points listed in the curve file; `mu = tau = 0` off the singular
    /// locus.
    pub requested_points: Vec<PointInfo>,
    pub notes: Vec<String>,
}

impl AnalyzeReport {
    /// Internal checks: the Hilbert identity, the witnesses, the count
    /// constraints and the sum of the local Tjurina numbers.
    pub fn consistent(&self) -> bool {
        let tau_ok = match (&self.singular_points, self.total_tjurina) {
            (Some(pts), Some(t)) => pts.iter().map(|p| p.tau * p.orbit).sum::<usize>() == t,
            _ => true,
        };
        self.hilbert_identity
            && self.witnesses_verified
            && tau_ok
            && self.constraints.iter().all(|c| c.satisfied != Some(false))
    }
}

fn render_analyze(s: &mut String, a: &AnalyzeReport) {
    let _ = writeln!(s, "degree: {}", a.degree);
    for (i, c) in a.components.iter().enumerate() {
        let _ = writeln!(s, "  component {i} ({}): {}", c.kind, c.polynomial);
    }
    let _ = writeln!(s, "class: {}", a.class);
    let _ = writeln!(s, "generator degrees: {:?}", a.resolution.generators);
    let _ = writeln!(s, "relation degrees: {:?}", a.resolution.relations);
    let _ = writeln!(s, "hilbert series: {}", a.hilbert_series);
    let _ = writeln!(s, "graded dimensions: {:?}", a.dims);
    let _ = writeln!(s, "settled at degree {} (complete: {})", a.settled_at, a.complete);
    let _ = writeln!(s, "hilbert identity: {}", ok(a.hilbert_identity));
    for w in &a.witnesses {
        let _ = writeln!(s, "  generator {w}");
    }
    let _ = writeln!(s, "witnesses verified: {}", ok(a.witnesses_verified));
    match a.total_tjurina {
        Some(t) => {
            let _ = writeln!(s, "total tjurina number: {t}");
        }
        None => {
            let _ = writeln!(s, "total tjurina number: unknown");
        }
    }
    for c in &a.constraints {
        render_constraint(s, c);
    }
    if let Some(pts) = &a.singular_points {
        let _ = writeln!(s, "singular points: {}", pts.len());
        for p in pts {
            render_point(s, p);
        }
    }
    if !a.requested_points.is_empty() {
        let _ = writeln!(s, "requested points:");
        for p in &a.requested_points {
            render_point(s, p);
        }
    }
    for n in &a.notes {
        let _ = writeln!(s, "note: {n}");
    }
    let _ = writeln!(s, "consistent: {}", ok(a.consistent()));
}

fn render_point(s: &mut String, p: &PointInfo) {
    let orbit = if p.orbit > 1 { format!(" (orbit of {})", p.orbit) } else { String::new() };
    let _ = writeln!(s, "  {}{orbit} on {:?}: mu = {}, tau = {}", p.point, p.incident, p.mu, p.tau);
}

pub(crate) fn render_constraint(s: &mut String, c: &ConstraintCheck) {
    let verdict = match c.satisfied {
        Some(true) => "satisfied",
        Some(false) => "VIOLATED",
        None => "not applicable",
    };
    let _ = writeln!(
        s,
        "  {} {} ({:?}): count = {}, epsilon = {}, constraint {verdict}",
        c.kind, c.polynomial, c.incidence, c.count, c.epsilon
    );
}

fn ok(b: bool) -> &'static str {
    if b {
        "ok"
    } else {
        "FAILED"
    }
}

fn render_triple(s: &mut String, t: &TripleReport) {
    let dir = match t.direction {
        addel_core::addel::Direction::Deletion => "deletion",
        addel_core::addel::Direction::Addition => "addition",
    };
    let _ = writeln!(s, "{dir} of the conic {}", t.conic);
    let _ = writeln!(s, "source (degree {}): {}", t.source.degree, t.source.class);
    let _ = writeln!(s, "intersection count: {}", t.intersection_count);
    let _ = writeln!(s, "epsilon: {}", t.epsilon.total);
    if let Some(pts) = &t.epsilon.points {
        for p in pts.iter().filter(|p| p.value != 0 || p.base.is_some()) {
            let base = p.base.map_or("smooth".to_string(), |(m, t)| format!("mu = {m}, tau = {t}"));
            let _ = writeln!(
                s,
                "  {} (orbit {}): union mu = {}, tau = {}; base {base}; contribution {}",
                p.point, p.orbit, p.mu, p.tau, p.value
            );
        }
    }
    let _ = writeln!(s, "k: {} (m = {})", t.k, t.prediction.m);
    let _ = writeln!(s, "quasihomogeneous: {}", t.quasihomogeneous);
    let _ = writeln!(s, "predicted: {} [{}]", t.prediction.outcome, t.prediction.case);
    if let Some(c) = &t.series_check {
        let verdict = match c.first_mismatch {
            None => format!("matches up to degree {}", c.up_to),
            Some(e) => format!("differs in degree {e}"),
        };
        let _ = writeln!(s, "predicted series: {} ({verdict})", c.series);
    }
    let _ = writeln!(s, "target (degree {}): {}", t.target.degree, t.target.class);
    let _ = writeln!(s, "total tjurina numbers: source {}, target {}", t.source.total_tjurina, t.target.total_tjurina);
    let _ = writeln!(s, "agreement: {}", if t.agreement { "yes" } else { "NO" });
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::commands::{analyze, load_curve, triple};
    use crate::config::RunConfig;
    use addel_core::addel::Direction;

    const OCTIC: &str = include_str!("../fixtures/octic.curve");

    #[test]
    fn json_round_trip() {
        let cfg = RunConfig::default();
        for r in [
            analyze(load_curve(OCTIC).unwrap(), &cfg).unwrap(),
            triple(load_curve(OCTIC).unwrap(), "x^2 + 2*y^2 - z^2", Direction::Addition, &cfg).unwrap(),
        ] {
            let back: Report = serde_json::from_str(&r.to_json()).unwrap();
            assert_eq!(back, r);
            assert_eq!(back.schema, SCHEMA);
        }
    }

    #[test]
    fn human_output_carries_the_numbers() {
        let r = triple(load_curve(OCTIC).unwrap(), "x^2 + 2*y^2 - z^2", Direction::Addition, &RunConfig::default())
            .unwrap();
        let Payload::Triple(t) = &r.result else { panic!() };
        let text = r.render();
        assert!(text.contains(&format!("intersection count: {}", t.intersection_count)));
        assert!(text.contains(&format!("k: {} (m = {})", t.k, t.prediction.m)));
        assert!(text.contains("plus-one generated with exponents (4, 6) and level 7"));
        assert!(text.contains("agreement: yes"));
        assert!(!r.is_mismatch());
    }

    #[test]
    fn smooth_conic_analysis() {
        let r = analyze(load_curve("conic: y^2 - x*z").unwrap(), &RunConfig::default()).unwrap();
        let Payload::Analyze(a) = &r.result else { panic!() };
        assert_eq!(a.class, CurveClass::PlusOneGenerated { a: 1, b: 1, level: 1 });
        assert_eq!(a.total_tjurina, Some(0));
        assert_eq!(a.singular_points.as_deref(), Some(&[][..]));
        assert!(a.consistent());
    }
}
