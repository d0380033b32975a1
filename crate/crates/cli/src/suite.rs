//! End-to-end regression scenarios on the curves stored in `fixtures/`.

use std::fmt::Write;
use std::path::Path;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use addel_core::addel::{round_trip, run_triple, Direction, Predicted, TripleOptions, TripleReport};
use addel_core::curve::{BaseField, CurveSpec, ProjPoint};
use addel_core::logderiv::CurveClass;
use addel_core::poly::parse_rational_poly;
use addel_core::scalar::parse_rational;

use crate::commands::{load_curve, triple_error};
use crate::config::RunConfig;
use crate::error::CliError;
use crate::field::{curve_over, poly_over, run_job, FieldInfo, Job};
use crate::report::{Payload, Report};

pub const FIXTURES: [(&str, &str); 3] = [
    ("octic.curve", include_str!("../fixtures/octic.curve")),
    ("nonic.curve", include_str!("../fixtures/nonic.curve")),
    ("degree14.curve", include_str!("../fixtures/degree14.curve")),
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Kind {
    Triple(Direction),
    /// Addition followed by deletion of the same conic.
    RoundTrip,
}

struct Scenario {
    name: &'static str,
    fixture: &'static str,
    conic: &'static str,
    kind: Kind,
    expect: Expect,
}

struct Expect {
    source: CurveClass,
    target: CurveClass,
    intersection_count: usize,
    epsilon: i64,
    k: u32,
    predicted: Predicted,
    case: &'static str,
    /// Defect contributions at given points, as `[a:b:c]` over `Q`.
    points: &'static [(&'static str, i64)],
}

const fn free(a: u32, b: u32) -> CurveClass {
    CurveClass::Free { a, b }
}

const fn pog(a: u32, b: u32, level: u32) -> CurveClass {
    CurveClass::PlusOneGenerated { a, b, level }
}

const P1: &str = "[0:0:1]";
const P2: &str = "[1:-2:-1]";

const SCENARIOS: [Scenario; 9] = [
    Scenario {
        name: "octic plus x^2 + 3y^2 - 2z^2",
        fixture: "octic.curve",
        conic: "x^2 + 3*y^2 - 2*z^2",
        kind: Kind::Triple(Direction::Addition),
        expect: Expect {
            source: free(2, 5),
            target: free(2, 7),
            intersection_count: 4,
            epsilon: 0,
            k: 4,
            predicted: Predicted::Free { a: 2, b: 7 },
            case: "addition/even/free",
            points: &[],
        },
    },
    Scenario {
        name: "octic plus x^2 + 2y^2 - z^2",
        fixture: "octic.curve",
        conic: "x^2 + 2*y^2 - z^2",
        kind: Kind::Triple(Direction::Addition),
        expect: Expect {
            source: free(2, 5),
            target: pog(4, 6, 7),
            intersection_count: 12,
            epsilon: 0,
            k: 12,
            predicted: Predicted::PlusOneGenerated { a: 4, b: 6, level: 7 },
            case: "addition/even/plus-one",
            points: &[],
        },
    },
    Scenario {
        name: "octic plus x^2 + 3y^2 + 7xy - xz - 2yz",
        fixture: "octic.curve",
        conic: "x^2 + 3*y^2 + 7*x*y - x*z - 2*y*z",
        kind: Kind::Triple(Direction::Addition),
        expect: Expect {
            source: free(2, 5),
            target: CurveClass::Neither { d1: 0, d2: 0 },
            // the conic passes through the node [0:0:1] of the two lines
            intersection_count: 15,
            epsilon: 0,
            k: 15,
            predicted: Predicted::Neither,
            case: "addition/odd/neither",
            points: &[],
        },
    },
    Scenario {
        name: "octic minus the circle",
        fixture: "octic.curve",
        conic: "x^2 + y^2 - z^2",
        kind: Kind::Triple(Direction::Deletion),
        expect: Expect {
            source: free(2, 5),
            target: free(2, 3),
            intersection_count: 4,
            epsilon: 0,
            k: 4,
            predicted: Predicted::Free { a: 2, b: 3 },
            case: "deletion/even/free",
            points: &[],
        },
    },
    Scenario {
        name: "nonic minus the circle",
        fixture: "nonic.curve",
        conic: "x^2 + y^2 - z^2",
        kind: Kind::Triple(Direction::Deletion),
        expect: Expect {
            source: free(3, 5),
            target: pog(3, 4, 4),
            intersection_count: 5,
            epsilon: 0,
            k: 5,
            predicted: Predicted::PlusOneGenerated { a: 3, b: 4, level: 4 },
            case: "deletion/odd/plus-one",
            points: &[],
        },
    },
    Scenario {
        name: "degree 14 minus x^2 - y^2 + xz + 2yz",
        fixture: "degree14.curve",
        conic: "x^2 - y^2 + x*z + 2*y*z",
        kind: Kind::Triple(Direction::Deletion),
        expect: Expect {
            source: free(6, 7),
            target: CurveClass::Neither { d1: 0, d2: 0 },
            intersection_count: 6,
            epsilon: 2,
            k: 8,
            predicted: Predicted::Neither,
            case: "deletion/even/neither",
            points: &[(P1, 1), (P2, 1)],
        },
    },
    Scenario {
        name: "degree 14 minus x^2 + 2xy + y^2 + xz",
        fixture: "degree14.curve",
        conic: "x^2 + 2*x*y + y^2 + x*z",
        kind: Kind::Triple(Direction::Deletion),
        expect: Expect {
            source: free(6, 7),
            target: free(4, 7),
            intersection_count: 10,
            epsilon: 4,
            k: 14,
            predicted: Predicted::Free { a: 4, b: 7 },
            case: "deletion/even/free",
            points: &[(P1, 2), (P2, 2)],
        },
    },
    Scenario {
        name: "degree 14 minus x^2 + xz + yz",
        fixture: "degree14.curve",
        conic: "x^2 + x*z + y*z",
        kind: Kind::Triple(Direction::Deletion),
        expect: Expect {
            source: free(6, 7),
            target: pog(6, 6, 6),
            intersection_count: 10,
            epsilon: 1,
            k: 11,
            predicted: Predicted::PlusOneGenerated { a: 6, b: 6, level: 6 },
            case: "deletion/odd/plus-one",
            points: &[(P1, 1), (P2, 0)],
        },
    },
    Scenario {
        name: "octic plus and minus x^2 + 3y^2 - 2z^2",
        fixture: "octic.curve",
        conic: "x^2 + 3*y^2 - 2*z^2",
        kind: Kind::RoundTrip,
        expect: Expect {
            source: free(2, 5),
            target: free(2, 7),
            intersection_count: 4,
            epsilon: 0,
            k: 4,
            predicted: Predicted::Free { a: 2, b: 7 },
            case: "addition/even/free",
            points: &[],
        },
    },
];

/// The data a scenario checks, in a field-independent form.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Outcome {
    pub source: CurveClass,
    pub target: CurveClass,
    pub intersection_count: usize,
    pub epsilon: i64,
    pub k: u32,
    pub predicted: Predicted,
    pub case: String,
    pub agreement: bool,
    /// Defect contributions at the listed points; `None` when the points
    /// could not be located.
    pub points: Option<Vec<(String, i64)>>,
    /// For a round trip: deletion recovers the original classification.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub round_trip: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScenarioResult {
    pub index: usize,
    pub name: String,
    pub fixture: String,
    pub conic: String,
    pub field: Option<FieldInfo>,
    pub expected: Outcome,
    pub observed: Option<Outcome>,
    pub error: Option<String>,
    pub mismatches: Vec<String>,
    pub passed: bool,
    /// Full report of the scenario's triple (the addition for a round trip).
    pub triple: Option<TripleReport>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub scenarios: Vec<ScenarioResult>,
    pub passed: usize,
    pub failed: usize,
}

fn outcome_of(t: &TripleReport, points: Option<Vec<(String, i64)>>, round_trip: Option<bool>) -> Outcome {
    Outcome {
        source: t.source.class,
        target: t.target.class,
        intersection_count: t.intersection_count,
        epsilon: t.epsilon.total,
        k: t.k,
        predicted: t.prediction.outcome,
        case: t.prediction.case.clone(),
        agreement: t.agreement,
        points,
        round_trip,
    }
}

fn expected_outcome(s: &Scenario) -> Outcome {
    let e = &s.expect;
    Outcome {
        source: e.source,
        target: e.target,
        intersection_count: e.intersection_count,
        epsilon: e.epsilon,
        k: e.k,
        predicted: e.predicted,
        case: e.case.into(),
        agreement: true,
        points: Some(e.points.iter().map(|(p, v)| (p.to_string(), *v)).collect()),
        round_trip: (s.kind == Kind::RoundTrip).then_some(true),
    }
}

fn parse_point(src: &str) -> ProjPoint {
    let inner = src.trim_start_matches('[').trim_end_matches(']');
    let c: Vec<_> = inner.split(':').map(|x| parse_rational(x).expect("scenario point")).collect();
    ProjPoint::rational([c[0].clone(), c[1].clone(), c[2].clone()]).expect("nonzero point")
}

struct ScenarioJob<'a> {
    scenario: &'a Scenario,
    spec: CurveSpec,
    opts: TripleOptions,
}

impl Job for ScenarioJob<'_> {
    type Output = (Outcome, TripleReport);

    fn run<F: BaseField>(&self, field: &F) -> Result<Self::Output, CliError> {
        let s = self.scenario;
        let curve = curve_over(&self.spec, field)?;
        let conic = poly_over(&parse_rational_poly(s.conic)?, field)?;
        let err = |e| triple_error(field, e);
        let (t, rt) = match s.kind {
            Kind::Triple(dir) => (run_triple(&curve, &conic, dir, &self.opts).map_err(err)?, None),
            Kind::RoundTrip => {
                let r = round_trip(&curve, &conic, &self.opts).map_err(err)?;
                let ok = r.identical && r.deletion.agreement;
                (r.addition, Some(ok))
            }
        };
        let backend = field.backend();
        let points = t.epsilon.points.as_ref().map(|pts| {
            s.expect
                .points
                .iter()
                .map(|(src, _)| {
                    let here = parse_point(src).coerce(&backend).map(|p| p.to_string());
                    let v = pts.iter().find(|p| Some(&p.point) == here.as_ref()).map_or(0, |p| p.value);
                    (src.to_string(), v)
                })
                .collect()
        });
        // nothing to look up when no point is listed
        let points = if s.expect.points.is_empty() { Some(Vec::new()) } else { points };
        Ok((outcome_of(&t, points, rt), t))
    }

    fn key(out: &Self::Output) -> Value {
        serde_json::to_value(&out.0).expect("serializable")
    }
}

fn compare(expected: &Outcome, observed: &Outcome) -> Vec<String> {
    let mut out = Vec::new();
    let mut check = |name: &str, e: String, o: String| {
        if e != o {
            out.push(format!("{name}: expected {e}, observed {o}"));
        }
    };
    let class = |c: &CurveClass| match c {
        // the generator degrees of a curve that is neither are not pinned
        CurveClass::Neither { .. } => "neither".to_string(),
        c => c.to_string(),
    };
    check("source", class(&expected.source), class(&observed.source));
    check("target", class(&expected.target), class(&observed.target));
    check("intersection count", expected.intersection_count.to_string(), observed.intersection_count.to_string());
    check("epsilon", expected.epsilon.to_string(), observed.epsilon.to_string());
    check("k", expected.k.to_string(), observed.k.to_string());
    check("prediction", expected.predicted.to_string(), observed.predicted.to_string());
    check("case", expected.case.clone(), observed.case.clone());
    check("agreement", expected.agreement.to_string(), observed.agreement.to_string());
    check("round trip", format!("{:?}", expected.round_trip), format!("{:?}", observed.round_trip));
    if let Some(pts) = &observed.points {
        check("point contributions", format!("{:?}", expected.points.as_ref().unwrap()), format!("{pts:?}"));
    }
    out
}

/// Fixture texts, from `dir` when given (files missing there fall back to
/// the built-in copies).
pub fn load_fixtures(dir: Option<&Path>) -> Result<Vec<(String, String)>, CliError> {
    FIXTURES
        .iter()
        .map(|(name, text)| {
            let text = match dir.map(|d| d.join(name)) {
                Some(p) if p.exists() => std::fs::read_to_string(&p)
                    .map_err(|e| CliError::Input(format!("{}: {e}", p.display())))?,
                _ => text.to_string(),
            };
            Ok((name.to_string(), text))
        })
        .collect()
}

fn run_scenario(index: usize, s: &Scenario, fixtures: &[(String, String)], cfg: &RunConfig) -> ScenarioResult {
    let expected = expected_outcome(s);
    let text = &fixtures.iter().find(|(n, _)| n == s.fixture).expect("known fixture").1;
    let mut cfg = *cfg;
    cfg.seed = cfg.seed.wrapping_add(index as u64);
    let result = load_curve(text).and_then(|spec| {
        let job = ScenarioJob { scenario: s, spec, opts: cfg.triple_options() };
        run_job(&job, &cfg)
    });
    let (field, observed, triple, error) = match result {
        Ok(o) => (Some(o.field), Some(o.value.0), Some(o.value.1), None),
        Err(e) => (None, None, None, Some(e.to_string())),
    };
    let mismatches = observed.as_ref().map_or_else(Vec::new, |o| compare(&expected, o));
    let passed = error.is_none() && mismatches.is_empty();
    ScenarioResult {
        index: index + 1,
        name: s.name.into(),
        fixture: s.fixture.into(),
        conic: s.conic.into(),
        field,
        expected,
        observed,
        error,
        mismatches,
        passed,
        triple,
    }
}

pub fn paper_suite(cfg: &RunConfig, fixture_dir: Option<&Path>) -> Result<Report, CliError> {
    cfg.validate()?;
    let start = Instant::now();
    let fixtures = load_fixtures(fixture_dir)?;
    let scenarios: Vec<ScenarioResult> =
        SCENARIOS.par_iter().enumerate().map(|(i, s)| run_scenario(i, s, &fixtures, cfg)).collect();
    let passed = scenarios.iter().filter(|s| s.passed).count();
    let failed = scenarios.len() - passed;
    let mut primes: Vec<u64> = scenarios.iter().filter_map(|s| s.field.as_ref()).flat_map(|f| f.primes.clone()).collect();
    primes.sort_unstable();
    primes.dedup();
    let field = match cfg.field {
        crate::config::FieldMode::Rational => FieldInfo::rational(),
        _ => FieldInfo { mode: "modular".into(), agreeing: primes.len(), primes },
    };
    let mut r = Report::new("paper-suite", field, Vec::new(), Payload::Suite(SuiteReport { scenarios, passed, failed }));
    r.elapsed_ms = Some(start.elapsed().as_millis() as u64);
    Ok(r)
}

pub(crate) fn render(s: &mut String, r: &SuiteReport) {
    for sc in &r.scenarios {
        let verdict = if sc.passed { "pass" } else { "FAIL" };
        let _ = write!(s, "[{verdict}] {}. {}", sc.index, sc.name);
        if let Some(o) = &sc.observed {
            let _ = write!(
                s,
                ": |C''| = {}, epsilon = {}, k = {}, predicted {}, direct {}",
                o.intersection_count, o.epsilon, o.k, o.predicted, o.target
            );
            if let Some(pts) = o.points.as_ref().filter(|p| !p.is_empty()) {
                let list: Vec<String> = pts.iter().map(|(p, v)| format!("{p}: {v}")).collect();
                let _ = write!(s, " ({})", list.join(", "));
            }
        }
        let _ = writeln!(s);
        if let Some(e) = &sc.error {
            let _ = writeln!(s, "    error: {e}");
        }
        for m in &sc.mismatches {
            let _ = writeln!(s, "    {m}");
        }
    }
    let _ = writeln!(s, "{} passed, {} failed", r.passed, r.failed);
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn comparison_lists_mismatches() {
        let e = expected_outcome(&SCENARIOS[6]);
        assert!(compare(&e, &e).is_empty());
        let mut o = e.clone();
        o.k = 13;
        o.points = Some(vec![(P1.into(), 2), (P2.into(), 1)]);
        let m = compare(&e, &o);
        assert_eq!(m.len(), 2);
        assert!(m[0].starts_with("k: expected 14"));
        // the degrees of a curve that is neither are not compared
        let mut e3 = expected_outcome(&SCENARIOS[2]);
        e3.target = CurveClass::Neither { d1: 4, d2: 7 };
        assert!(compare(&expected_outcome(&SCENARIOS[2]), &e3).is_empty());
    }

    #[test]
    fn fixtures_parse() {
        for (name, text) in load_fixtures(None).unwrap() {
            assert!(load_curve(&text).is_ok(), "{name}");
        }
        assert!(SCENARIOS.iter().all(|s| FIXTURES.iter().any(|(n, _)| *n == s.fixture)));
    }

    #[test]
    fn single_scenario() {
        let fixtures = load_fixtures(None).unwrap();
        let r = run_scenario(3, &SCENARIOS[3], &fixtures, &RunConfig::default());
        assert!(r.passed, "{:?}", r.mismatches);
        assert_eq!(r.index, 4);
    }
}
