//! Acceptance criteria 1 to 9, one pass/fail line each.

use std::time::{Duration, Instant};

use addel_cli::config::RunConfig;
use addel_cli::report::{Payload, Report};
use addel_cli::search::{search, Find, SearchParams};
use addel_cli::suite::{paper_suite, ScenarioResult, SuiteReport};
use addel_core::addel::{ClassSummary, Incidence, Predicted};
use addel_core::curve::{ComponentKind, ProjPoint, ReducedCurve};
use addel_core::logderiv::{classify, hilbert_series_from_resolution, ClassifyOptions, CurveClass, GradedDims};
use addel_core::poly::parse_rational_poly;
use addel_core::scalar::{parse_rational, Rationals};
use addel_core::singular::{local_algebra_dim, singularity_invariants};

/// Integer data is compared exactly.
const EXACT: i64 = 0;
/// Desk-scale budgets for the whole suite.
const RATIONAL_BUDGET: Duration = Duration::from_secs(300);
const MODULAR_BUDGET: Duration = Duration::from_secs(60);
const SEARCH_TRIALS: usize = 200;
const SEARCH_SEED: u64 = 1;
/// Seed of the random 31-bit primes of the modular suite.
const MODULAR_SEED: u64 = 2024;

struct Verdict {
    failures: Vec<String>,
}

impl Verdict {
    fn new() -> Self {
        Self { failures: Vec::new() }
    }

    fn check(&mut self, ok: bool, what: impl Into<String>) {
        if !ok {
            self.failures.push(what.into());
        }
    }

    fn exact(&mut self, what: &str, expected: i64, observed: i64) {
        self.check((expected - observed).abs() <= EXACT, format!("{what}: expected {expected}, observed {observed}"));
    }
}

fn curve(srcs: &[&str]) -> ReducedCurve<Rationals> {
    ReducedCurve::from_polys(srcs.iter().map(|s| parse_rational_poly(s).unwrap()).collect()).unwrap()
}

fn suite(r: &Report) -> &SuiteReport {
    match &r.result {
        Payload::Suite(s) => s,
        _ => panic!("not a suite report"),
    }
}

fn scenario(r: &Report, index: usize) -> &ScenarioResult {
    &suite(r).scenarios[index - 1]
}

/// Checks one triple of the suite against exact expectations.
fn triple(
    v: &mut Verdict,
    r: &Report,
    index: usize,
    meet: Option<i64>,
    eps: i64,
    k: i64,
    predicted: Predicted,
    case: &str,
) {
    let s = scenario(r, index);
    let Some(o) = &s.observed else {
        v.check(false, format!("scenario {index} failed: {:?}", s.error));
        return;
    };
    if let Some(meet) = meet {
        v.exact(&format!("scenario {index} |C''|"), meet, o.intersection_count as i64);
    }
    v.exact(&format!("scenario {index} epsilon"), eps, o.epsilon);
    v.exact(&format!("scenario {index} k"), k, o.k as i64);
    v.check(o.predicted == predicted, format!("scenario {index}: predicted {}", o.predicted));
    v.check(o.case == case, format!("scenario {index}: case {}", o.case));
    v.check(predicted.agrees_with(&o.target), format!("scenario {index}: direct {}", o.target));
    v.check(o.agreement, format!("scenario {index}: no agreement"));
}

fn point_value(r: &Report, index: usize, point: &str) -> Option<i64> {
    let pts = scenario(r, index).observed.as_ref()?.points.as_ref()?;
    pts.iter().find(|(p, _)| p == point).map(|(_, v)| *v)
}

fn criterion_1(v: &mut Verdict) {
    let c = curve(&["x - y", "x + y", "x^2 + y^2 - z^2", "2*y^2 - z^2", "2*x^2 - z^2"]);
    let cl = classify(&c, ClassifyOptions::default()).unwrap();
    v.check(cl.class == CurveClass::Free { a: 2, b: 5 }, format!("octic: {}", cl.class));
}

fn criterion_2(v: &mut Verdict, r: &Report) {
    triple(v, r, 1, Some(4), 0, 4, Predicted::Free { a: 2, b: 7 }, "addition/even/free");
    triple(v, r, 2, None, 0, 12, Predicted::PlusOneGenerated { a: 4, b: 6, level: 7 }, "addition/even/plus-one");
    // The required k = 16 for x^2 + 3y^2 + 7xy - xz - 2yz cannot be met:
    // the conic passes through [0:0:1], where x - y and x + y meet, so it
    // meets the octic in 15 distinct points, and the ordinary triple point
    // there has epsilon = 0. The outcome (neither) is the same.
    let before = v.failures.len();
    triple(v, r, 3, None, 0, 16, Predicted::Neither, "addition/even/neither");
    if v.failures.len() > before {
        v.failures.push(
            "analysis: the conic contains [0:0:1] = (x - y) ∩ (x + y), so |C' ∩ C| = 15 and k = 15 (odd, m = 7 >= b' = 5); \
             the direct classification is neither, as predicted"
                .into(),
        );
    }
}

fn criterion_3(v: &mut Verdict, r: &Report) {
    triple(v, r, 4, None, 0, 4, Predicted::Free { a: 2, b: 3 }, "deletion/even/free");
}

fn criterion_4(v: &mut Verdict, r: &Report) {
    let pog = Predicted::PlusOneGenerated { a: 3, b: 4, level: 4 };
    triple(v, r, 5, Some(5), 0, 5, pog, "deletion/odd/plus-one");
    if let Some(o) = &scenario(r, 5).observed {
        v.check(o.source == CurveClass::Free { a: 3, b: 5 }, format!("nonic: {}", o.source));
        v.check(o.target == CurveClass::PlusOneGenerated { a: 3, b: 4, level: 4 }, format!("target: {}", o.target));
    }
}

fn criterion_5(v: &mut Verdict, r: &Report) {
    let (p1, p2) = ("[0:0:1]", "[1:-2:-1]");
    let cases = [
        (6, 6, 2, 8, Predicted::Neither, "deletion/even/neither", [1, 1]),
        (7, 10, 4, 14, Predicted::Free { a: 4, b: 7 }, "deletion/even/free", [2, 2]),
        (8, 10, 1, 11, Predicted::PlusOneGenerated { a: 6, b: 6, level: 6 }, "deletion/odd/plus-one", [1, 0]),
    ];
    for (index, meet, eps, k, predicted, case, at) in cases {
        triple(v, r, index, Some(meet), eps, k, predicted, case);
        for (p, want) in [p1, p2].into_iter().zip(at) {
            match point_value(r, index, p) {
                Some(got) => v.exact(&format!("scenario {index} epsilon at {p}"), want, got),
                None => v.check(false, format!("scenario {index}: no value at {p}")),
            }
        }
    }
}

fn series_matches(summary: &ClassSummary) -> bool {
    let series = hilbert_series_from_resolution(&summary.resolution).unwrap();
    series.first_mismatch(&GradedDims { dims: summary.dims.clone() }).is_none()
}

fn criterion_6(v: &mut Verdict, r: &Report) {
    let mut curves = 0;
    for s in &suite(r).scenarios {
        let Some(t) = &s.triple else {
            v.check(false, format!("scenario {} has no report", s.index));
            continue;
        };
        for (which, summary) in [("source", &t.source), ("target", &t.target)] {
            curves += 1;
            v.check(series_matches(summary), format!("scenario {} {which}: resolution series", s.index));
        }
        if let Some(c) = &t.series_check {
            v.check(c.first_mismatch.is_none(), format!("scenario {}: closed form differs at {:?}", s.index, c.first_mismatch));
            v.check(c.up_to + 1 == t.target.dims.len() as u32, format!("scenario {}: range", s.index));
        }
    }
    v.check(curves == 18, format!("{curves} curves checked"));
}

fn criterion_7(v: &mut Verdict) {
    let opts = ClassifyOptions::default();
    let class = |srcs: &[&str]| classify(&curve(srcs), opts).unwrap();
    let conic = class(&["x^2 + y^2 - z^2"]);
    v.check(conic.class == CurveClass::PlusOneGenerated { a: 1, b: 1, level: 1 }, format!("conic: {}", conic.class));
    let line = class(&["x"]);
    v.check(line.resolution.generators == [0, 0], format!("line: {:?}", line.resolution.generators));
    v.check(line.class.is_free(), format!("line: {}", line.class));
    let tri = class(&["x", "y", "z"]);
    v.check(tri.class == CurveClass::Free { a: 1, b: 1 }, format!("triangle: {}", tri.class));

    let lines = ["x", "y", "x + y", "x - y", "x + 2*y"];
    let q = |n: i64| parse_rational(&n.to_string()).unwrap();
    let center = ProjPoint::rational([q(0), q(0), q(1)]).unwrap();
    for m in 3..=5 {
        let inv = singularity_invariants(&curve(&lines[..m]), &center).unwrap();
        let want = ((m - 1) * (m - 1)) as i64;
        v.exact(&format!("{m} lines: mu"), want, inv.mu as i64);
        v.exact(&format!("{m} lines: tau"), want, inv.tau as i64);
    }
    // truncated quotients of k[u, v]: (u, v^3) has length 3
    let local = local_algebra_dim(&[parse_rational_poly("x").unwrap(), parse_rational_poly("y^3").unwrap()], [q(0), q(0)], 20);
    v.check(local == Ok(3), format!("local length {local:?}"));

    let witnessed = [
        &["x - y", "x + y", "x^2 + y^2 - z^2", "2*y^2 - z^2", "2*x^2 - z^2"][..],
        &["x - y", "x + y", "y + z", "x^2 + y^2 - z^2", "2*y^2 - z^2", "2*x^2 - z^2"],
        &["x^2 + y^2 - z^2"],
        &["x", "y", "z"],
        &["x", "y", "z", "x + y + z"],
    ];
    for srcs in witnessed {
        let c = curve(srcs);
        let cl = classify(&c, opts).unwrap();
        for w in &cl.witnesses {
            v.check(w.apply(c.poly()).is_zero(), format!("witness {w} of degree {}", c.degree()));
        }
    }
}

fn criterion_8(v: &mut Verdict) {
    let cfg = RunConfig::modular(None, SEARCH_SEED);
    let params = SearchParams { components: Default::default(), trials: SEARCH_TRIALS };
    let mut finds = Vec::new();
    let r = search(&cfg, &params, |l| finds.push(serde_json::from_str::<Find>(l).unwrap())).unwrap();
    let Payload::Search(s) = r.result else { panic!() };
    let free: Vec<&Find> = finds.iter().filter(|f| f.class.is_free()).collect();
    let conic_checks = free
        .iter()
        .flat_map(|f| &f.constraints)
        .filter(|c| c.kind == ComponentKind::Conic && c.satisfied.is_some());
    let (mut checked, mut violated) = (0, 0);
    for c in conic_checks {
        checked += 1;
        violated += usize::from(c.satisfied == Some(false));
        v.check(c.incidence == Incidence::Component, "conic checks are on components");
    }
    v.exact("conic constraint violations", 0, violated as i64);
    v.check(checked > 0, "no conic constraint was checked");
    v.check(s.triples > 0, "no deletion triple was sampled");
    v.exact("triple disagreements", 0, s.triple_disagreements as i64);
    v.exact("triple errors", 0, s.triple_errors as i64);
    println!(
        "    search: {} free, {} plus-one generated, {checked} conic checks, {} triples",
        s.free, s.plus_one_generated, s.triples
    );
}

fn criterion_9(v: &mut Verdict, rational: &Report, modular: &Report) {
    v.check(modular.field.mode == "modular" && !modular.field.primes.is_empty(), "modular run");
    for (a, b) in suite(rational).scenarios.iter().zip(&suite(modular).scenarios) {
        match (&a.observed, &b.observed) {
            (Some(x), Some(y)) => v.check(x == y, format!("scenario {}: {x:?} vs {y:?}", a.index)),
            _ => v.check(false, format!("scenario {}: {:?} / {:?}", a.index, a.error, b.error)),
        }
        if let Some(f) = &b.field {
            v.check(f.primes.iter().all(|&p| p >> 30 == 1), format!("scenario {}: primes {:?}", b.index, f.primes));
        }
    }
}

#[test]
fn acceptance() {
    let start = Instant::now();
    let rational = paper_suite(&RunConfig::default(), None).unwrap();
    let rational_time = start.elapsed();
    let start = Instant::now();
    let modular = paper_suite(&RunConfig::modular(None, MODULAR_SEED), None).unwrap();
    let modular_time = start.elapsed();

    let mut lines = Vec::new();
    let mut failed = Vec::new();
    let mut record = |n: usize, v: Verdict| {
        let verdict = if v.failures.is_empty() { "PASS" } else { "FAIL" };
        let line = format!("criterion {n}: {verdict}");
        println!("{line}");
        for f in &v.failures {
            println!("    {f}");
        }
        if !v.failures.is_empty() {
            failed.push(n);
        }
        lines.push(line);
    };
    let run = |f: &dyn Fn(&mut Verdict)| {
        let mut v = Verdict::new();
        f(&mut v);
        v
    };
    record(1, run(&criterion_1));
    record(2, run(&|v| criterion_2(v, &rational)));
    record(3, run(&|v| criterion_3(v, &rational)));
    record(4, run(&|v| criterion_4(v, &rational)));
    record(5, run(&|v| criterion_5(v, &rational)));
    record(6, run(&|v| criterion_6(v, &rational)));
    record(7, run(&criterion_7));
    record(8, run(&criterion_8));
    record(9, run(&|v| {
        criterion_9(v, &rational, &modular);
        v.check(rational_time <= RATIONAL_BUDGET, format!("rational suite took {rational_time:?}"));
        v.check(modular_time <= MODULAR_BUDGET, format!("modular suite took {modular_time:?}"));
    }));
    println!("suite times: rational {rational_time:?}, modular {modular_time:?}");
    assert_eq!(lines.len(), 9);
    assert!(failed.is_empty(), "failing criteria: {failed:?}");
}
