//! Random arrangements of lines and smooth conics with small integer
//! coefficients, catalogued when free or plus-one generated.

use std::fmt::Write;

use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use addel_core::addel::{component_constraints, run_triple, ConstraintCheck, Direction, Predicted, TripleOptions};
use addel_core::curve::{is_smooth_conic, BaseField, Component, ComponentKind, ReducedCurve};
use addel_core::logderiv::{classify, ClassifyOptions, CurveClass, ResolutionData};
use addel_core::poly::{basis, RationalPoly};
use addel_core::scalar::{random_large_prime, PrimeField, Rationals};

use crate::config::{FieldMode, RunConfig};
use crate::error::CliError;
use crate::field::FieldInfo;
use crate::report::{Payload, Report};

/// Shape of the random arrangements.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentSpec {
    pub lines: usize,
    pub conics: usize,
    /// Coefficients are drawn from `-height..=height`.
    pub height: i64,
}

impl Default for ComponentSpec {
    fn default() -> Self {
        Self { lines: 3, conics: 1, height: 1 }
    }
}

impl std::str::FromStr for ComponentSpec {
    type Err = CliError;

    /// `lines=3,conics=1,height=1`; omitted keys keep their defaults.
    fn from_str(s: &str) -> Result<Self, CliError> {
        let mut spec = ComponentSpec::default();
        for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let bad = || CliError::Input(format!("--components: cannot read `{part}`"));
            let (k, v) = part.split_once('=').ok_or_else(bad)?;
            let n: i64 = v.trim().parse().map_err(|_| bad())?;
            match k.trim() {
                "lines" if n >= 0 => spec.lines = n as usize,
                "conics" if n >= 0 => spec.conics = n as usize,
                "height" if n >= 1 => spec.height = n,
                _ => return Err(bad()),
            }
        }
        if spec.lines + spec.conics == 0 {
            return Err(CliError::Input("--components: the arrangement needs a component".into()));
        }
        Ok(spec)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchParams {
    pub components: ComponentSpec,
    pub trials: usize,
}

/// The deletion of one conic component of a free find.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TripleSummary {
    pub conic: String,
    pub intersection_count: usize,
    pub epsilon: i64,
    pub k: u32,
    pub predicted: Predicted,
    pub case: String,
    pub direct: CurveClass,
    pub agreement: bool,
}

/// One catalogue line.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Find {
    pub trial: usize,
    pub seed: u64,
    pub components: Vec<String>,
    pub degree: u32,
    pub class: CurveClass,
    pub resolution: ResolutionData,
    pub constraints: Vec<ConstraintCheck>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub triple: Option<TripleSummary>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub triple_error: Option<String>,
    pub violations: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchSummary {
    pub seed: u64,
    pub components: ComponentSpec,
    pub trials: usize,
    pub free: usize,
    pub plus_one_generated: usize,
    pub neither: usize,
    pub skipped: usize,
    pub constraint_checks: usize,
    pub constraint_violations: usize,
    pub triples: usize,
    pub triple_disagreements: usize,
    pub triple_errors: usize,
}

enum Trial {
    Find(Find),
    Neither,
    Skipped(String),
}

fn random_poly(rng: &mut ChaCha8Rng, degree: u32, height: i64) -> RationalPoly {
    loop {
        let terms: Vec<_> = basis(degree)
            .into_iter()
            .map(|m| (m, BigRational::from_integer(rng.gen_range(-height..=height).into())))
            .collect();
        let p = RationalPoly::from_terms(Rationals, degree, terms).expect("homogeneous terms");
        if !p.is_zero() {
            return p;
        }
    }
}

/// A reduced arrangement over `field`, or `None` after too many draws.
fn random_arrangement<F: BaseField>(
    field: &F,
    spec: &ComponentSpec,
    rng: &mut ChaCha8Rng,
) -> Option<(Vec<String>, ReducedCurve<F>)> {
    'draw: for _ in 0..64 {
        let mut names = Vec::new();
        let mut comps = Vec::new();
        for (count, degree, kind) in [(spec.lines, 1, ComponentKind::Line), (spec.conics, 2, ComponentKind::Conic)] {
            for _ in 0..count {
                let p = random_poly(rng, degree, spec.height);
                let Some(q) = p.reduce(field).filter(|q| !q.is_zero()) else { continue 'draw };
                if kind == ComponentKind::Conic && !is_smooth_conic(&q).unwrap_or(false) {
                    continue 'draw;
                }
                names.push(p.to_string());
                comps.push(Component { poly: q, kind });
            }
        }
        if let Ok(c) = ReducedCurve::new(comps) {
            return Some((names, c));
        }
    }
    None
}

fn run_trial<F: BaseField>(field: &F, seed: u64, trial: usize, spec: &ComponentSpec, opts: &TripleOptions) -> Trial {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial as u64);
    let Some((names, curve)) = random_arrangement(field, spec, &mut rng) else {
        return Trial::Skipped("no reduced arrangement drawn".into());
    };
    let cl = match classify(&curve, ClassifyOptions { cap: opts.cap, full_range: true }) {
        Ok(cl) => cl,
        Err(e) => return Trial::Skipped(e.to_string()),
    };
    if matches!(cl.class, CurveClass::Neither { .. }) {
        return Trial::Neither;
    }
    let constraints = match component_constraints(&curve, &cl.class, opts) {
        // every component is a line or a conic, so the checks follow the
        // component order; report the integer form of each polynomial
        Ok(c) => c.into_iter().zip(&names).map(|(c, n)| ConstraintCheck { polynomial: n.clone(), ..c }).collect::<Vec<_>>(),
        Err(e) => return Trial::Skipped(e.to_string()),
    };
    let mut violations = constraints.iter().filter(|c| c.satisfied == Some(false)).count();
    let conics: Vec<usize> = (0..curve.components().len())
        .filter(|&i| curve.components()[i].kind == ComponentKind::Conic)
        .collect();
    let (mut triple, mut triple_error) = (None, None);
    if cl.class.is_free() && !conics.is_empty() && curve.components().len() > 1 {
        let pick = conics[rng.gen_range(0..conics.len())];
        let conic = &curve.components()[pick].poly;
        match run_triple(&curve, conic, Direction::Deletion, opts) {
            Ok(t) => {
                if !t.agreement {
                    violations += 1;
                }
                triple = Some(TripleSummary {
                    conic: names[pick].clone(),
                    intersection_count: t.intersection_count,
                    epsilon: t.epsilon.total,
                    k: t.k,
                    predicted: t.prediction.outcome,
                    case: t.prediction.case,
                    direct: t.target.class,
                    agreement: t.agreement,
                });
            }
            Err(e) => triple_error = Some(e.to_string()),
        }
    }
    Trial::Find(Find {
        trial,
        seed,
        components: names,
        degree: curve.degree(),
        class: cl.class,
        resolution: cl.resolution,
        constraints,
        triple,
        triple_error,
        violations,
    })
}

/// The prime of a modular search: the given one or a 31-bit prime drawn
/// from the seed.
fn search_prime(prime: Option<u64>, seed: u64) -> u64 {
    prime.unwrap_or_else(|| {
        random_large_prime(31, &mut ChaCha8Rng::seed_from_u64(seed)).expect("31-bit primes exist")
    })
}

fn run_all<F: BaseField>(field: &F, params: &SearchParams, cfg: &RunConfig) -> Vec<Trial> {
    let opts = cfg.triple_options();
    (0..params.trials)
        .into_par_iter()
        .map(|i| run_trial(field, cfg.seed, i, &params.components, &opts))
        .collect()
}

/// Runs the search; every catalogue line and every skipped trial is passed
/// to `emit` as JSON, in trial order.
pub fn search(cfg: &RunConfig, params: &SearchParams, mut emit: impl FnMut(&str)) -> Result<Report, CliError> {
    cfg.validate()?;
    cfg.check_cap((params.components.lines + 2 * params.components.conics) as u32)?;
    let (trials, field) = match cfg.field {
        FieldMode::Rational => (run_all(&Rationals, params, cfg), FieldInfo::rational()),
        FieldMode::Modular { prime } => {
            let p = search_prime(prime, cfg.seed);
            let field = FieldInfo { mode: "modular".into(), primes: vec![p], agreeing: 1 };
            (run_all(&PrimeField::new(p), params, cfg), field)
        }
    };
    let mut summary = SearchSummary {
        seed: cfg.seed,
        components: params.components,
        trials: params.trials,
        free: 0,
        plus_one_generated: 0,
        neither: 0,
        skipped: 0,
        constraint_checks: 0,
        constraint_violations: 0,
        triples: 0,
        triple_disagreements: 0,
        triple_errors: 0,
    };
    let mut warnings = Vec::new();
    for (i, t) in trials.into_iter().enumerate() {
        match t {
            Trial::Find(f) => {
                if f.class.is_free() {
                    summary.free += 1;
                } else {
                    summary.plus_one_generated += 1;
                }
                summary.constraint_checks += f.constraints.iter().filter(|c| c.satisfied.is_some()).count();
                summary.constraint_violations += f.constraints.iter().filter(|c| c.satisfied == Some(false)).count();
                if let Some(t) = &f.triple {
                    summary.triples += 1;
                    summary.triple_disagreements += usize::from(!t.agreement);
                }
                summary.triple_errors += usize::from(f.triple_error.is_some());
                emit(&serde_json::to_string(&f).expect("serializable"));
            }
            Trial::Neither => summary.neither += 1,
            Trial::Skipped(reason) => {
                summary.skipped += 1;
                warnings.push(format!("trial {i} skipped: {reason}"));
            }
        }
    }
    Ok(Report::new("search", field, warnings, Payload::Search(summary)))
}

pub(crate) fn render(s: &mut String, r: &SearchSummary) {
    let c = &r.components;
    let _ = writeln!(
        s,
        "{} trials, lines={}, conics={}, height={}, seed {}",
        r.trials, c.lines, c.conics, c.height, r.seed
    );
    let _ = writeln!(
        s,
        "free: {}, plus-one generated: {}, neither: {}, skipped: {}",
        r.free, r.plus_one_generated, r.neither, r.skipped
    );
    let _ = writeln!(s, "constraint checks: {}, violations: {}", r.constraint_checks, r.constraint_violations);
    let _ = writeln!(
        s,
        "deletion triples: {}, disagreements: {}, errors: {}",
        r.triples, r.triple_disagreements, r.triple_errors
    );
}

#[cfg(test)]
mod tests {
    use super::*;

    fn collect(cfg: &RunConfig, spec: &str, trials: usize) -> (Vec<String>, Report) {
        let params = SearchParams { components: spec.parse().unwrap(), trials };
        let mut lines = Vec::new();
        let r = search(cfg, &params, |l| lines.push(l.to_string())).unwrap();
        (lines, r)
    }

    #[test]
    fn component_spec() {
        let s: ComponentSpec = "lines=4, height=3".parse().unwrap();
        assert_eq!(s, ComponentSpec { lines: 4, conics: 1, height: 3 });
        assert!("lines=0,conics=0".parse::<ComponentSpec>().is_err());
        assert!("height=0".parse::<ComponentSpec>().is_err());
        assert!("cubics=1".parse::<ComponentSpec>().is_err());
        assert!("lines".parse::<ComponentSpec>().is_err());
    }

    #[test]
    fn fixed_seed_is_reproducible() {
        let cfg = RunConfig::modular(None, 7);
        let (a, ra) = collect(&cfg, "lines=3,conics=1,height=1", 40);
        let (b, rb) = collect(&cfg, "lines=3,conics=1,height=1", 40);
        assert_eq!(a, b);
        assert_eq!(serde_json::to_string(&ra).unwrap(), serde_json::to_string(&rb).unwrap());
        let (c, _) = collect(&RunConfig::modular(None, 8), "lines=3,conics=1,height=1", 40);
        assert_ne!(a, c);
    }

    #[test]
    fn triangles_are_found() {
        let (lines, r) = collect(&RunConfig::modular(Some(1_000_003), 1), "lines=3,conics=0,height=1", 30);
        let finds: Vec<Find> = lines.iter().map(|l| serde_json::from_str(l).unwrap()).collect();
        assert!(finds.iter().any(|f| f.class == CurveClass::Free { a: 1, b: 1 }));
        let Payload::Search(s) = r.result else { panic!() };
        assert_eq!(s.free + s.plus_one_generated + s.neither + s.skipped, 30);
        assert_eq!(s.constraint_violations, 0);
    }

    #[test]
    fn rational_search_runs() {
        let (_, r) = collect(&RunConfig::default(), "lines=2,conics=1,height=1", 10);
        let Payload::Search(s) = r.result else { panic!() };
        assert_eq!(s.skipped, 0);
        assert_eq!((s.constraint_violations, s.triple_disagreements), (0, 0));
        assert!(r.field.primes.is_empty());
    }
}
