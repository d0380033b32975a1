//! Running a computation over `Q` or over random primes with a majority
//! vote.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use addel_core::curve::{BaseField, CurveSpec, ReducedCurve};
use addel_core::logderiv::vote_over_primes;
use addel_core::poly::RationalPoly;
use addel_core::scalar::Rationals;

use crate::config::{FieldMode, RunConfig};
use crate::error::CliError;

/// The field a result was computed in.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldInfo {
    pub mode: String,
    pub primes: Vec<u64>,
    /// Number of primes that produced the reported result.
    pub agreeing: usize,
}

impl FieldInfo {
    pub fn rational() -> Self {
        Self { mode: "rational".into(), primes: Vec::new(), agreeing: 0 }
    }

    pub fn describe(&self) -> String {
        match self.primes.as_slice() {
            [] => "Q".into(),
            [p] => format!("F_{p}"),
            ps => format!("F_p for p in {ps:?} ({} agreeing)", self.agreeing),
        }
    }
}

/// A computation that can run over any supported base field.
pub trait Job: Sync {
    type Output: Clone;

    fn run<F: BaseField>(&self, field: &F) -> Result<Self::Output, CliError>;

    /// The field-independent part of the output, compared across primes.
    fn key(out: &Self::Output) -> Value;
}

#[derive(Clone)]
struct Keyed<T> {
    out: T,
    key: Value,
}

impl<T> PartialEq for Keyed<T> {
    fn eq(&self, other: &Self) -> bool {
        self.key == other.key
    }
}

pub struct Outcome<T> {
    pub value: T,
    pub field: FieldInfo,
    pub warnings: Vec<String>,
}

pub fn run_job<J: Job>(job: &J, cfg: &RunConfig) -> Result<Outcome<J::Output>, CliError> {
    match cfg.field {
        FieldMode::Rational => {
            Ok(Outcome { value: job.run(&Rationals)?, field: FieldInfo::rational(), warnings: Vec::new() })
        }
        FieldMode::Modular { prime } => {
            let vote = vote_over_primes(
                cfg.seed,
                prime,
                |fp| job.run(&fp).map(|out| Keyed { key: J::key(&out), out }),
                |e| matches!(e, CliError::BadReduction(_)),
            )?;
            let field = FieldInfo { mode: "modular".into(), primes: vote.primes, agreeing: vote.agreeing };
            Ok(Outcome { value: vote.value.out, field, warnings: vote.warnings })
        }
    }
}

/// The curve of `spec` over `field`. Over a prime field the curve has
/// already been validated over `Q`, so every failure is a bad reduction.
pub fn curve_over<F: BaseField>(spec: &CurveSpec, field: &F) -> Result<ReducedCurve<F>, CliError> {
    let c = spec.to_curve(field).map_err(CliError::from);
    if field.characteristic() == 0 {
        c
    } else {
        c.map_err(CliError::as_reduction)
    }
}

pub fn poly_over<F: BaseField>(
    p: &RationalPoly,
    field: &F,
) -> Result<addel_core::poly::HomogeneousPoly<F>, CliError> {
    p.reduce(field)
        .filter(|q| !q.is_zero())
        .ok_or_else(|| CliError::BadReduction(format!("{p} has no nonzero image in {}", field.backend())))
}
