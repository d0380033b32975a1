use addel_core::addel::AddelError;
use addel_core::curve::CurveError;
use addel_core::logderiv::LogDerivError;
use addel_core::poly::PolyError;
use addel_core::singular::SingularError;

/// Process exit codes.
pub mod exit {
    pub const OK: i32 = 0;
    pub const MISMATCH: i32 = 1;
    pub const INPUT: i32 = 2;
    pub const LIMITATION: i32 = 3;
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CliError {
    /// Malformed or invalid input, or a violated precondition.
    #[error("{0}")]
    Input(String),
    /// A computational limit: the degree cap, a point field, lifting.
    #[error("{0}")]
    Limitation(String),
    /// The input does not survive reduction modulo the chosen prime.
    #[error("{0}")]
    BadReduction(String),
    /// An internal consistency check failed.
    #[error("{0}")]
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) | CliError::BadReduction(_) => exit::INPUT,
            CliError::Limitation(_) | CliError::Internal(_) => exit::LIMITATION,
        }
    }

    /// Reading a rationally valid input modulo a prime can only fail
    /// validation by a bad reduction.
    pub fn as_reduction(self) -> Self {
        match self {
            CliError::Input(m) => CliError::BadReduction(m),
            e => e,
        }
    }
}

impl From<PolyError> for CliError {
    fn from(e: PolyError) -> Self {
        CliError::Input(format!("poly: {e}"))
    }
}

impl From<CurveError> for CliError {
    fn from(e: CurveError) -> Self {
        match e {
            CurveError::UnsupportedPointField(_) | CurveError::NoRationalPointFound(_) => {
                CliError::Limitation(format!("curve: {e}"))
            }
            CurveError::BadReduction(_) => CliError::BadReduction(format!("curve: {e}")),
            e => CliError::Input(format!("curve: {e}")),
        }
    }
}

impl From<LogDerivError> for CliError {
    fn from(e: LogDerivError) -> Self {
        match e {
            LogDerivError::CapTooSmall { .. } | LogDerivError::LiftFailed(_) | LogDerivError::UnsupportedField(_) => {
                CliError::Limitation(format!("logderiv: {e}"))
            }
            e => CliError::Internal(format!("logderiv: {e}")),
        }
    }
}

impl From<SingularError> for CliError {
    fn from(e: SingularError) -> Self {
        match e {
            SingularError::Curve(c) => c.into(),
            SingularError::LogDeriv(l) => l.into(),
            SingularError::DimsTooShort(_) | SingularError::PointField(_) | SingularError::NonIsolated(_) => {
                CliError::Limitation(format!("singular: {e}"))
            }
            SingularError::NotSingularPoint(_) | SingularError::SharedComponent(_) => {
                CliError::Input(format!("singular: {e}"))
            }
            e => CliError::Internal(format!("singular: {e}")),
        }
    }
}

impl From<AddelError> for CliError {
    fn from(e: AddelError) -> Self {
        match e {
            AddelError::Curve(c) => c.into(),
            AddelError::Singular(s) => s.into(),
            AddelError::LogDeriv(l) => l.into(),
            AddelError::SourceNotFree(_) | AddelError::NotSmoothConic | AddelError::ConicNotComponent => {
                CliError::Input(format!("addel: {e}"))
            }
            e => CliError::Internal(format!("addel: {e}")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes() {
        assert_eq!(CliError::from(CurveError::EmptyCurve).exit_code(), exit::INPUT);
        assert_eq!(CliError::from(AddelError::ConicNotComponent).exit_code(), exit::INPUT);
        let cap = LogDerivError::CapTooSmall { cap: 3, generators: vec![] };
        assert_eq!(CliError::from(AddelError::LogDeriv(cap)).exit_code(), exit::LIMITATION);
        assert_eq!(CliError::from(CurveError::UnsupportedPointField(3)).exit_code(), exit::LIMITATION);
        assert!(matches!(CliError::Input("x".into()).as_reduction(), CliError::BadReduction(_)));
        assert!(CliError::from(AddelError::NonPositiveK(0)).to_string().starts_with("addel: "));
    }
}
