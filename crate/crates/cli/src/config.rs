use serde::{Deserialize, Serialize};

use addel_core::addel::TripleOptions;
use addel_core::scalar::is_prime_u64;

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum FieldMode {
    Rational,
    /// A fixed prime, or random 31-bit primes drawn from the seed.
    Modular { prime: Option<u64> },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Human,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RunConfig {
    pub field: FieldMode,
    pub seed: u64,
    pub cap: Option<u32>,
    pub height_bound: u64,
    pub format: Format,
    pub verbose: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self { field: FieldMode::Rational, seed: 0, cap: None, height_bound: 100, format: Format::Human, verbose: false }
    }
}

impl RunConfig {
    pub fn modular(prime: Option<u64>, seed: u64) -> Self {
        Self { field: FieldMode::Modular { prime }, seed, ..Self::default() }
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if let FieldMode::Modular { prime: Some(p) } = self.field {
            if p < 5 || !is_prime_u64(p) || p >= 1 << 62 {
                return Err(CliError::Input(format!("--modular {p}: expected a prime between 5 and 2^62")));
            }
        }
        if self.height_bound == 0 {
            return Err(CliError::Input("--height-bound must be positive".into()));
        }
        Ok(())
    }

    /// The cap must not be below the degree of the curve it is used on.
    pub fn check_cap(&self, degree: u32) -> Result<(), CliError> {
        match self.cap {
            Some(c) if c < degree => Err(CliError::Input(format!("--cap {c} is below the curve degree {degree}"))),
            _ => Ok(()),
        }
    }

    pub fn triple_options(&self) -> TripleOptions {
        TripleOptions { cap: self.cap, height_bound: self.height_bound, seed: self.seed }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        assert!(RunConfig::default().validate().is_ok());
        assert!(RunConfig::modular(Some(1_000_003), 0).validate().is_ok());
        assert!(RunConfig::modular(Some(1_000_001), 0).validate().is_err());
        assert!(RunConfig::modular(Some(3), 0).validate().is_err());
        let cfg = RunConfig { cap: Some(6), ..RunConfig::default() };
        assert!(cfg.check_cap(6).is_ok());
        assert!(cfg.check_cap(7).is_err());
    }
}
