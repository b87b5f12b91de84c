use serde::Serialize;

/// Per-job configuration. Echoed into every result record.
#[derive(Debug, Clone, Serialize)]
pub struct JobConfig {
    /// Precision cap (bits) for numeric complex-root certification.
    pub precision_bits: u32,
    /// Decimal digits carried by displayed approximations.
    pub digits: u32,
    /// Depth of the degree-growth oracle.
    pub oracle_depth: u32,
    /// Stability-test horizon; `None` means the dimension default `2n + 4`.
    pub horizon: Option<u32>,
    /// Maximum number of terms a single polynomial may reach.
    pub budget_terms: usize,
    /// Maximum number of support matrices enumerated per endomorphism.
    pub budget_matrices: usize,
}

impl Default for JobConfig {
    fn default() -> Self {
        JobConfig {
            precision_bits: 256,
            digits: 30,
            oracle_depth: 8,
            horizon: None,
            budget_terms: 2_000_000,
            budget_matrices: 1_000_000,
        }
    }
}

impl JobConfig {
    /// Stability horizon for arity `n`.
    pub fn horizon_for(&self, n: usize) -> u32 {
        self.horizon.unwrap_or(2 * n as u32 + 4)
    }
}

/// Term budget threaded through polynomial composition.
#[derive(Debug, Clone, Copy)]
pub struct Budget {
    pub max_terms: Option<usize>,
}

impl Budget {
    pub fn unlimited() -> Self {
        Budget { max_terms: None }
    }
    pub fn terms(max: usize) -> Self {
        Budget {
            max_terms: Some(max),
        }
    }
    pub fn check(&self, current: usize) -> Result<(), crate::DdError> {
        if let Some(max) = self.max_terms {
            if current > max {
                return Err(crate::DdError::resource(format!(
                    "term count {current} exceeds budget {max}"
                )));
            }
        }
        Ok(())
    }
}

impl From<&JobConfig> for Budget {
    fn from(cfg: &JobConfig) -> Self {
        Budget {
            max_terms: Some(cfg.budget_terms),
        }
    }
}
