//! Memory budget shared by every table builder.

use crate::error::{LabError, Result};

/// Default budget: 2 GiB.
pub const DEFAULT_BUDGET_BYTES: u64 = 2 << 30;

/// Environment variable that overrides [`DEFAULT_BUDGET_BYTES`].
pub const BUDGET_ENV_VAR: &str = "PSL_MEMORY_BUDGET_BYTES";

/// Upper bound on bytes a single table may allocate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MemoryBudget {
    bytes: u64,
}

impl Default for MemoryBudget {
    fn default() -> Self {
        Self {
            bytes: DEFAULT_BUDGET_BYTES,
        }
    }
}

impl MemoryBudget {
    pub const fn new(bytes: u64) -> Self {
        Self { bytes }
    }

    /// Reads [`BUDGET_ENV_VAR`], falling back to the default when it is
    /// unset. A value that does not parse as an integer is an error.
    pub fn from_env() -> Result<Self> {
        match std::env::var(BUDGET_ENV_VAR) {
            Ok(raw) => raw
                .trim()
                .parse::<u64>()
                .map(Self::new)
                .map_err(|_| LabError::Config(format!("{BUDGET_ENV_VAR}={raw:?} is not a byte count"))),
            Err(_) => Ok(Self::default()),
        }
    }

    pub const fn bytes(&self) -> u64 {
        self.bytes
    }

    /// Fails with a capacity error naming both byte counts.
    pub fn check(&self, what: &'static str, required: u64) -> Result<()> {
        if required > self.bytes {
            return Err(LabError::Capacity {
                what,
                required,
                allowed: self.bytes,
            });
        }
        Ok(())
    }
}
