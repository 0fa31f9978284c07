use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Enumeration limits applied by every harness.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Caps {
    /// Largest product, power, hom-set or solution table any routine may materialize.
    pub enumeration: u128,
    /// Largest candidate space the natural-transformation uniqueness audit may cover.
    pub audit: u128,
    /// Number of random elements drawn when a quantifier domain exceeds `enumeration`.
    pub samples: usize,
    /// Seed for every randomized sample.
    pub seed: u64,
}

pub const DEFAULT_ENUMERATION_CAP: u128 = 1 << 24;
pub const DEFAULT_AUDIT_CAP: u128 = 1 << 20;

impl Default for Caps {
    fn default() -> Self {
        Caps {
            enumeration: DEFAULT_ENUMERATION_CAP,
            audit: DEFAULT_AUDIT_CAP,
            samples: 48,
            seed: 0x5eed,
        }
    }
}

impl Caps {
    pub fn with_enumeration(mut self, cap: u128) -> Self {
        self.enumeration = cap;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    /// Fails with `EnumerationTooLarge` unless `size` fits under the enumeration cap.
    pub fn admit(&self, what: &str, size: Option<u128>) -> Result<u128> {
        match size {
            Some(s) if s <= self.enumeration => Ok(s),
            Some(s) => Err(Error::too_large(what, s, self.enumeration)),
            None => Err(Error::too_large(what, "overflow", self.enumeration)),
        }
    }

    pub fn fits(&self, size: Option<u128>) -> bool {
        matches!(size, Some(s) if s <= self.enumeration)
    }
}

/// `base^exp` as `u128`, `None` on overflow.
pub fn checked_pow(base: u128, exp: u128) -> Option<u128> {
    if base <= 1 || exp == 0 {
        return Some(if exp == 0 { 1 } else { base });
    }
    let exp: u32 = exp.try_into().ok()?;
    base.checked_pow(exp)
}
