//! Numerical tolerance configuration threaded through every check in the crate.

use crate::error::{Error, Result};

/// Absolute tolerance and conditioning cap used by all numeric predicates.
///
/// Checks that compare matrices scale `atol` linearly with the matrix dimension,
/// so defect thresholds grow with problem size.  Resolvent pivots are rejected
/// as singular when their condition number exceeds `cond_cap`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ToleranceConfig {
    /// Base absolute tolerance for entrywise and operator-norm comparisons.
    pub atol: f64,
    /// Maximum acceptable condition number for resolvent pivots.
    pub cond_cap: f64,
}

impl Default for ToleranceConfig {
    fn default() -> Self {
        ToleranceConfig { atol: 1e-9, cond_cap: 1e12 }
    }
}

impl ToleranceConfig {
    /// Builds a configuration, rejecting non-positive or non-finite fields.
    pub fn new(atol: f64, cond_cap: f64) -> Result<Self> {
        if !(atol.is_finite() && atol > 0.0 && cond_cap.is_finite() && cond_cap > 1.0) {
            return Err(Error::InvalidTolerance);
        }
        Ok(ToleranceConfig { atol, cond_cap })
    }

    /// Tolerance scaled linearly by a matrix dimension (at least 1).
    pub fn scaled(&self, dim: usize) -> f64 {
        self.atol * dim.max(1) as f64
    }

    /// Threshold below which `1 - sigma` counts a singular value as exactly one.
    pub fn unit_singular_band(&self) -> f64 {
        100.0 * self.atol
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_fields() {
        let tol = ToleranceConfig::default();
        assert_eq!(tol.atol, 1e-9);
        assert_eq!(tol.cond_cap, 1e12);
    }

    #[test]
    fn rejects_bad_fields() {
        assert!(ToleranceConfig::new(0.0, 1e12).is_err());
        assert!(ToleranceConfig::new(1e-9, 0.5).is_err());
        assert!(ToleranceConfig::new(f64::NAN, 1e12).is_err());
        assert!(ToleranceConfig::new(1e-9, f64::INFINITY).is_err());
    }

    #[test]
    fn scaling_is_linear_in_dimension() {
        let tol = ToleranceConfig::default();
        assert!((tol.scaled(4) - 4e-9).abs() < 1e-24);
        assert!((tol.scaled(0) - 1e-9).abs() < 1e-24);
        assert!((tol.unit_singular_band() - 1e-7).abs() < 1e-21);
    }
}
