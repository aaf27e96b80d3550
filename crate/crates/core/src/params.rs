use serde::{Deserialize, Serialize};

use crate::error::{DropError, Result};

/// Capillarity constant `kappa` and mean-curvature offset `lambda` of the
/// stationary drop equation `(r v)' = r (kappa u + lambda)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CapillaryParams {
    pub kappa: f64,
    #[serde(default)]
    pub lambda: f64,
}

impl CapillaryParams {
    pub fn new(kappa: f64, lambda: f64) -> Result<Self> {
        if !kappa.is_finite() || !lambda.is_finite() {
            return Err(DropError::InvalidArgument(format!(
                "non-finite capillary parameters kappa = {kappa}, lambda = {lambda}"
            )));
        }
        Ok(Self { kappa, lambda })
    }

    /// Shorthand for `lambda = 0`.
    pub fn with_kappa(kappa: f64) -> Result<Self> {
        Self::new(kappa, 0.0)
    }

    /// Sign of kappa: +1 sessile, -1 pendent, 0 without gravity.
    pub fn eps(&self) -> f64 {
        if self.kappa > 0.0 {
            1.0
        } else if self.kappa < 0.0 {
            -1.0
        } else {
            0.0
        }
    }

    pub fn is_sessile(&self) -> bool {
        self.kappa > 0.0
    }

    pub fn is_pendent(&self) -> bool {
        self.kappa < 0.0
    }

    /// Vertical translation `lambda / kappa` that removes lambda.
    pub fn shift(&self) -> f64 {
        if self.kappa == 0.0 {
            0.0
        } else {
            self.lambda / self.kappa
        }
    }

    pub(crate) fn require_gravity(&self) -> Result<()> {
        if self.kappa == 0.0 {
            return Err(DropError::InvalidArgument(
                "kappa = 0 has no initial value problem; use the no-gravity closed form".into(),
            ));
        }
        Ok(())
    }
}

/// Step-control settings for the initial value integrator.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IvpConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub h_init: f64,
    pub r_max: f64,
    pub max_samples: usize,
}

impl Default for IvpConfig {
    fn default() -> Self {
        let rel_tol = 1e-10;
        Self {
            rel_tol,
            abs_tol: 1e-12,
            h_init: default_h_init(rel_tol),
            r_max: 100.0,
            max_samples: 1_000_000,
        }
    }
}

/// Length of the series step off the axis: `min(1e-3, rel_tol^(1/4))`.
pub fn default_h_init(rel_tol: f64) -> f64 {
    rel_tol.powf(0.25).min(1e-3)
}

impl IvpConfig {
    pub fn with_tolerances(rel_tol: f64, abs_tol: f64) -> Self {
        Self {
            rel_tol,
            abs_tol,
            h_init: default_h_init(rel_tol),
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0) || !(self.abs_tol > 0.0) {
            return Err(DropError::InvalidConfig(format!(
                "tolerances must be positive (rel_tol = {}, abs_tol = {})",
                self.rel_tol, self.abs_tol
            )));
        }
        if !(self.h_init > 0.0) {
            return Err(DropError::InvalidConfig(format!(
                "h_init must be positive, got {}",
                self.h_init
            )));
        }
        if !(self.r_max > self.h_init) || !self.r_max.is_finite() {
            return Err(DropError::InvalidConfig(format!(
                "r_max = {} must be finite and exceed h_init = {}",
                self.r_max, self.h_init
            )));
        }
        if self.max_samples < 2 {
            return Err(DropError::InvalidConfig(
                "max_samples must be at least 2".into(),
            ));
        }
        Ok(())
    }
}
