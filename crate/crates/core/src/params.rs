use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Relative margin kept below the Bonnet-Myers diameter `π/√κ`.
pub const BONNET_MYERS_MARGIN: f64 = 1e-10;

/// Dimension, lower Ricci bound `Ric ≥ (n-1)κ` and diameter of the manifolds under study.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub n: u32,
    pub kappa: f64,
    pub diameter: f64,
}

impl ModelParams {
    /// Builds and validates a parameter triple.
    pub fn new(n: u32, kappa: f64, diameter: f64) -> Result<Self> {
        let params = Self { n, kappa, diameter };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(Error::InvalidParams(format!(
                "dimension n = {} must be at least 2",
                self.n
            )));
        }
        if !self.kappa.is_finite() {
            return Err(Error::InvalidParams(format!(
                "kappa = {} is not finite",
                self.kappa
            )));
        }
        if !(self.diameter.is_finite() && self.diameter > 0.0) {
            return Err(Error::InvalidParams(format!(
                "diameter = {} must be finite and positive",
                self.diameter
            )));
        }
        if let Some(limit) = bonnet_myers_diameter(self.kappa) {
            if self.diameter > (1.0 - BONNET_MYERS_MARGIN) * limit {
                return Err(Error::BonnetMyers {
                    kappa: self.kappa,
                    diameter: self.diameter,
                    limit,
                });
            }
        }
        Ok(())
    }

    pub fn half_diameter(&self) -> f64 {
        0.5 * self.diameter
    }

    /// `n - 1` as a float, the coefficient of the drift term.
    pub fn dim_factor(&self) -> f64 {
        f64::from(self.n - 1)
    }

    /// The same problem after rescaling lengths by `c`: `(κ/c², cD)`.
    pub fn scaled(&self, c: f64) -> Self {
        Self {
            n: self.n,
            kappa: self.kappa / (c * c),
            diameter: c * self.diameter,
        }
    }
}

/// `π/√κ` for `κ > 0`, `None` otherwise.
pub fn bonnet_myers_diameter(kappa: f64) -> Option<f64> {
    (kappa > 0.0).then(|| PI / kappa.sqrt())
}
