//! The one-dimensional comparison equation
//!
//! ```text
//! φ_t = α(φ') φ'' - (n-1) T_κ β(φ') φ'    on [0, D/2]
//! ```
//!
//! evolved as an equality. `φ(0, t) = 0` through odd reflection, and by default
//! `φ'(D/2, t) = 0` through ghost reflection. Time stepping is explicit with
//! `Δt = cfl · h² / max α`.

pub mod flux;
pub(crate) mod stepper;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::params::ModelParams;
use crate::specialfn::tk;
use crate::sturm::PhiTrajectory;

pub use flux::{default_regularization, flux_eval, Flux, FluxSpec};
pub use stepper::ALPHA_CAP;
use stepper::{LeftEnd, Stepper};

pub const MIN_CELLS: usize = 16;
pub const DEFAULT_CFL: f64 = 0.4;

/// Uniform grid `s_i = i h` on `[0, D/2]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Grid1D {
    pub half_diameter: f64,
    pub m: usize,
    pub h: f64,
}

impl Grid1D {
    pub fn new(half_diameter: f64, m: usize) -> Result<Self> {
        if m < MIN_CELLS {
            return Err(Error::InvalidParams(format!(
                "grid needs at least {MIN_CELLS} cells, got {m}"
            )));
        }
        if !(half_diameter.is_finite() && half_diameter > 0.0) {
            return Err(Error::InvalidParams(format!(
                "half diameter {half_diameter} must be positive"
            )));
        }
        Ok(Self {
            half_diameter,
            m,
            h: half_diameter / m as f64,
        })
    }

    pub fn for_params(params: &ModelParams, m: usize) -> Result<Self> {
        Self::new(params.half_diameter(), m)
    }

    pub fn node(&self, i: usize) -> f64 {
        if i == self.m {
            self.half_diameter
        } else {
            i as f64 * self.h
        }
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..=self.m).map(|i| self.node(i)).collect()
    }
}

/// Grid function `φ(·, t)` on `[0, D/2]`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Profile {
    pub grid: Grid1D,
    pub t: f64,
    pub values: Vec<f64>,
}

impl Profile {
    pub fn from_fn(grid: Grid1D, f: impl Fn(f64) -> f64) -> Self {
        let values = (0..=grid.m).map(|i| f(grid.node(i))).collect();
        Self {
            grid,
            t: 0.0,
            values,
        }
    }

    /// Samples of `Φ_σ` from a shooting trajectory; the trajectory's step count
    /// becomes the cell count.
    pub fn from_trajectory(traj: &PhiTrajectory) -> Result<Self> {
        let m = traj.grid.len() - 1;
        let grid = Grid1D::new(*traj.grid.last().unwrap(), m)?;
        Ok(Self {
            grid,
            t: 0.0,
            values: traj.phi.clone(),
        })
    }

    pub fn oscillation(&self) -> f64 {
        let (lo, hi) = min_max(&self.values);
        hi - lo
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().fold(0.0f64, |acc, v| acc.max(v.abs()))
    }

    /// Nondecreasing up to `tol`.
    pub fn is_nondecreasing(&self, tol: f64) -> bool {
        self.values.windows(2).all(|w| w[1] >= w[0] - tol)
    }

    /// Linear interpolation at `s ∈ [0, D/2]`.
    pub fn interpolate(&self, s: f64) -> f64 {
        let x = (s / self.grid.h).clamp(0.0, self.grid.m as f64);
        let i = (x.floor() as usize).min(self.grid.m - 1);
        let frac = x - i as f64;
        if frac == 0.0 {
            return self.values[i];
        }
        self.values[i] * (1.0 - frac) + self.values[i + 1] * frac
    }

    fn check_initial(&self) -> Result<()> {
        if self.values.len() != self.grid.m + 1 {
            return Err(Error::InvalidProfile(format!(
                "{} values for a grid of {} nodes",
                self.values.len(),
                self.grid.m + 1
            )));
        }
        if self.values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidProfile("non-finite value".into()));
        }
        if self.values[0] != 0.0 {
            return Err(Error::InvalidProfile(format!(
                "phi(0) = {} must vanish",
                self.values[0]
            )));
        }
        if !self.is_nondecreasing(1e-12 * self.oscillation()) {
            return Err(Error::InvalidProfile(
                "initial profile is not nondecreasing".into(),
            ));
        }
        Ok(())
    }
}

pub(crate) fn min_max(values: &[f64]) -> (f64, f64) {
    values
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
            (lo.min(v), hi.max(v))
        })
}

/// Condition imposed at the outer end(s) of the interval.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", content = "coefficient", rename_all = "snake_case")]
pub enum OuterBoundary {
    /// `φ' = 0`.
    Neumann,
    /// Outward normal derivative `∂_ν φ = r φ`. A decaying eigenprofile
    /// `e^{-σt} Φ_σ` with `σ < μ` satisfies this with `r = Φ_σ'(D/2)/Φ_σ(D/2)`.
    Robin(f64),
}

impl OuterBoundary {
    fn coefficient(&self) -> f64 {
        match *self {
            OuterBoundary::Neumann => 0.0,
            OuterBoundary::Robin(r) => r,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StepControls {
    /// `Δt = cfl · h² / max α`; at most 0.5 for the discrete maximum principle.
    pub cfl: f64,
    /// Number of equally spaced output times in `(0, t_end]`; `t = 0` is always emitted.
    pub samples: usize,
    pub max_steps: usize,
    pub outer: OuterBoundary,
}

impl Default for StepControls {
    fn default() -> Self {
        Self {
            cfl: DEFAULT_CFL,
            samples: 10,
            max_steps: 50_000_000,
            outer: OuterBoundary::Neumann,
        }
    }
}

impl StepControls {
    pub fn with_samples(samples: usize) -> Self {
        Self {
            samples,
            ..Self::default()
        }
    }

    pub(crate) fn validate(&self) -> Result<()> {
        if !(self.cfl > 0.0 && self.cfl <= 0.5) {
            return Err(Error::InvalidParams(format!(
                "cfl = {} must lie in (0, 0.5]",
                self.cfl
            )));
        }
        if self.samples == 0 {
            return Err(Error::InvalidParams(
                "at least one output sample is required".into(),
            ));
        }
        if let OuterBoundary::Robin(r) = self.outer {
            if !r.is_finite() {
                return Err(Error::InvalidParams(format!(
                    "Robin coefficient {r} is not finite"
                )));
            }
        }
        Ok(())
    }
}

pub(crate) fn drift_at(params: &ModelParams, nodes: &[f64]) -> Result<Vec<f64>> {
    let dim = params.dim_factor();
    nodes
        .iter()
        .map(|&s| tk(params.kappa, s).map(|t| dim * t))
        .collect()
}

pub(crate) fn check_t_end(t_end: f64) -> Result<()> {
    if !(t_end.is_finite() && t_end > 0.0) {
        return Err(Error::InvalidParams(format!(
            "t_end = {t_end} must be positive"
        )));
    }
    Ok(())
}

/// Evolves `phi0` to `t_end`, returning the profiles at the output times of `controls`.
pub fn evolve(
    flux: &Flux,
    params: &ModelParams,
    phi0: &Profile,
    t_end: f64,
    controls: &StepControls,
) -> Result<Vec<Profile>> {
    params.validate()?;
    flux.validate()?;
    controls.validate()?;
    check_t_end(t_end)?;
    if (phi0.grid.half_diameter - params.half_diameter()).abs() > 1e-12 * params.diameter {
        return Err(Error::InvalidProfile(format!(
            "profile covers [0, {}] but D/2 = {}",
            phi0.grid.half_diameter,
            params.half_diameter()
        )));
    }
    phi0.check_initial()?;
    let grid = phi0.grid;
    let stepper = Stepper {
        flux: *flux,
        h: grid.h,
        drift: drift_at(params, &grid.nodes())?,
        left: LeftEnd::OddPivot,
        right_robin: controls.outer.coefficient(),
    };
    let series = stepper.run(phi0.values.clone(), t_end, controls)?;
    Ok(series
        .into_iter()
        .map(|(t, values)| Profile { grid, t, values })
        .collect())
}
