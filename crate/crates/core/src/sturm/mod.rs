//! The one-dimensional eigenvalue problem
//!
//! ```text
//! Φ'' - (n-1) T_κ Φ' + μ Φ = 0  on [-D/2, D/2],   Φ'(±D/2) = 0
//! ```
//!
//! whose first nonzero eigenvalue `μ(n, κ, D)` is the sharp lower bound for the
//! first nonzero Neumann/closed eigenvalue of the Laplacian.
//!
//! [`first_eigenvalue`] shoots from the centre: `Φ_σ` solves the initial value
//! problem `Φ(0) = 0, Φ'(0) = 1`, and `μ` is the supremum of the `σ` for which
//! `Φ_σ' > 0` on the whole half interval. The odd symmetry of `T_κ` means the
//! odd extension of `Φ_σ` solves the equation on `[-D/2, 0]`, so only `[0, D/2]`
//! is integrated. [`oracle`] is an independent finite-volume eigen-solver used to
//! cross-check it.

pub mod oracle;
pub mod tridiag;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::params::ModelParams;
use crate::specialfn::tk;

pub use oracle::{sl_fd_modes, sl_fd_oracle, sl_fd_oracle_extrapolated, NeumannModes};

/// Minimum number of integration steps accepted by [`integrate_phi`].
pub const MIN_STEPS: usize = 16;
/// The upper end of the search bracket is doubled at most up to this value.
pub const SIGMA_CAP: f64 = 1e12;
/// Grid refinement in [`first_eigenvalue`] starts at no fewer steps than this...
const INITIAL_STEPS: usize = 128;
/// ...and enough that `h (n-1) max|T_κ| ≤ DRIFT_STEP_BOUND` on `[0, D/2]`.
const DRIFT_STEP_BOUND: f64 = 0.5;
/// ...and gives up past this many steps.
const MAX_STEPS: usize = 1 << 21;
/// Location tolerance (in `s`) when refining the first zero of `Φ'`.
const ZERO_TOL: f64 = 1e-13;

/// Samples of `Φ_σ` and `Φ_σ'` on a uniform grid of `[0, D/2]`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PhiTrajectory {
    pub sigma: f64,
    pub grid: Vec<f64>,
    pub phi: Vec<f64>,
    pub dphi: Vec<f64>,
    /// First zero of `Φ_σ'` in `(0, D/2]`, if there is one.
    pub first_dphi_zero: Option<f64>,
}

impl PhiTrajectory {
    pub fn step(&self) -> f64 {
        self.grid[1] - self.grid[0]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EigenResult {
    pub mu: f64,
    pub bracket_lo: f64,
    pub bracket_hi: f64,
    pub iterations: usize,
    /// Width of the final bracket.
    pub tol: f64,
    /// Integration steps on `[0, D/2]` of the accepted grid.
    pub steps: usize,
    /// `Φ_σ` at `σ = bracket_lo` on the accepted grid.
    pub trajectory: PhiTrajectory,
}

/// Cached drift coefficients `(n-1) T_κ` at the nodes and midpoints of a uniform
/// grid, so that repeated shots at different `σ` only do arithmetic.
struct ShootingGrid {
    steps: usize,
    h: f64,
    drift_nodes: Vec<f64>,
    drift_mid: Vec<f64>,
}

impl ShootingGrid {
    fn new(params: &ModelParams, steps: usize) -> Result<Self> {
        let h = params.half_diameter() / steps as f64;
        let dim = params.dim_factor();
        let drift = |s: f64| tk(params.kappa, s).map(|t| dim * t);
        let drift_nodes = (0..=steps)
            .map(|k| drift(k as f64 * h))
            .collect::<Result<Vec<_>>>()?;
        let drift_mid = (0..steps)
            .map(|k| drift((k as f64 + 0.5) * h))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            steps,
            h,
            drift_nodes,
            drift_mid,
        })
    }

    fn node(&self, k: usize) -> f64 {
        if k == self.steps {
            // avoid accumulating k*h drift at the far end
            self.h * self.steps as f64
        } else {
            k as f64 * self.h
        }
    }

    #[inline]
    fn accel(drift: f64, sigma: f64, phi: f64, dphi: f64) -> f64 {
        drift * dphi - sigma * phi
    }

    /// One classical RK4 step from node `k`.
    #[inline]
    fn rk4(&self, k: usize, sigma: f64, phi: f64, dphi: f64) -> (f64, f64) {
        let h = self.h;
        let (d0, dm, d1) = (
            self.drift_nodes[k],
            self.drift_mid[k],
            self.drift_nodes[k + 1],
        );
        let k1p = dphi;
        let k1v = Self::accel(d0, sigma, phi, dphi);
        let k2p = dphi + 0.5 * h * k1v;
        let k2v = Self::accel(dm, sigma, phi + 0.5 * h * k1p, k2p);
        let k3p = dphi + 0.5 * h * k2v;
        let k3v = Self::accel(dm, sigma, phi + 0.5 * h * k2p, k3p);
        let k4p = dphi + h * k3v;
        let k4v = Self::accel(d1, sigma, phi + h * k3p, k4p);
        (
            phi + h / 6.0 * (k1p + 2.0 * k2p + 2.0 * k3p + k4p),
            dphi + h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v),
        )
    }

    /// Looks for a zero of the cubic Hermite interpolant of `Φ'` on step `k`, given
    /// `Φ'` and `Φ''` at both ends. `v0 > 0` on entry.
    fn zero_in_step(&self, v0: f64, a0: f64, v1: f64, a1: f64) -> Option<f64> {
        let h = self.h;
        let cubic = HermiteCubic::new(v0, h * a0, v1, h * a1);
        let upper = if v1 <= 0.0 {
            1.0
        } else {
            // both ends positive: the interpolant may still dip below zero inside
            cubic.interior_min().filter(|&(_, val)| val <= 0.0)?.0
        };
        let (mut lo, mut hi) = (0.0, upper);
        while (hi - lo) * h > ZERO_TOL {
            let mid = 0.5 * (lo + hi);
            if cubic.eval(mid) > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
            if hi - lo <= f64::EPSILON {
                break;
            }
        }
        Some(hi)
    }

    /// Integrates up to the first zero of `Φ'` without storing samples; returns
    /// its location.
    fn first_zero(&self, sigma: f64) -> Option<f64> {
        let (mut phi, mut dphi) = (0.0, 1.0);
        for k in 0..self.steps {
            let (p1, v1) = self.rk4(k, sigma, phi, dphi);
            let a0 = Self::accel(self.drift_nodes[k], sigma, phi, dphi);
            let a1 = Self::accel(self.drift_nodes[k + 1], sigma, p1, v1);
            if let Some(theta) = self.zero_in_step(dphi, a0, v1, a1) {
                return Some(self.node(k) + theta * self.h);
            }
            phi = p1;
            dphi = v1;
        }
        None
    }

    /// `Φ_σ' > 0` on all of `[0, D/2]`; a zero exactly at `D/2` fails.
    fn increasing(&self, sigma: f64) -> bool {
        self.first_zero(sigma).is_none()
    }

    fn trajectory(&self, sigma: f64) -> PhiTrajectory {
        let mut grid = Vec::with_capacity(self.steps + 1);
        let mut phi = Vec::with_capacity(self.steps + 1);
        let mut dphi = Vec::with_capacity(self.steps + 1);
        let mut first_dphi_zero = None;
        let (mut p, mut v) = (0.0, 1.0);
        grid.push(0.0);
        phi.push(p);
        dphi.push(v);
        for k in 0..self.steps {
            let (p1, v1) = self.rk4(k, sigma, p, v);
            if first_dphi_zero.is_none() && v > 0.0 {
                let a0 = Self::accel(self.drift_nodes[k], sigma, p, v);
                let a1 = Self::accel(self.drift_nodes[k + 1], sigma, p1, v1);
                if let Some(theta) = self.zero_in_step(v, a0, v1, a1) {
                    first_dphi_zero = Some(self.node(k) + theta * self.h);
                }
            }
            p = p1;
            v = v1;
            grid.push(self.node(k + 1));
            phi.push(p);
            dphi.push(v);
        }
        PhiTrajectory {
            sigma,
            grid,
            phi,
            dphi,
            first_dphi_zero,
        }
    }
}

/// `p(θ) = c0 + c1 θ + c2 θ² + c3 θ³` on `[0, 1]`.
struct HermiteCubic {
    c: [f64; 4],
}

impl HermiteCubic {
    /// End values `y0, y1` and end slopes `m0, m1` already scaled by the step.
    fn new(y0: f64, m0: f64, y1: f64, m1: f64) -> Self {
        Self {
            c: [
                y0,
                m0,
                3.0 * (y1 - y0) - 2.0 * m0 - m1,
                2.0 * (y0 - y1) + m0 + m1,
            ],
        }
    }

    fn eval(&self, t: f64) -> f64 {
        let [c0, c1, c2, c3] = self.c;
        c0 + t * (c1 + t * (c2 + t * c3))
    }

    /// Smallest value at an interior critical point, with its location.
    fn interior_min(&self) -> Option<(f64, f64)> {
        let [_, c1, c2, c3] = self.c;
        // p'(θ) = c1 + 2 c2 θ + 3 c3 θ²
        let (a, b, c) = (3.0 * c3, 2.0 * c2, c1);
        let mut roots = [f64::NAN; 2];
        if a.abs() < 1e-300 {
            if b != 0.0 {
                roots[0] = -c / b;
            }
        } else {
            let disc = b * b - 4.0 * a * c;
            if disc >= 0.0 {
                let q = -0.5 * (b + b.signum() * disc.sqrt());
                roots[0] = q / a;
                if q != 0.0 {
                    roots[1] = c / q;
                }
            }
        }
        roots
            .into_iter()
            .filter(|t| *t > 0.0 && *t < 1.0)
            .map(|t| (t, self.eval(t)))
            .min_by(|x, y| x.1.total_cmp(&y.1))
    }
}

/// RK4 solution of `Φ'' - (n-1)T_κ Φ' + σΦ = 0, Φ(0) = 0, Φ'(0) = 1` on `[0, D/2]`
/// with `steps` uniform steps.
pub fn integrate_phi(params: &ModelParams, sigma: f64, steps: usize) -> Result<PhiTrajectory> {
    params.validate()?;
    if steps < MIN_STEPS {
        return Err(Error::InvalidParams(format!(
            "steps = {steps} is below the minimum {MIN_STEPS}"
        )));
    }
    if !sigma.is_finite() {
        return Err(Error::InvalidParams(format!(
            "sigma = {sigma} is not finite"
        )));
    }
    Ok(ShootingGrid::new(params, steps)?.trajectory(sigma))
}

struct Bracket {
    lo: f64,
    hi: f64,
    iterations: usize,
}

impl Bracket {
    fn mid(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }
}

fn bisect(params: &ModelParams, grid: &ShootingGrid, tol: f64) -> Result<Bracket> {
    let mut hi = (params.n as f64 * params.kappa.max(0.0)
        + 4.0 * (std::f64::consts::PI / params.diameter).powi(2))
    .max(1.0);
    while grid.increasing(hi) {
        hi *= 2.0;
        if hi > SIGMA_CAP {
            return Err(Error::NonBracketing { sigma: hi });
        }
    }
    let mut lo = 0.0;
    if !grid.increasing(lo) {
        // Φ_0' = C_κ^{1-n} > 0 exactly; failure means the grid is too coarse
        return Err(Error::NonConvergence(format!(
            "shooting grid of {} steps cannot resolve the drift term",
            grid.steps
        )));
    }
    let width = (tol / 16.0).max(4.0 * f64::EPSILON * hi);
    if width > tol {
        return Err(Error::InvalidParams(format!(
            "tol = {tol:e} is below the floating-point resolution of sigma near {hi:e}"
        )));
    }
    let mut iterations = 0;
    while hi - lo > width {
        let mid = 0.5 * (lo + hi);
        if grid.increasing(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
        iterations += 1;
    }
    Ok(Bracket { lo, hi, iterations })
}

/// The sharp eigenvalue `μ(n, κ, D)` to absolute accuracy `tol`.
///
/// Bisects `σ` on "`Φ_σ' > 0` throughout `[0, D/2]`" and doubles the number of RK4
/// steps until the result moves by less than `tol/4` between two grids.
pub fn first_eigenvalue(params: &ModelParams, tol: f64) -> Result<EigenResult> {
    params.validate()?;
    if !(tol.is_finite() && tol > 0.0) {
        return Err(Error::InvalidParams(format!(
            "tol = {tol} must be positive"
        )));
    }
    let max_drift = params.dim_factor() * tk(params.kappa, params.half_diameter())?.abs();
    let needed = params.half_diameter() * max_drift / DRIFT_STEP_BOUND;
    let mut steps = INITIAL_STEPS;
    while (steps as f64) < needed && steps < MAX_STEPS {
        steps *= 2;
    }
    let mut grid = ShootingGrid::new(params, steps)?;
    let mut prev = bisect(params, &grid, tol)?;
    loop {
        steps *= 2;
        if steps > MAX_STEPS {
            return Err(Error::NonConvergence(format!(
                "mu did not settle to {tol:e} within {MAX_STEPS} integration steps"
            )));
        }
        grid = ShootingGrid::new(params, steps)?;
        let cur = bisect(params, &grid, tol)?;
        let change = (cur.mid() - prev.mid()).abs();
        log::debug!("steps={steps} mu={} change={change:e}", cur.mid());
        prev = cur;
        if change < tol / 4.0 {
            break;
        }
    }
    let trajectory = grid.trajectory(prev.lo);
    Ok(EigenResult {
        mu: prev.mid(),
        bracket_lo: prev.lo,
        bracket_hi: prev.hi,
        iterations: prev.iterations,
        tol: prev.hi - prev.lo,
        steps,
        trajectory,
    })
}

/// Whether `Φ_σ' > 0` on `[0, D/2]` at a given resolution.
pub fn phi_increasing(params: &ModelParams, sigma: f64, steps: usize) -> Result<bool> {
    params.validate()?;
    Ok(ShootingGrid::new(params, steps.max(MIN_STEPS))?.increasing(sigma))
}

/// The limiting value `nκ` at the Bonnet-Myers diameter `D = π/√κ`, where the
/// shooting problem is singular and `Φ = S_κ` is the eigenfunction.
pub fn sphere_limit_eigenvalue(n: u32, kappa: f64) -> Result<f64> {
    if n < 2 {
        return Err(Error::InvalidParams(format!(
            "dimension n = {n} must be at least 2"
        )));
    }
    if !(kappa.is_finite() && kappa > 0.0) {
        return Err(Error::InvalidParams(format!(
            "the sphere limit needs kappa > 0, got {kappa}"
        )));
    }
    Ok(f64::from(n) * kappa)
}
