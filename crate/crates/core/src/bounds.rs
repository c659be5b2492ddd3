//! Classical lower bounds for the first nonzero eigenvalue compared with the
//! sharp value `μ(n, κ, D)`.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::params::ModelParams;
use crate::sturm::first_eigenvalue;

/// Absolute slack on top of the solver tolerance before Li's inequality counts as violated.
pub const LI_SLACK: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundsReport {
    pub n: u32,
    pub kappa: f64,
    pub diameter: f64,
    pub sharp_mu: f64,
    /// `nκ`, only stated for `κ > 0`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lichnerowicz: Option<f64>,
    /// `π²/D²`.
    pub zhong_yang: f64,
    /// `π²/D² + (n-1)κ`.
    pub li_conjecture: f64,
    /// `sup_{s∈(0,1)} 4s(1-s)π²/D² + (n-1)sκ`.
    pub shi_zhang: f64,
    /// Maximiser of the Shi-Zhang family (clamped to `[0, 1]`).
    pub shi_zhang_s: f64,
    pub li_violated: bool,
}

/// `(sup, argmax)` of `4s(1-s)A + sB` over `s ∈ (0, 1)`.
///
/// The quadratic has its vertex at `s* = 1/2 + B/(8A)`; the supremum over the
/// open interval is its value at `s*` clamped to `[0, 1]`.
pub fn shi_zhang(params: &ModelParams) -> (f64, f64) {
    let a = PI * PI / (params.diameter * params.diameter);
    let b = params.dim_factor() * params.kappa;
    let s = (0.5 + b / (8.0 * a)).clamp(0.0, 1.0);
    (4.0 * s * (1.0 - s) * a + s * b, s)
}

pub fn classical_bounds(params: &ModelParams, tol: f64) -> Result<BoundsReport> {
    params.validate()?;
    let sharp_mu = first_eigenvalue(params, tol)?.mu;
    let zhong_yang = PI * PI / (params.diameter * params.diameter);
    let li_conjecture = zhong_yang + params.dim_factor() * params.kappa;
    let (shi_zhang, shi_zhang_s) = shi_zhang(params);
    Ok(BoundsReport {
        n: params.n,
        kappa: params.kappa,
        diameter: params.diameter,
        sharp_mu,
        lichnerowicz: (params.kappa > 0.0).then(|| f64::from(params.n) * params.kappa),
        zhong_yang,
        li_conjecture,
        shi_zhang,
        shi_zhang_s,
        li_violated: sharp_mu < li_conjecture - LI_SLACK,
    })
}

/// Central difference `(μ(n, h, π) - μ(n, -h, π)) / 2h`, the linear coefficient of
/// `μ` in `κ` at `κ = 0`, `D = π`.
pub fn asymptotic_slope(n: u32, h: f64, tol: f64) -> Result<f64> {
    if !(h > 0.0 && h <= 0.05) {
        return Err(Error::InvalidParams(format!(
            "slope step h = {h} must lie in (0, 0.05]"
        )));
    }
    let plus = first_eigenvalue(&ModelParams::new(n, h, PI)?, tol)?.mu;
    let minus = first_eigenvalue(&ModelParams::new(n, -h, PI)?, tol)?.mu;
    Ok((plus - minus) / (2.0 * h))
}
