//! Radial coefficient pair `(α, β)` of isotropic quasilinear flows: `α` multiplies
//! the second derivative along the gradient, `β` the tangential part.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Flux {
    /// `α = β = 1`.
    Heat,
    /// `α = (p-1) m^{p-2}`, `β = m^{p-2}` with `m = √(q² + ε²)`.
    PLaplacian { p: f64, epsilon: f64 },
}

impl Flux {
    pub fn plaplacian(p: f64, epsilon: f64) -> Result<Self> {
        let flux = Flux::PLaplacian { p, epsilon };
        flux.validate()?;
        Ok(flux)
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            Flux::Heat => Ok(()),
            Flux::PLaplacian { p, epsilon } => {
                if !(p.is_finite() && p > 1.0) {
                    return Err(Error::InvalidParams(format!(
                        "p-Laplacian exponent p = {p} must exceed 1"
                    )));
                }
                if !(epsilon.is_finite() && epsilon >= 0.0) {
                    return Err(Error::InvalidParams(format!(
                        "regularisation epsilon = {epsilon} must be >= 0"
                    )));
                }
                Ok(())
            }
        }
    }

    /// `(α(q), β(q))`.
    #[inline]
    pub fn eval(&self, q: f64) -> Result<(f64, f64)> {
        match *self {
            Flux::Heat => Ok((1.0, 1.0)),
            Flux::PLaplacian { p, epsilon } => {
                let m2 = q * q + epsilon * epsilon;
                if m2 == 0.0 && p < 2.0 {
                    return Err(Error::DegenerateFlux { p });
                }
                let beta = m2.powf(0.5 * (p - 2.0));
                Ok(((p - 1.0) * beta, beta))
            }
        }
    }
}

/// Coefficient pair of `flux` at gradient value `q`.
pub fn flux_eval(flux: &Flux, q: f64) -> Result<(f64, f64)> {
    flux.eval(q)
}

/// Default regularisation `1e-8 · osc(φ₀) / D`.
pub fn default_regularization(osc: f64, diameter: f64) -> f64 {
    1e-8 * osc / diameter
}

impl fmt::Display for Flux {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Flux::Heat => write!(f, "heat"),
            Flux::PLaplacian { p, epsilon } => write!(f, "plap:{p}:{epsilon:e}"),
        }
    }
}

/// A flux as written on the command line: `heat` or `plap:P[:EPS]`. A missing
/// `EPS` means "use the default regularisation for the initial data".
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FluxSpec {
    Heat,
    PLaplacian { p: f64, epsilon: Option<f64> },
}

impl FluxSpec {
    pub fn resolve(&self, osc: f64, diameter: f64) -> Result<Flux> {
        match *self {
            FluxSpec::Heat => Ok(Flux::Heat),
            FluxSpec::PLaplacian { p, epsilon } => Flux::plaplacian(
                p,
                epsilon.unwrap_or_else(|| default_regularization(osc, diameter)),
            ),
        }
    }
}

impl FromStr for FluxSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidParams(format!("flux '{s}' is not 'heat' or 'plap:P[:EPS]'"));
        let mut parts = s.split(':');
        match parts.next() {
            Some("heat") if parts.next().is_none() => Ok(FluxSpec::Heat),
            Some("plap") => {
                let p: f64 = parts.next().ok_or_else(bad)?.parse().map_err(|_| bad())?;
                let epsilon = match parts.next() {
                    Some(e) => Some(e.parse::<f64>().map_err(|_| bad())?),
                    None => None,
                };
                if parts.next().is_some() {
                    return Err(bad());
                }
                Flux::plaplacian(p, epsilon.unwrap_or(0.0))?;
                Ok(FluxSpec::PLaplacian { p, epsilon })
            }
            _ => Err(bad()),
        }
    }
}

impl fmt::Display for FluxSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FluxSpec::Heat => write!(f, "heat"),
            FluxSpec::PLaplacian { p, epsilon: None } => write!(f, "plap:{p}"),
            FluxSpec::PLaplacian {
                p,
                epsilon: Some(e),
            } => write!(f, "plap:{p}:{e:e}"),
        }
    }
}
