use thiserror::Error;

/// Errors raised by the eigenvalue solvers, the comparison flows and the
/// model-geometry checks.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error(
        "diameter {diameter} violates the Bonnet-Myers bound pi/sqrt(kappa) = {limit} for kappa = {kappa} \
         (admissible margin requires D <= (1 - 1e-10) * pi/sqrt(kappa))"
    )]
    BonnetMyers {
        kappa: f64,
        diameter: f64,
        limit: f64,
    },

    #[error("T_kappa has a pole at s = {s} (kappa = {kappa})")]
    Pole { kappa: f64, s: f64 },

    #[error("could not bracket the eigenvalue: predicate still holds at sigma = {sigma}")]
    NonBracketing { sigma: f64 },

    #[error("solver did not converge: {0}")]
    NonConvergence(String),

    #[error("degenerate flux: alpha is unbounded at q = 0 for p = {p} without regularization")]
    DegenerateFlux { p: f64 },

    #[error("CFL violation: {0}")]
    Cfl(String),

    #[error("invalid profile: {0}")]
    InvalidProfile(String),

    #[error("time stamps do not match: {0} vs {1}")]
    TimeMismatch(f64, f64),

    #[error("decay fit needs at least 4 samples in the window, got {0}")]
    TooFewSamples(usize),

    #[error("non-positive oscillation {osc} at t = {t} in the fit window")]
    NonPositiveOscillation { t: f64, osc: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
