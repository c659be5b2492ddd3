//! Warped-product model spaces `S^{n-1} × [-D/2, D/2]` with metric
//! `ds² + a C_κ²(s) ḡ`, on which the comparison estimates are attained.
//!
//! For angularly constant data the flow on the warped product reduces exactly to
//! the one-dimensional equation on the full interval `[-D/2, D/2]`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::moc_pde::stepper::{LeftEnd, Stepper};
use crate::moc_pde::{check_t_end, drift_at, min_max, Flux, Grid1D, Profile, StepControls};
use crate::params::ModelParams;
use crate::specialfn::ck;
use crate::sturm::{first_eigenvalue, integrate_phi, sl_fd_modes};

/// Slack allowed below `(n-1)κ` in the Ricci admissibility test.
pub const RICCI_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WarpedMetric {
    pub params: ModelParams,
    pub a: f64,
}

impl WarpedMetric {
    pub fn new(params: ModelParams, a: f64) -> Result<Self> {
        params.validate()?;
        if !(a.is_finite() && a > 0.0) {
            return Err(Error::InvalidParams(format!(
                "warp amplitude a = {a} must be positive"
            )));
        }
        Ok(Self { params, a })
    }

    /// `a = min(1, 1/(2 max(κ, 0)))`, admissible for every `κ`.
    pub fn with_default_amplitude(params: ModelParams) -> Result<Self> {
        Self::new(params, default_amplitude(params.kappa))
    }

    /// `Ric ≥ (n-1)κ` holds: always for `κ ≤ 0`, iff `a ≤ 1/κ` for `κ > 0`.
    pub fn admissible(&self) -> bool {
        self.params.kappa <= 0.0 || self.a <= 1.0 / self.params.kappa
    }

    pub fn ricci(&self) -> Result<RicciReport> {
        ricci_bounds(
            self.params.n,
            self.params.kappa,
            self.a,
            self.params.diameter,
        )
    }
}

pub fn default_amplitude(kappa: f64) -> f64 {
    if kappa > 0.0 {
        (0.5 / kappa).min(1.0)
    } else {
        1.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RicciReport {
    /// `Ric(∂_s, ∂_s) = (n-1)κ`.
    pub radial: f64,
    /// `min_s (n-1)κ + (n-2)(1/a - κ)/C_κ²(s)` over `[-D/2, D/2]`.
    pub tangential_min: f64,
    pub admissible: bool,
}

/// Ricci curvatures of `ds² + a C_κ²(s) ḡ` on `S^{n-1} × [-D/2, D/2]`.
///
/// The tangential curvature is monotone in `1/C_κ²(s)`, so its minimum sits at
/// `s = 0` or at `s = ±D/2`; the diameter only matters through that endpoint.
pub fn ricci_bounds(n: u32, kappa: f64, a: f64, diameter: f64) -> Result<RicciReport> {
    if n < 2 {
        return Err(Error::InvalidParams(format!(
            "dimension n = {n} must be at least 2"
        )));
    }
    if !(a.is_finite() && a > 0.0) {
        return Err(Error::InvalidParams(format!(
            "warp amplitude a = {a} must be positive"
        )));
    }
    if !(diameter.is_finite() && diameter > 0.0) || !kappa.is_finite() {
        return Err(Error::InvalidParams(format!(
            "invalid kappa = {kappa} or diameter = {diameter}"
        )));
    }
    let dim = f64::from(n - 1);
    let radial = dim * kappa;
    let coeff = f64::from(n - 2) * (1.0 / a - kappa);
    let c_centre = ck(kappa, 0.0).powi(2);
    let c_end = ck(kappa, 0.5 * diameter).powi(2);
    if c_end <= 0.0 {
        return Err(Error::InvalidParams(
            "C_kappa vanishes on the interval".into(),
        ));
    }
    let tangential_min = radial + (coeff / c_centre).min(coeff / c_end);
    let admissible = radial.min(tangential_min) >= radial - RICCI_SLACK;
    Ok(RicciReport {
        radial,
        tangential_min,
        admissible,
    })
}

/// Uniform grid `s_j = (j - m) h` on `[-D/2, D/2]`, `j = 0..=2m`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SymmetricGrid {
    pub half_diameter: f64,
    pub m: usize,
    pub h: f64,
}

impl SymmetricGrid {
    pub fn new(half_diameter: f64, m: usize) -> Result<Self> {
        let half = Grid1D::new(half_diameter, m)?;
        Ok(Self {
            half_diameter,
            m,
            h: half.h,
        })
    }

    pub fn half(&self) -> Grid1D {
        Grid1D {
            half_diameter: self.half_diameter,
            m: self.m,
            h: self.h,
        }
    }

    pub fn len(&self) -> usize {
        2 * self.m + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn node(&self, j: usize) -> f64 {
        let half = self.half();
        if j >= self.m {
            half.node(j - self.m)
        } else {
            -half.node(self.m - j)
        }
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..self.len()).map(|j| self.node(j)).collect()
    }

    /// Odd extension of a half-interval profile.
    pub fn odd_extension(&self, half_values: &[f64]) -> Vec<f64> {
        assert_eq!(half_values.len(), self.m + 1);
        (0..self.len())
            .map(|j| {
                if j >= self.m {
                    half_values[j - self.m]
                } else {
                    -half_values[self.m - j]
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RadialProfile {
    pub t: f64,
    pub values: Vec<f64>,
}

impl RadialProfile {
    pub fn oscillation(&self) -> f64 {
        let (lo, hi) = min_max(&self.values);
        hi - lo
    }
}

/// An angularly constant solution `u(z, s, t) = u(s, t)` on a warped product.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RadialSolution {
    pub grid: SymmetricGrid,
    pub profiles: Vec<RadialProfile>,
    pub flux: Flux,
    pub metric: WarpedMetric,
}

impl RadialSolution {
    /// `(t, max u - min u)` at every output time.
    pub fn oscillation_series(&self) -> Vec<(f64, f64)> {
        self.profiles
            .iter()
            .map(|p| (p.t, p.oscillation()))
            .collect()
    }
}

/// Evolves angularly constant initial data `u0` (sampled on `grid`) under the
/// flow on the warped product, i.e. `u_t = α(u') u'' - (n-1)T_κ β(u') u'` on the
/// full interval with the outer condition of `controls` at both ends.
pub fn radial_flow(
    metric: &WarpedMetric,
    flux: &Flux,
    grid: SymmetricGrid,
    u0: &[f64],
    t_end: f64,
    controls: &StepControls,
) -> Result<RadialSolution> {
    metric.params.validate()?;
    if !metric.admissible() {
        return Err(Error::InvalidParams(format!(
            "warp amplitude a = {} violates Ric >= (n-1)kappa (needs a <= 1/kappa)",
            metric.a
        )));
    }
    flux.validate()?;
    controls.validate()?;
    check_t_end(t_end)?;
    if (grid.half_diameter - metric.params.half_diameter()).abs() > 1e-12 * metric.params.diameter {
        return Err(Error::InvalidProfile(
            "grid does not span [-D/2, D/2]".into(),
        ));
    }
    if u0.len() != grid.len() || u0.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidProfile(format!(
            "initial data has {} values for {} nodes or is not finite",
            u0.len(),
            grid.len()
        )));
    }
    let r = match controls.outer {
        crate::moc_pde::OuterBoundary::Neumann => 0.0,
        crate::moc_pde::OuterBoundary::Robin(r) => r,
    };
    let stepper = Stepper {
        flux: *flux,
        h: grid.h,
        drift: drift_at(&metric.params, &grid.nodes())?,
        left: LeftEnd::Robin(r),
        right_robin: r,
    };
    let profiles = stepper
        .run(u0.to_vec(), t_end, controls)?
        .into_iter()
        .map(|(t, values)| RadialProfile { t, values })
        .collect();
    Ok(RadialSolution {
        grid,
        profiles,
        flux: *flux,
        metric: *metric,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ViolationReport {
    pub pairs_checked: usize,
    pub violations: usize,
    /// Largest `|u(s_j) - u(s_i)| - 2φ(|s_j - s_i|/2)` over all pairs and times.
    pub worst_margin: f64,
    /// Largest `|u(s) - u(-s) - 2φ(s)|` over `s ≥ 0` and all times.
    pub antipodal_defect: f64,
}

/// Checks that `φ(·, t)` is a modulus of continuity for `u(·, t)` along the radial
/// segments: `|u(s_j) - u(s_i)| ≤ 2φ(|s_j - s_i|/2) + tol` for every node pair.
/// Along a segment of fixed angular coordinate the warped-product distance is
/// `|s_j - s_i|`, and this family contains every equality case.
pub fn verify_moc(
    solution: &RadialSolution,
    phi_series: &[Profile],
    tol: f64,
) -> Result<ViolationReport> {
    if solution.profiles.len() != phi_series.len() {
        return Err(Error::InvalidParams(format!(
            "{} solution profiles but {} moduli",
            solution.profiles.len(),
            phi_series.len()
        )));
    }
    let grid = solution.grid;
    let nodes = grid.nodes();
    let mut report = ViolationReport {
        pairs_checked: 0,
        violations: 0,
        worst_margin: f64::NEG_INFINITY,
        antipodal_defect: 0.0,
    };
    for (u, phi) in solution.profiles.iter().zip(phi_series) {
        if (u.t - phi.t).abs() > 1e-12 * u.t.abs().max(1.0) {
            return Err(Error::TimeMismatch(u.t, phi.t));
        }
        if (phi.grid.half_diameter - grid.half_diameter).abs() > 1e-12 * grid.half_diameter {
            return Err(Error::InvalidProfile(
                "modulus and solution cover different intervals".into(),
            ));
        }
        if !phi.is_nondecreasing(1e-10 * phi.oscillation()) {
            return Err(Error::InvalidProfile(format!(
                "modulus at t = {} is not nondecreasing",
                phi.t
            )));
        }
        if !is_concave(&phi.values, 1e-10 * phi.oscillation()) {
            log::debug!("modulus is not concave at t = {}", phi.t);
        }
        // 2φ(k h / 2) for every node separation k
        let bound: Vec<f64> = (0..grid.len())
            .map(|k| 2.0 * phi.interpolate(0.5 * k as f64 * grid.h))
            .collect();
        for i in 0..grid.len() {
            for j in i + 1..grid.len() {
                let margin = (u.values[j] - u.values[i]).abs() - bound[j - i];
                report.pairs_checked += 1;
                report.worst_margin = report.worst_margin.max(margin);
                if margin > tol {
                    report.violations += 1;
                }
            }
        }
        for k in 0..=grid.m {
            let s = nodes[grid.m + k];
            let defect =
                (u.values[grid.m + k] - u.values[grid.m - k] - 2.0 * phi.interpolate(s)).abs();
            report.antipodal_defect = report.antipodal_defect.max(defect);
        }
    }
    Ok(report)
}

fn is_concave(values: &[f64], tol: f64) -> bool {
    values.windows(3).all(|w| w[2] - 2.0 * w[1] + w[0] <= tol)
}

/// Decay rate of an oscillation series: the negated least-squares slope of
/// `ln osc` against `t` over the trailing `window` fraction of the samples.
pub fn fit_decay(osc_series: &[(f64, f64)], window: f64) -> Result<f64> {
    if !(window > 0.0 && window <= 1.0) {
        return Err(Error::InvalidParams(format!(
            "window = {window} must lie in (0, 1]"
        )));
    }
    let take = ((window * osc_series.len() as f64).ceil() as usize).min(osc_series.len());
    let tail = &osc_series[osc_series.len() - take..];
    if tail.len() < 4 {
        return Err(Error::TooFewSamples(tail.len()));
    }
    if let Some(&(t, osc)) = tail.iter().find(|(_, o)| o.is_nan() || *o <= 0.0) {
        return Err(Error::NonPositiveOscillation { t, osc });
    }
    let k = tail.len() as f64;
    let t_mean = tail.iter().map(|(t, _)| t).sum::<f64>() / k;
    let y_mean = tail.iter().map(|(_, o)| o.ln()).sum::<f64>() / k;
    let (mut sxy, mut sxx) = (0.0, 0.0);
    for &(t, o) in tail {
        let dt = t - t_mean;
        sxy += dt * (o.ln() - y_mean);
        sxx += dt * dt;
    }
    if sxx == 0.0 {
        return Err(Error::InvalidParams(
            "all samples in the fit window share one time".into(),
        ));
    }
    Ok(-sxy / sxx)
}

/// Number of non-constant oracle modes mixed into seeded initial data.
pub const SEEDED_MODES: usize = 5;

/// Generic initial data on the symmetric grid: the odd extension of `Φ_μ`
/// (scaled to unit sup norm) plus a seeded combination, with coefficients in
/// `[-0.5, 0.5]`, of the first five non-constant discrete Neumann modes. With
/// `odd` the result is antisymmetrised, which removes the even modes.
pub fn seeded_initial_data(
    params: &ModelParams,
    grid: SymmetricGrid,
    seed: u64,
    odd: bool,
) -> Result<Vec<f64>> {
    let eigen = first_eigenvalue(params, 1e-9)?;
    let traj = integrate_phi(params, eigen.bracket_lo, grid.m)?;
    let sup = traj.phi.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    let half: Vec<f64> = traj.phi.iter().map(|v| v / sup).collect();
    let mut u = grid.odd_extension(&half);

    let modes = sl_fd_modes(params, 2 * grid.m, SEEDED_MODES + 1)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for mode in modes.vectors.iter().skip(1) {
        let c: f64 = rng.gen_range(-0.5..=0.5);
        u.iter_mut().zip(mode).for_each(|(u, v)| *u += c * v);
    }
    if odd {
        let n = u.len();
        let sym: Vec<f64> = (0..n).map(|j| 0.5 * (u[j] - u[n - 1 - j])).collect();
        u = sym;
    }
    Ok(u)
}

/// A seeded concave nondecreasing profile on `[0, D/2]` with `φ(0) = 0` and
/// `φ'(D/2) = 0`: `A sin(π s/D) + B (1 - (1 - 2s/D)²)` with `A, B ∈ [0.5, 1.5]`.
pub fn seeded_concave_profile(params: &ModelParams, m: usize, seed: u64) -> Result<Profile> {
    let grid = Grid1D::for_params(params, m)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let a: f64 = rng.gen_range(0.5..=1.5);
    let b: f64 = rng.gen_range(0.5..=1.5);
    let d = params.diameter;
    let pi = std::f64::consts::PI;
    let mut profile = Profile::from_fn(grid, |s| {
        a * (pi * s / d).sin() + b * (1.0 - (1.0 - 2.0 * s / d).powi(2))
    });
    profile.values[0] = 0.0;
    Ok(profile)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn ricci_closed_forms() {
        let r = ricci_bounds(3, 0.0, 5.0, 2.0).unwrap();
        assert_eq!(r.radial, 0.0);
        assert_abs_diff_eq!(r.tangential_min, 0.2, epsilon = 1e-15);
        assert!(r.admissible);

        let r = ricci_bounds(3, 1.0, 1.0, 2.0).unwrap();
        assert_eq!(r.radial, 2.0);
        assert_eq!(r.tangential_min, 2.0);
        assert!(r.admissible);

        let r = ricci_bounds(4, 1.0, 2.0, 2.0).unwrap();
        assert!(!r.admissible);
        assert!(r.tangential_min < r.radial);
    }

    #[test]
    fn ricci_minimum_location() {
        // κ < 0: C² = cosh² is largest at the ends, where the positive term is smallest
        let r = ricci_bounds(3, -1.0, 1.0, 2.0).unwrap();
        let expected = -2.0 + 2.0 / 1f64.cosh().powi(2);
        assert_abs_diff_eq!(r.tangential_min, expected, epsilon = 1e-14);
        // κ > 0 with 1/a > κ: minimum at the centre
        let r = ricci_bounds(4, 0.5, 1.0, 2.0).unwrap();
        assert_abs_diff_eq!(r.tangential_min, 1.5 + 2.0 * 0.5, epsilon = 1e-14);
    }

    #[test]
    fn dimension_two_has_no_tangential_term() {
        let r = ricci_bounds(2, 1.0, 10.0, 2.0).unwrap();
        assert_eq!(r.tangential_min, r.radial);
        assert!(r.admissible);
    }

    #[test]
    fn metric_admissibility_flag() {
        let params = ModelParams::new(3, 2.0, 1.0).unwrap();
        assert!(WarpedMetric::new(params, 0.5).unwrap().admissible());
        assert!(!WarpedMetric::new(params, 0.6).unwrap().admissible());
        assert!(WarpedMetric::with_default_amplitude(params)
            .unwrap()
            .admissible());
        assert!(WarpedMetric::new(params, 0.0).is_err());
    }

    #[test]
    fn fit_decay_exact_series() {
        let series: Vec<(f64, f64)> = (0..50)
            .map(|k| {
                let t = 0.1 * k as f64;
                (t, 3.0 * (-1.7 * t).exp())
            })
            .collect();
        assert_abs_diff_eq!(fit_decay(&series, 1.0).unwrap(), 1.7, epsilon = 1e-10);
        assert_abs_diff_eq!(fit_decay(&series, 0.3).unwrap(), 1.7, epsilon = 1e-10);
        let flat: Vec<(f64, f64)> = (0..50).map(|k| (k as f64, 2.0)).collect();
        assert_abs_diff_eq!(fit_decay(&flat, 0.5).unwrap(), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn fit_decay_errors() {
        let short: Vec<(f64, f64)> = (0..3).map(|k| (k as f64, 1.0)).collect();
        assert!(matches!(
            fit_decay(&short, 1.0),
            Err(Error::TooFewSamples(3))
        ));
        let series: Vec<(f64, f64)> = (0..10).map(|k| (k as f64, 1.0)).collect();
        assert!(matches!(
            fit_decay(&series, 0.2),
            Err(Error::TooFewSamples(2))
        ));
        let mut zero = series.clone();
        zero[9].1 = 0.0;
        assert!(matches!(
            fit_decay(&zero, 0.5),
            Err(Error::NonPositiveOscillation { .. })
        ));
        assert!(fit_decay(&series, 0.0).is_err());
    }

    #[test]
    fn symmetric_grid_layout() {
        let g = SymmetricGrid::new(1.0, 16).unwrap();
        assert_eq!(g.len(), 33);
        assert_eq!(g.node(0), -1.0);
        assert_eq!(g.node(16), 0.0);
        assert_eq!(g.node(32), 1.0);
        let half: Vec<f64> = (0..=16).map(|i| i as f64).collect();
        let ext = g.odd_extension(&half);
        assert_eq!(ext[0], -16.0);
        assert_eq!(ext[16], 0.0);
        assert_eq!(ext[32], 16.0);
    }

    #[test]
    fn constants_are_stationary() {
        let params = ModelParams::new(3, -1.0, 2.0).unwrap();
        let metric = WarpedMetric::with_default_amplitude(params).unwrap();
        let grid = SymmetricGrid::new(1.0, 32).unwrap();
        let u0 = vec![0.7; grid.len()];
        for flux in [Flux::Heat, Flux::plaplacian(3.0, 0.0).unwrap()] {
            let sol =
                radial_flow(&metric, &flux, grid, &u0, 0.5, &StepControls::default()).unwrap();
            assert!(sol
                .profiles
                .iter()
                .all(|p| p.values.iter().all(|&v| v == 0.7)));
        }
    }

    #[test]
    fn inadmissible_metric_is_rejected() {
        let params = ModelParams::new(3, 1.0, 2.0).unwrap();
        let metric = WarpedMetric::new(params, 2.0).unwrap();
        let grid = SymmetricGrid::new(1.0, 16).unwrap();
        let u0 = vec![0.0; grid.len()];
        assert!(radial_flow(
            &metric,
            &Flux::Heat,
            grid,
            &u0,
            0.1,
            &StepControls::default()
        )
        .is_err());
    }

    #[test]
    fn seeded_data_is_deterministic_and_odd() {
        let params = ModelParams::new(2, -1.0, 2.0).unwrap();
        let grid = SymmetricGrid::new(1.0, 32).unwrap();
        let a = seeded_initial_data(&params, grid, 7, true).unwrap();
        let b = seeded_initial_data(&params, grid, 7, true).unwrap();
        let c = seeded_initial_data(&params, grid, 8, true).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
        let n = a.len();
        for j in 0..n {
            assert_eq!(a[j], -a[n - 1 - j]);
        }
    }

    #[test]
    fn seeded_concave_profile_shape() {
        let params = ModelParams::new(3, 0.5, 2.0).unwrap();
        let p = seeded_concave_profile(&params, 64, 3).unwrap();
        assert_eq!(p.values[0], 0.0);
        assert!(p.is_nondecreasing(0.0));
        assert!(is_concave(&p.values, 1e-14));
    }
}
