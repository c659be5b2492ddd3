//! Explicit finite-difference stepper for
//! `u_t = α(u') u'' - drift(s) β(u') u'` on a uniform node set.
//!
//! The diffusion term is written in flux form, `α(q) q_s = (β(q) q)_s`, which is an
//! identity for the heat and unregularised p-Laplacian coefficients. Fluxes
//! `β(q) q` are taken at half nodes from one-sided slopes, so a degenerate
//! coefficient at a node with `u' = 0` (the Neumann end under a p > 2 flux) does
//! not freeze that node. The drift term uses the centred slope at the node.

use crate::error::{Error, Result};

use super::flux::Flux;
use super::StepControls;

/// Largest diffusion coefficient accepted before the time step is declared degenerate.
pub const ALPHA_CAP: f64 = 1e12;

/// Condition at the first node.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum LeftEnd {
    /// `u(s_0) = 0` with odd reflection `u(-s) = -u(s)`.
    OddPivot,
    /// Ghost reflection with outward normal derivative `-u'(s_0) = r u(s_0)`.
    Robin(f64),
}

pub(crate) struct Stepper {
    pub flux: Flux,
    pub h: f64,
    /// `(n-1) T_κ(s_i)` at each node.
    pub drift: Vec<f64>,
    pub left: LeftEnd,
    /// Outward normal derivative at the last node: `u'(s_N) = r u(s_N)`.
    pub right_robin: f64,
}

/// `(β(q) q, β(q), bound on d(β q)/dq)`.
trait Coefficients {
    fn at(&self, q: f64) -> Result<(f64, f64, f64)>;
}

struct HeatCoefficients;

impl Coefficients for HeatCoefficients {
    #[inline(always)]
    fn at(&self, q: f64) -> Result<(f64, f64, f64)> {
        Ok((q, 1.0, 1.0))
    }
}

struct FluxCoefficients(Flux);

impl Coefficients for FluxCoefficients {
    #[inline(always)]
    fn at(&self, q: f64) -> Result<(f64, f64, f64)> {
        let (alpha, beta) = self.0.eval(q)?;
        // d(βq)/dq = m^{p-4}(ε² + (p-1)q²) ≤ max(α, β)
        Ok((beta * q, beta, alpha.max(beta)))
    }
}

impl Stepper {
    /// Advances `u0` to `t_end`, returning `(t, u)` at every requested output time
    /// snapped to the nearest completed step.
    pub fn run(
        &self,
        u0: Vec<f64>,
        t_end: f64,
        controls: &StepControls,
    ) -> Result<Vec<(f64, Vec<f64>)>> {
        match self.flux {
            Flux::Heat => self.run_with(&HeatCoefficients, u0, t_end, controls),
            flux => self.run_with(&FluxCoefficients(flux), u0, t_end, controls),
        }
    }

    fn run_with<C: Coefficients>(
        &self,
        coeffs: &C,
        u0: Vec<f64>,
        t_end: f64,
        controls: &StepControls,
    ) -> Result<Vec<(f64, Vec<f64>)>> {
        let n = u0.len();
        assert_eq!(n, self.drift.len());
        assert!(n >= 3);
        let samples = controls.samples.max(1);
        let targets: Vec<f64> = (0..=samples)
            .map(|k| t_end * k as f64 / samples as f64)
            .collect();
        let mut out = Vec::with_capacity(targets.len());
        let mut next = 0;

        let h = self.h;
        let h2 = h * h;
        let inv_h = 1.0 / h;
        let mut u = u0;
        // slope[k] = q_{k-1/2}, k = 0..=n, including both ghost half nodes
        let mut slope = vec![0.0; n + 1];
        let mut face = vec![0.0; n + 1];
        let mut rate = vec![0.0; n];
        let mut t = 0.0;
        let mut steps = 0usize;

        while next < targets.len() {
            self.half_slopes(&u, inv_h, &mut slope);
            let mut stiffness = 0.0f64;
            for (f, &q) in face.iter_mut().zip(&slope) {
                let (flux, _, k) = coeffs.at(q)?;
                *f = flux;
                stiffness = stiffness.max(k);
            }
            for i in 0..n {
                let q = 0.5 * (slope[i] + slope[i + 1]);
                let (_, beta, _) = coeffs.at(q)?;
                rate[i] = (face[i + 1] - face[i]) * inv_h - self.drift[i] * beta * q;
            }
            if !stiffness.is_finite() || stiffness > ALPHA_CAP {
                return Err(Error::Cfl(format!(
                    "max alpha = {stiffness:e} exceeds {ALPHA_CAP:e} at t = {t}"
                )));
            }
            if stiffness == 0.0 {
                // every coefficient vanishes: the profile is stationary
                while next < targets.len() {
                    out.push((targets[next], u.clone()));
                    next += 1;
                }
                break;
            }
            let dt = controls.cfl * h2 / stiffness;
            while next < targets.len() && targets[next] <= t + 0.5 * dt {
                out.push((t, u.clone()));
                next += 1;
            }
            if next == targets.len() {
                break;
            }
            steps += 1;
            if steps > controls.max_steps {
                return Err(Error::Cfl(format!(
                    "time step {dt:e} needs more than {} steps to reach t = {t_end}",
                    controls.max_steps
                )));
            }
            for (v, r) in u.iter_mut().zip(&rate) {
                *v += dt * r;
            }
            if self.left == LeftEnd::OddPivot {
                u[0] = 0.0;
            }
            t += dt;
        }
        Ok(out)
    }

    /// One-sided slopes at the half nodes, with ghost values beyond both ends.
    #[inline]
    fn half_slopes(&self, u: &[f64], inv_h: f64, slope: &mut [f64]) {
        let last = u.len() - 1;
        for (s, w) in slope[1..=last].iter_mut().zip(u.windows(2)) {
            *s = (w[1] - w[0]) * inv_h;
        }
        slope[0] = match self.left {
            // ghost u_{-1} = -u_1
            LeftEnd::OddPivot => (u[0] + u[1]) * inv_h,
            // ghost u_{-1} = u_1 + 2h r u_0
            LeftEnd::Robin(r) => (u[0] - u[1]) * inv_h - 2.0 * r * u[0],
        };
        // ghost u_{N+1} = u_{N-1} + 2h r u_N
        slope[last + 1] = (u[last - 1] - u[last]) * inv_h + 2.0 * self.right_robin * u[last];
    }
}
