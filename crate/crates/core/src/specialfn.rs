//! Curvature-adapted trigonometric functions.
//!
//! `C_κ` and `S_κ` are the solutions of `f'' + κ f = 0` with `C_κ(0) = 1, C_κ'(0) = 0`
//! and `S_κ(0) = 0, S_κ'(0) = 1`; `T_κ = κ S_κ / C_κ`. They interpolate between the
//! circular (`κ > 0`), flat (`κ = 0`) and hyperbolic (`κ < 0`) cases.

use crate::error::{Error, Result};

/// Below this value of `|κ| τ²` the series branch is used.
const SERIES_THRESHOLD: f64 = 1e-8;

/// Relative size of `|C_κ(s)|` below which `T_κ(s)` is reported as a pole.
const POLE_TOLERANCE: f64 = 1e-12;

/// Evaluation context for `C_κ`, `S_κ` and `T_κ` at a fixed curvature bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KappaTrig {
    pub kappa: f64,
}

impl KappaTrig {
    pub fn new(kappa: f64) -> Self {
        Self { kappa }
    }

    pub fn c(&self, tau: f64) -> f64 {
        ck(self.kappa, tau)
    }

    pub fn s(&self, tau: f64) -> f64 {
        sk(self.kappa, tau)
    }

    pub fn t(&self, s: f64) -> Result<f64> {
        tk(self.kappa, s)
    }
}

/// `C_κ(τ)`: `cos(√κ τ)`, `1`, or `cosh(√-κ τ)` depending on the sign of `κ`.
pub fn ck(kappa: f64, tau: f64) -> f64 {
    let x = kappa * tau * tau;
    if x.abs() < SERIES_THRESHOLD {
        // 1 - x/2 + x²/24
        return 1.0 - x / 2.0 + x * x / 24.0;
    }
    if kappa > 0.0 {
        (kappa.sqrt() * tau).cos()
    } else {
        ((-kappa).sqrt() * tau).cosh()
    }
}

/// `S_κ(τ)`: `sin(√κ τ)/√κ`, `τ`, or `sinh(√-κ τ)/√-κ`.
pub fn sk(kappa: f64, tau: f64) -> f64 {
    let x = kappa * tau * tau;
    if x.abs() < SERIES_THRESHOLD {
        // τ (1 - x/6 + x²/120)
        return tau * (1.0 - x / 6.0 + x * x / 120.0);
    }
    if kappa > 0.0 {
        let r = kappa.sqrt();
        (r * tau).sin() / r
    } else {
        let r = (-kappa).sqrt();
        (r * tau).sinh() / r
    }
}

/// `T_κ(s) = κ S_κ(s) / C_κ(s)`.
///
/// Fails with [`Error::Pole`] when `C_κ(s)` vanishes to within
/// `1e-12 · max(1, |κ S_κ(s)|)`, which can only happen for `κ > 0`.
pub fn tk(kappa: f64, s: f64) -> Result<f64> {
    if kappa == 0.0 {
        return Ok(0.0);
    }
    let c = ck(kappa, s);
    let num = kappa * sk(kappa, s);
    if c.abs() < POLE_TOLERANCE * num.abs().max(1.0) {
        return Err(Error::Pole { kappa, s });
    }
    Ok(num / c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

    #[test]
    fn closed_form_values() {
        assert_eq!(ck(0.0, 7.3), 1.0);
        assert_abs_diff_eq!(ck(1.0, FRAC_PI_2), 0.0, epsilon = 1e-15);
        assert_eq!(ck(-1.0, 0.0), 1.0);

        assert_eq!(sk(0.0, 2.5), 2.5);
        assert_abs_diff_eq!(sk(1.0, FRAC_PI_2), 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(sk(4.0, FRAC_PI_4), 0.5, epsilon = 1e-15);

        assert_eq!(tk(0.0, 1.0).unwrap(), 0.0);
        assert_abs_diff_eq!(tk(1.0, FRAC_PI_4).unwrap(), 1.0, epsilon = 1e-15);
        assert_eq!(tk(-1.0, 0.0).unwrap(), 0.0);
    }

    #[test]
    fn branch_formulas() {
        assert_abs_diff_eq!(
            tk(2.0, 0.3).unwrap(),
            2f64.sqrt() * (2f64.sqrt() * 0.3).tan(),
            epsilon = 1e-14
        );
        assert_abs_diff_eq!(
            tk(-3.0, 0.7).unwrap(),
            -(3f64.sqrt()) * (3f64.sqrt() * 0.7).tanh(),
            epsilon = 1e-14
        );
    }

    #[test]
    fn pole_is_reported() {
        let err = tk(1.0, FRAC_PI_2).unwrap_err();
        assert!(matches!(err, Error::Pole { .. }));
        assert!(tk(4.0, -PI / 4.0).is_err());
        // near but not at the pole
        assert!(tk(1.0, FRAC_PI_2 - 1e-6).unwrap() > 1e5);
    }

    #[test]
    fn pythagorean_identity_on_grid() {
        for i in 0..=80 {
            let kappa = -4.0 + 0.1 * i as f64;
            for j in 0..=60 {
                let tau = -3.0 + 0.1 * j as f64;
                let c = ck(kappa, tau);
                let s = sk(kappa, tau);
                if kappa > 0.0 && c.abs() < 1e-6 {
                    continue;
                }
                let lhs = c * c + kappa * s * s;
                // cosh² grows like e^{2|τ|√-κ}; compare relative to the largest term
                let scale = (c * c).max(1.0);
                assert!(
                    (lhs - 1.0).abs() <= 1e-12 * scale,
                    "kappa={kappa} tau={tau} lhs={lhs}"
                );
            }
        }
    }

    #[test]
    fn derivative_identities_by_central_differences() {
        let h = 1e-4;
        for &kappa in &[-2.0, -0.3, 0.0, 0.5, 1.7] {
            for &tau in &[-1.1, -0.2, 0.4, 0.9] {
                let ds = (sk(kappa, tau + h) - sk(kappa, tau - h)) / (2.0 * h);
                let dc = (ck(kappa, tau + h) - ck(kappa, tau - h)) / (2.0 * h);
                assert_abs_diff_eq!(ds, ck(kappa, tau), epsilon = 1e-7);
                assert_abs_diff_eq!(dc, -kappa * sk(kappa, tau), epsilon = 1e-7);
            }
        }
    }

    #[test]
    fn continuity_across_kappa_zero() {
        for j in 0..=60 {
            let tau = -3.0 + 0.1 * j as f64;
            for &k in &[1e-8, -1e-8] {
                assert!((ck(k, tau) - ck(0.0, tau)).abs() <= 1e-7);
                assert!((sk(k, tau) - sk(0.0, tau)).abs() <= 1e-7);
            }
        }
        // no jump at the series threshold: the step across it is the true increment
        let (lo, hi) = (SERIES_THRESHOLD * 0.999, SERIES_THRESHOLD * 1.001);
        assert_abs_diff_eq!(ck(hi, 1.0) - ck(lo, 1.0), -(hi - lo) / 2.0, epsilon = 1e-15);
        assert_abs_diff_eq!(
            sk(-hi, 1.0) - sk(-lo, 1.0),
            (hi - lo) / 6.0,
            epsilon = 1e-15
        );
    }

    proptest! {
        #[test]
        fn parity(kappa in -4.0f64..4.0, tau in -3.0f64..3.0) {
            prop_assert_eq!(ck(kappa, -tau), ck(kappa, tau));
            prop_assert_eq!(sk(kappa, -tau), -sk(kappa, tau));
            if let (Ok(a), Ok(b)) = (tk(kappa, tau), tk(kappa, -tau)) {
                prop_assert_eq!(a, -b);
            }
        }
    }
}
