use std::f64::consts::PI;

use gapbound_core::bounds::{classical_bounds, shi_zhang};
use gapbound_core::ModelParams;
use proptest::prelude::*;

#[test]
fn li_conjecture_fails_for_small_positive_curvature() {
    for n in [2, 3, 5] {
        for kappa in [0.05, 0.1, 0.2] {
            let r = classical_bounds(&ModelParams::new(n, kappa, PI).unwrap(), 1e-11).unwrap();
            assert!(r.li_violated);
            assert!(r.li_conjecture - r.sharp_mu > kappa * kappa / 10.0);
        }
    }
}

#[test]
fn lichnerowicz_only_for_positive_curvature() {
    let r = classical_bounds(&ModelParams::new(3, -1.0, 2.0).unwrap(), 1e-10).unwrap();
    assert!(r.lichnerowicz.is_none());
    let r = classical_bounds(&ModelParams::new(3, 1.0, 2.0).unwrap(), 1e-10).unwrap();
    assert_eq!(r.lichnerowicz, Some(3.0));
    assert!(r.sharp_mu >= 3.0);
}

#[test]
fn report_scales_covariantly() {
    let base = classical_bounds(&ModelParams::new(3, 0.4, 2.0).unwrap(), 1e-12).unwrap();
    for c in [0.5, 2.0, 3.0] {
        let r =
            classical_bounds(&ModelParams::new(3, 0.4 / (c * c), 2.0 * c).unwrap(), 1e-12).unwrap();
        let c2 = c * c;
        for (a, b) in [
            (r.sharp_mu, base.sharp_mu),
            (r.zhong_yang, base.zhong_yang),
            (r.li_conjecture, base.li_conjecture),
            (r.shi_zhang, base.shi_zhang),
        ] {
            assert!((a * c2 - b).abs() <= 1e-9 * b.abs());
        }
        assert!((r.shi_zhang_s - base.shi_zhang_s).abs() < 1e-12);
        assert_eq!(r.li_violated, base.li_violated);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn bound_chain(n in 2u32..7, kappa in -3.0f64..3.0, d in 0.3f64..3.0) {
        prop_assume!(kappa <= 0.0 || d < 0.98 * PI / kappa.sqrt());
        let params = ModelParams::new(n, kappa, d).unwrap();
        let r = classical_bounds(&params, 1e-11).unwrap();
        let half = PI * PI / (d * d) + f64::from(n - 1) * kappa / 2.0;
        let slack = 1e-8;
        prop_assert!(r.sharp_mu >= r.shi_zhang - slack * r.shi_zhang.abs());
        prop_assert!(r.shi_zhang >= half - slack * half.abs());
        prop_assert!((0.0..=1.0).contains(&r.shi_zhang_s));
        let (sup, s) = shi_zhang(&params);
        prop_assert_eq!((sup, s), (r.shi_zhang, r.shi_zhang_s));
    }
}
