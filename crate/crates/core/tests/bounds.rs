use imbq::bounds::{
    bounded_chain_nd, check_il_lower, g2_closed_form, g3_closed_form, k0, log_shell_primitive, r2_envelope, ThresholdSet,
    RADIUS_M0,
};
use imbq::{BoundCheck, BoundsVerifier, DataPreset, Dimension, DispersionSymbol, VerifierConfig};
use std::f64::consts::PI;

fn failures(checks: &[BoundCheck]) -> Vec<String> {
    checks
        .iter()
        .filter(|c| !c.pass)
        .map(|c| format!("{} t={} lhs={:e} rhs={:e}", c.name, c.t, c.lhs, c.rhs))
        .collect()
}

fn find<'a>(checks: &'a [BoundCheck], name: &str) -> &'a BoundCheck {
    checks.iter().find(|c| c.name == name).unwrap_or_else(|| panic!("no check named {name}"))
}

#[test]
fn spot_constants() {
    assert!((k0(1.0).unwrap() - 1.0).abs() < 1e-14);
    assert!((k0(0.5).unwrap() - (0.5 * PI.sqrt() + 0.25 * PI.sqrt())).abs() < 1e-14);
    assert!((DispersionSymbol::eval(RADIUS_M0) - 0.5).abs() < 1e-15);
    // ∫_{1/t}^1 e^{-r²} r dr by a fine midpoint sum
    let t: f64 = 10.0;
    let n = 200_000;
    let h = (1.0 - 1.0 / t) / n as f64;
    let direct: f64 = (0..n).map(|k| 1.0 / t + (k as f64 + 0.5) * h).map(|r| (-r * r).exp() * r * h).sum();
    assert!((r2_envelope(t) - direct).abs() < 1e-10);
    assert!((r2_envelope(10.0) - 0.311_1).abs() < 1e-4, "{}", r2_envelope(10.0));
}

#[test]
fn closed_forms_match_brackets() {
    for t in [10.0, 1e3, 1e6] {
        for d0 in [0.5, 0.9, 0.99] {
            let th = ThresholdSet::new(t, d0).unwrap();
            let (a, b, c) = th.ordered().unwrap();
            let g2 = log_shell_primitive(b, c);
            let g3 = log_shell_primitive(a, b);
            assert!(((g2 - g2_closed_form(t, d0)) / g2).abs() < 1e-10, "t={t} d0={d0}");
            assert!(((g3 - g3_closed_form(t, d0)) / g3).abs() < 1e-10, "t={t} d0={d0}");
        }
    }
}

#[test]
fn thresholds_are_ordered() {
    assert!(ThresholdSet::new(2.0, 0.99).unwrap().ordered().is_err());
    for t in [10.0, 1e4, 1e8] {
        let th = ThresholdSet::new(t, 0.99).unwrap();
        let (a, b, c) = th.ordered().unwrap();
        assert!(a < b && b < c, "t={t}");
        assert!(th.in_l0(0.5 * th.radius_l0()));
        assert!(!th.in_l0(2.0 * th.radius_l0()));
    }
    assert!(ThresholdSet::new(0.5, 0.99).is_err());
}

#[test]
fn il_lower_bounds_hold_across_times() {
    for t in [1.0, 3.0, 10.0, 1e2, 1e3, 1e4] {
        let checks = check_il_lower(t, 0.99).unwrap();
        assert!(failures(&checks).is_empty(), "{:?}", failures(&checks));
    }
}

#[test]
fn one_dimensional_growth_is_linear() {
    let g = DataPreset::gaussian(Dimension::One, 1.0).unwrap();
    let v = BoundsVerifier::new(&g, VerifierConfig::default()).unwrap();
    let ratios: Vec<f64> = [1e3, 1e4, 1e5].iter().map(|&t| v.norm_sq(t).unwrap().value / t).collect();
    let (lo, hi) = ratios.iter().fold((f64::INFINITY, 0.0f64), |(a, b), &r| (a.min(r), b.max(r)));
    assert!(hi / lo < 1.2, "{ratios:?}");
}

#[test]
fn holder_remainder_decays() {
    let g = DataPreset::gaussian(Dimension::One, 1.0).unwrap();
    let v = BoundsVerifier::new(&g, VerifierConfig::default()).unwrap();
    let early = find(&v.lower_chain_1d(1e2, 1.0).unwrap(), "lower1d.rl_holder").lhs;
    let late = find(&v.lower_chain_1d(1e4, 1.0).unwrap(), "lower1d.rl_holder").lhs;
    assert!(late <= early, "{late} > {early}");
}

#[test]
fn outer_shell_bound_in_two_dimensions() {
    let g = DataPreset::gaussian(Dimension::Two, 1.0).unwrap();
    let v = BoundsVerifier::new(&g, VerifierConfig::default()).unwrap();
    let checks = v.upper_chain_2d(1e4).unwrap();
    let g1 = find(&checks, "upper2d.g1_bound");
    assert!(g1.pass, "{g1:?}");
    assert!(failures(&checks).is_empty(), "{:?}", failures(&checks));
}

#[test]
fn three_dimensional_norm_saturates() {
    let g = DataPreset::gaussian(Dimension::Three, 0.1).unwrap();
    let v = BoundsVerifier::new(&g, VerifierConfig::default()).unwrap();
    let checks = v.bounded_sweep(&[1e3, 1e6]).unwrap();
    assert!(failures(&checks).is_empty(), "{:?}", failures(&checks));
    assert!(find(&checks, "bounded.saturation").pass);
}

#[test]
fn bounded_chain_holds_at_small_times() {
    let g = DataPreset::gaussian(Dimension::Three, 1.0).unwrap();
    for t in [0.0, 0.5, 3.0, 20.0] {
        let checks = bounded_chain_nd(&g, t).unwrap();
        assert!(failures(&checks).is_empty(), "{:?}", failures(&checks));
    }
}

#[test]
fn bump_chains_pass() {
    for dim in [Dimension::One, Dimension::Two, Dimension::Three] {
        let b = DataPreset::bump(dim, None).unwrap();
        let v = BoundsVerifier::new(&b, VerifierConfig::default()).unwrap();
        let checks = v.verify_all(&[1e2, 1e3], 1.0).unwrap();
        assert!(!checks.is_empty());
        assert!(failures(&checks).is_empty(), "{dim}: {:?}", failures(&checks));
    }
}

#[test]
fn mean_zero_data_makes_lower_bounds_vacuous() {
    let d = DataPreset::difference_of_gaussians(Dimension::One, 1.0, 0.25).unwrap();
    let v = BoundsVerifier::new(&d, VerifierConfig::default()).unwrap();
    let checks = v.lower_sweep_1d(&[1e2, 1e3], 1.0).unwrap();
    assert!(find(&checks, "lower1d.j1_split").vacuous);
    assert!(find(&checks, "lower1d.constant").vacuous);
}

#[test]
fn chains_reject_wrong_dimension_and_early_times() {
    let g = DataPreset::gaussian(Dimension::One, 1.0).unwrap();
    let v = BoundsVerifier::new(&g, VerifierConfig::default()).unwrap();
    assert!(matches!(v.upper_chain_2d(1e3), Err(imbq::Error::Domain(_))));
    assert!(matches!(v.lower_chain_1d(10.0, 1.0), Err(imbq::Error::Domain(_))));
    assert!(matches!(v.lower_chain_1d(1e3, 0.4), Err(imbq::Error::Domain(_))));
    assert!(matches!(bounded_chain_nd(&g, 1.0), Err(imbq::Error::Domain(_))));
}
