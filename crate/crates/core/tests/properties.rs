use imbq::multiplier::{self, sinc, DispersionSymbol, SINC_SERIES_THRESHOLD};
use imbq::spectral::{AliasingPolicy, GridField, GridSpec, SpectralSolver};
use imbq::Dimension;
use num_complex::Complex64;
use proptest::prelude::*;

#[test]
fn dispersion_range_and_monotonicity() {
    let count = 1_000_000;
    let (mut prev_r, mut prev) = (-1.0f64, -1.0);
    let mut strict = 0;
    for k in 0..count {
        // log-spaced on [1e-12, 1e6] plus r = 0
        let r = if k == 0 { 0.0 } else { 1e-12 * 1e18f64.powf(k as f64 / (count - 1) as f64) };
        let f = multiplier::dispersion_f(r).unwrap();
        assert!((0.0..1.0).contains(&f), "r={r} f={f}");
        assert!(f >= prev, "decreasing at r={r}");
        // Past r ≈ 1e5 the exact increment between neighbours drops below
        // one ulp of 1.0, so strictness is only demanded where it is
        // representable.
        let increment = DispersionSymbol::derivative(r) * (r - prev_r.max(0.0));
        if k > 0 && increment > 4.0 * f64::EPSILON {
            assert!(f > prev, "not increasing at r={r}");
            strict += 1;
        }
        prev = f;
        prev_r = r;
    }
    assert!(strict > count * 3 / 4, "{strict}");
}

#[test]
fn small_radius_expansion() {
    for k in 0..=1000 {
        let r = 0.1 * k as f64 / 1000.0;
        let f = DispersionSymbol::eval(r);
        assert!((f - r).abs() <= r.powi(3) / 2.0, "{r}");
    }
}

#[test]
fn sinc_branch_continuity() {
    let x0 = SINC_SERIES_THRESHOLD;
    for k in 1..=50 {
        let eps = k as f64 * 1e-18;
        let below = sinc(x0 - eps);
        let above = sinc(x0 + eps);
        assert!((below - above).abs() / above <= 1e-12);
        let t = 3.0;
        let r_switch = DispersionSymbol::inverse(x0 / t);
        let a = DispersionSymbol::sine_multiplier(t, r_switch * (1.0 - 1e-12));
        let b = DispersionSymbol::sine_multiplier(t, r_switch * (1.0 + 1e-12));
        assert!((a - b).abs() / b <= 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2000))]

    #[test]
    fn multiplier_pythagoras(t in 0.0f64..1e6, r in 0.0f64..1e4) {
        let m = DispersionSymbol::sine_multiplier(t, r);
        let f = DispersionSymbol::eval(r);
        let c = DispersionSymbol::cosine_multiplier(t, r);
        let s = (m * f).powi(2) + c * c;
        prop_assert!(s <= 1.0 + 1e-12 && s >= 1.0 - 1e-12, "{s}");
    }

    #[test]
    fn p_symbol_is_f_squared(r in 0.0f64..1e6) {
        let p = multiplier::p_symbol(r).unwrap();
        let f = multiplier::dispersion_f(r).unwrap();
        prop_assert!((p - f * f).abs() <= 1e-15);
    }

    #[test]
    fn inverse_round_trips(r in 0.0f64..1e3) {
        let back = DispersionSymbol::inverse(DispersionSymbol::eval(r));
        prop_assert!((back - r).abs() <= 1e-9 * r.max(1.0));
    }
}

#[test]
fn fundamental_inequality_on_random_pairs() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x1_12);
    for _ in 0..10_000 {
        let mut draw = || {
            let scale = 10f64.powf(rng.random_range(-6.0..6.0));
            Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)) * scale
        };
        let (a, b) = (draw(), draw());
        let lhs = (a + b).norm_sqr();
        let rhs = 0.5 * a.norm_sqr() - b.norm_sqr();
        assert!(lhs >= rhs - 1e-15 * (a.norm_sqr() + b.norm_sqr()), "{a} {b}");
    }
}

#[test]
fn real_fields_have_conjugate_symmetric_spectra() {
    for (dim, n) in [(Dimension::One, 64), (Dimension::Two, 32), (Dimension::Three, 16)] {
        let spec = GridSpec::new(dim, 6.0, n).unwrap();
        let field = GridField::from_fn(spec, |x| {
            let s: f64 = x.iter().enumerate().map(|(i, v)| (i + 1) as f64 * v).sum();
            (-x.iter().map(|v| v * v).sum::<f64>()).exp() * (1.0 + s.sin())
        });
        let spectrum = SpectralSolver::new(spec, AliasingPolicy::Ignore).forward(&field).unwrap();
        assert!(spectrum.conjugate_symmetry_defect() <= 1e-12, "{dim}");
    }
}
