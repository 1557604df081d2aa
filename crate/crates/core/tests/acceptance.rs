//! One pass/fail line per acceptance criterion. Exits nonzero if any fails.

use imbq::bounds::{k0, r2_envelope};
use imbq::growth::{fit_growth, log_spaced, sandwich_constants, DataFactors, GrowthKind};
use imbq::oracle::{moment_p, norm_sq_exact};
use imbq::spectral::{AliasingPolicy, GridField, GridSpec, SpectralSolver};
use imbq::{
    BoundCheck, BoundsVerifier, DataPreset, Dimension, DispersionSymbol, NormOracle, QuadratureConfig, VerifierConfig,
};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::process::ExitCode;
use std::time::Instant;

const ENERGY_TOL: f64 = 1e-10;
const AGREEMENT_TOL: f64 = 1e-6;
const R2_MIN: f64 = 0.99;
const SANDWICH_RATIO_MAX: f64 = 1e2;
const LOG_RATIO_MAX: f64 = 1.5;
const SATURATION_TOL: f64 = 0.05;
const PARTITION_TOL: f64 = 1e-8;
const SPOT_TOL: f64 = 1e-8;
const SINC_TOL: f64 = 1e-12;
const RESOLVENT_TOL: f64 = 1e-10;
const ORIGIN_TOL: f64 = 1e-10;

type Outcome = Result<String, String>;

fn ensure(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn err(e: imbq::Error) -> String {
    e.to_string()
}

fn max_abs(v: &[f64]) -> f64 {
    v.iter().map(|x| x.abs()).fold(0.0, f64::max)
}

fn energy_conservation() -> Outcome {
    let mut worst = 0.0f64;
    let times: Vec<f64> = std::iter::once(0.0).chain(log_spaced(1e-2, 1e3, 24).map_err(err)?).collect();
    for (dim, r, n) in [(Dimension::One, 1200.0, 16384), (Dimension::Two, 30.0, 256), (Dimension::Three, 8.0, 64)] {
        let spec = GridSpec::new(dim, r, n).map_err(err)?;
        let solver = SpectralSolver::new(spec, AliasingPolicy::Refuse);
        let u0 = GridField::from_fn(spec, |x| (-x.iter().map(|v| v * v).sum::<f64>()).exp());
        let u1 = GridField::from_fn(spec, |x| (1.0 + x[0]) * (-2.0 * x.iter().map(|v| v * v).sum::<f64>()).exp());
        let e0 = solver.energy(&u0, &u1).map_err(err)?.total;
        for &t in &times {
            let ev = solver.evolve(&u0, &u1, t).map_err(err)?;
            let e = solver.energy(&ev.u, &ev.ut).map_err(err)?.total;
            worst = worst.max(((e - e0) / e0).abs());
        }
    }
    ensure(worst <= ENERGY_TOL, format!("max relative drift {worst:.3e} (tol {ENERGY_TOL:e})"))
}

fn solver_oracle_agreement() -> Outcome {
    let cases = [
        (DataPreset::gaussian(Dimension::One, 1.0).map_err(err)?, 200.0, 4096),
        (DataPreset::gaussian(Dimension::Two, 1.0).map_err(err)?, 80.0, 512),
        (DataPreset::gaussian(Dimension::Three, 0.1).map_err(err)?, 80.0, 128),
    ];
    let mut worst = 0.0f64;
    for (preset, r, n) in cases {
        let spec = GridSpec::new(preset.dim(), r, n).map_err(err)?;
        let solver = SpectralSolver::new(spec, AliasingPolicy::Refuse);
        let u1 = GridField::from_preset(spec, &preset).map_err(err)?;
        let u0 = GridField::zeros(spec);
        for t in [1.0, 10.0, 50.0] {
            let ev = solver.evolve(&u0, &u1, t).map_err(err)?;
            let grid = solver.norm_xi_sq(&ev.u).map_err(err)?;
            let exact = norm_sq_exact(&preset, t, &QuadratureConfig::default()).map_err(err)?.value;
            // relative difference of the norms, not of their squares
            worst = worst.max((grid.sqrt() / exact.sqrt() - 1.0).abs());
        }
    }
    ensure(worst <= AGREEMENT_TOL, format!("max relative difference {worst:.3e} (tol {AGREEMENT_TOL:e})"))
}

fn regime(preset: &DataPreset, lo: f64, hi: f64, count: usize) -> Result<(imbq::NormSeries, imbq::GrowthModel), String> {
    let oracle = NormOracle::new(preset, QuadratureConfig::default()).map_err(err)?;
    let series = oracle.series(&log_spaced(lo, hi, count).map_err(err)?).map_err(err)?;
    let best = fit_growth(&series, lo, hi).map_err(err)?[0];
    Ok((series, best))
}

fn regime_1d() -> Outcome {
    let g = DataPreset::gaussian(Dimension::One, 1.0).map_err(err)?;
    let (series, best) = regime(&g, 1e2, 1e5, 48)?;
    let s = sandwich_constants(&series, DataFactors::from_preset(&g), GrowthKind::LinearInT, 1e2, 1e5).map_err(err)?;
    let ok = best.kind == GrowthKind::LinearInT
        && best.r_squared >= R2_MIN
        && s.c_low > 0.0
        && s.c_low <= s.c_high
        && s.ratio() < SANDWICH_RATIO_MAX;
    ensure(
        ok,
        format!(
            "selected {} r2={:.6} c_low={:.4e} c_high={:.4e} ratio={:.4}",
            best.kind,
            best.r_squared,
            s.c_low,
            s.c_high,
            s.ratio()
        ),
    )
}

fn regime_2d() -> Outcome {
    let g = DataPreset::gaussian(Dimension::Two, 1.0).map_err(err)?;
    let (series, best) = regime(&g, 1e2, 1e6, 48)?;
    let (times, values) = series.window(1e5, 1e6);
    let ratios: Vec<f64> = times.iter().zip(&values).map(|(t, v)| v / t.ln()).collect();
    let spread = ratios.iter().copied().fold(0.0, f64::max) / ratios.iter().copied().fold(f64::INFINITY, f64::min);
    let ok = best.kind == GrowthKind::LinearInLogT && best.r_squared >= R2_MIN && spread <= LOG_RATIO_MAX;
    ensure(
        ok,
        format!("selected {} r2={:.6} top-decade W/log t spread {spread:.4}", best.kind, best.r_squared),
    )
}

fn regime_3d() -> Outcome {
    let g = DataPreset::gaussian(Dimension::Three, 1.0).map_err(err)?;
    let v = BoundsVerifier::new(&g, VerifierConfig::default()).map_err(err)?;
    let early = v.norm_sq(1e3).map_err(err)?.value;
    let late = v.norm_sq(1e6).map_err(err)?.value;
    let (m1, m2) = v.bounded_constants();
    let drift = (late - early).abs() / early;
    ensure(
        drift <= SATURATION_TOL && late < m1 + m2,
        format!("W(1e3)={early:.6e} W(1e6)={late:.6e} drift {drift:.3e}, bound {:.4e}", m1 + m2),
    )
}

fn bound_suite() -> Outcome {
    let times = [1e2, 1e3, 1e4, 1e5];
    let mut total = 0;
    let mut failed: Vec<String> = Vec::new();
    let mut partitions = 0;
    for dim in [Dimension::One, Dimension::Two, Dimension::Three] {
        let presets = [
            DataPreset::gaussian(dim, 1.0).map_err(err)?,
            DataPreset::bump(dim, None).map_err(err)?,
        ];
        for p in &presets {
            let cfg = VerifierConfig {
                identity_tol: PARTITION_TOL,
                ..VerifierConfig::default()
            };
            let checks: Vec<BoundCheck> = BoundsVerifier::new(p, cfg).map_err(err)?.verify_all(&times, 1.0).map_err(err)?;
            total += checks.len();
            partitions += checks.iter().filter(|c| c.name.ends_with(".partition")).count();
            failed.extend(checks.iter().filter(|c| !c.pass).map(|c| format!("{} {} t={:e}", p.name(), c.name, c.t)));
        }
    }
    ensure(
        failed.is_empty() && partitions == 2 * 3 * times.len(),
        format!("{total} checks, {partitions} partitions, failures: {failed:?}"),
    )
}

fn spot_values() -> Outcome {
    let k = k0(1.0).map_err(err)?;
    let f = DispersionSymbol::eval(1.0 / 3f64.sqrt());
    // ∫_{1/10}^1 e^{-r²} r dr by a midpoint sum, independent of the closed form
    let n = 400_000;
    let h = 0.9 / n as f64;
    let direct: f64 = (0..n).map(|j| 0.1 + (j as f64 + 0.5) * h).map(|r| (-r * r).exp() * r * h).sum();
    let r2 = r2_envelope(10.0);
    let ok = (k - 1.0).abs() <= SPOT_TOL
        && (f - 0.5).abs() <= SPOT_TOL
        && (r2 - direct).abs() <= SPOT_TOL
        && (r2 - 0.3111).abs() < 5e-5
        && r2 <= 0.5;
    ensure(ok, format!("K0(1)={k:.12} f(1/sqrt3)={f:.12} R2(10)={r2:.10}"))
}

fn property_suite() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut violations = 0;
    for _ in 0..10_000 {
        let mut draw = || {
            let scale = 10f64.powf(rng.random_range(-6.0..6.0));
            Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)) * scale
        };
        let (a, b) = (draw(), draw());
        if (a + b).norm_sqr() < 0.5 * a.norm_sqr() - b.norm_sqr() - 1e-15 * (a.norm_sqr() + b.norm_sqr()) {
            violations += 1;
        }
    }

    let x0 = imbq::multiplier::SINC_SERIES_THRESHOLD;
    let sinc_gap = (1..=50)
        .map(|k| {
            let e = k as f64 * 1e-18;
            let (lo, hi) = (imbq::multiplier::sinc(x0 - e), imbq::multiplier::sinc(x0 + e));
            (lo - hi).abs() / hi
        })
        .fold(0.0, f64::max);

    let mut origin = 0.0f64;
    for dim in [Dimension::One, Dimension::Two, Dimension::Three] {
        let presets = [
            DataPreset::gaussian(dim, 1.0).map_err(err)?,
            DataPreset::bump(dim, None).map_err(err)?,
            DataPreset::difference_of_gaussians(dim, 1.0, 0.25).map_err(err)?,
            DataPreset::zero(dim),
        ];
        for p in &presets {
            let mean = moment_p(p);
            origin = origin.max((p.transform(0.0) - mean).abs() / mean.abs().max(1.0));
        }
    }

    let mut resolvent = 0.0f64;
    for (dim, r, n) in [(Dimension::One, 30.0, 512), (Dimension::Two, 15.0, 128), (Dimension::Three, 10.0, 32)] {
        let spec = GridSpec::new(dim, r, n).map_err(err)?;
        let solver = SpectralSolver::new(spec, AliasingPolicy::Ignore);
        let c: Vec<f64> = (0..dim.n()).map(|_| rng.random_range(-2.0..2.0)).collect();
        let f = GridField::from_fn(spec, |x| (-x.iter().zip(&c).map(|(a, b)| (a - b) * (a - b)).sum::<f64>()).exp());
        let g = GridField::from_fn(spec, |x| x[0] * (-0.7 * x.iter().map(|a| a * a).sum::<f64>()).exp());
        let (u, v) = solver.resolvent_solve(&f, &g).map_err(err)?;
        let pu = solver.apply_p(&u).map_err(err)?;
        let scale = max_abs(f.values()).max(max_abs(g.values()));
        for i in 0..u.values().len() {
            let r1 = u.values()[i] - v.values()[i] - f.values()[i];
            let r2 = pu.values()[i] + v.values()[i] - g.values()[i];
            resolvent = resolvent.max(r1.abs().max(r2.abs()) / scale);
        }
    }

    let ok = violations == 0 && sinc_gap <= SINC_TOL && origin <= ORIGIN_TOL && resolvent <= RESOLVENT_TOL;
    ensure(
        ok,
        format!(
            "inequality violations {violations}/10000, sinc gap {sinc_gap:.2e}, origin {origin:.2e}, resolvent {resolvent:.2e}"
        ),
    )
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("energy_conservation", energy_conservation),
        ("solver_oracle_agreement", solver_oracle_agreement),
        ("regime_1d_linear_in_t", regime_1d),
        ("regime_2d_linear_in_log_t", regime_2d),
        ("regime_3d_bounded", regime_3d),
        ("bound_chain_suite", bound_suite),
        ("closed_form_spot_values", spot_values),
        ("property_suite", property_suite),
    ];
    let mut failures = 0;
    for (name, run) in criteria {
        let start = Instant::now();
        let outcome = run();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {name}: {detail} [{secs:.1}s]"),
            Err(detail) => {
                failures += 1;
                println!("FAIL {name}: {detail} [{secs:.1}s]");
            }
        }
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failures, criteria.len());
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
