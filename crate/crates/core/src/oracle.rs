//! Grid-free evaluation of `‖w(t,·)‖²_ξ` and of the data functionals.
//!
//! `‖w(t,·)‖²_ξ = ω_n ∫_0^∞ (sin(t f(r))/f(r))² |ŵ₁(r)|² r^{n-1} dr` is
//! integrated with the oscillation-aware panels of [`crate::quadrature`],
//! truncated at the preset's spectral cutoff.

use num_complex::Complex64;
use serde::Serialize;
use std::f64::consts::FRAC_PI_2;

use crate::error::{Error, Result};
use crate::growth::{NormSeries, SeriesSource};
use crate::multiplier::DispersionSymbol;
use crate::preset::DataPreset;
use crate::quadrature::{QuadEstimate, QuadratureConfig, RadialIntegrator};
use crate::transform::radial_kernel_minus_one;

/// Log-spaced `|ξ|` range sampled for the Hölder constant `M`.
pub const HOLDER_SAMPLE_RANGE: (f64, f64) = (1e-4, 1e2);
pub const HOLDER_SAMPLES: usize = 121;

/// Quadrature oracle bound to one preset.
#[derive(Debug, Clone)]
pub struct NormOracle<'a> {
    preset: &'a DataPreset,
    integrator: RadialIntegrator,
}

impl<'a> NormOracle<'a> {
    pub fn new(preset: &'a DataPreset, cfg: QuadratureConfig) -> Result<Self> {
        Ok(Self {
            preset,
            integrator: RadialIntegrator::new(cfg)?,
        })
    }

    pub fn preset(&self) -> &DataPreset {
        self.preset
    }

    pub fn integrator(&self) -> &RadialIntegrator {
        &self.integrator
    }

    /// `‖w(t,·)‖²_ξ`.
    pub fn norm_sq(&self, t: f64) -> Result<QuadEstimate> {
        self.shell_norm_sq(t, 0.0, f64::INFINITY)
    }

    /// `‖w(t,·)‖²_ξ` at each of `times`, as a series ready for fitting.
    pub fn series(&self, times: &[f64]) -> Result<NormSeries> {
        let values = times.iter().map(|&t| self.norm_sq(t).map(|e| e.value)).collect::<Result<Vec<_>>>()?;
        NormSeries::new(self.preset.dim(), self.preset.name(), times.to_vec(), values, SeriesSource::Oracle)
    }

    /// `∫_{lo ≤ |ξ| ≤ hi} (sin(tf)/f)² |ŵ₁|² dξ`; `hi` may be infinite.
    pub fn shell_norm_sq(&self, t: f64, lo: f64, hi: f64) -> Result<QuadEstimate> {
        check_time(t)?;
        self.shell_integral(lo, hi, t, |r| {
            DispersionSymbol::sine_multiplier(t, r).powi(2) * self.preset.transform(r).powi(2)
        })
    }

    /// `∫_{lo ≤ |ξ| ≤ hi} g(|ξ|) dξ = ω_n ∫_lo^hi g(r) r^{n-1} dr` for an
    /// integrand oscillating like a function of `phase_rate · f(r)`.
    /// Infinite `hi` is truncated at the preset's spectral cutoff.
    pub fn shell_integral<G: Fn(f64) -> f64>(&self, lo: f64, hi: f64, phase_rate: f64, g: G) -> Result<QuadEstimate> {
        let hi = hi.min(self.preset.spectral_cutoff());
        if hi <= lo {
            return Ok(QuadEstimate::ZERO);
        }
        let dim = self.preset.dim();
        let n1 = dim.n() as i32 - 1;
        let est = self
            .integrator
            .integrate_frequency(lo, hi, phase_rate, |r| g(r) * r.powi(n1))?;
        Ok(est.scale(dim.sphere_area()))
    }

    /// `A(ξ) - iB(ξ)` from its spatial definition.
    pub fn ab_remainder(&self, xi: &[f64]) -> Result<Complex64> {
        let dim = self.preset.dim();
        if xi.len() != dim.n() {
            return Err(Error::usage(format!(
                "frequency vector has {} components, preset is {}-dimensional",
                xi.len(),
                dim
            )));
        }
        if xi.iter().any(|x| !x.is_finite()) {
            return Err(Error::domain("frequency vector must be finite"));
        }
        let r = xi.iter().map(|x| x * x).sum::<f64>().sqrt();
        if r == 0.0 {
            return Ok(Complex64::new(0.0, 0.0));
        }
        let extent = self.preset.spatial_extent();
        let width = (extent / 64.0).min(FRAC_PI_2 / r);
        let n1 = dim.n() as i32 - 1;
        let q = RadialIntegrator::new(QuadratureConfig {
            rel_tol: 1e-12,
            ..*self.integrator.config()
        })?;
        let a = q.integrate_radial(0.0, extent, width, |s| {
            radial_kernel_minus_one(dim, r * s) * self.preset.profile(s) * s.powi(n1)
        })?;
        // B(ξ) = ∫ sin(x·ξ) u₁(x) dx vanishes: the integrand is odd for radial u₁.
        Ok(Complex64::new(dim.sphere_area() * a.value, 0.0))
    }

    /// Sampled `sup |A - iB| / (|ξ|^γ ‖u₁‖_{1,γ})` over
    /// [`HOLDER_SAMPLE_RANGE`].
    pub fn holder_constant(&self, gamma: f64) -> Result<HolderEstimate> {
        let norm = self.preset.weighted_l1(gamma)?;
        let dim = self.preset.dim().n();
        let (lo, hi) = HOLDER_SAMPLE_RANGE;
        let mut best = HolderEstimate {
            gamma,
            constant: 0.0,
            argmax: lo,
        };
        if norm == 0.0 {
            return Ok(best);
        }
        for k in 0..HOLDER_SAMPLES {
            let r = lo * (hi / lo).powf(k as f64 / (HOLDER_SAMPLES - 1) as f64);
            let mut xi = vec![0.0; dim];
            xi[0] = r;
            let ratio = self.ab_remainder(&xi)?.norm() / (r.powf(gamma) * norm);
            if ratio > best.constant {
                best.constant = ratio;
                best.argmax = r;
            }
        }
        Ok(best)
    }
}

/// Empirical constant of the Hölder-type remainder bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HolderEstimate {
    pub gamma: f64,
    pub constant: f64,
    pub argmax: f64,
}

fn check_time(t: f64) -> Result<()> {
    if !(t.is_finite() && t >= 0.0) {
        return Err(Error::domain(format!("time must be finite and non-negative, got {t}")));
    }
    Ok(())
}

/// `‖w(t,·)‖²_ξ = ω_n ∫ (sin(tf)/f)² |ŵ₁|² r^{n-1} dr` with its error bound.
pub fn norm_sq_exact(preset: &DataPreset, t: f64, cfg: &QuadratureConfig) -> Result<QuadEstimate> {
    NormOracle::new(preset, *cfg)?.norm_sq(t)
}

/// `P = ∫ u₁ dx`.
pub fn moment_p(preset: &DataPreset) -> f64 {
    preset.moments().mean
}

/// `‖u₁‖_{1,γ}`.
pub fn weighted_l1(preset: &DataPreset, gamma: f64) -> Result<f64> {
    preset.weighted_l1(gamma)
}

/// `A(ξ) - iB(ξ) = ŵ₁(ξ) - P`, computed from the spatial definition.
pub fn ab_remainder(preset: &DataPreset, xi: &[f64]) -> Result<Complex64> {
    NormOracle::new(preset, QuadratureConfig::default())?.ab_remainder(xi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Dimension;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    #[test]
    fn norm_vanishes_at_time_zero() {
        let g = DataPreset::gaussian(Dimension::One, 1.0).unwrap();
        let est = norm_sq_exact(&g, 0.0, &QuadratureConfig::default()).unwrap();
        assert_eq!(est.value, 0.0);
    }

    #[test]
    fn small_time_expansion() {
        // m(t, r) = t + O(t³), so ‖w‖²_ξ ≈ t² ‖ŵ₁‖²_ξ = t² 2π √(π/2)
        let g = DataPreset::gaussian(Dimension::One, 1.0).unwrap();
        let t = 0.01;
        let est = norm_sq_exact(&g, t, &QuadratureConfig::default()).unwrap();
        let expected = t * t * 2.0 * PI * (PI / 2.0).sqrt();
        assert_relative_eq!(expected, 7.874e-4, max_relative = 1e-3);
        assert!(((est.value - expected) / expected).abs() <= 1e-4);
    }

    #[test]
    fn rejects_bad_time() {
        let g = DataPreset::gaussian(Dimension::One, 1.0).unwrap();
        assert!(norm_sq_exact(&g, -1.0, &QuadratureConfig::default()).is_err());
        assert!(norm_sq_exact(&g, f64::NAN, &QuadratureConfig::default()).is_err());
    }

    #[test]
    fn remainder_matches_transform_identity() {
        for dim in [Dimension::One, Dimension::Two, Dimension::Three] {
            let g = DataPreset::gaussian(dim, 1.0).unwrap();
            let p = moment_p(&g);
            for r in [0.0, 1e-3, 0.2, 1.0, 4.0, 30.0] {
                let mut xi = vec![0.0; dim.n()];
                xi[dim.n() - 1] = r;
                let ab = ab_remainder(&g, &xi).unwrap();
                assert_eq!(ab.im, 0.0);
                let expected = g.transform(r) - p;
                assert!((ab.re - expected).abs() <= 1e-10 * p, "{dim} {r}: {} vs {expected}", ab.re);
            }
        }
    }

    #[test]
    fn remainder_rejects_wrong_dimension() {
        let g = DataPreset::gaussian(Dimension::Two, 1.0).unwrap();
        assert!(matches!(ab_remainder(&g, &[1.0]), Err(Error::Usage(_))));
    }

    #[test]
    fn holder_constant_is_finite() {
        let g = DataPreset::gaussian(Dimension::One, 1.0).unwrap();
        let oracle = NormOracle::new(&g, QuadratureConfig::default()).unwrap();
        let m = oracle.holder_constant(1.0).unwrap();
        assert!(m.constant > 0.0 && m.constant < 10.0, "{m:?}");
    }
}
