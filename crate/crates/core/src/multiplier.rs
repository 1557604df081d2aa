//! Scalar symbols of the linear IMBq equation `u_tt - Δu - Δu_tt = 0`.
//!
//! In frequency space every mode obeys `(1 + r²) w'' + r² w = 0`, so it
//! oscillates at the rate `f(r) = r / √(1 + r²)`. The functions here are the
//! building blocks for both the FFT solver and the quadrature oracle.

use crate::error::{Error, Result};

/// Supremum of `|sin θ / θ|` over `θ ≠ 0`, attained in the limit `θ → 0`.
pub const SINC_SUP: f64 = 1.0;

/// Default `δ₀`: any value in `(0, 1)` works since `sinc(1) ≈ 0.84 > 1/2`.
pub const DEFAULT_DELTA0: f64 = 0.99;

/// Below this magnitude `sinc` switches to its Taylor series.
pub const SINC_SERIES_THRESHOLD: f64 = 1e-4;

/// `sin(x)/x` with the removable singularity filled in.
#[inline]
pub fn sinc(x: f64) -> f64 {
    if x.abs() < SINC_SERIES_THRESHOLD {
        let x2 = x * x;
        1.0 - x2 / 6.0 + x2 * x2 / 120.0
    } else {
        x.sin() / x
    }
}

fn check_radius(r: f64) -> Result<f64> {
    if !r.is_finite() || r < 0.0 {
        return Err(Error::domain(format!(
            "radial frequency must be finite and non-negative, got {r}"
        )));
    }
    Ok(r)
}

fn check_time(t: f64) -> Result<f64> {
    if !t.is_finite() || t < 0.0 {
        return Err(Error::domain(format!(
            "time must be finite and non-negative, got {t}"
        )));
    }
    Ok(t)
}

/// The dispersion symbol `f(r) = r / √(1 + r²)`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct DispersionSymbol;

impl DispersionSymbol {
    /// `f(r)`, unchecked. The large-`r` form is a composition of monotone
    /// operations, so rounded values never decrease.
    #[inline]
    pub fn eval(r: f64) -> f64 {
        if r <= 1.0 {
            r / (1.0 + r * r).sqrt()
        } else {
            1.0 / (1.0 + (1.0 / r).powi(2)).sqrt()
        }
    }

    /// `f'(r) = (1 + r²)^{-3/2}`, unchecked.
    #[inline]
    pub fn derivative(r: f64) -> f64 {
        let q = 1.0 + r * r;
        1.0 / (q * q.sqrt())
    }

    /// Inverse of `f` on `[0, 1)`: `r = s / √(1 - s²)`.
    #[inline]
    pub fn inverse(s: f64) -> f64 {
        s / ((1.0 - s) * (1.0 + s)).sqrt()
    }

    /// `f(r)² = r² / (1 + r²)`, which is also the symbol of `P`.
    #[inline]
    pub fn squared(r: f64) -> f64 {
        if r <= 1.0 {
            let r2 = r * r;
            r2 / (1.0 + r2)
        } else {
            1.0 / (1.0 + (1.0 / r).powi(2))
        }
    }

    /// `sin(t f(r)) / f(r)`, continuous at `r = 0` with value `t`.
    #[inline]
    pub fn sine_multiplier(t: f64, r: f64) -> f64 {
        t * sinc(t * Self::eval(r))
    }

    #[inline]
    pub fn cosine_multiplier(t: f64, r: f64) -> f64 {
        (t * Self::eval(r)).cos()
    }
}

pub fn dispersion_f(r: f64) -> Result<f64> {
    Ok(DispersionSymbol::eval(check_radius(r)?))
}

pub fn dispersion_f_prime(r: f64) -> Result<f64> {
    Ok(DispersionSymbol::derivative(check_radius(r)?))
}

/// Multiplier taking `û₁` to `û(t)`.
pub fn sine_multiplier(t: f64, r: f64) -> Result<f64> {
    let t = check_time(t)?;
    let r = check_radius(r)?;
    Ok(DispersionSymbol::sine_multiplier(t, r))
}

/// Multiplier taking `û₀` to `û(t)` (and `û₁` to `û_t(t)`).
pub fn cosine_multiplier(t: f64, r: f64) -> Result<f64> {
    let t = check_time(t)?;
    let r = check_radius(r)?;
    Ok(DispersionSymbol::cosine_multiplier(t, r))
}

/// Symbol of `P = (I - Δ)^{-1}(-Δ)`: `r² / (1 + r²)`.
pub fn p_symbol(r: f64) -> Result<f64> {
    Ok(DispersionSymbol::squared(check_radius(r)?))
}

/// Number of samples used when checking `sin θ / θ ≥ 1/2` on `(0, δ₀]`.
const DELTA0_SAMPLES: usize = 100_000;

/// True iff `delta0 ∈ (0, 1)` and `sin θ / θ ≥ 1/2` on a dense sample of
/// `(0, delta0]`.
pub fn validate_delta0(delta0: f64) -> bool {
    if !delta0.is_finite() || delta0 <= 0.0 || delta0 >= 1.0 {
        return false;
    }
    (1..=DELTA0_SAMPLES).all(|k| {
        let theta = delta0 * k as f64 / DELTA0_SAMPLES as f64;
        sinc(theta) >= 0.5
    })
}

/// The constants `L` and `δ₀` used throughout the bound chains.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SincConstants {
    pub l: f64,
    pub delta0: f64,
}

impl SincConstants {
    pub fn new(delta0: f64) -> Result<Self> {
        if !validate_delta0(delta0) {
            return Err(Error::domain(format!(
                "delta0 must lie in (0, 1) with sin(θ)/θ ≥ 1/2 on (0, delta0], got {delta0}"
            )));
        }
        Ok(Self {
            l: SINC_SUP,
            delta0,
        })
    }
}

impl Default for SincConstants {
    fn default() -> Self {
        Self {
            l: SINC_SUP,
            delta0: DEFAULT_DELTA0,
        }
    }
}
