//! Shipped initial velocities `u₁` with radial Fourier profiles and moments.

use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::fmt;
use std::path::Path;
use std::sync::Arc;

use crate::dimension::Dimension;
use crate::error::{Error, Result};
use crate::quadrature::{QuadratureConfig, RadialIntegrator};
use crate::transform::{cached_table, RadialTransformer, TransformTable};

/// Sampling step of the tabulated bump transform.
pub const BUMP_TABLE_STEP: f64 = 0.02;
/// Radius beyond which the bump transform is treated as zero.
pub const BUMP_TABLE_R_MAX: f64 = 400.0;

/// Below this radius the bump's `ŵ₁ − P` comes from its moment series.
const DEFICIT_SERIES_RADIUS: f64 = 2.0;
/// Terms kept; at `r = 2` the last one is below `1e-25` relative to `P`.
const DEFICIT_SERIES_TERMS: usize = 16;
const BUMP_PANELS: usize = 160;

/// Which closed-form profile a preset uses.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PresetKind {
    /// `e^{-a|x|²}`.
    Gaussian { a: f64 },
    /// `exp(-1/(1-|x|²))` on `|x| < 1`, zero outside.
    Bump,
    /// `e^{-a|x|²} - (b/a)^{n/2} e^{-b|x|²}`, whose integral vanishes.
    DifferenceOfGaussians { a: f64, b: f64 },
    /// `u₁ ≡ 0`.
    Zero,
}

impl PresetKind {
    /// Parses `gaussian`, `gaussian:a=0.5`, `bump`, `dog`, `dog:a=1,b=0.25`
    /// or `zero`.
    pub fn parse(spec: &str) -> Result<Self> {
        let (name, params) = spec.split_once(':').unwrap_or((spec, ""));
        let mut a = None;
        let mut b = None;
        for kv in params.split(',').filter(|s| !s.trim().is_empty()) {
            let (k, v) = kv
                .split_once('=')
                .ok_or_else(|| Error::usage(format!("preset parameter {kv:?} is not key=value")))?;
            let v: f64 = v
                .trim()
                .parse()
                .map_err(|_| Error::usage(format!("preset parameter {kv:?} is not a number")))?;
            match k.trim() {
                "a" => a = Some(v),
                "b" => b = Some(v),
                other => return Err(Error::usage(format!("unknown preset parameter {other:?}"))),
            }
        }
        let kind = match name.trim().to_ascii_lowercase().as_str() {
            "gaussian" | "gauss" => PresetKind::Gaussian { a: a.unwrap_or(1.0) },
            "bump" => PresetKind::Bump,
            "dog" | "difference_of_gaussians" => PresetKind::DifferenceOfGaussians {
                a: a.unwrap_or(1.0),
                b: b.unwrap_or(0.25),
            },
            "zero" => PresetKind::Zero,
            other => return Err(Error::usage(format!("unknown preset {other:?}"))),
        };
        kind.validate()?;
        Ok(kind)
    }

    fn validate(&self) -> Result<()> {
        let positive = |v: f64, what: &str| {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(Error::domain(format!("{what} must be positive and finite, got {v}")))
            }
        };
        match *self {
            PresetKind::Gaussian { a } => positive(a, "gaussian width parameter a"),
            PresetKind::DifferenceOfGaussians { a, b } => {
                positive(a, "parameter a")?;
                positive(b, "parameter b")?;
                if a == b {
                    return Err(Error::domain("difference of gaussians needs a != b"));
                }
                Ok(())
            }
            PresetKind::Bump | PresetKind::Zero => Ok(()),
        }
    }
}

impl fmt::Display for PresetKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PresetKind::Gaussian { a } => write!(f, "gaussian:a={a}"),
            PresetKind::Bump => write!(f, "bump"),
            PresetKind::DifferenceOfGaussians { a, b } => write!(f, "dog:a={a},b={b}"),
            PresetKind::Zero => write!(f, "zero"),
        }
    }
}

/// Integral moments of `u₁` in physical space.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Moments {
    /// `P = ∫ u₁ dx`.
    pub mean: f64,
    /// `‖u₁‖₁`.
    pub l1_norm: f64,
    /// `‖u₁‖₂` (spatial).
    pub l2_norm: f64,
}

/// A radial initial velocity with its Fourier profile and moments.
#[derive(Debug, Clone)]
pub struct DataPreset {
    kind: PresetKind,
    dim: Dimension,
    moments: Moments,
    table: Option<Arc<TransformTable>>,
    /// Coefficients of `ŵ₁(r) − P` in powers of `r²`, starting at `r²`.
    deficit_series: Vec<f64>,
}

fn moment_integrator() -> RadialIntegrator {
    RadialIntegrator::new(QuadratureConfig {
        rel_tol: 1e-12,
        ..QuadratureConfig::default()
    })
    .expect("static quadrature configuration is valid")
}

fn bump_profile(r: f64) -> f64 {
    if r >= 1.0 {
        0.0
    } else {
        (-1.0 / ((1.0 - r) * (1.0 + r))).exp()
    }
}

impl DataPreset {
    /// Builds a preset. The bump transform is tabulated on first use and
    /// cached under `cache_dir` when given.
    pub fn new(kind: PresetKind, dim: Dimension, cache_dir: Option<&Path>) -> Result<Self> {
        kind.validate()?;
        let n = dim.n() as f64;
        let mut preset = Self {
            kind,
            dim,
            moments: Moments {
                mean: 0.0,
                l1_norm: 0.0,
                l2_norm: 0.0,
            },
            table: None,
            deficit_series: Vec::new(),
        };
        preset.moments = match kind {
            PresetKind::Gaussian { a } => {
                let mass = (PI / a).powf(n / 2.0);
                Moments {
                    mean: mass,
                    l1_norm: mass,
                    l2_norm: (PI / (2.0 * a)).powf(n / 4.0),
                }
            }
            PresetKind::DifferenceOfGaussians { a, b } => {
                let k = (b / a).powf(n / 2.0);
                let l2_sq = (PI / (2.0 * a)).powf(n / 2.0) - 2.0 * k * (PI / (a + b)).powf(n / 2.0)
                    + k * k * (PI / (2.0 * b)).powf(n / 2.0);
                Moments {
                    mean: 0.0,
                    l1_norm: preset.spatial_integral(|_| 1.0, true)?,
                    l2_norm: l2_sq.sqrt(),
                }
            }
            PresetKind::Bump => {
                let mass = preset.spatial_integral(|_| 1.0, false)?;
                let l2_sq = preset.radial_quadrature(|r| bump_profile(r).powi(2))?;
                Moments {
                    mean: mass,
                    l1_norm: mass,
                    l2_norm: l2_sq.sqrt(),
                }
            }
            PresetKind::Zero => preset.moments,
        };
        if kind == PresetKind::Bump {
            preset.deficit_series = preset.kernel_series()?;
            preset.table = Some(cached_table("bump", dim, BUMP_TABLE_STEP, BUMP_TABLE_R_MAX, cache_dir, || {
                let coarse = RadialTransformer::new(dim, bump_profile, 1.0, BUMP_PANELS, 16);
                let fine = RadialTransformer::new(dim, bump_profile, 1.0, 2 * BUMP_PANELS, 16);
                TransformTable::build("bump", &coarse, &fine, BUMP_TABLE_STEP, BUMP_TABLE_R_MAX)
            })?);
        }
        Ok(preset)
    }

    pub fn gaussian(dim: Dimension, a: f64) -> Result<Self> {
        Self::new(PresetKind::Gaussian { a }, dim, None)
    }

    pub fn bump(dim: Dimension, cache_dir: Option<&Path>) -> Result<Self> {
        Self::new(PresetKind::Bump, dim, cache_dir)
    }

    pub fn difference_of_gaussians(dim: Dimension, a: f64, b: f64) -> Result<Self> {
        Self::new(PresetKind::DifferenceOfGaussians { a, b }, dim, None)
    }

    pub fn zero(dim: Dimension) -> Self {
        Self {
            kind: PresetKind::Zero,
            dim,
            moments: Moments {
                mean: 0.0,
                l1_norm: 0.0,
                l2_norm: 0.0,
            },
            table: None,
            deficit_series: Vec::new(),
        }
    }

    pub fn kind(&self) -> PresetKind {
        self.kind
    }

    pub fn dim(&self) -> Dimension {
        self.dim
    }

    pub fn name(&self) -> String {
        self.kind.to_string()
    }

    pub fn moments(&self) -> Moments {
        self.moments
    }

    pub fn table(&self) -> Option<&TransformTable> {
        self.table.as_deref()
    }

    /// `u₁(x)` as a function of `|x|`.
    pub fn profile(&self, r: f64) -> f64 {
        match self.kind {
            PresetKind::Gaussian { a } => (-a * r * r).exp(),
            PresetKind::Bump => bump_profile(r),
            PresetKind::DifferenceOfGaussians { a, b } => {
                let k = (b / a).powf(self.dim.n() as f64 / 2.0);
                (-a * r * r).exp() - k * (-b * r * r).exp()
            }
            PresetKind::Zero => 0.0,
        }
    }

    /// `ŵ₁(ξ)` as a function of `|ξ|` (real, since every preset is radial).
    pub fn transform(&self, r: f64) -> f64 {
        let n = self.dim.n() as f64;
        match self.kind {
            PresetKind::Gaussian { a } => (PI / a).powf(n / 2.0) * (-r * r / (4.0 * a)).exp(),
            PresetKind::DifferenceOfGaussians { a, b } => {
                (PI / a).powf(n / 2.0) * ((-r * r / (4.0 * a)).exp() - (-r * r / (4.0 * b)).exp())
            }
            PresetKind::Bump => self.table.as_ref().map_or(0.0, |t| t.value(r)),
            PresetKind::Zero => 0.0,
        }
    }

    /// `ŵ₁(r) - P`, free of cancellation near `r = 0` for closed-form presets.
    pub fn transform_deficit(&self, r: f64) -> f64 {
        match self.kind {
            PresetKind::Gaussian { a } => self.moments.mean * (-r * r / (4.0 * a)).exp_m1(),
            PresetKind::DifferenceOfGaussians { .. } | PresetKind::Zero => self.transform(r),
            PresetKind::Bump if r <= DEFICIT_SERIES_RADIUS => {
                let x = r * r;
                x * self.deficit_series.iter().rev().fold(0.0, |acc, c| acc * x + c)
            }
            PresetKind::Bump => self.transform(r) - self.moments.mean,
        }
    }

    /// `ŵ₁(r) − P = Σ_{k≥1} (−1)^k Γ(n/2) / (4^k k! Γ(k+n/2)) μ_{2k} r^{2k}`
    /// with `μ_{2k} = ∫ |x|^{2k} u₁ dx`, the expansion of the radial kernel.
    fn kernel_series(&self) -> Result<Vec<f64>> {
        let half_n = self.dim.n() as f64 / 2.0;
        let g = libm::tgamma(half_n);
        (1..=DEFICIT_SERIES_TERMS)
            .map(|k| {
                let mu = self.radial_quadrature(|r| r.powi(2 * k as i32) * self.profile(r))?;
                let kf = k as f64;
                let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
                let denom = 4f64.powi(k as i32) * libm::tgamma(kf + 1.0) * libm::tgamma(kf + half_n);
                Ok(sign * g * mu / denom)
            })
            .collect()
    }

    /// Radius beyond which `u₁` is negligible (or zero).
    pub fn spatial_extent(&self) -> f64 {
        match self.kind {
            PresetKind::Gaussian { a } => (80.0 / a).sqrt(),
            PresetKind::DifferenceOfGaussians { a, b } => (80.0 / a.min(b)).sqrt(),
            PresetKind::Bump | PresetKind::Zero => 1.0,
        }
    }

    /// Frequency radius beyond which `|ŵ₁|²(1+r²)r^{n-1}` is negligible.
    pub fn spectral_cutoff(&self) -> f64 {
        match self.kind {
            PresetKind::Gaussian { a } => (160.0 * a).sqrt() + 1.0,
            PresetKind::DifferenceOfGaussians { a, b } => (160.0 * a.max(b)).sqrt() + 1.0,
            PresetKind::Bump => BUMP_TABLE_R_MAX,
            PresetKind::Zero => 1.0,
        }
    }

    /// Radius used to size a box for solving up to `t_max`: the data extent
    /// plus the distance covered at the maximal group velocity 1.
    pub fn recommended_half_width(&self, t_max: f64) -> f64 {
        self.spatial_extent() + t_max + 10.0
    }

    /// `‖ŵ₁‖²_ξ = (2π)^n ‖u₁‖²`.
    pub fn transform_l2_sq(&self) -> f64 {
        self.dim.plancherel_factor() * self.moments.l2_norm.powi(2)
    }

    /// `‖u₁‖_{1,γ} = ∫ (1 + |x|^γ)|u₁(x)| dx` for `γ ∈ (0, 1]`.
    pub fn weighted_l1(&self, gamma: f64) -> Result<f64> {
        if !(gamma > 0.0 && gamma <= 1.0) {
            return Err(Error::domain(format!("gamma must lie in (0, 1], got {gamma}")));
        }
        match self.kind {
            PresetKind::Gaussian { a } => {
                let n = self.dim.n() as f64;
                let tail = self.dim.sphere_area() * libm::tgamma((n + gamma) / 2.0)
                    / (2.0 * a.powf((n + gamma) / 2.0));
                Ok(self.moments.l1_norm + tail)
            }
            PresetKind::Zero => Ok(0.0),
            PresetKind::DifferenceOfGaussians { .. } => {
                self.spatial_integral(|r| 1.0 + r.powf(gamma), true)
            }
            PresetKind::Bump => self.spatial_integral(|r| 1.0 + r.powf(gamma), false),
        }
    }

    /// `ω_n ∫ weight(r) |u₁(r)| r^{n-1} dr`, split at the sign change of the
    /// profile when `has_sign_change`.
    fn spatial_integral<W: Fn(f64) -> f64>(&self, weight: W, has_sign_change: bool) -> Result<f64> {
        let extent = self.spatial_extent();
        let q = moment_integrator();
        let n1 = self.dim.n() as i32 - 1;
        let integrand = |r: f64| weight(r) * self.profile(r).abs() * r.powi(n1);
        let width = extent / 64.0;
        let est = match (has_sign_change, self.kind) {
            (true, PresetKind::DifferenceOfGaussians { a, b }) => {
                let k = (b / a).powf(self.dim.n() as f64 / 2.0);
                let r0 = ((1.0 / k).ln() / (a - b)).sqrt();
                q.integrate_radial(0.0, r0, width, integrand)?
                    .combine(q.integrate_radial(r0, extent, width, integrand)?)
            }
            _ => q.integrate_radial(0.0, extent, width, integrand)?,
        };
        Ok(self.dim.sphere_area() * est.value)
    }

    fn radial_quadrature<G: Fn(f64) -> f64>(&self, g: G) -> Result<f64> {
        let extent = self.spatial_extent();
        let n1 = self.dim.n() as i32 - 1;
        let est = moment_integrator().integrate_radial(0.0, extent, extent / 64.0, |r| g(r) * r.powi(n1))?;
        Ok(self.dim.sphere_area() * est.value)
    }
}
