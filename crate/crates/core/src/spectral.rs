//! Exact-in-time evolution on a periodic box through the Fourier multiplier.
//!
//! The box is `[-R, R)^n` sampled at `N` points per axis, `h = 2R/N`. The
//! forward FFT is unnormalized and the inverse carries `1/N^n`. With the
//! continuous convention `f̂(ξ) = ∫ e^{-ix·ξ} f dx`, sample spectra relate
//! by `f̂(ξ_k) ≈ h^n e^{iξ_k R} F_k`, so
//!
//! * `‖f‖²_x ≈ h^n Σ|f_j|² = h^n N^{-n} Σ|F_k|²`
//! * `‖f̂‖²_ξ ≈ (π/R)^n h^{2n} Σ|F_k|² = (2π)^n ‖f‖²_x`

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::sync::Arc;

use crate::dimension::Dimension;
use crate::error::{Error, Result};
use crate::multiplier::DispersionSymbol;
use crate::preset::DataPreset;

/// Fraction of the Nyquist frequency above which spectral mass counts as
/// under-resolved.
pub const ALIASING_BAND: f64 = 0.9;
/// Largest tolerated share of spectral mass in that band.
pub const ALIASING_MASS_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    dim: Dimension,
    half_width: f64,
    points: usize,
}

impl GridSpec {
    pub fn new(dim: Dimension, half_width: f64, points: usize) -> Result<Self> {
        if !(half_width.is_finite() && half_width > 0.0) {
            return Err(Error::usage(format!("grid half-width must be positive, got {half_width}")));
        }
        if points < 8 || points % 2 != 0 {
            return Err(Error::usage(format!("points per axis must be even and at least 8, got {points}")));
        }
        points
            .checked_pow(dim.n() as u32)
            .filter(|&len| len <= 1 << 28)
            .ok_or_else(|| Error::usage(format!("grid of {points}^{dim} points is too large")))?;
        Ok(Self {
            dim,
            half_width,
            points,
        })
    }

    pub fn dim(&self) -> Dimension {
        self.dim
    }

    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    pub fn points(&self) -> usize {
        self.points
    }

    pub fn spacing(&self) -> f64 {
        2.0 * self.half_width / self.points as f64
    }

    /// Total number of samples `N^n`.
    pub fn len(&self) -> usize {
        self.points.pow(self.dim.n() as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn nyquist(&self) -> f64 {
        PI / self.spacing()
    }

    /// `x_j = -R + j h`.
    pub fn coordinate(&self, j: usize) -> f64 {
        -self.half_width + j as f64 * self.spacing()
    }

    /// Per-axis frequencies in FFT order: `(π/R)·k` for `k = 0, …, N/2−1, −N/2, …, −1`.
    pub fn frequencies(&self) -> Vec<f64> {
        let n = self.points as i64;
        (0..n)
            .map(|k| {
                let k = if k < n / 2 { k } else { k - n };
                PI / self.half_width * k as f64
            })
            .collect()
    }

    fn axis_indices(&self, flat: usize) -> [usize; 3] {
        let n = self.points;
        match self.dim {
            Dimension::One => [flat, 0, 0],
            Dimension::Two => [flat / n, flat % n, 0],
            Dimension::Three => [flat / (n * n), (flat / n) % n, flat % n],
        }
    }

    /// `|ξ|²` at every spectral index.
    fn radius_sq(&self) -> Vec<f64> {
        let xi2: Vec<f64> = self.frequencies().iter().map(|x| x * x).collect();
        let d = self.dim.n();
        (0..self.len())
            .map(|flat| {
                let idx = self.axis_indices(flat);
                idx[..d].iter().map(|&k| xi2[k]).sum()
            })
            .collect()
    }

    /// Largest per-axis `|ξ|` at every spectral index.
    fn axis_max(&self) -> Vec<f64> {
        let xi: Vec<f64> = self.frequencies().iter().map(|x| x.abs()).collect();
        let d = self.dim.n();
        (0..self.len())
            .map(|flat| {
                let idx = self.axis_indices(flat);
                idx[..d].iter().map(|&k| xi[k]).fold(0.0, f64::max)
            })
            .collect()
    }
}

/// A real field sampled on a [`GridSpec`], row-major with the last axis
/// contiguous.
#[derive(Debug, Clone, PartialEq)]
pub struct GridField {
    spec: GridSpec,
    values: Vec<f64>,
}

impl GridField {
    pub fn zeros(spec: GridSpec) -> Self {
        Self {
            spec,
            values: vec![0.0; spec.len()],
        }
    }

    pub fn from_values(spec: GridSpec, values: Vec<f64>) -> Result<Self> {
        if values.len() != spec.len() {
            return Err(Error::usage(format!(
                "expected {} samples for the grid, got {}",
                spec.len(),
                values.len()
            )));
        }
        Ok(Self { spec, values })
    }

    /// Samples `g(x)` at every grid point.
    pub fn from_fn(spec: GridSpec, g: impl Fn(&[f64]) -> f64) -> Self {
        let d = spec.dim.n();
        let mut x = [0.0; 3];
        let values = (0..spec.len())
            .map(|flat| {
                let idx = spec.axis_indices(flat);
                for a in 0..d {
                    x[a] = spec.coordinate(idx[a]);
                }
                g(&x[..d])
            })
            .collect();
        Self { spec, values }
    }

    /// Samples a radial preset profile.
    pub fn from_preset(spec: GridSpec, preset: &DataPreset) -> Result<Self> {
        if preset.dim() != spec.dim {
            return Err(Error::usage(format!(
                "preset is {}-dimensional but the grid is {}-dimensional",
                preset.dim(),
                spec.dim
            )));
        }
        Ok(Self::from_fn(spec, |x| {
            preset.profile(x.iter().map(|v| v * v).sum::<f64>().sqrt())
        }))
    }

    pub fn spec(&self) -> &GridSpec {
        &self.spec
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }
}

/// Unnormalized FFT coefficients of a field.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    spec: GridSpec,
    coeffs: Vec<Complex64>,
}

impl Spectrum {
    pub fn spec(&self) -> &GridSpec {
        &self.spec
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Largest relative violation of `F(−k) = conj F(k)`.
    pub fn conjugate_symmetry_defect(&self) -> f64 {
        let n = self.spec.points;
        let d = self.spec.dim.n();
        let scale = self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
        if scale == 0.0 {
            return 0.0;
        }
        let mut worst: f64 = 0.0;
        for (flat, c) in self.coeffs.iter().enumerate() {
            let idx = self.spec.axis_indices(flat);
            let mirror = idx[..d].iter().fold(0, |acc, &k| acc * n + (n - k) % n);
            worst = worst.max((c - self.coeffs[mirror].conj()).norm());
        }
        worst / scale
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum AliasingPolicy {
    #[default]
    Refuse,
    Warn,
    Ignore,
}

/// Energy split; each part is in squared-`L²` units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EnergyBreakdown {
    /// `½‖u_t‖²`
    pub kinetic: f64,
    /// `½‖∇u_t‖²`
    pub grad_kinetic: f64,
    /// `½‖∇u‖²`
    pub potential: f64,
    pub total: f64,
}

impl EnergyBreakdown {
    fn new(kinetic: f64, grad_kinetic: f64, potential: f64) -> Self {
        Self {
            kinetic,
            grad_kinetic,
            potential,
            total: kinetic + grad_kinetic + potential,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Evolution {
    pub u: GridField,
    pub ut: GridField,
    /// Largest `|Im|` left by the inverse transforms, relative to the
    /// largest `|Re|`.
    pub imaginary_residue: f64,
}

/// FFT plans and multiplier tables for one grid.
#[derive(Clone)]
pub struct SpectralSolver {
    spec: GridSpec,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
    radius_sq: Vec<f64>,
    policy: AliasingPolicy,
}

impl std::fmt::Debug for SpectralSolver {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SpectralSolver")
            .field("spec", &self.spec)
            .field("policy", &self.policy)
            .finish_non_exhaustive()
    }
}

impl SpectralSolver {
    pub fn new(spec: GridSpec, policy: AliasingPolicy) -> Self {
        let mut planner = FftPlanner::new();
        Self {
            spec,
            forward: planner.plan_fft_forward(spec.points),
            inverse: planner.plan_fft_inverse(spec.points),
            radius_sq: spec.radius_sq(),
            policy,
        }
    }

    pub fn spec(&self) -> &GridSpec {
        &self.spec
    }

    fn check_spec(&self, field: &GridField) -> Result<()> {
        if field.spec != self.spec {
            return Err(Error::usage("fields live on different grids"));
        }
        Ok(())
    }

    /// Applies a 1-D transform along every axis in turn.
    fn transform_axes(&self, data: &mut [Complex64], fft: &dyn Fft<f64>) {
        let n = self.spec.points;
        let d = self.spec.dim.n();
        let mut scratch = vec![Complex64::new(0.0, 0.0); fft.get_inplace_scratch_len()];
        for axis in 0..d {
            let stride = n.pow((d - 1 - axis) as u32);
            if stride == 1 {
                fft.process_with_scratch(data, &mut scratch);
                continue;
            }
            let outer = data.len() / (n * stride);
            let mut lines = vec![Complex64::new(0.0, 0.0); data.len()];
            let mut line = 0;
            for o in 0..outer {
                for i in 0..stride {
                    let base = o * n * stride + i;
                    for k in 0..n {
                        lines[line * n + k] = data[base + k * stride];
                    }
                    line += 1;
                }
            }
            fft.process_with_scratch(&mut lines, &mut scratch);
            line = 0;
            for o in 0..outer {
                for i in 0..stride {
                    let base = o * n * stride + i;
                    for k in 0..n {
                        data[base + k * stride] = lines[line * n + k];
                    }
                    line += 1;
                }
            }
        }
    }

    pub fn forward(&self, field: &GridField) -> Result<Spectrum> {
        self.check_spec(field)?;
        let mut coeffs: Vec<Complex64> = field.values.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        self.transform_axes(&mut coeffs, self.forward.as_ref());
        Ok(Spectrum {
            spec: self.spec,
            coeffs,
        })
    }

    /// Inverse transform; returns the real part and the relative size of
    /// the discarded imaginary part.
    pub fn inverse(&self, spectrum: &Spectrum) -> Result<(GridField, f64)> {
        if spectrum.spec != self.spec {
            return Err(Error::usage("spectrum lives on a different grid"));
        }
        let mut data = spectrum.coeffs.clone();
        self.transform_axes(&mut data, self.inverse.as_ref());
        let scale = 1.0 / self.spec.len() as f64;
        let re_max = data.iter().map(|c| c.re.abs()).fold(0.0, f64::max);
        let im_max = data.iter().map(|c| c.im.abs()).fold(0.0, f64::max);
        let residue = if im_max == 0.0 { 0.0 } else { im_max / re_max };
        let values = data.iter().map(|c| c.re * scale).collect();
        Ok((GridField { spec: self.spec, values }, residue))
    }

    /// Share of spectral mass with some `|ξ_axis| > 0.9·Nyquist`.
    pub fn high_band_fraction(&self, spectrum: &Spectrum) -> f64 {
        let cut = ALIASING_BAND * self.spec.nyquist();
        let axis_max = self.spec.axis_max();
        let (mut high, mut total) = (0.0, 0.0);
        for (c, &m) in spectrum.coeffs.iter().zip(&axis_max) {
            let e = c.norm_sqr();
            total += e;
            if m > cut {
                high += e;
            }
        }
        if total == 0.0 {
            0.0
        } else {
            high / total
        }
    }

    fn guard(&self, spectrum: &Spectrum, label: &str) -> Result<()> {
        let frac = self.high_band_fraction(spectrum);
        if frac <= ALIASING_MASS_TOL {
            return Ok(());
        }
        let msg = format!(
            "{label} carries {frac:.3e} of its spectral mass above {ALIASING_BAND}·Nyquist; refine the grid"
        );
        match self.policy {
            AliasingPolicy::Refuse => Err(Error::Resolution(msg)),
            AliasingPolicy::Warn => {
                log::warn!("{msg}");
                Ok(())
            }
            AliasingPolicy::Ignore => Ok(()),
        }
    }

    /// `(u, u_t)` at time `t` from `(u₀, u₁)`.
    pub fn evolve(&self, u0: &GridField, u1: &GridField, t: f64) -> Result<Evolution> {
        if !(t.is_finite() && t >= 0.0) {
            return Err(Error::domain(format!("time must be finite and non-negative, got {t}")));
        }
        let s0 = self.forward(u0)?;
        let s1 = self.forward(u1)?;
        self.guard(&s0, "u0")?;
        self.guard(&s1, "u1")?;
        let mut su = s0.clone();
        let mut sut = s1.clone();
        for (i, &r2) in self.radius_sq.iter().enumerate() {
            let r = r2.sqrt();
            let f = DispersionSymbol::eval(r);
            let (sin, cos) = (t * f).sin_cos();
            let m = DispersionSymbol::sine_multiplier(t, r);
            su.coeffs[i] = s0.coeffs[i] * cos + s1.coeffs[i] * m;
            sut.coeffs[i] = s0.coeffs[i] * (-f * sin) + s1.coeffs[i] * cos;
        }
        let (u, ru) = self.inverse(&su)?;
        let (ut, rut) = self.inverse(&sut)?;
        Ok(Evolution {
            u,
            ut,
            imaginary_residue: ru.max(rut),
        })
    }

    /// `E = ½(‖u_t‖² + ‖∇u_t‖² + ‖∇u‖²)`, computed from the spectra.
    pub fn energy(&self, u: &GridField, ut: &GridField) -> Result<EnergyBreakdown> {
        let su = self.forward(u)?;
        let sut = self.forward(ut)?;
        let w = 0.5 * self.spec.spacing().powi(self.spec.dim.n() as i32) / self.spec.len() as f64;
        let (mut kin, mut gk, mut pot) = (Vec::new(), Vec::new(), Vec::new());
        for (i, &r2) in self.radius_sq.iter().enumerate() {
            let a = sut.coeffs[i].norm_sqr();
            kin.push(a);
            gk.push(r2 * a);
            pot.push(r2 * su.coeffs[i].norm_sqr());
        }
        let sum = |v: &[f64]| w * crate::quadrature::pairwise_sum(v);
        Ok(EnergyBreakdown::new(sum(&kin), sum(&gk), sum(&pot)))
    }

    /// `‖û‖²_ξ = (π/R)^n h^{2n} Σ|F_k|²`.
    pub fn norm_xi_sq(&self, field: &GridField) -> Result<f64> {
        let s = self.forward(field)?;
        let n = self.spec.dim.n() as i32;
        let mags: Vec<f64> = s.coeffs.iter().map(|c| c.norm_sqr()).collect();
        Ok((PI / self.spec.half_width).powi(n) * self.spec.spacing().powi(2 * n) * crate::quadrature::pairwise_sum(&mags))
    }

    /// `P u`, the multiplier `|ξ|²/(1+|ξ|²)`.
    pub fn apply_p(&self, field: &GridField) -> Result<GridField> {
        let mut s = self.forward(field)?;
        for (c, &r2) in s.coeffs.iter_mut().zip(&self.radius_sq) {
            *c *= r2 / (1.0 + r2);
        }
        Ok(self.inverse(&s)?.0)
    }

    /// Solves `u − v = f`, `P u + v = g` by `û = (1+|ξ|²)/(1+2|ξ|²)(f̂ + ĝ)`.
    pub fn resolvent_solve(&self, fdat: &GridField, gdat: &GridField) -> Result<(GridField, GridField)> {
        self.check_spec(gdat)?;
        let sum = GridField {
            spec: self.spec,
            values: fdat.values.iter().zip(&gdat.values).map(|(a, b)| a + b).collect(),
        };
        let mut s = self.forward(&sum)?;
        for (c, &r2) in s.coeffs.iter_mut().zip(&self.radius_sq) {
            *c *= (1.0 + r2) / (1.0 + 2.0 * r2);
        }
        let (u, _) = self.inverse(&s)?;
        let v = GridField {
            spec: self.spec,
            values: u.values.iter().zip(&fdat.values).map(|(a, b)| a - b).collect(),
        };
        Ok((u, v))
    }
}

/// Discrete `‖·‖_{L²_x} = √(h^n Σ v²)`.
pub fn l2_norm(field: &GridField) -> f64 {
    let h = field.spec.spacing().powi(field.spec.dim.n() as i32);
    let sq: Vec<f64> = field.values.iter().map(|v| v * v).collect();
    (h * crate::quadrature::pairwise_sum(&sq)).sqrt()
}

fn check_pair(a: &GridField, b: &GridField) -> Result<SpectralSolver> {
    if a.spec != b.spec {
        return Err(Error::usage("fields live on different grids"));
    }
    Ok(SpectralSolver::new(a.spec, AliasingPolicy::Refuse))
}

pub fn evolve(u0: &GridField, u1: &GridField, t: f64) -> Result<Evolution> {
    check_pair(u0, u1)?.evolve(u0, u1, t)
}

pub fn energy(u: &GridField, ut: &GridField) -> Result<EnergyBreakdown> {
    check_pair(u, ut)?.energy(u, ut)
}

pub fn resolvent_solve(fdat: &GridField, gdat: &GridField) -> Result<(GridField, GridField)> {
    check_pair(fdat, gdat)?.resolvent_solve(fdat, gdat)
}

/// Largest total point count [`default_grid`] will choose.
pub const DEFAULT_GRID_BUDGET: usize = 1 << 22;

/// Default box for data evolved up to `t_max`: half-width from the
/// preset's extent plus the maximal group velocity 1. The point count
/// doubles until the sampled data passes the aliasing guard or the next
/// doubling would exceed [`DEFAULT_GRID_BUDGET`].
pub fn default_grid(preset: &DataPreset, t_max: f64) -> Result<GridSpec> {
    if !(t_max.is_finite() && t_max >= 0.0) {
        return Err(Error::domain(format!("t_max must be finite and non-negative, got {t_max}")));
    }
    let dim = preset.dim();
    let half_width = preset.recommended_half_width(t_max);
    let mut points = match dim {
        Dimension::One => 512,
        Dimension::Two => 64,
        Dimension::Three => 32,
    };
    loop {
        let spec = GridSpec::new(dim, half_width, points)?;
        let solver = SpectralSolver::new(spec, AliasingPolicy::Ignore);
        let spectrum = solver.forward(&GridField::from_preset(spec, preset)?)?;
        let resolved = solver.high_band_fraction(&spectrum) <= ALIASING_MASS_TOL;
        if resolved || (2 * points).pow(dim.n() as u32) > DEFAULT_GRID_BUDGET {
            return Ok(spec);
        }
        points *= 2;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn grid_1d() -> GridSpec {
        GridSpec::new(Dimension::One, 200.0, 4096).unwrap()
    }

    fn rel(a: &GridField, b: &GridField) -> f64 {
        let diff: Vec<f64> = a.values.iter().zip(&b.values).map(|(x, y)| x - y).collect();
        l2_norm(&GridField::from_values(a.spec, diff).unwrap()) / l2_norm(b)
    }

    #[test]
    fn spec_validation() {
        assert!(GridSpec::new(Dimension::One, 1.0, 6).is_err());
        assert!(GridSpec::new(Dimension::One, 1.0, 9).is_err());
        assert!(GridSpec::new(Dimension::One, -1.0, 8).is_err());
        let s = GridSpec::new(Dimension::Two, 3.0, 8).unwrap();
        assert_relative_eq!(s.spacing() * 8.0, 6.0);
        let f = s.frequencies();
        assert_eq!(f[0], 0.0);
        assert_relative_eq!(f[1], PI / 3.0);
        assert_relative_eq!(f[4], -4.0 * PI / 3.0);
    }

    #[test]
    fn l2_norm_cases() {
        let s = GridSpec::new(Dimension::Two, 5.0, 16).unwrap();
        assert_eq!(l2_norm(&GridField::zeros(s)), 0.0);
        let c = GridField::from_fn(s, |_| -3.0);
        assert_relative_eq!(l2_norm(&c), 3.0 * 10.0, max_relative = 1e-14);
        let g = GridField::from_fn(grid_1d(), |x| (-x[0] * x[0]).exp());
        assert_relative_eq!(l2_norm(&g), (PI / 2.0).powf(0.25), max_relative = 1e-10);
    }

    #[test]
    fn axis_transforms_match_naive_dft() {
        let s = GridSpec::new(Dimension::Three, 1.0, 8).unwrap();
        let field = GridField::from_fn(s, |x| (x[0] + 2.0 * x[1] * x[1] - 0.3 * x[2]).sin());
        let solver = SpectralSolver::new(s, AliasingPolicy::Ignore);
        let spec = solver.forward(&field).unwrap();
        let n = 8;
        for &(k0, k1, k2) in &[(0, 0, 0), (1, 2, 3), (7, 0, 5), (4, 4, 4)] {
            let mut acc = Complex64::new(0.0, 0.0);
            for j in 0..s.len() {
                let [a, b, c] = s.axis_indices(j);
                let phase = -2.0 * PI * ((a * k0 + b * k1 + c * k2) as f64) / n as f64;
                acc += Complex64::from_polar(field.values[j], phase);
            }
            let got = spec.coeffs[(k0 * n + k1) * n + k2];
            assert!((got - acc).norm() < 1e-12, "{k0} {k1} {k2}");
        }
        assert!(spec.conjugate_symmetry_defect() < 1e-14);
        let (back, residue) = solver.inverse(&spec).unwrap();
        assert!(rel(&back, &field) < 1e-14);
        assert!(residue < 1e-14);
    }

    #[test]
    fn evolve_identity_and_zero() {
        let s = grid_1d();
        let u0 = GridField::from_fn(s, |x| (-(x[0] - 1.0).powi(2)).exp());
        let u1 = GridField::from_fn(s, |x| (-x[0] * x[0]).exp());
        let ev = evolve(&u0, &u1, 0.0).unwrap();
        assert!(rel(&ev.u, &u0) < 1e-14);
        assert!(rel(&ev.ut, &u1) < 1e-14);
        let z = GridField::zeros(s);
        let ev = evolve(&z, &z, 17.0).unwrap();
        assert!(ev.u.values.iter().chain(&ev.ut.values).all(|&v| v == 0.0));
        assert!(matches!(evolve(&z, &z, -1.0), Err(Error::Domain(_))));
    }

    #[test]
    fn mismatched_grids_are_rejected() {
        let a = GridField::zeros(GridSpec::new(Dimension::One, 1.0, 8).unwrap());
        let b = GridField::zeros(GridSpec::new(Dimension::One, 1.0, 16).unwrap());
        assert!(matches!(evolve(&a, &b, 1.0), Err(Error::Usage(_))));
        assert!(matches!(energy(&a, &b), Err(Error::Usage(_))));
        assert!(matches!(resolvent_solve(&a, &b), Err(Error::Usage(_))));
    }

    #[test]
    fn energy_of_gaussian_velocity() {
        let s = grid_1d();
        let u1 = GridField::from_fn(s, |x| (-x[0] * x[0]).exp());
        let z = GridField::zeros(s);
        let e0 = energy(&z, &u1).unwrap();
        assert_relative_eq!(e0.kinetic, 0.5 * (PI / 2.0).sqrt(), max_relative = 1e-10);
        assert_relative_eq!(e0.grad_kinetic, 0.5 * (PI / 2.0).sqrt(), max_relative = 1e-10);
        assert_eq!(e0.potential, 0.0);
        assert_relative_eq!(e0.total, (PI / 2.0).sqrt(), max_relative = 1e-10);
        let zero = energy(&z, &z).unwrap();
        assert_eq!(zero.total, 0.0);
        for t in [1.0, 10.0, 100.0] {
            let ev = evolve(&z, &u1, t).unwrap();
            let e = energy(&ev.u, &ev.ut).unwrap();
            assert!(((e.total - e0.total) / e0.total).abs() <= 1e-10, "t={t}");
            assert!(e.kinetic >= 0.0 && e.grad_kinetic >= 0.0 && e.potential >= 0.0);
        }
    }

    #[test]
    fn aliasing_guard() {
        let s = GridSpec::new(Dimension::One, 10.0, 64).unwrap();
        let rough = GridField::from_fn(s, |x| if x[0].abs() < 1.0 { 1.0 } else { 0.0 });
        let z = GridField::zeros(s);
        assert!(matches!(
            SpectralSolver::new(s, AliasingPolicy::Refuse).evolve(&z, &rough, 1.0),
            Err(Error::Resolution(_))
        ));
        assert!(SpectralSolver::new(s, AliasingPolicy::Warn).evolve(&z, &rough, 1.0).is_ok());
        assert!(SpectralSolver::new(s, AliasingPolicy::Ignore).evolve(&z, &rough, 1.0).is_ok());
    }

    #[test]
    fn resolvent_trivial_cases() {
        let s = GridSpec::new(Dimension::Two, 4.0, 16).unwrap();
        let z = GridField::zeros(s);
        let (u, v) = resolvent_solve(&z, &z).unwrap();
        assert!(u.values.iter().chain(&v.values).all(|&x| x == 0.0));
        let c = GridField::from_fn(s, |_| 2.5);
        let (u, v) = resolvent_solve(&c, &z).unwrap();
        assert!(u.values.iter().all(|&x| (x - 2.5).abs() < 1e-14));
        assert!(v.values.iter().all(|&x| x.abs() < 1e-14));
    }
}
