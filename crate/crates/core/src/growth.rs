//! Growth-regime classification of `t ↦ ‖w(t,·)‖²_ξ`.
//!
//! The squared norm is fitted by ordinary least squares against the three
//! regressors `t`, `log t` and `1`, so the regimes are nested linear models.

use serde::{Deserialize, Serialize};
use std::fmt;

use crate::dimension::Dimension;
use crate::error::{Error, Result};
use crate::preset::DataPreset;

/// Minimum series length.
pub const MIN_SERIES_LEN: usize = 8;
/// The constant model is preferred when its relative residual
/// `‖y − ȳ‖/‖y‖` does not exceed this.
pub const CONSTANT_MODEL_TOL: f64 = 1e-2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SeriesSource {
    Oracle,
    Solver,
    External,
}

impl fmt::Display for SeriesSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SeriesSource::Oracle => "oracle",
            SeriesSource::Solver => "solver",
            SeriesSource::External => "external",
        })
    }
}

impl std::str::FromStr for SeriesSource {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "oracle" => Ok(SeriesSource::Oracle),
            "solver" => Ok(SeriesSource::Solver),
            "external" => Ok(SeriesSource::External),
            other => Err(Error::usage(format!("unknown series source `{other}`"))),
        }
    }
}

/// `count` log-spaced times from `lo` to `hi` inclusive.
pub fn log_spaced(lo: f64, hi: f64, count: usize) -> Result<Vec<f64>> {
    if !(lo.is_finite() && hi.is_finite() && lo > 0.0 && hi > lo) {
        return Err(Error::usage(format!("log grid needs 0 < lo < hi < inf, got [{lo}, {hi}]")));
    }
    if count < 2 {
        return Err(Error::usage(format!("log grid needs at least 2 points, got {count}")));
    }
    let (a, b) = (lo.ln(), hi.ln());
    let step = (b - a) / (count - 1) as f64;
    let mut times: Vec<f64> = (0..count).map(|k| (a + step * k as f64).exp()).collect();
    times[0] = lo;
    times[count - 1] = hi;
    Ok(times)
}

/// Squared norms sampled at increasing times.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormSeries {
    pub dim: Dimension,
    pub preset: String,
    pub times: Vec<f64>,
    pub values_sq: Vec<f64>,
    pub source: SeriesSource,
}

impl NormSeries {
    pub fn new(
        dim: Dimension,
        preset: impl Into<String>,
        times: Vec<f64>,
        values_sq: Vec<f64>,
        source: SeriesSource,
    ) -> Result<Self> {
        let series = Self {
            dim,
            preset: preset.into(),
            times,
            values_sq,
            source,
        };
        series.validate()?;
        Ok(series)
    }

    pub fn validate(&self) -> Result<()> {
        if self.times.len() != self.values_sq.len() {
            return Err(Error::usage(format!(
                "series has {} times but {} values",
                self.times.len(),
                self.values_sq.len()
            )));
        }
        if self.times.len() < MIN_SERIES_LEN {
            return Err(Error::usage(format!(
                "series needs at least {MIN_SERIES_LEN} points, got {}",
                self.times.len()
            )));
        }
        if self.times.iter().any(|t| !(t.is_finite() && *t > 0.0)) {
            return Err(Error::usage("series times must be positive and finite"));
        }
        if self.times.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::usage("series times must be strictly increasing"));
        }
        if self.values_sq.iter().any(|v| !(v.is_finite() && *v >= 0.0)) {
            return Err(Error::usage("squared norms must be finite and non-negative"));
        }
        Ok(())
    }

    /// Points with `lo ≤ t ≤ hi`.
    pub fn window(&self, lo: f64, hi: f64) -> (Vec<f64>, Vec<f64>) {
        self.times
            .iter()
            .zip(&self.values_sq)
            .filter(|(t, _)| **t >= lo && **t <= hi)
            .map(|(t, v)| (*t, *v))
            .unzip()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GrowthKind {
    LinearInT,
    LinearInLogT,
    Constant,
}

impl GrowthKind {
    pub const ALL: [GrowthKind; 3] = [GrowthKind::LinearInT, GrowthKind::LinearInLogT, GrowthKind::Constant];

    /// The regressor `g(t)`.
    pub fn regressor(self, t: f64) -> f64 {
        match self {
            GrowthKind::LinearInT => t,
            GrowthKind::LinearInLogT => t.ln(),
            GrowthKind::Constant => 1.0,
        }
    }

    /// Regime proved for the squared norm in dimension `n`.
    pub fn expected(dim: Dimension) -> Self {
        match dim {
            Dimension::One => GrowthKind::LinearInT,
            Dimension::Two => GrowthKind::LinearInLogT,
            Dimension::Three => GrowthKind::Constant,
        }
    }
}

impl fmt::Display for GrowthKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GrowthKind::LinearInT => "linear_in_t",
            GrowthKind::LinearInLogT => "linear_in_log_t",
            GrowthKind::Constant => "constant",
        })
    }
}

/// `values_sq ≈ c·g(t) + b`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GrowthModel {
    pub kind: GrowthKind,
    pub coefficient: f64,
    pub intercept: f64,
    /// Centered for the linear models, uncentered (about zero) for the
    /// constant model.
    pub r_squared: f64,
    pub residual_norm: f64,
    /// `residual_norm / ‖y‖`.
    pub relative_residual: f64,
}

/// Residuals below this fraction of `‖y‖` are rounding noise of an exact fit.
const EXACT_FIT_TOL: f64 = 1e-12;

fn clamp_r2(ss_res: f64, ss_tot: f64) -> f64 {
    if ss_tot == 0.0 {
        return 1.0;
    }
    (1.0 - ss_res / ss_tot).clamp(0.0, 1.0)
}

fn fit_one(kind: GrowthKind, times: &[f64], ys: &[f64]) -> GrowthModel {
    let n = ys.len() as f64;
    let y_norm = ys.iter().map(|y| y * y).sum::<f64>().sqrt();
    let ybar = ys.iter().sum::<f64>() / n;
    let (c, b, r2_ref) = match kind {
        GrowthKind::Constant => (ybar, 0.0, y_norm * y_norm),
        _ => {
            let xs: Vec<f64> = times.iter().map(|&t| kind.regressor(t)).collect();
            let xbar = xs.iter().sum::<f64>() / n;
            let sxx: f64 = xs.iter().map(|x| (x - xbar).powi(2)).sum();
            let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - xbar) * (y - ybar)).sum();
            let c = sxy / sxx;
            let ss_tot: f64 = ys.iter().map(|y| (y - ybar).powi(2)).sum();
            (c, ybar - c * xbar, ss_tot)
        }
    };
    let ss_res: f64 = times
        .iter()
        .zip(ys)
        .map(|(&t, y)| (y - c * kind.regressor(t) - b).powi(2))
        .sum();
    let residual_norm = ss_res.sqrt();
    let floor = (EXACT_FIT_TOL * y_norm).powi(2);
    let ss_res_eff = if ss_res <= floor { 0.0 } else { ss_res };
    let r2_ref_eff = if r2_ref <= floor { 0.0 } else { r2_ref };
    GrowthModel {
        kind,
        coefficient: c,
        intercept: b,
        r_squared: clamp_r2(ss_res_eff, r2_ref_eff),
        residual_norm,
        relative_residual: if y_norm == 0.0 { 0.0 } else { residual_norm / y_norm },
    }
}

/// Fits all three models on the window `[t_min, t_max]` and ranks them.
///
/// The constant model wins when its relative residual is at most
/// [`CONSTANT_MODEL_TOL`]; otherwise the linear model with the smaller
/// residual does. The remaining models follow by residual.
pub fn fit_growth(series: &NormSeries, t_min: f64, t_max: f64) -> Result<Vec<GrowthModel>> {
    series.validate()?;
    let (times, ys) = series.window(t_min, t_max);
    if times.len() < 3 {
        return Err(Error::usage(format!(
            "fit window [{t_min}, {t_max}] holds {} points, need at least 3",
            times.len()
        )));
    }
    let mut models: Vec<GrowthModel> = GrowthKind::ALL.iter().map(|&k| fit_one(k, &times, &ys)).collect();
    // Rounding-level residuals tie and fall back to the fixed kind order.
    let key = |m: &GrowthModel| {
        let r = if m.relative_residual <= EXACT_FIT_TOL { 0.0 } else { m.residual_norm };
        (r, GrowthKind::ALL.iter().position(|k| *k == m.kind))
    };
    models.sort_by(|a, b| {
        let (ra, ia) = key(a);
        let (rb, ib) = key(b);
        ra.total_cmp(&rb).then(ia.cmp(&ib))
    });
    if let Some(i) = models
        .iter()
        .position(|m| m.kind == GrowthKind::Constant && m.relative_residual <= CONSTANT_MODEL_TOL)
    {
        let constant = models.remove(i);
        models.insert(0, constant);
    } else if models[0].kind == GrowthKind::Constant {
        let constant = models.remove(0);
        models.insert(1, constant);
    }
    Ok(models)
}

/// Data factors that normalize the empirical envelope constants.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DataFactors {
    /// `P²`.
    pub lower: f64,
    /// `I_{0,n}² = (‖u₁‖ + ‖u₁‖₁)²` for `n = 1, 2`, and `‖u₁‖² + ‖u₁‖₁²`
    /// for `n = 3`.
    pub upper: f64,
}

impl DataFactors {
    pub fn from_preset(preset: &DataPreset) -> Self {
        let m = preset.moments();
        let upper = match preset.dim() {
            Dimension::Three => m.l2_norm.powi(2) + m.l1_norm.powi(2),
            _ => (m.l2_norm + m.l1_norm).powi(2),
        };
        Self {
            lower: m.mean.powi(2),
            upper,
        }
    }
}

/// Envelope constants of `values_sq / g(t)` over the fit window.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SandwichConstants {
    pub kind: GrowthKind,
    /// `inf values_sq / g(t)`; zero when the lower bound is vacuous.
    pub c_low: f64,
    /// `sup values_sq / g(t)`.
    pub c_high: f64,
    /// `c_low / P²`.
    pub c_low_normalized: f64,
    /// `c_high / I_{0,n}²`.
    pub c_high_normalized: f64,
    pub factors: DataFactors,
    /// Set when `P = 0` and a growth regime was requested.
    pub lower_vacuous: bool,
}

impl SandwichConstants {
    pub fn ratio(&self) -> f64 {
        self.c_high / self.c_low
    }
}

pub fn sandwich_constants(
    series: &NormSeries,
    factors: DataFactors,
    kind: GrowthKind,
    t_min: f64,
    t_max: f64,
) -> Result<SandwichConstants> {
    series.validate()?;
    let (times, ys) = series.window(t_min, t_max);
    let ratios: Vec<f64> = times
        .iter()
        .zip(&ys)
        .filter(|(t, _)| kind.regressor(**t) > 0.0)
        .map(|(t, y)| y / kind.regressor(*t))
        .collect();
    if ratios.is_empty() {
        return Err(Error::usage("sandwich window holds no point with a positive regressor"));
    }
    let mut c_low = ratios.iter().copied().fold(f64::INFINITY, f64::min);
    let c_high = ratios.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let lower_vacuous = factors.lower == 0.0 && kind != GrowthKind::Constant;
    if lower_vacuous {
        c_low = 0.0;
    }
    let norm = |c: f64, f: f64| if f == 0.0 { 0.0 } else { c / f };
    Ok(SandwichConstants {
        kind,
        c_low,
        c_high,
        c_low_normalized: norm(c_low, factors.lower),
        c_high_normalized: norm(c_high, factors.upper),
        factors,
        lower_vacuous,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn log_times(lo: f64, hi: f64, count: usize) -> Vec<f64> {
        (0..count)
            .map(|k| lo * (hi / lo).powf(k as f64 / (count - 1) as f64))
            .collect()
    }

    fn series(values: impl Fn(f64) -> f64) -> NormSeries {
        let times = log_times(1e2, 1e6, 64);
        let values_sq = times.iter().map(|&t| values(t)).collect();
        NormSeries::new(Dimension::One, "synthetic", times, values_sq, SeriesSource::External).unwrap()
    }

    #[test]
    fn classifies_linear_in_t() {
        let m = fit_growth(&series(|t| 3.0 * t), 0.0, f64::INFINITY).unwrap();
        assert_eq!(m[0].kind, GrowthKind::LinearInT);
        assert_relative_eq!(m[0].coefficient, 3.0, max_relative = 1e-12);
        assert!((m[0].r_squared - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn classifies_linear_in_log_t() {
        let m = fit_growth(&series(|t| 2.0 * t.ln() + 1.0), 0.0, f64::INFINITY).unwrap();
        assert_eq!(m[0].kind, GrowthKind::LinearInLogT);
        assert_relative_eq!(m[0].coefficient, 2.0, max_relative = 1e-12);
        assert_relative_eq!(m[0].intercept, 1.0, max_relative = 1e-10);
        assert!((m[0].r_squared - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn classifies_constant() {
        let m = fit_growth(&series(|_| 5.0), 0.0, f64::INFINITY).unwrap();
        assert_eq!(m[0].kind, GrowthKind::Constant);
        assert_relative_eq!(m[0].coefficient, 5.0, max_relative = 1e-14);
        assert!((m[0].r_squared - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn rejects_invalid_series() {
        let short = NormSeries::new(Dimension::One, "x", vec![1.0, 2.0], vec![1.0, 2.0], SeriesSource::External);
        assert!(matches!(short, Err(Error::Usage(_))));
        let times = vec![1.0, 2.0, 3.0, 3.0, 5.0, 6.0, 7.0, 8.0];
        let bad = NormSeries::new(Dimension::One, "x", times, vec![1.0; 8], SeriesSource::External);
        assert!(matches!(bad, Err(Error::Usage(_))));
        let s = series(|t| t);
        assert!(fit_growth(&s, 1e7, 1e8).is_err());
    }

    #[test]
    fn sandwich_brackets_and_vacuous_lower() {
        let s = series(|t| 3.0 * t + 50.0);
        let f = DataFactors { lower: 2.0, upper: 4.0 };
        let c = sandwich_constants(&s, f, GrowthKind::LinearInT, 0.0, f64::INFINITY).unwrap();
        assert!(0.0 < c.c_low && c.c_low <= c.c_high);
        assert_relative_eq!(c.c_high, 3.5, max_relative = 1e-12);
        assert_relative_eq!(c.c_low_normalized, c.c_low / 2.0);
        let zero = DataFactors { lower: 0.0, upper: 4.0 };
        let c = sandwich_constants(&s, zero, GrowthKind::LinearInT, 0.0, f64::INFINITY).unwrap();
        assert!(c.lower_vacuous && c.c_low == 0.0 && c.c_high.is_finite());
    }

    proptest! {
        #[test]
        fn scale_equivariance(lambda in 1e-3f64..1e3, a in 0.1f64..10.0, b in 0.0f64..100.0, which in 0usize..3) {
            let f = move |t: f64| match which {
                0 => a * t + b,
                1 => a * t.ln() + b,
                _ => a + b,
            };
            let base = fit_growth(&series(f), 0.0, f64::INFINITY).unwrap();
            let scaled = fit_growth(&series(move |t| lambda * f(t)), 0.0, f64::INFINITY).unwrap();
            for (m, s) in base.iter().zip(&scaled) {
                prop_assert_eq!(m.kind, s.kind);
                let scale = lambda * (m.coefficient.abs() + m.intercept.abs() + a + b);
                prop_assert!((s.coefficient - lambda * m.coefficient).abs() <= 1e-9 * scale);
                prop_assert!((s.r_squared - m.r_squared).abs() <= 1e-9);
            }
        }
    }
}
