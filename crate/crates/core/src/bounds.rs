//! Machine-checkable realizations of the lower, upper and boundedness
//! estimates for `‖w(t,·)‖²_ξ`.
//!
//! Every inequality is emitted as a [`BoundCheck`]. Quadratures reuse the
//! oracle's panel machinery restricted to frequency shells. Where the
//! estimates only assert "some constant", the verifier reports an empirical
//! constant over a time sweep and checks that it is positive and stable.

use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::f64::consts::{E, SQRT_2};

use crate::dimension::Dimension;
use crate::error::{Error, Result};
use crate::multiplier::{validate_delta0, DispersionSymbol, DEFAULT_DELTA0, SINC_SUP};
use crate::oracle::{HolderEstimate, NormOracle};
use crate::preset::DataPreset;
use crate::quadrature::{QuadEstimate, QuadratureConfig, RadialIntegrator};

/// Radius `1/√3` of the ball where `f ≤ ½`.
pub const RADIUS_M0: f64 = 0.577_350_269_189_625_8;

/// Beyond this radius the trick weight `e^{-r²}` is below `1e-27`.
const TRICK_CUTOFF: f64 = 8.0;

/// Boundary-term constants: `|K₁(t)| ≤ C₁ + C₂ t` for `t ≥ 1`.
pub const K1_CONST: f64 = 2.0 * SQRT_2 / E;
pub const K1_SLOPE: f64 = 2.0 * SQRT_2;
/// `|K₂,₂| ≤ 3√2` and `|K₂,₁| ≤ 6√2 t`.
pub const K22_CONST: f64 = 3.0 * SQRT_2;
pub const K21_SLOPE: f64 = 6.0 * SQRT_2;

/// Frequency radii that split `‖w‖²_ξ` into shells at time `t`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ThresholdSet {
    pub t: f64,
    pub delta0: f64,
    /// `δ₀/√(t² − δ₀²)`; also the radius of `L₀`.
    pub a_t: f64,
    /// `δ₀/√(t − δ₀²)`, when `t > δ₀²`.
    pub b_t: Option<f64>,
    /// `δ₀/√(log t − δ₀²)`, when `log t > δ₀²`.
    pub c_t: Option<f64>,
    pub radius_m0: f64,
}

impl ThresholdSet {
    pub fn new(t: f64, delta0: f64) -> Result<Self> {
        check_delta0(delta0)?;
        if !(t.is_finite() && t > delta0) {
            return Err(Error::domain(format!(
                "the low-frequency ball needs t > delta0 = {delta0}, got t = {t}"
            )));
        }
        let d2 = delta0 * delta0;
        let radius = |q: f64| (q > 0.0).then(|| delta0 / q.sqrt());
        Ok(Self {
            t,
            delta0,
            a_t: delta0 / (t * t - d2).sqrt(),
            b_t: radius(t - d2),
            c_t: radius(t.ln() - d2),
            radius_m0: RADIUS_M0,
        })
    }

    pub fn radius_l0(&self) -> f64 {
        self.a_t
    }

    /// `ξ ∈ L₀`, decided through the radius.
    pub fn in_l0(&self, r: f64) -> bool {
        r <= self.a_t
    }

    /// `(A, B, C)`, requiring all three to exist and be increasing.
    pub fn ordered(&self) -> Result<(f64, f64, f64)> {
        match (self.b_t, self.c_t) {
            (Some(b), Some(c)) if self.a_t < b && b < c => Ok((self.a_t, b, c)),
            _ => Err(Error::domain(format!(
                "shell radii A < B < C are undefined or unordered at t = {}",
                self.t
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    /// `lhs ≥ rhs`.
    AtLeast,
    /// `lhs ≤ rhs`.
    AtMost,
}

/// One verified inequality.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundCheck {
    pub name: String,
    pub t: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub direction: Direction,
    /// `lhs − rhs` for lower bounds, `rhs − lhs` for upper bounds.
    pub margin: f64,
    pub pass: bool,
    /// Set when the inequality holds trivially (e.g. `P = 0`).
    pub vacuous: bool,
    pub constants: BTreeMap<String, f64>,
}

impl BoundCheck {
    pub fn new(name: impl Into<String>, t: f64, lhs: f64, rhs: f64, direction: Direction) -> Self {
        let margin = match direction {
            Direction::AtLeast => lhs - rhs,
            Direction::AtMost => rhs - lhs,
        };
        Self {
            name: name.into(),
            t,
            lhs,
            rhs,
            direction,
            margin,
            pass: margin >= 0.0,
            vacuous: false,
            constants: BTreeMap::new(),
        }
    }

    pub fn at_least(name: impl Into<String>, t: f64, lhs: f64, rhs: f64) -> Self {
        Self::new(name, t, lhs, rhs, Direction::AtLeast)
    }

    pub fn at_most(name: impl Into<String>, t: f64, lhs: f64, rhs: f64) -> Self {
        Self::new(name, t, lhs, rhs, Direction::AtMost)
    }

    /// `|a − b| / scale ≤ tol`.
    pub fn identity(name: impl Into<String>, t: f64, a: f64, b: f64, scale: f64, tol: f64) -> Self {
        let diff = (a - b).abs();
        let rel = if diff == 0.0 { 0.0 } else { diff / scale.abs() };
        Self::at_most(name, t, rel, tol)
    }

    pub fn with(mut self, key: &str, value: f64) -> Self {
        self.constants.insert(key.to_string(), value);
        self
    }

    pub fn vacuous(mut self) -> Self {
        self.vacuous = true;
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VerifierConfig {
    pub delta0: f64,
    /// Smallest time at which asymptotic claims are checked.
    pub t_min: f64,
    pub quadrature: QuadratureConfig,
    /// Allowed max/min ratio of an empirical constant over the upper half
    /// of a sweep.
    pub stability_ratio: f64,
    /// Relative tolerance for partition and algebraic identities.
    pub identity_tol: f64,
}

impl Default for VerifierConfig {
    fn default() -> Self {
        Self {
            delta0: DEFAULT_DELTA0,
            t_min: 1e2,
            quadrature: QuadratureConfig::default(),
            stability_ratio: 1.5,
            identity_tol: 1e-8,
        }
    }
}

impl VerifierConfig {
    pub fn validate(&self) -> Result<()> {
        check_delta0(self.delta0)?;
        if !(self.t_min.is_finite() && self.t_min > 1.0) {
            return Err(Error::usage(format!("t_min must exceed 1, got {}", self.t_min)));
        }
        if !(self.stability_ratio >= 1.0) {
            return Err(Error::usage("stability ratio must be at least 1"));
        }
        if !(self.identity_tol > 0.0 && self.identity_tol < 1.0) {
            return Err(Error::usage("identity tolerance must lie in (0, 1)"));
        }
        self.quadrature.validate()
    }
}

fn check_delta0(delta0: f64) -> Result<()> {
    if validate_delta0(delta0) {
        Ok(())
    } else {
        Err(Error::domain(format!("delta0 must lie in (0, 1), got {delta0}")))
    }
}

fn check_gamma(gamma: f64, lo_open: f64) -> Result<()> {
    if gamma > lo_open && gamma <= 1.0 {
        Ok(())
    } else {
        Err(Error::domain(format!("gamma must lie in ({lo_open}, 1], got {gamma}")))
    }
}

/// `K₀ = ∫_0^∞ e^{-r²} r^{2γ-1} dr + ∫_0^∞ e^{-r²} r^{2γ+1} dr = ½Γ(γ) + ½Γ(γ+1)`.
pub fn k0(gamma: f64) -> Result<f64> {
    check_gamma(gamma, 0.0)?;
    Ok(0.5 * libm::tgamma(gamma) + 0.5 * libm::tgamma(gamma + 1.0))
}

/// `½(e^{-1/t²} − e^{-1})`, the exact value of `∫_{1/t}^1 e^{-r²} r dr`.
pub fn r2_envelope(t: f64) -> f64 {
    0.5 * ((-1.0 / (t * t)).exp() - (-1.0f64).exp())
}

/// `[log r + r²/2]_lo^hi`.
pub fn log_shell_primitive(lo: f64, hi: f64) -> f64 {
    (hi / lo).ln() + 0.5 * (hi * hi - lo * lo)
}

/// Middle-shell bracket in closed form:
/// `½log(t−δ₀²) − ½log(log t−δ₀²) + δ₀²/2·(1/(log t−δ₀²) − 1/(t−δ₀²))`.
pub fn g2_closed_form(t: f64, delta0: f64) -> f64 {
    let d2 = delta0 * delta0;
    let (p, q) = (t - d2, t.ln() - d2);
    0.5 * p.ln() - 0.5 * q.ln() + 0.5 * d2 * (1.0 / q - 1.0 / p)
}

/// Inner-shell bracket in closed form:
/// `½log(t²−δ₀²) − ½log(t−δ₀²) + δ₀²/2·(1/(t−δ₀²) − 1/(t²−δ₀²))`.
pub fn g3_closed_form(t: f64, delta0: f64) -> f64 {
    let d2 = delta0 * delta0;
    let (p, q) = (t * t - d2, t - d2);
    0.5 * p.ln() - 0.5 * q.ln() + 0.5 * d2 * (1.0 / q - 1.0 / p)
}

/// `∫_0^{1/√3} (1 + r²) r^{n−3} dr` for `n = 3`.
pub fn m0_ball_integral() -> f64 {
    RADIUS_M0 + RADIUS_M0.powi(3) / 3.0
}

/// `h(r) = e^{-r²}(1+r²)^{3/2}/r`, the amplitude integrated by parts.
fn parts_amplitude(r: f64) -> f64 {
    (-r * r).exp() * (1.0 + r * r).powf(1.5) / r
}

/// Empirical constants extracted from a sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
struct Envelope {
    inf: f64,
    sup: f64,
    upper_ratio: f64,
}

/// `inf`/`sup` of `ratios` over the sweep and `max/min` over its upper half.
fn envelope(ratios: &[f64]) -> Envelope {
    let inf = ratios.iter().copied().fold(f64::INFINITY, f64::min);
    let sup = ratios.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let upper = &ratios[ratios.len() / 2..];
    let hi = upper.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let lo = upper.iter().copied().fold(f64::INFINITY, f64::min);
    Envelope {
        inf,
        sup,
        upper_ratio: hi / lo,
    }
}

/// Bound-chain evaluator for one preset.
#[derive(Debug, Clone)]
pub struct BoundsVerifier<'a> {
    oracle: NormOracle<'a>,
    config: VerifierConfig,
}

impl<'a> BoundsVerifier<'a> {
    pub fn new(preset: &'a DataPreset, config: VerifierConfig) -> Result<Self> {
        config.validate()?;
        Ok(Self {
            oracle: NormOracle::new(preset, config.quadrature)?,
            config,
        })
    }

    pub fn config(&self) -> &VerifierConfig {
        &self.config
    }

    fn preset(&self) -> &DataPreset {
        self.oracle.preset()
    }

    fn q(&self) -> &RadialIntegrator {
        self.oracle.integrator()
    }

    fn require_dim(&self, dim: Dimension) -> Result<()> {
        if self.preset().dim() == dim {
            Ok(())
        } else {
            Err(Error::domain(format!(
                "this chain needs a {dim}-dimensional preset, got {}",
                self.preset().dim()
            )))
        }
    }

    fn require_asymptotic(&self, t: f64) -> Result<ThresholdSet> {
        if !(t >= self.config.t_min) {
            return Err(Error::domain(format!(
                "asymptotic checks need t >= t_min = {}, got {t}",
                self.config.t_min
            )));
        }
        ThresholdSet::new(t, self.config.delta0)
    }

    /// `ω_n ∫_lo^hi g(r) r^{n−1} dr` without the preset's spectral cutoff.
    fn ball(&self, lo: f64, hi: f64, rate: f64, g: impl Fn(f64) -> f64) -> Result<f64> {
        let dim = self.preset().dim();
        let n1 = dim.n() as i32 - 1;
        let est = self.q().integrate_frequency(lo, hi, rate, |r| g(r) * r.powi(n1))?;
        Ok(dim.sphere_area() * est.value)
    }

    fn shell(&self, t: f64, lo: f64, hi: f64) -> Result<f64> {
        Ok(self.oracle.shell_norm_sq(t, lo, hi)?.value)
    }

    /// `‖w(t,·)‖²_ξ`.
    pub fn norm_sq(&self, t: f64) -> Result<QuadEstimate> {
        self.oracle.norm_sq(t)
    }

    pub fn holder_constant(&self, gamma: f64) -> Result<HolderEstimate> {
        self.oracle.holder_constant(gamma)
    }

    /// `I_l(t) = ∫_{L₀} sin²(tf)/f² dξ` against its two lower bounds.
    pub fn check_il_lower(&self, t: f64) -> Result<Vec<BoundCheck>> {
        let th = ThresholdSet::new(t, self.config.delta0)?;
        let rho = th.radius_l0();
        let il = self.ball(0.0, rho, t, |r| DispersionSymbol::sine_multiplier(t, r).powi(2))?;
        let omega = self.preset().dim().sphere_area();
        let c0 = self.config.delta0 / 4.0;
        Ok(vec![
            BoundCheck::at_least("lower1d.il_intermediate", t, il, 0.25 * t * t * omega * rho),
            BoundCheck::at_least("lower1d.il_linear", t, il, c0 * t).with("C0", c0),
        ])
    }

    /// Lower chain in one dimension at a single time.
    pub fn lower_chain_1d(&self, t: f64, gamma: f64) -> Result<Vec<BoundCheck>> {
        self.require_dim(Dimension::One)?;
        check_gamma(gamma, 0.5)?;
        let holder = self.holder_constant(gamma)?;
        self.lower_1d_at(t, gamma, &holder).map(|(checks, _)| checks)
    }

    fn lower_1d_at(&self, t: f64, gamma: f64, holder: &HolderEstimate) -> Result<(Vec<BoundCheck>, [f64; 2])> {
        let th = self.require_asymptotic(t)?;
        let rho = th.radius_l0();
        let preset = self.preset();
        let p = preset.moments().mean;
        let norm_g = preset.weighted_l1(gamma)?;
        let w = self.norm_sq(t)?.value;
        let j1 = self.shell(t, 0.0, rho)?;
        let il = self.ball(0.0, rho, t, |r| DispersionSymbol::sine_multiplier(t, r).powi(2))?;
        let rl = self.ball(0.0, rho, t, |r| {
            (DispersionSymbol::sine_multiplier(t, r) * preset.transform_deficit(r)).powi(2)
        })?;
        let m = holder.constant;
        let g1 = 2.0 * gamma - 1.0;
        let rl_shape = rho.powf(g1) / g1 + rho.powf(g1 + 2.0) / (g1 + 2.0);
        let rl_bound = m * m * norm_g * norm_g * Dimension::One.sphere_area() * rl_shape;

        let mut checks = self.check_il_lower(t)?;
        checks.push(BoundCheck::at_least("lower1d.norm_ge_j1", t, w, j1));
        let split = BoundCheck::at_least("lower1d.j1_split", t, j1, 0.5 * p * p * il - rl).with("P", p);
        checks.push(if p == 0.0 { split.vacuous() } else { split });
        checks.push(
            BoundCheck::at_most("lower1d.rl_holder", t, rl, rl_bound)
                .with("M", m)
                .with("gamma", gamma)
                .with("weighted_l1", norm_g),
        );
        Ok((checks, [w, rl]))
    }

    /// Lower chain in one dimension over a sweep, plus the sweep-level checks
    /// on the decay of `R_l` and on the empirical constant `C` in
    /// `‖w‖²_ξ ≥ C P² t`.
    pub fn lower_sweep_1d(&self, times: &[f64], gamma: f64) -> Result<Vec<BoundCheck>> {
        self.require_dim(Dimension::One)?;
        check_gamma(gamma, 0.5)?;
        check_times(times)?;
        let holder = self.holder_constant(gamma)?;
        let mut checks = Vec::new();
        let mut norms = Vec::with_capacity(times.len());
        let mut rls = Vec::with_capacity(times.len());
        for &t in times {
            let (c, [w, rl]) = self.lower_1d_at(t, gamma, &holder)?;
            checks.extend(c);
            norms.push(w);
            rls.push(rl);
        }
        let t_last = *times.last().unwrap();
        let g1 = 2.0 * gamma - 1.0;
        checks.push(BoundCheck::at_most("lower1d.rl_decay", t_last, rls[rls.len() - 1], rls[0]));
        let scaled = times.iter().zip(&rls).map(|(t, r)| r * t.powf(g1)).fold(0.0, f64::max);
        let norm_g = self.preset().weighted_l1(gamma)?;
        let shape_sup = times
            .iter()
            .map(|&t| {
                let rho = ThresholdSet::new(t, self.config.delta0).map(|th| th.radius_l0()).unwrap_or(0.0);
                (rho.powf(g1) / g1 + rho.powf(g1 + 2.0) / (g1 + 2.0)) * t.powf(g1)
            })
            .fold(0.0, f64::max);
        let m = holder.constant;
        checks.push(
            BoundCheck::at_most(
                "lower1d.rl_rate",
                t_last,
                scaled,
                m * m * norm_g * norm_g * Dimension::One.sphere_area() * shape_sup,
            )
            .with("gamma", gamma),
        );
        let p2 = self.preset().moments().mean.powi(2);
        checks.extend(self.growth_constant_checks("lower1d", times, &norms, p2, |t| t, true));
        Ok(checks)
    }

    /// Lower chain in two dimensions at a single time, through the trick
    /// weight `e^{-|ξ|²}` and integration by parts in the oscillatory part.
    pub fn lower_chain_2d(&self, t: f64, gamma: f64) -> Result<Vec<BoundCheck>> {
        self.require_dim(Dimension::Two)?;
        check_gamma(gamma, 0.0)?;
        let holder = self.holder_constant(gamma)?;
        self.lower_2d_at(t, gamma, &holder).map(|(checks, _)| checks)
    }

    /// `U = ∫ e^{-|ξ|²} |ξ|^{2γ}/f² dξ`; it carries no time dependence.
    pub fn trick_remainder_weight(&self, gamma: f64) -> Result<f64> {
        check_gamma(gamma, 0.0)?;
        let est = self.q().integrate_radial(0.0, TRICK_CUTOFF, 0.125, |r| {
            (-r * r).exp() * r.powf(2.0 * gamma - 1.0) * (1.0 + r * r)
        })?;
        Ok(Dimension::Two.sphere_area() * est.value)
    }

    fn lower_2d_at(&self, t: f64, gamma: f64, holder: &HolderEstimate) -> Result<(Vec<BoundCheck>, [f64; 2])> {
        self.require_asymptotic(t)?;
        let tol = self.config.identity_tol;
        let preset = self.preset();
        let p = preset.moments().mean;
        let omega = Dimension::Two.sphere_area();
        let norm_g = preset.weighted_l1(gamma)?;
        let m = holder.constant;
        let m2 = |r: f64| DispersionSymbol::sine_multiplier(t, r).powi(2);
        let trick = |r: f64| (-r * r).exp();
        let hi = TRICK_CUTOFF.min(preset.spectral_cutoff());

        let w = self.norm_sq(t)?.value;
        let w_trick = self.ball(0.0, hi, t, |r| trick(r) * m2(r) * preset.transform(r).powi(2))?;
        let r_trick = self.ball(0.0, hi, t, |r| trick(r) * m2(r) * preset.transform_deficit(r).powi(2))?;
        let big_t = self.ball(0.0, TRICK_CUTOFF, t, |r| trick(r) * m2(r))?;
        let u = self.trick_remainder_weight(gamma)?;
        let k0v = k0(gamma)?;

        let t_restricted = self.ball(1.0 / t, 1.0, t, |r| trick(r) * m2(r))?;
        let q = self.q();
        let lo = 1.0 / t;
        let rate = 2.0 * t;
        let cos2 = |r: f64| (rate * DispersionSymbol::eval(r)).cos();
        let sin2 = |r: f64| (rate * DispersionSymbol::eval(r)).sin();
        let t1 = q.integrate_radial(lo, 1.0, 0.125, |r| trick(r) * (1.0 + r * r) / r)?.value;
        let t2 = q.integrate_frequency(lo, 1.0, rate, |r| trick(r) * (1.0 + r * r) / r * cos2(r))?.value;
        let r1 = q.integrate_frequency(lo, 1.0, rate, |r| trick(r) / r * cos2(r))?.value;
        let r2 = q.integrate_frequency(lo, 1.0, rate, |r| trick(r) * r * cos2(r))?.value;
        let k1 = parts_amplitude(1.0) * sin2(1.0) - parts_amplitude(lo) * sin2(lo);
        let k21 = q
            .integrate_frequency(lo, 1.0, rate, |r| {
                trick(r) / (r * r) * (2.0 * r * r + 1.0) * (1.0 + r * r).powf(1.5) * sin2(r)
            })?
            .value;
        let k22 = 3.0 * q.integrate_frequency(lo, 1.0, rate, |r| trick(r) * (1.0 + r * r).sqrt() * sin2(r))?.value;
        let k2 = k21 - k22;

        let decay = (-1.0 / (t * t)).exp();
        let r2_env = r2_envelope(t);
        let k22_bound = K22_CONST * decay * (1.0 - 1.0 / t);
        let k21_bound = K21_SLOPE * decay * (t - 1.0);
        let t2_bound = (K1_CONST + K1_SLOPE * t + K22_CONST + K21_SLOPE * t) / (2.0 * t) + 0.5;

        let mut checks = Vec::new();
        checks.push(BoundCheck::at_least("lower2d.norm_ge_trick", t, w, w_trick));
        let split = BoundCheck::at_least("lower2d.trick_split", t, w_trick, 0.5 * p * p * big_t - r_trick).with("P", p);
        checks.push(if p == 0.0 { split.vacuous() } else { split });
        checks.push(
            BoundCheck::at_most("lower2d.remainder_holder", t, r_trick, m * m * norm_g * norm_g * u)
                .with("M", m)
                .with("gamma", gamma)
                .with("weighted_l1", norm_g),
        );
        checks.push(BoundCheck::identity("lower2d.u_closed_form", t, u, omega * k0v, omega * k0v, tol).with("K0", k0v));
        checks.push(BoundCheck::at_least("lower2d.t_ge_restricted", t, big_t, t_restricted));
        checks.push(BoundCheck::identity(
            "lower2d.restricted_split",
            t,
            t_restricted,
            0.5 * omega * (t1 - t2),
            omega * t1,
            tol,
        ));
        checks.push(BoundCheck::at_least("lower2d.t1_log", t, t1, t.ln() / E));
        checks.push(BoundCheck::identity("lower2d.t2_split", t, t2, r1 + r2, t1, tol));
        checks.push(BoundCheck::at_most("lower2d.r2_exact", t, r2.abs(), r2_env));
        checks.push(BoundCheck::at_most("lower2d.r2_half", t, r2_env, 0.5));
        checks.push(BoundCheck::identity(
            "lower2d.r1_parts",
            t,
            2.0 * t * r1,
            k1 + k2,
            k1.abs() + k21.abs() + k22.abs() + 2.0 * t * t1,
            tol,
        ));
        checks.push(
            BoundCheck::at_most("lower2d.k1_bound", t, k1.abs(), K1_CONST + K1_SLOPE * t)
                .with("C1", K1_CONST)
                .with("C2", K1_SLOPE),
        );
        checks.push(BoundCheck::at_most("lower2d.k22_bound", t, k22.abs(), k22_bound));
        checks.push(BoundCheck::at_most("lower2d.k22_const", t, k22_bound, K22_CONST).with("C3", K22_CONST));
        checks.push(BoundCheck::at_most("lower2d.k21_bound", t, k21.abs(), k21_bound));
        checks.push(BoundCheck::at_most("lower2d.k21_linear", t, k21_bound, K21_SLOPE * t).with("C4", K21_SLOPE));
        checks.push(BoundCheck::at_most("lower2d.t2_bound", t, t2.abs(), t2_bound));
        Ok((checks, [w, u]))
    }

    /// Lower chain in two dimensions over a sweep, plus the sweep checks on
    /// the time independence of `U` and on `C` in `‖w‖²_ξ ≥ C P² log t`.
    pub fn lower_sweep_2d(&self, times: &[f64], gamma: f64) -> Result<Vec<BoundCheck>> {
        self.require_dim(Dimension::Two)?;
        check_gamma(gamma, 0.0)?;
        check_times(times)?;
        let holder = self.holder_constant(gamma)?;
        let mut checks = Vec::new();
        let mut norms = Vec::with_capacity(times.len());
        let mut us = Vec::with_capacity(times.len());
        for &t in times {
            let (c, [w, u]) = self.lower_2d_at(t, gamma, &holder)?;
            checks.extend(c);
            norms.push(w);
            us.push(u);
        }
        let t_last = *times.last().unwrap();
        let spread = us.iter().map(|u| (u - us[0]).abs()).fold(0.0, f64::max);
        checks.push(BoundCheck::at_most("lower2d.u_time_independent", t_last, spread / us[0], 1e-10));
        let p2 = self.preset().moments().mean.powi(2);
        checks.extend(self.growth_constant_checks("lower2d", times, &norms, p2, f64::ln, true));
        Ok(checks)
    }

    /// Upper chain in one dimension: `‖w‖²_ξ = L₁ + L₂` with `L₁` over `L₀`.
    pub fn upper_chain_1d(&self, t: f64) -> Result<Vec<BoundCheck>> {
        self.require_dim(Dimension::One)?;
        self.upper_1d_at(t).map(|(c, _)| c)
    }

    fn upper_1d_at(&self, t: f64) -> Result<(Vec<BoundCheck>, f64)> {
        let th = ThresholdSet::new(t, self.config.delta0)?;
        let a = th.a_t;
        let m = self.preset().moments();
        let omega = Dimension::One.sphere_area();
        let l1sq = m.l1_norm.powi(2);
        let w = self.norm_sq(t)?.value;
        let l1 = self.shell(t, 0.0, a)?;
        let l2 = self.shell(t, a, f64::INFINITY)?;
        let plancherel = self.preset().transform_l2_sq();
        let checks = vec![
            BoundCheck::identity("upper1d.partition", t, l1 + l2, w, w, self.config.identity_tol),
            BoundCheck::at_most("upper1d.l1_bound", t, l1, SINC_SUP.powi(2) * t * t * omega * l1sq * a).with("A", a),
            BoundCheck::at_most("upper1d.l2_bound", t, l2, omega * l1sq / a + plancherel)
                .with("A", a)
                .with("plancherel_l2_sq", plancherel),
        ];
        Ok((checks, w))
    }

    /// Upper chain in one dimension over a sweep, plus the empirical
    /// constant in `‖w‖²_ξ ≤ C(‖u₁‖² + ‖u₁‖₁² t)`.
    pub fn upper_sweep_1d(&self, times: &[f64]) -> Result<Vec<BoundCheck>> {
        self.require_dim(Dimension::One)?;
        check_times(times)?;
        let mut checks = Vec::new();
        let mut norms = Vec::new();
        for &t in times {
            self.require_asymptotic(t)?;
            let (c, w) = self.upper_1d_at(t)?;
            checks.extend(c);
            norms.push(w);
        }
        let m = self.preset().moments();
        let (l2, l1) = (m.l2_norm.powi(2), m.l1_norm.powi(2));
        checks.extend(self.growth_constant_checks("upper1d", times, &norms, 1.0, |t| l2 + l1 * t, false));
        Ok(checks)
    }

    /// Upper chain in two dimensions: `G₁` over `L₀` and the three outer
    /// shells split at `A(t) < B(t) < C(t)`.
    pub fn upper_chain_2d(&self, t: f64) -> Result<Vec<BoundCheck>> {
        self.require_dim(Dimension::Two)?;
        self.upper_2d_at(t).map(|(c, _)| c)
    }

    fn upper_2d_at(&self, t: f64) -> Result<(Vec<BoundCheck>, f64)> {
        let th = ThresholdSet::new(t, self.config.delta0)?;
        let (a, b, c) = th.ordered()?;
        let d0 = self.config.delta0;
        let tol = self.config.identity_tol;
        let m = self.preset().moments();
        let omega = Dimension::Two.sphere_area();
        let l1sq = m.l1_norm.powi(2);
        let plancherel = self.preset().transform_l2_sq();

        let w = self.norm_sq(t)?.value;
        let big_g1 = self.shell(t, 0.0, a)?;
        let g1 = self.shell(t, c, f64::INFINITY)?;
        let g2 = self.shell(t, b, c)?;
        let g3 = self.shell(t, a, b)?;
        let inv_fc2 = 1.0 / DispersionSymbol::squared(c);
        let g2_bracket = log_shell_primitive(b, c);
        let g3_bracket = log_shell_primitive(a, b);
        let g2_closed = g2_closed_form(t, d0);
        let g3_closed = g3_closed_form(t, d0);

        let checks = vec![
            BoundCheck::identity("upper2d.partition", t, big_g1 + g1 + g2 + g3, w, w, tol),
            BoundCheck::at_most(
                "upper2d.big_g1_bound",
                t,
                big_g1,
                0.5 * SINC_SUP.powi(2) * omega * l1sq * d0 * d0 * t * t / (t * t - d0 * d0),
            ),
            BoundCheck::identity("upper2d.g1_symbol", t, inv_fc2, t.ln() / (d0 * d0), inv_fc2, tol),
            BoundCheck::at_most("upper2d.g1_bound", t, g1, t.ln() / (d0 * d0) * plancherel)
                .with("C", c)
                .with("plancherel_l2_sq", plancherel),
            BoundCheck::identity("upper2d.g2_closed_form", t, g2_bracket, g2_closed, g2_closed, tol),
            BoundCheck::at_most("upper2d.g2_bound", t, g2, omega * l1sq * g2_closed).with("B", b).with("C", c),
            BoundCheck::identity("upper2d.g3_closed_form", t, g3_bracket, g3_closed, g3_closed, tol),
            BoundCheck::at_most("upper2d.g3_bound", t, g3, omega * l1sq * g3_closed).with("A", a).with("B", b),
        ];
        Ok((checks, w))
    }

    /// Upper chain in two dimensions over a sweep, plus the empirical
    /// constant in `‖w‖²_ξ ≤ C(‖u₁‖² + ‖u₁‖₁²) log t`.
    pub fn upper_sweep_2d(&self, times: &[f64]) -> Result<Vec<BoundCheck>> {
        self.require_dim(Dimension::Two)?;
        check_times(times)?;
        let mut checks = Vec::new();
        let mut norms = Vec::new();
        for &t in times {
            self.require_asymptotic(t)?;
            let (c, w) = self.upper_2d_at(t)?;
            checks.extend(c);
            norms.push(w);
        }
        let m = self.preset().moments();
        let data = m.l2_norm.powi(2) + m.l1_norm.powi(2);
        checks.extend(self.growth_constant_checks("upper2d", times, &norms, data, f64::ln, false));
        Ok(checks)
    }

    /// `(M₁ + M₂) bounds`: `ω₃‖u₁‖₁²(1/√3 + 1/(9√3))` and `4(2π)³‖u₁‖²`.
    pub fn bounded_constants(&self) -> (f64, f64) {
        let dim = self.preset().dim();
        let m = self.preset().moments();
        (
            dim.sphere_area() * m.l1_norm.powi(2) * m0_ball_integral(),
            4.0 * self.preset().transform_l2_sq(),
        )
    }

    /// Boundedness chain in three dimensions at a single time. The cosine
    /// check takes `u₀` equal to the preset profile.
    pub fn bounded_chain(&self, t: f64) -> Result<Vec<BoundCheck>> {
        self.bounded_at(t).map(|(c, _)| c)
    }

    fn bounded_at(&self, t: f64) -> Result<(Vec<BoundCheck>, f64)> {
        let dim = self.preset().dim();
        if dim.n() < 3 {
            return Err(Error::domain(format!("the boundedness chain needs n >= 3, got n = {dim}")));
        }
        if !(t.is_finite() && t >= 0.0) {
            return Err(Error::domain(format!("time must be finite and non-negative, got {t}")));
        }
        let preset = self.preset();
        let (m1_bound, m2_bound) = self.bounded_constants();
        let w = self.norm_sq(t)?.value;
        let m1 = self.shell(t, 0.0, RADIUS_M0)?;
        let m2 = self.shell(t, RADIUS_M0, f64::INFINITY)?;
        let outer = self.oracle.shell_integral(RADIUS_M0, f64::INFINITY, 0.0, |r| preset.transform(r).powi(2))?.value;
        let cos_part = self.oracle.shell_integral(0.0, f64::INFINITY, t, |r| {
            (DispersionSymbol::cosine_multiplier(t, r) * preset.transform(r)).powi(2)
        })?;
        let total = preset.transform_l2_sq();
        let checks = vec![
            BoundCheck::identity("bounded.partition", t, m1 + m2, w, w.max(f64::MIN_POSITIVE), self.config.identity_tol),
            BoundCheck::identity(
                "bounded.m0_symbol",
                t,
                DispersionSymbol::eval(RADIUS_M0),
                0.5,
                0.5,
                self.config.identity_tol,
            ),
            BoundCheck::at_most("bounded.m1_bound", t, m1, m1_bound),
            BoundCheck::at_most("bounded.m2_outer", t, m2, 4.0 * outer),
            BoundCheck::at_most("bounded.m2_bound", t, m2, m2_bound).with("plancherel_l2_sq", total),
            // Equality at t = 0, so the quadrature error is allowed for.
            BoundCheck::at_most("bounded.cosine_part", t, cos_part.value, total + cos_part.error_bound)
                .with("quadrature_error", cos_part.error_bound),
        ];
        Ok((checks, w))
    }

    /// Boundedness chain over a sweep, plus `sup ‖w‖²_ξ ≤ M₁bound + M₂bound`
    /// and saturation: the last value within 5% of the first one at or past
    /// `t_min`.
    pub fn bounded_sweep(&self, times: &[f64]) -> Result<Vec<BoundCheck>> {
        check_times(times)?;
        let mut checks = Vec::new();
        let mut norms = Vec::new();
        for &t in times {
            let (c, w) = self.bounded_at(t)?;
            checks.extend(c);
            norms.push(w);
        }
        let (m1b, m2b) = self.bounded_constants();
        let t_last = *times.last().unwrap();
        let sup = norms.iter().copied().fold(0.0, f64::max);
        checks.push(BoundCheck::at_most("bounded.sup_norm", t_last, sup, m1b + m2b).with("M1_bound", m1b).with("M2_bound", m2b));
        // Saturation is measured from the first time past t_min.
        if let Some(i) = times.iter().position(|&t| t >= self.config.t_min) {
            let (first, last) = (norms[i], norms[norms.len() - 1]);
            let drift = if last == first { 0.0 } else { (last - first).abs() / last.abs().max(first.abs()) };
            checks.push(BoundCheck::at_most("bounded.saturation", t_last, drift, 0.05).with("t_first", times[i]));
        }
        Ok(checks)
    }

    /// Empirical constant `C` of `‖w‖²_ξ ≷ C · data · g(t)`, its positivity
    /// (lower) or finiteness (upper), and its stability over the upper half.
    fn growth_constant_checks(
        &self,
        prefix: &str,
        times: &[f64],
        norms: &[f64],
        data: f64,
        g: impl Fn(f64) -> f64,
        lower: bool,
    ) -> Vec<BoundCheck> {
        let t_last = *times.last().unwrap();
        let kind = if lower { "inf" } else { "sup" };
        if data == 0.0 {
            let name = format!("{prefix}.constant");
            return vec![BoundCheck::at_least(name, t_last, 0.0, 0.0).vacuous()];
        }
        let ratios: Vec<f64> = times.iter().zip(norms).map(|(&t, &w)| w / (data * g(t))).collect();
        let env = envelope(&ratios);
        let c = if lower { env.inf } else { env.sup };
        let constant = if lower {
            BoundCheck::at_least(format!("{prefix}.constant"), t_last, c, f64::MIN_POSITIVE)
        } else {
            BoundCheck::at_most(format!("{prefix}.constant"), t_last, c, f64::MAX)
        };
        vec![
            constant.with(kind, c).with("data_factor", data),
            BoundCheck::at_most(format!("{prefix}.stability"), t_last, env.upper_ratio, self.config.stability_ratio)
                .with("inf", env.inf)
                .with("sup", env.sup),
        ]
    }

    /// Every chain applicable to the preset's dimension over `times`.
    pub fn verify_all(&self, times: &[f64], gamma: f64) -> Result<Vec<BoundCheck>> {
        match self.preset().dim() {
            Dimension::One => {
                let mut checks = self.lower_sweep_1d(times, gamma)?;
                checks.extend(self.upper_sweep_1d(times)?);
                Ok(checks)
            }
            Dimension::Two => {
                let mut checks = self.lower_sweep_2d(times, gamma)?;
                checks.extend(self.upper_sweep_2d(times)?);
                Ok(checks)
            }
            Dimension::Three => self.bounded_sweep(times),
        }
    }
}

fn check_times(times: &[f64]) -> Result<()> {
    if times.is_empty() {
        return Err(Error::usage("time sweep is empty"));
    }
    if times.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::usage("sweep times must be strictly increasing"));
    }
    Ok(())
}

/// `I_l(t)` checks for `n = 1`.
pub fn check_il_lower(t: f64, delta0: f64) -> Result<Vec<BoundCheck>> {
    let preset = DataPreset::zero(Dimension::One);
    let cfg = VerifierConfig {
        delta0,
        ..VerifierConfig::default()
    };
    BoundsVerifier::new(&preset, cfg)?.check_il_lower(t)
}

fn verifier(preset: &DataPreset, delta0: f64) -> Result<BoundsVerifier<'_>> {
    BoundsVerifier::new(
        preset,
        VerifierConfig {
            delta0,
            ..VerifierConfig::default()
        },
    )
}

pub fn lower_chain_1d(preset: &DataPreset, t: f64, gamma: f64, delta0: f64) -> Result<Vec<BoundCheck>> {
    verifier(preset, delta0)?.lower_chain_1d(t, gamma)
}

pub fn lower_chain_2d(preset: &DataPreset, t: f64, gamma: f64, delta0: f64) -> Result<Vec<BoundCheck>> {
    verifier(preset, delta0)?.lower_chain_2d(t, gamma)
}

pub fn upper_chain_1d(preset: &DataPreset, t: f64, delta0: f64) -> Result<Vec<BoundCheck>> {
    verifier(preset, delta0)?.upper_chain_1d(t)
}

pub fn upper_chain_2d(preset: &DataPreset, t: f64, delta0: f64) -> Result<Vec<BoundCheck>> {
    verifier(preset, delta0)?.upper_chain_2d(t)
}

pub fn bounded_chain_nd(preset: &DataPreset, t: f64) -> Result<Vec<BoundCheck>> {
    verifier(preset, DEFAULT_DELTA0)?.bounded_chain(t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    fn names(checks: &[BoundCheck]) -> Vec<&str> {
        checks.iter().map(|c| c.name.as_str()).collect()
    }

    fn assert_all_pass(checks: &[BoundCheck]) {
        for c in checks {
            assert!(c.pass, "{c:?}");
        }
    }

    #[test]
    fn margin_sign_convention() {
        let lo = BoundCheck::at_least("x", 1.0, 3.0, 2.0);
        assert_eq!(lo.margin, 1.0);
        assert!(lo.pass);
        let up = BoundCheck::at_most("x", 1.0, 3.0, 2.0);
        assert_eq!(up.margin, -1.0);
        assert!(!up.pass);
        assert!(!BoundCheck::at_most("x", 1.0, f64::NAN, 2.0).pass);
        assert!(BoundCheck::identity("x", 1.0, 1.0, 1.0 + 1e-12, 1.0, 1e-10).pass);
    }

    #[test]
    fn thresholds() {
        let th = ThresholdSet::new(100.0, 0.99).unwrap();
        assert_relative_eq!(th.radius_l0(), 9.9005e-3, max_relative = 1e-4);
        let (a, b, c) = th.ordered().unwrap();
        assert!(a < b && b < c);
        assert!(ThresholdSet::new(0.99, 0.99).is_err());
        assert!(ThresholdSet::new(0.5, 0.99).is_err());
        let early = ThresholdSet::new(2.0, 0.99).unwrap();
        assert!(early.c_t.is_none());
        assert!(early.ordered().is_err());
    }

    #[test]
    fn l0_membership_matches_phase() {
        for t in [1.5, 10.0, 1e3, 1e6] {
            let th = ThresholdSet::new(t, 0.99).unwrap();
            let rho = th.radius_l0();
            for k in 1..200 {
                let r = rho * k as f64 / 100.0;
                let phase = t * DispersionSymbol::eval(r);
                if (r - rho).abs() > 1e-9 * rho {
                    assert_eq!(th.in_l0(r), phase <= 0.99, "t={t} r={r}");
                }
            }
        }
    }

    #[test]
    fn k0_closed_form() {
        assert_relative_eq!(k0(1.0).unwrap(), 1.0, max_relative = 1e-14);
        assert_relative_eq!(k0(0.5).unwrap(), 0.5 * PI.sqrt() + 0.25 * PI.sqrt(), max_relative = 1e-14);
        assert!(k0(0.0).is_err());
        assert!(k0(1.5).is_err());
    }

    #[test]
    fn r2_envelope_value() {
        assert_relative_eq!(r2_envelope(10.0), 0.311_100, max_relative = 1e-4);
        let exact = 0.5 * ((-0.01f64).exp() - (-1.0f64).exp());
        assert!((r2_envelope(10.0) - exact).abs() <= 1e-15);
    }

    #[test]
    fn closed_forms_match_brackets() {
        let t: f64 = 1e4;
        let th = ThresholdSet::new(t, 0.99).unwrap();
        let (a, b, c) = th.ordered().unwrap();
        assert_relative_eq!(log_shell_primitive(b, c), g2_closed_form(t, 0.99), max_relative = 1e-12);
        assert_relative_eq!(log_shell_primitive(a, b), g3_closed_form(t, 0.99), max_relative = 1e-12);
        assert_relative_eq!(DispersionSymbol::eval(RADIUS_M0), 0.5, max_relative = 1e-15);
        assert_relative_eq!(m0_ball_integral(), 1.0 / 3f64.sqrt() + 1.0 / (9.0 * 3f64.sqrt()), max_relative = 1e-15);
    }

    #[test]
    fn il_lower_at_hundred() {
        let checks = check_il_lower(100.0, 0.99).unwrap();
        assert_all_pass(&checks);
        assert_relative_eq!(checks[0].rhs, 49.5, max_relative = 1e-3);
    }

    #[test]
    fn lower_1d_gaussian() {
        let g = DataPreset::gaussian(Dimension::One, 1.0).unwrap();
        let v = BoundsVerifier::new(&g, VerifierConfig::default()).unwrap();
        let checks = v.lower_sweep_1d(&[1e2, 1e3, 1e4], 1.0).unwrap();
        assert_all_pass(&checks);
        assert!(names(&checks).contains(&"lower1d.rl_decay"));
        assert!(v.lower_chain_1d(1e2, 0.4).is_err());
        assert!(v.lower_chain_1d(10.0, 1.0).is_err());
    }

    #[test]
    fn lower_1d_zero_mean_is_vacuous() {
        let d = DataPreset::difference_of_gaussians(Dimension::One, 1.0, 0.25).unwrap();
        let v = BoundsVerifier::new(&d, VerifierConfig::default()).unwrap();
        let checks = v.lower_sweep_1d(&[1e2, 1e3], 1.0).unwrap();
        assert_all_pass(&checks);
        assert!(checks.iter().any(|c| c.name == "lower1d.constant" && c.vacuous));
    }

    #[test]
    fn lower_2d_gaussian() {
        let g = DataPreset::gaussian(Dimension::Two, 1.0).unwrap();
        let v = BoundsVerifier::new(&g, VerifierConfig::default()).unwrap();
        let checks = v.lower_sweep_2d(&[1e2, 1e3, 1e4], 1.0).unwrap();
        assert_all_pass(&checks);
        assert!(v.lower_chain_2d(1e2, 0.0).is_err());
    }

    #[test]
    fn t1_at_e() {
        // T₁(e) = ∫_{1/e}^1 e^{-r²}(1+r²)/r dr against e^{-1} log e
        let q = RadialIntegrator::new(QuadratureConfig::default()).unwrap();
        let t1 = q
            .integrate_radial(1.0 / E, 1.0, 0.125, |r| (-r * r).exp() * (1.0 + r * r) / r)
            .unwrap()
            .value;
        assert!(t1 >= 1.0 / E);
    }

    #[test]
    fn upper_chains_gaussian() {
        let g1 = DataPreset::gaussian(Dimension::One, 1.0).unwrap();
        let v1 = BoundsVerifier::new(&g1, VerifierConfig::default()).unwrap();
        assert_all_pass(&v1.upper_sweep_1d(&[1e2, 1e3, 1e4]).unwrap());
        let g2 = DataPreset::gaussian(Dimension::Two, 1.0).unwrap();
        let v2 = BoundsVerifier::new(&g2, VerifierConfig::default()).unwrap();
        assert_all_pass(&v2.upper_sweep_2d(&[1e2, 1e3, 1e4]).unwrap());
        assert!(matches!(v1.upper_chain_2d(1e2), Err(Error::Domain(_))));
    }

    #[test]
    fn bounded_chain_gaussian() {
        let g = DataPreset::gaussian(Dimension::Three, 1.0).unwrap();
        let v = BoundsVerifier::new(&g, VerifierConfig::default()).unwrap();
        assert_all_pass(&v.bounded_sweep(&[0.0, 1.0, 1e2, 1e3, 1e4]).unwrap());
        let g2 = DataPreset::gaussian(Dimension::Two, 1.0).unwrap();
        assert!(matches!(bounded_chain_nd(&g2, 1.0), Err(Error::Domain(_))));
    }
}
