//! Composite Gauss–Legendre quadrature with oscillation-aware panels.
//!
//! The integrands behind `‖w(t,·)‖²` carry the factor `sin²(t f(r))`, which
//! near `r = 0` oscillates with period `≈ π/t` in `r`. On `[0, r_split]` the
//! integrator changes variable to `s = f(r)`, where the oscillator becomes
//! exactly `sin²(t s)` and panel boundaries sit on the grid `s = kπ/(2ω)`.
//! Beyond `r_split` it integrates in `r` with boundaries at the (sparse)
//! crossings of `ω f(r)` through multiples of `π/2`.
//!
//! Every panel is also re-integrated with its neighbour merged into a single
//! panel; the sum of the fine/coarse discrepancies is the reported error
//! bound. Panel sums use pairwise summation so results do not depend on
//! evaluation order.

use serde::{Deserialize, Serialize};
use std::f64::consts::FRAC_PI_2;

use crate::error::{Error, Result};
use crate::multiplier::DispersionSymbol;

/// Gauss–Legendre nodes and weights on `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    /// Rule with `order` nodes, computed by Newton iteration on `P_order`.
    pub fn new(order: usize) -> Self {
        assert!(order >= 1, "Gauss-Legendre order must be positive");
        let n = order;
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        for i in 0..n.div_ceil(2) {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre_with_derivative(n, x);
            dp = if d != 0.0 { d } else { dp };
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        Self { nodes, weights }
    }

    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// `∫_a^b g`.
    #[inline]
    pub fn integrate<F: Fn(f64) -> f64>(&self, a: f64, b: f64, g: F) -> f64 {
        self.integrate_with_abs(a, b, g).0
    }

    /// `(∫_a^b g, ∫_a^b |g|)` from the same nodes.
    #[inline]
    pub fn integrate_with_abs<F: Fn(f64) -> f64>(&self, a: f64, b: f64, g: F) -> (f64, f64) {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        let mut sum = 0.0;
        let mut abs = 0.0;
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            let v = w * g(mid + half * x);
            sum += v;
            abs += v.abs();
        }
        (sum * half, abs * half.abs())
    }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let nf = n as f64;
    let dp = nf * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

/// Pairwise (cascade) summation.
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    const BLOCK: usize = 32;
    if xs.len() <= BLOCK {
        xs.iter().sum()
    } else {
        let (lo, hi) = xs.split_at(xs.len() / 2);
        pairwise_sum(lo) + pairwise_sum(hi)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct QuadratureConfig {
    /// Target error bound relative to `∫|integrand|`.
    pub rel_tol: f64,
    pub max_panels: usize,
    /// Radius up to which integration runs in `s = f(r)`.
    pub r_split: f64,
    /// Gauss–Legendre nodes per panel.
    pub order: usize,
    /// Extra uniform halvings applied to every panel before integrating.
    pub subdivision: u32,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            rel_tol: 1e-8,
            max_panels: 40_000_000,
            r_split: 2.0,
            order: 16,
            subdivision: 0,
        }
    }
}

impl QuadratureConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0 && self.rel_tol <= 1e-3) {
            return Err(Error::domain(format!(
                "quadrature tolerance must lie in (0, 1e-3], got {}",
                self.rel_tol
            )));
        }
        if self.order < 4 {
            return Err(Error::domain(format!(
                "Gauss-Legendre order must be at least 4, got {}",
                self.order
            )));
        }
        if !(self.r_split.is_finite() && self.r_split > 0.0) {
            return Err(Error::domain(format!(
                "split radius must be positive, got {}",
                self.r_split
            )));
        }
        if self.max_panels == 0 {
            return Err(Error::domain("panel budget must be positive"));
        }
        if self.subdivision > 8 {
            return Err(Error::domain("at most 8 extra subdivisions are supported"));
        }
        Ok(())
    }

    /// Same configuration with every panel halved once more.
    pub fn refined(&self) -> Self {
        Self {
            subdivision: self.subdivision + 1,
            ..*self
        }
    }
}

/// Result of a panel quadrature.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuadEstimate {
    pub value: f64,
    pub error_bound: f64,
    /// `∫|integrand|`, the scale the tolerance is measured against.
    pub abs_value: f64,
    pub panels: usize,
}

impl QuadEstimate {
    pub const ZERO: QuadEstimate = QuadEstimate {
        value: 0.0,
        error_bound: 0.0,
        abs_value: 0.0,
        panels: 0,
    };

    /// Sum of two disjoint pieces.
    pub fn combine(self, other: QuadEstimate) -> QuadEstimate {
        QuadEstimate {
            value: self.value + other.value,
            error_bound: self.error_bound + other.error_bound,
            abs_value: self.abs_value + other.abs_value,
            panels: self.panels + other.panels,
        }
    }

    pub fn scale(self, c: f64) -> QuadEstimate {
        QuadEstimate {
            value: self.value * c,
            error_bound: self.error_bound * c.abs(),
            abs_value: self.abs_value * c.abs(),
            panels: self.panels,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Variable {
    /// Integration in `s = f(r)`.
    Phase,
    Radius,
}

/// Max panel width in `s`.
const MAX_WIDTH_PHASE: f64 = 1.0 / 64.0;
/// Max panel width in `r` beyond the split radius.
const MAX_WIDTH_RADIUS: f64 = 0.125;
/// Graded panels toward a zero endpoint stop at this fraction of the first panel.
const GRADING_FLOOR: f64 = 1e-14;
const MAX_REFINEMENTS: u32 = 3;
/// Rounding allowance, in ulps of the absolute mass, added to every error estimate.
const ROUNDING_ULPS: f64 = 8.0;

/// Integrator for radial integrals over frequency (or space).
#[derive(Debug, Clone)]
pub struct RadialIntegrator {
    cfg: QuadratureConfig,
    rule: GaussLegendre,
}

impl RadialIntegrator {
    pub fn new(cfg: QuadratureConfig) -> Result<Self> {
        cfg.validate()?;
        Ok(Self {
            rule: GaussLegendre::new(cfg.order),
            cfg,
        })
    }

    pub fn config(&self) -> &QuadratureConfig {
        &self.cfg
    }

    /// `∫_a^b g(r) dr` for `g` oscillating like a function of
    /// `phase_rate · f(r)` (use `0` for non-oscillatory integrands).
    pub fn integrate_frequency<F>(&self, a: f64, b: f64, phase_rate: f64, g: F) -> Result<QuadEstimate>
    where
        F: Fn(f64) -> f64,
    {
        check_limits(a, b)?;
        if !(phase_rate.is_finite() && phase_rate >= 0.0) {
            return Err(Error::domain(format!("phase rate must be non-negative, got {phase_rate}")));
        }
        if a == b {
            return Ok(QuadEstimate::ZERO);
        }
        let period = (phase_rate > 0.0).then(|| FRAC_PI_2 / phase_rate);
        let split = self.cfg.r_split;
        let mut panels: Vec<(Variable, f64, f64)> = Vec::new();
        if a < split {
            let s_lo = DispersionSymbol::eval(a);
            let s_hi = DispersionSymbol::eval(b.min(split));
            let pts = self.breakpoints(s_lo, s_hi, period, MAX_WIDTH_PHASE)?;
            panels.extend(pts.windows(2).map(|w| (Variable::Phase, w[0], w[1])));
        }
        if b > split {
            let r_lo = a.max(split);
            let s_lo = DispersionSymbol::eval(r_lo);
            let s_hi = DispersionSymbol::eval(b);
            let mut pts = vec![r_lo];
            if let Some(p) = period {
                let count = ((s_hi - s_lo) / p).ceil();
                self.check_budget(count, panels.len())?;
                let k0 = (s_lo / p).floor() as u64 + 1;
                let mut k = k0;
                loop {
                    let s = k as f64 * p;
                    if s >= s_hi || s >= 1.0 {
                        break;
                    }
                    let r = DispersionSymbol::inverse(s);
                    if r > r_lo && r < b {
                        pts.push(r);
                    }
                    k += 1;
                }
            }
            pts.push(b);
            let pts = refine_breakpoints(&pts, MAX_WIDTH_RADIUS);
            panels.extend(pts.windows(2).map(|w| (Variable::Radius, w[0], w[1])));
        }
        self.run(panels, &|v: Variable, x: f64| match v {
            Variable::Phase => {
                let q = (1.0 - x) * (1.0 + x);
                let r = x / q.sqrt();
                g(r) / (q * q.sqrt())
            }
            Variable::Radius => g(x),
        }, "frequency integral")
    }

    /// `∫_a^b g(r) dr` directly in `r` with panels of width at most
    /// `max_width`, graded geometrically toward the lower limit.
    pub fn integrate_radial<F>(&self, a: f64, b: f64, max_width: f64, g: F) -> Result<QuadEstimate>
    where
        F: Fn(f64) -> f64,
    {
        check_limits(a, b)?;
        if a == b {
            return Ok(QuadEstimate::ZERO);
        }
        let pts = self.breakpoints(a, b, None, max_width)?;
        let panels = pts.windows(2).map(|w| (Variable::Radius, w[0], w[1])).collect();
        self.run(panels, &|_, x| g(x), "radial integral")
    }

    fn check_budget(&self, count: f64, existing: usize) -> Result<()> {
        if count + existing as f64 > self.cfg.max_panels as f64 {
            return Err(Error::Accuracy {
                context: "panel placement".into(),
                estimate: f64::NAN,
                error_bound: f64::INFINITY,
                panels: count as usize + existing,
            });
        }
        Ok(())
    }

    fn breakpoints(&self, lo: f64, hi: f64, period: Option<f64>, max_width: f64) -> Result<Vec<f64>> {
        let mut pts = vec![lo];
        if let Some(p) = period {
            let count = ((hi - lo) / p).ceil();
            self.check_budget(count, 0)?;
            let mut k = (lo / p).floor() as u64 + 1;
            loop {
                let x = k as f64 * p;
                if x >= hi {
                    break;
                }
                if x > lo {
                    pts.push(x);
                }
                k += 1;
            }
        }
        pts.push(hi);
        Ok(refine_breakpoints(&pts, max_width))
    }

    fn run<G>(&self, mut panels: Vec<(Variable, f64, f64)>, g: &G, context: &str) -> Result<QuadEstimate>
    where
        G: Fn(Variable, f64) -> f64,
    {
        for _ in 0..self.cfg.subdivision {
            panels = halve(&panels);
        }
        let mut refinements = 0;
        loop {
            if panels.len() > self.cfg.max_panels {
                return Err(Error::Accuracy {
                    context: context.into(),
                    estimate: f64::NAN,
                    error_bound: f64::INFINITY,
                    panels: panels.len(),
                });
            }
            let est = self.evaluate(&panels, g);
            let scale = est.abs_value.max(f64::MIN_POSITIVE);
            if est.error_bound <= self.cfg.rel_tol * scale || est.abs_value == 0.0 {
                return Ok(est);
            }
            if refinements == MAX_REFINEMENTS || 2 * panels.len() > self.cfg.max_panels {
                return Err(Error::Accuracy {
                    context: context.into(),
                    estimate: est.value,
                    error_bound: est.error_bound,
                    panels: panels.len(),
                });
            }
            panels = halve(&panels);
            refinements += 1;
        }
    }

    fn evaluate<G>(&self, panels: &[(Variable, f64, f64)], g: &G) -> QuadEstimate
    where
        G: Fn(Variable, f64) -> f64,
    {
        let mut values = Vec::with_capacity(panels.len());
        let mut abs = Vec::with_capacity(panels.len());
        let mut errors = Vec::with_capacity(panels.len() / 2 + 1);
        let mut i = 0;
        while i < panels.len() {
            let (v0, a0, b0) = panels[i];
            let (f0, abs0) = self.rule.integrate_with_abs(a0, b0, |x| g(v0, x));
            values.push(f0);
            abs.push(abs0);
            if i + 1 < panels.len() && panels[i + 1].0 == v0 {
                let (_, a1, b1) = panels[i + 1];
                let (f1, abs1) = self.rule.integrate_with_abs(a1, b1, |x| g(v0, x));
                values.push(f1);
                abs.push(abs1);
                let coarse = self.rule.integrate(a0, b1, |x| g(v0, x));
                errors.push((f0 + f1 - coarse).abs());
                i += 2;
            } else {
                i += 1;
            }
        }
        let abs_value = pairwise_sum(&abs);
        QuadEstimate {
            value: pairwise_sum(&values),
            error_bound: pairwise_sum(&errors) + ROUNDING_ULPS * f64::EPSILON * abs_value,
            abs_value,
            panels: panels.len(),
        }
    }
}

fn check_limits(a: f64, b: f64) -> Result<()> {
    if !(a.is_finite() && b.is_finite()) || a < 0.0 || b < a {
        return Err(Error::domain(format!(
            "integration limits must satisfy 0 <= a <= b < inf, got [{a}, {b}]"
        )));
    }
    Ok(())
}

fn halve(panels: &[(Variable, f64, f64)]) -> Vec<(Variable, f64, f64)> {
    let mut out = Vec::with_capacity(2 * panels.len());
    for &(v, a, b) in panels {
        let m = 0.5 * (a + b);
        out.push((v, a, m));
        out.push((v, m, b));
    }
    out
}

/// Caps panel widths and grades geometrically toward small abscissae so that
/// every panel `[x0, x1]` with `x0 > 0` has `x1 ≤ 2 x0`.
fn refine_breakpoints(pts: &[f64], max_width: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(pts.len());
    out.push(pts[0]);
    for w in pts.windows(2) {
        let (x0, x1) = (w[0], w[1]);
        if x1 <= x0 {
            continue;
        }
        // geometric grading
        let mut graded = Vec::new();
        if x0 == 0.0 {
            let mut x = x1 * GRADING_FLOOR;
            while x < x1 {
                graded.push(x);
                x *= 2.0;
            }
        } else {
            let mut x = 2.0 * x0;
            while x < x1 {
                graded.push(x);
                x *= 2.0;
            }
        }
        graded.push(x1);
        let mut prev = x0;
        for &next in &graded {
            let width = next - prev;
            if width > max_width {
                let pieces = (width / max_width).ceil() as usize;
                for j in 1..pieces {
                    out.push(prev + width * j as f64 / pieces as f64);
                }
            }
            out.push(next);
            prev = next;
        }
    }
    out
}
