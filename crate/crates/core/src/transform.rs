//! Radial Fourier transforms and the on-disk table used for presets without a
//! closed-form transform.
//!
//! For a radial profile `φ(|x|)` on `ℝⁿ`,
//! `φ̂(r) = ω_n ∫_0^∞ K_n(r s) φ(s) s^{n-1} ds` with `K_1 = cos`,
//! `K_2 = J₀` and `K_3(x) = sin(x)/x`.
//!
//! # Cache format (version 1)
//!
//! Tab-separated UTF-8 text:
//!
//! ```text
//! # imbq-transform-table v1
//! # preset=bump dim=2 step=2e-2 r_max=4e2 samples=20001 error_estimate=3.1e-15
//! r	value	derivative
//! 0e0	1.4099...e0	0e0
//! ...
//! ```
//!
//! Rows sample `φ̂` and `φ̂'` on the uniform grid `r_i = i·step`; values are
//! written with 17 significant digits. `error_estimate` is an absolute bound
//! on the cubic-Hermite interpolant (quadrature and interpolation error).
//! A file whose header does not match the requested table is rebuilt.

use std::collections::HashMap;
use std::fs;
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::sync::{Arc, Mutex, OnceLock};

use crate::dimension::Dimension;
use crate::error::{Error, Result};
use crate::multiplier::sinc;
use crate::quadrature::{pairwise_sum, GaussLegendre};

pub const TABLE_FORMAT_VERSION: u32 = 1;
const TABLE_MAGIC: &str = "# imbq-transform-table v1";

/// `K_n(x)`.
#[inline]
pub fn radial_kernel(dim: Dimension, x: f64) -> f64 {
    match dim {
        Dimension::One => x.cos(),
        Dimension::Two => libm::j0(x),
        Dimension::Three => sinc(x),
    }
}

/// `K_n'(x)`.
#[inline]
pub fn radial_kernel_derivative(dim: Dimension, x: f64) -> f64 {
    match dim {
        Dimension::One => -x.sin(),
        Dimension::Two => -libm::j1(x),
        Dimension::Three => {
            if x.abs() < 1e-3 {
                let x2 = x * x;
                -x / 3.0 + x * x2 / 30.0 - x * x2 * x2 / 840.0
            } else {
                (x * x.cos() - x.sin()) / (x * x)
            }
        }
    }
}

/// `K_n(x) - 1`, without cancellation for small `x`.
#[inline]
pub fn radial_kernel_minus_one(dim: Dimension, x: f64) -> f64 {
    match dim {
        Dimension::One => {
            let h = (0.5 * x).sin();
            -2.0 * h * h
        }
        Dimension::Two => {
            if x.abs() < 0.05 {
                let q = 0.25 * x * x;
                // J₀(x) - 1 = Σ_{k≥1} (-q)^k / (k!)²
                -q + q * q / 4.0 - q * q * q / 36.0 + q * q * q * q / 576.0
            } else {
                libm::j0(x) - 1.0
            }
        }
        Dimension::Three => {
            if x.abs() < 0.05 {
                let x2 = x * x;
                -x2 / 6.0 + x2 * x2 / 120.0 - x2 * x2 * x2 / 5040.0
            } else {
                x.sin() / x - 1.0
            }
        }
    }
}

/// Fixed quadrature nodes over `[0, support]` carrying `ω_n φ(s) s^{n-1} w`.
#[derive(Debug, Clone)]
pub struct RadialTransformer {
    dim: Dimension,
    nodes: Vec<f64>,
    weighted: Vec<f64>,
}

impl RadialTransformer {
    /// `panels` panels of `order`-point Gauss–Legendre on `[0, support]`.
    pub fn new<F: Fn(f64) -> f64>(dim: Dimension, profile: F, support: f64, panels: usize, order: usize) -> Self {
        let rule = GaussLegendre::new(order);
        let omega = dim.sphere_area();
        let n1 = dim.n() as i32 - 1;
        let width = support / panels as f64;
        let mut nodes = Vec::with_capacity(panels * order);
        let mut weighted = Vec::with_capacity(panels * order);
        for p in 0..panels {
            let a = p as f64 * width;
            let mid = a + 0.5 * width;
            for (x, w) in rule.nodes().iter().zip(rule.weights()) {
                let s = mid + 0.5 * width * x;
                nodes.push(s);
                weighted.push(omega * profile(s) * s.powi(n1) * w * 0.5 * width);
            }
        }
        Self { dim, nodes, weighted }
    }

    fn apply<K: Fn(f64) -> f64>(&self, kernel: K) -> f64 {
        let terms: Vec<f64> = self
            .nodes
            .iter()
            .zip(&self.weighted)
            .map(|(&s, &w)| w * kernel(s))
            .collect();
        pairwise_sum(&terms)
    }

    /// `φ̂(r)`.
    pub fn value(&self, r: f64) -> f64 {
        self.apply(|s| radial_kernel(self.dim, r * s))
    }

    /// `φ̂'(r)`.
    pub fn derivative(&self, r: f64) -> f64 {
        self.apply(|s| s * radial_kernel_derivative(self.dim, r * s))
    }

    /// `φ̂(r) - φ̂(0)` computed from `K_n - 1` directly.
    pub fn value_minus_zero(&self, r: f64) -> f64 {
        self.apply(|s| radial_kernel_minus_one(self.dim, r * s))
    }
}

/// Uniformly sampled radial transform with cubic-Hermite interpolation.
#[derive(Debug, Clone, PartialEq)]
pub struct TransformTable {
    pub preset: String,
    pub dim: Dimension,
    pub step: f64,
    pub r_max: f64,
    pub error_estimate: f64,
    values: Vec<f64>,
    derivatives: Vec<f64>,
}

impl TransformTable {
    /// Tabulates `transformer` on `[0, r_max]` with spacing `step`.
    pub fn build(preset: &str, transformer: &RadialTransformer, fine: &RadialTransformer, step: f64, r_max: f64) -> Self {
        let samples = (r_max / step).round() as usize + 1;
        let mut values = Vec::with_capacity(samples);
        let mut derivatives = Vec::with_capacity(samples);
        for i in 0..samples {
            let r = i as f64 * step;
            values.push(transformer.value(r));
            derivatives.push(transformer.derivative(r));
        }
        let mut table = Self {
            preset: preset.to_string(),
            dim: transformer.dim,
            step,
            r_max,
            error_estimate: 0.0,
            values,
            derivatives,
        };
        // interpolation error at midpoints against a finer quadrature
        let probes = 97;
        let mut err: f64 = 0.0;
        for k in 0..probes {
            let i = (k * (samples - 2)) / (probes - 1);
            let r = (i as f64 + 0.5) * step;
            err = err.max((table.value(r) - fine.value(r)).abs());
        }
        for r in [0.0, 1.0, 10.0, r_max] {
            err = err.max((transformer.value(r) - fine.value(r)).abs());
        }
        table.error_estimate = err;
        table
    }

    pub fn samples(&self) -> usize {
        self.values.len()
    }

    /// Interpolated transform; zero beyond `r_max`.
    pub fn value(&self, r: f64) -> f64 {
        if r > self.r_max {
            return 0.0;
        }
        let x = r / self.step;
        let i = (x.floor() as usize).min(self.values.len() - 2);
        let u = x - i as f64;
        let (y0, y1) = (self.values[i], self.values[i + 1]);
        let (d0, d1) = (self.derivatives[i] * self.step, self.derivatives[i + 1] * self.step);
        let u2 = u * u;
        let u3 = u2 * u;
        (2.0 * u3 - 3.0 * u2 + 1.0) * y0
            + (u3 - 2.0 * u2 + u) * d0
            + (-2.0 * u3 + 3.0 * u2) * y1
            + (u3 - u2) * d1
    }

    fn header(&self) -> String {
        format!(
            "{TABLE_MAGIC}\n# preset={} dim={} step={:e} r_max={:e} samples={} error_estimate={:e}\nr\tvalue\tderivative\n",
            self.preset,
            self.dim,
            self.step,
            self.r_max,
            self.samples(),
            self.error_estimate
        )
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        let dir = path.parent().unwrap_or_else(|| Path::new("."));
        fs::create_dir_all(dir)?;
        let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
        let mut body = self.header();
        for (i, (v, d)) in self.values.iter().zip(&self.derivatives).enumerate() {
            let r = i as f64 * self.step;
            body.push_str(&format!("{r:.16e}\t{v:.16e}\t{d:.16e}\n"));
        }
        tmp.write_all(body.as_bytes())?;
        tmp.flush()?;
        // atomic rename: concurrent writers serialize on the final path
        tmp.persist(path).map_err(|e| Error::Cache {
            path: path.to_path_buf(),
            message: e.to_string(),
        })?;
        Ok(())
    }

    /// Reads a table, checking it matches `(preset, dim, step, r_max)`.
    pub fn read(path: &Path, preset: &str, dim: Dimension, step: f64, r_max: f64) -> Result<Self> {
        let cache_err = |message: String| Error::Cache {
            path: path.to_path_buf(),
            message,
        };
        let file = fs::File::open(path)?;
        let mut lines = BufReader::new(file).lines();
        let magic = lines.next().transpose()?.unwrap_or_default();
        if magic.trim() != TABLE_MAGIC {
            return Err(cache_err(format!("unrecognized table header {magic:?}")));
        }
        let meta_line = lines.next().transpose()?.unwrap_or_default();
        let meta: HashMap<&str, &str> = meta_line
            .trim_start_matches('#')
            .split_whitespace()
            .filter_map(|kv| kv.split_once('='))
            .collect();
        let get = |k: &str| meta.get(k).copied().ok_or_else(|| cache_err(format!("missing key {k}")));
        let parse = |k: &str| -> Result<f64> {
            get(k)?.parse::<f64>().map_err(|e| cache_err(format!("bad {k}: {e}")))
        };
        if get("preset")? != preset || get("dim")? != dim.to_string() {
            return Err(cache_err("table is for a different preset".into()));
        }
        if parse("step")? != step || parse("r_max")? != r_max {
            return Err(cache_err("table resolution does not match".into()));
        }
        let samples = parse("samples")? as usize;
        let error_estimate = parse("error_estimate")?;
        let _columns = lines.next().transpose()?;
        let mut values = Vec::with_capacity(samples);
        let mut derivatives = Vec::with_capacity(samples);
        for line in lines {
            let line = line?;
            let mut cols = line.split('\t').skip(1);
            let mut next = || -> Result<f64> {
                cols.next()
                    .ok_or_else(|| cache_err("short row".into()))?
                    .parse::<f64>()
                    .map_err(|e| cache_err(format!("bad number: {e}")))
            };
            values.push(next()?);
            derivatives.push(next()?);
        }
        if values.len() != samples || samples < 2 {
            return Err(cache_err(format!("expected {samples} rows, found {}", values.len())));
        }
        Ok(Self {
            preset: preset.to_string(),
            dim,
            step,
            r_max,
            error_estimate,
            values,
            derivatives,
        })
    }
}

pub(crate) fn cache_file_name(preset: &str, dim: Dimension, step: f64, r_max: f64) -> String {
    format!("{preset}_dim{dim}_step{step:e}_rmax{r_max:e}_v{TABLE_FORMAT_VERSION}.tsv")
}

type TableKey = (String, Dimension);

fn memo() -> &'static Mutex<HashMap<TableKey, Arc<TransformTable>>> {
    static TABLES: OnceLock<Mutex<HashMap<TableKey, Arc<TransformTable>>>> = OnceLock::new();
    TABLES.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Returns a memoized table, reading it from `cache_dir` when present and
/// valid, otherwise building it with `build` (and writing it back).
pub(crate) fn cached_table<B>(
    preset: &str,
    dim: Dimension,
    step: f64,
    r_max: f64,
    cache_dir: Option<&Path>,
    build: B,
) -> Result<Arc<TransformTable>>
where
    B: FnOnce() -> TransformTable,
{
    let key = (preset.to_string(), dim);
    let mut tables = memo().lock().expect("transform table memo poisoned");
    if let Some(t) = tables.get(&key) {
        return Ok(Arc::clone(t));
    }
    let path: Option<PathBuf> = cache_dir.map(|d| d.join(cache_file_name(preset, dim, step, r_max)));
    let loaded = path
        .as_deref()
        .filter(|p| p.exists())
        .and_then(|p| match TransformTable::read(p, preset, dim, step, r_max) {
            Ok(t) => Some(t),
            Err(e) => {
                log::warn!("ignoring transform cache {}: {e}", p.display());
                None
            }
        });
    let table = match loaded {
        Some(t) => t,
        None => {
            let t = build();
            if let Some(p) = &path {
                t.write(p)?;
            }
            t
        }
    };
    let table = Arc::new(table);
    tables.insert(key, Arc::clone(&table));
    Ok(table)
}
