use std::path::Path;

use imbq::growth::{fit_growth, sandwich_constants, DataFactors, GrowthKind, GrowthModel, SandwichConstants, SeriesSource};
use imbq::spectral::{l2_norm, AliasingPolicy, GridField, SpectralSolver};
use imbq::{BoundsVerifier, Dimension, NormOracle, NormSeries};
use serde::Serialize;

use crate::artifact::{Artifact, Cell, ParsedCsv};
use crate::config::{RunConfig, SCHEMA_VERSION};
use crate::error::CliError;

/// Rendered artifact plus the check tally that decides the exit code.
pub struct Outcome {
    pub bytes: Vec<u8>,
    pub failed: usize,
    pub total: usize,
}

impl Outcome {
    fn clean(bytes: Vec<u8>) -> Self {
        Self {
            bytes,
            failed: 0,
            total: 0,
        }
    }
}

fn base_meta(kind: &'static str, header: Vec<&'static str>, cfg: &RunConfig) -> Artifact {
    Artifact::new(kind, header).meta("dim", cfg.dim.n()).meta("preset", cfg.preset)
}

/// Evolves `(u₀, u₁) = (0, preset)` on the grid and tabulates norms and
/// energy at each sample time.
pub fn evolve(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let preset = cfg.build_preset()?;
    let spec = cfg.grid(&preset)?;
    let solver = SpectralSolver::new(spec, AliasingPolicy::Warn);
    let u0 = GridField::zeros(spec);
    let u1 = GridField::from_preset(spec, &preset)?;
    let mut art = base_meta(
        "evolve",
        vec![
            "t",
            "norm_l2_x",
            "norm_l2_xi",
            "energy_total",
            "energy_kinetic",
            "energy_grad_kinetic",
            "energy_potential",
        ],
        cfg,
    )
    .meta("grid_R", spec.half_width())
    .meta("grid_N", spec.points());
    for t in cfg.times()? {
        let ev = solver.evolve(&u0, &u1, t)?;
        let e = solver.energy(&ev.u, &ev.ut)?;
        art.push(vec![
            Cell::Num(t),
            Cell::Num(l2_norm(&ev.u)),
            Cell::Num(solver.norm_xi_sq(&ev.u)?.sqrt()),
            Cell::Num(e.total),
            Cell::Num(e.kinetic),
            Cell::Num(e.grad_kinetic),
            Cell::Num(e.potential),
        ]);
    }
    Ok(Outcome::clean(art.render(cfg.format)?))
}

/// `‖w(t,·)‖²_ξ` from the quadrature oracle over the sweep.
pub fn norms(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let preset = cfg.build_preset()?;
    let oracle = NormOracle::new(&preset, cfg.quadrature())?;
    let mut art = base_meta("norms", vec!["t", "norm_sq_xi", "error_estimate", "panels"], cfg)
        .meta("source", SeriesSource::Oracle)
        .meta("tol", cfg.tol);
    for t in cfg.times()? {
        let est = oracle.norm_sq(t)?;
        art.push(vec![
            Cell::Num(t),
            Cell::Num(est.value),
            Cell::Num(est.error_bound),
            Cell::Int(est.panels as u64),
        ]);
    }
    Ok(Outcome::clean(art.render(cfg.format)?))
}

/// Every bound chain for the preset's dimension, one row per check.
pub fn bounds(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let preset = cfg.build_preset()?;
    let verifier = BoundsVerifier::new(&preset, cfg.verifier())?;
    let checks = verifier.verify_all(&cfg.times()?, cfg.gamma)?;
    let mut art = base_meta(
        "bounds",
        vec!["name", "t", "lhs", "rhs", "direction", "margin", "pass", "vacuous", "constants"],
        cfg,
    )
    .meta("gamma", cfg.gamma)
    .meta("delta0", cfg.delta0);
    for c in &checks {
        let constants = c
            .constants
            .iter()
            .map(|(k, v)| format!("{k}={v:.16e}"))
            .collect::<Vec<_>>()
            .join(";");
        art.push(vec![
            Cell::Text(c.name.clone()),
            Cell::Num(c.t),
            Cell::Num(c.lhs),
            Cell::Num(c.rhs),
            Cell::Text(serde_json::to_value(c.direction)?.as_str().unwrap_or_default().to_string()),
            Cell::Num(c.margin),
            Cell::Bool(c.pass),
            Cell::Bool(c.vacuous),
            Cell::Text(constants),
        ]);
    }
    let failed = checks.iter().filter(|c| !c.pass).count();
    for c in checks.iter().filter(|c| !c.pass) {
        log::error!("check {} failed at t = {}: lhs {:e}, rhs {:e}", c.name, c.t, c.lhs, c.rhs);
    }
    Ok(Outcome {
        bytes: art.render(cfg.format)?,
        failed,
        total: checks.len(),
    })
}

#[derive(Debug, Serialize)]
struct SeriesMeta {
    dim: usize,
    preset: String,
    source: SeriesSource,
    count: usize,
    t_first: f64,
    t_last: f64,
}

#[derive(Debug, Serialize)]
struct Window {
    t_min: f64,
    t_max: f64,
    points: usize,
}

#[derive(Debug, Serialize)]
struct FitReport {
    schema_version: u32,
    kind: &'static str,
    series: SeriesMeta,
    window: Window,
    models: Vec<GrowthModel>,
    selected: GrowthKind,
    expected: GrowthKind,
    sandwich: SandwichConstants,
}

fn read_series(path: &Path, cfg: &RunConfig) -> Result<NormSeries, CliError> {
    let parsed = ParsedCsv::read(path)?;
    let bad = |message: String| CliError::Input {
        path: path.to_path_buf(),
        message,
    };
    if !matches!(parsed.kind.as_str(), "norms" | "series") {
        return Err(bad(format!("kind={:?} is not a norm series (expected norms or series)", parsed.kind)));
    }
    let t_col = parsed.column(&["t"]).ok_or_else(|| bad("no `t` column".into()))?;
    let v_col = parsed
        .column(&["norm_sq_xi", "values_sq"])
        .ok_or_else(|| bad("no `norm_sq_xi` or `values_sq` column".into()))?;
    let times = parsed.floats(t_col, path)?;
    let values = parsed.floats(v_col, path)?;
    let dim = match parsed.meta.get("dim") {
        Some(d) => {
            let n: usize = d.parse().map_err(|_| bad(format!("dim tag {d:?} is not an integer")))?;
            Dimension::new(n).map_err(|e| bad(e.to_string()))?
        }
        None => cfg.dim,
    };
    let preset = parsed.meta.get("preset").cloned().unwrap_or_else(|| cfg.preset.to_string());
    let source = match parsed.meta.get("source") {
        Some(s) => s.parse().map_err(|e: imbq::Error| bad(e.to_string()))?,
        None => SeriesSource::External,
    };
    NormSeries::new(dim, preset, times, values, source).map_err(|e| bad(e.to_string()))
}

/// Fits the growth regimes to a series read from `--input` or computed by
/// the oracle, and reports sandwich constants for the expected regime.
pub fn fit(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let preset = cfg.build_preset()?;
    let series = match &cfg.input {
        Some(path) => read_series(path, cfg)?,
        None => NormOracle::new(&preset, cfg.quadrature())?.series(&cfg.times()?)?,
    };
    let (t_min, t_max) = if cfg.window_given {
        (cfg.t_min, cfg.t_max)
    } else {
        (series.times[0], *series.times.last().unwrap())
    };
    let models = fit_growth(&series, t_min, t_max)?;
    let expected = GrowthKind::expected(series.dim);
    let factors = if series.dim == preset.dim() {
        DataFactors::from_preset(&preset)
    } else {
        DataFactors::from_preset(&imbq::DataPreset::new(cfg.preset, series.dim, None)?)
    };
    let sandwich = sandwich_constants(&series, factors, expected, t_min, t_max)?;
    let report = FitReport {
        schema_version: SCHEMA_VERSION,
        kind: "fit",
        series: SeriesMeta {
            dim: series.dim.n(),
            preset: series.preset.clone(),
            source: series.source,
            count: series.times.len(),
            t_first: series.times[0],
            t_last: *series.times.last().unwrap(),
        },
        window: Window {
            t_min,
            t_max,
            points: series.window(t_min, t_max).0.len(),
        },
        selected: models[0].kind,
        models,
        expected,
        sandwich,
    };
    if report.selected != expected {
        log::warn!("selected regime {} differs from the expected {expected}", report.selected);
    }
    let mut bytes = serde_json::to_vec_pretty(&report)?;
    bytes.push(b'\n');
    Ok(Outcome::clean(bytes))
}
