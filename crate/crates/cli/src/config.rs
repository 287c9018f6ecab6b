// Copyright 2026 The ksdiv Authors
// SPDX-License-Identifier: Apache-2.0

//! Run configuration: a TOML file with `schema = 1`, plus command-line
//! overrides.
//!
//! ```toml
//! schema = 1
//!
//! [model]
//! kind = "pauli-rates"          # or "amplitude-damping", "custom-transfer"
//! t_max = 5.0
//!
//! [model.rates]
//! gamma1 = { kind = "constant", c = 1.0 }
//! gamma2 = { kind = "constant", c = 1.0 }
//! gamma3 = { kind = "tanh", a = -1.0, b = 1.0 }
//! ```
//!
//! Tabulated rates use `{ kind = "table", path = "g3.csv" }` with a
//! two-column `t,gamma` CSV; relative paths resolve against the config
//! file's directory.

use std::path::{Path, PathBuf};

use ksdiv::dynamics::{AmplitudeDampingSpec, DEFAULT_FD_STEP, DEFAULT_SCAN_POINTS, DEFAULT_STEP};
use ksdiv::generators::{RateFn, RateFunctions, RateTable};
use ksdiv::{PauliDiagonalMap, QubitMap};
use serde::Deserialize;

use crate::error::{CliError, CliResult};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    schema: u32,
    model: Option<RawModel>,
    grid: Option<RawGrid>,
    search: Option<RawSearch>,
    scan: Option<RawScan>,
    region: Option<RawRegion>,
    witness: Option<RawWitness>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawModel {
    kind: String,
    t_max: Option<f64>,
    preset: Option<String>,
    rates: Option<RawRates>,
    g: Option<RawG>,
    fd_step: Option<f64>,
    rows: Option<[[f64; 4]; 4]>,
    q: Option<[f64; 3]>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRates {
    gamma1: RawRate,
    gamma2: RawRate,
    gamma3: RawRate,
}

#[derive(Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
enum RawRate {
    Constant { c: f64 },
    Tanh { a: f64, b: f64 },
    Exp { a: f64, b: f64 },
    Table { path: PathBuf },
}

#[derive(Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
enum RawG {
    ExpDecay { a: f64, b: f64 },
    DampedCosine { a: f64, b: f64 },
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGrid {
    points: Option<usize>,
    ode_step: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSearch {
    seed: Option<u64>,
    budget: Option<usize>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawScan {
    budget: Option<usize>,
    band: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRegion {
    resolution: Option<usize>,
    slice: Option<bool>,
    outputs: Option<Vec<String>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawWitness {
    t: Option<f64>,
}

/// Values given on the command line; they win over the file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub budget: Option<usize>,
    pub t_max: Option<f64>,
    pub grid: Option<usize>,
}

#[derive(Debug, Clone)]
pub enum Model {
    PauliRates(RateFunctions),
    AmplitudeDamping(AmplitudeDampingSpec),
    CustomTransfer(QubitMap),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RegionOutput {
    Csv,
    Svg,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RegionScanConfig {
    /// Points per axis, at least 2.
    pub resolution: usize,
    /// Scan the plane `p₁ + p₂ + p₃ = 1` instead of the cube `[-1, 1]³`.
    pub slice: bool,
    pub outputs: Vec<RegionOutput>,
}

impl Default for RegionScanConfig {
    fn default() -> Self {
        Self {
            resolution: 201,
            slice: true,
            outputs: vec![RegionOutput::Csv, RegionOutput::Svg],
        }
    }
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub model: Option<Model>,
    pub t_max: f64,
    pub grid_points: usize,
    pub ode_step: f64,
    pub seed: u64,
    pub budget: usize,
    pub scan_budget: usize,
    pub band: f64,
    pub region: RegionScanConfig,
    pub witness_t: Option<f64>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            model: None,
            t_max: 5.0,
            grid_points: DEFAULT_SCAN_POINTS,
            ode_step: DEFAULT_STEP,
            seed: 0,
            budget: 2000,
            scan_budget: 64,
            band: 1e-3,
            region: RegionScanConfig::default(),
            witness_t: None,
        }
    }
}

fn config_err(field: &str, msg: impl std::fmt::Display) -> CliError {
    CliError::Config(format!("{field}: {msg}"))
}

fn finite(field: &str, v: f64) -> CliResult<f64> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(config_err(field, format!("expected a finite number, got {v}")))
    }
}

fn positive(field: &str, v: f64) -> CliResult<f64> {
    if v.is_finite() && v > 0.0 {
        Ok(v)
    } else {
        Err(config_err(field, format!("expected a positive number, got {v}")))
    }
}

/// Read a two-column `t,gamma` table; a non-numeric first row is a header.
pub fn read_rate_table(path: &Path) -> CliResult<RateTable> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| config_err(&path.display().to_string(), e))?;
    let (mut ts, mut vs) = (Vec::new(), Vec::new());
    for (n, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(|e| config_err(&path.display().to_string(), e))?;
        let line = rec.position().map_or(n as u64 + 1, |p| p.line());
        if rec.len() != 2 {
            return Err(config_err(
                &format!("{}:{line}", path.display()),
                format!("expected 2 columns, found {}", rec.len()),
            ));
        }
        let parsed = (rec[0].parse::<f64>(), rec[1].parse::<f64>());
        match parsed {
            (Ok(t), Ok(v)) => {
                ts.push(finite(&format!("{}:{line}", path.display()), t)?);
                vs.push(finite(&format!("{}:{line}", path.display()), v)?);
            }
            _ if n == 0 => continue,
            _ => {
                return Err(config_err(
                    &format!("{}:{line}", path.display()),
                    "non-numeric entry",
                ))
            }
        }
    }
    RateTable::new(ts, vs).map_err(|e| config_err(&path.display().to_string(), e))
}

fn build_rate(field: &str, raw: &RawRate, base: &Path) -> CliResult<RateFn> {
    Ok(match raw {
        RawRate::Constant { c } => RateFn::Constant(finite(&format!("{field}.c"), *c)?),
        RawRate::Tanh { a, b } => RateFn::Tanh {
            a: finite(&format!("{field}.a"), *a)?,
            b: finite(&format!("{field}.b"), *b)?,
        },
        RawRate::Exp { a, b } => RateFn::Exp {
            a: finite(&format!("{field}.a"), *a)?,
            b: finite(&format!("{field}.b"), *b)?,
        },
        RawRate::Table { path } => {
            let p = if path.is_absolute() {
                path.clone()
            } else {
                base.join(path)
            };
            if !p.exists() {
                return Err(config_err(
                    &format!("{field}.path"),
                    format!("file {} does not exist", p.display()),
                ));
            }
            RateFn::Table(read_rate_table(&p)?)
        }
    })
}

fn build_model(raw: &RawModel, t_max: f64, base: &Path) -> CliResult<Model> {
    match raw.kind.as_str() {
        "pauli-rates" => {
            let rates = match (&raw.preset, &raw.rates) {
                (Some(_), Some(_)) => {
                    return Err(config_err("model", "give either `preset` or `[model.rates]`, not both"))
                }
                (Some(p), None) => match p.as_str() {
                    "eternally-non-markovian" => RateFunctions::eternally_non_markovian(t_max),
                    "ks-divisible-variant" => RateFunctions::ks_divisible_variant(t_max),
                    other => {
                        return Err(config_err(
                            "model.preset",
                            format!(
                                "unknown preset `{other}` (expected eternally-non-markovian or ks-divisible-variant)"
                            ),
                        ))
                    }
                },
                (None, Some(r)) => RateFunctions::new(
                    [
                        build_rate("model.rates.gamma1", &r.gamma1, base)?,
                        build_rate("model.rates.gamma2", &r.gamma2, base)?,
                        build_rate("model.rates.gamma3", &r.gamma3, base)?,
                    ],
                    t_max,
                ),
                (None, None) => {
                    return Err(config_err("model", "pauli-rates needs `preset` or `[model.rates]`"))
                }
            };
            Ok(Model::PauliRates(rates.map_err(|e| config_err("model.rates", e))?))
        }
        "amplitude-damping" => {
            let g = raw
                .g
                .as_ref()
                .ok_or_else(|| config_err("model", "amplitude-damping needs `[model.g]`"))?;
            let spec = match g {
                RawG::ExpDecay { a, b } => AmplitudeDampingSpec::exp_decay(
                    finite("model.g.a", *a)?,
                    finite("model.g.b", *b)?,
                    t_max,
                ),
                RawG::DampedCosine { a, b } => AmplitudeDampingSpec::damped_cosine(
                    finite("model.g.a", *a)?,
                    finite("model.g.b", *b)?,
                    t_max,
                ),
            }
            .map_err(|e| config_err("model.g", e))?;
            let h = positive("model.fd_step", raw.fd_step.unwrap_or(DEFAULT_FD_STEP))?;
            Ok(Model::AmplitudeDamping(
                spec.with_fd_step(h).map_err(|e| config_err("model.fd_step", e))?,
            ))
        }
        "custom-transfer" => {
            let given = [raw.preset.is_some(), raw.rows.is_some(), raw.q.is_some()];
            if given.iter().filter(|&&b| b).count() != 1 {
                return Err(config_err(
                    "model",
                    "custom-transfer needs exactly one of `preset`, `rows`, `q`",
                ));
            }
            let map = if let Some(p) = &raw.preset {
                match p.as_str() {
                    "identity" => QubitMap::identity(),
                    "transposition" => QubitMap::transposition(),
                    "example-one" => PauliDiagonalMap::new([1.0, 1.0, -1.0]).to_map(),
                    other => {
                        return Err(config_err(
                            "model.preset",
                            format!("unknown preset `{other}` (expected identity, transposition or example-one)"),
                        ))
                    }
                }
            } else if let Some(rows) = raw.rows {
                QubitMap::from_rows(rows).map_err(|e| config_err("model.rows", e))?
            } else {
                let q = raw.q.expect("checked above");
                for (k, v) in q.iter().enumerate() {
                    finite(&format!("model.q[{k}]"), *v)?;
                }
                PauliDiagonalMap::new(q).to_map()
            };
            Ok(Model::CustomTransfer(map))
        }
        other => Err(config_err(
            "model.kind",
            format!("unknown model `{other}` (expected pauli-rates, amplitude-damping or custom-transfer)"),
        )),
    }
}

impl RunConfig {
    /// Parse a config file and apply overrides.
    pub fn load(path: &Path, ov: &Overrides) -> CliResult<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| config_err(&path.display().to_string(), e))?;
        let base = path.parent().unwrap_or(Path::new("."));
        Self::parse(&text, base, ov)
            .map_err(|e| match e {
                CliError::Config(m) => CliError::Config(format!("{}: {m}", path.display())),
                other => other,
            })
    }

    /// Parse config text; `base` resolves relative table paths.
    pub fn parse(text: &str, base: &Path, ov: &Overrides) -> CliResult<Self> {
        let raw: RawConfig = toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
        if raw.schema != SCHEMA_VERSION {
            return Err(config_err(
                "schema",
                format!("unsupported schema {} (expected {SCHEMA_VERSION})", raw.schema),
            ));
        }
        let mut cfg = RunConfig::default();
        if let Some(m) = &raw.model {
            if let Some(t) = m.t_max {
                cfg.t_max = positive("model.t_max", t)?;
            }
        }
        if let Some(g) = &raw.grid {
            if let Some(n) = g.points {
                cfg.grid_points = n;
            }
            if let Some(h) = g.ode_step {
                cfg.ode_step = positive("grid.ode_step", h)?;
            }
        }
        if let Some(s) = &raw.search {
            cfg.seed = s.seed.unwrap_or(cfg.seed);
            cfg.budget = s.budget.unwrap_or(cfg.budget);
        }
        if let Some(s) = &raw.scan {
            cfg.scan_budget = s.budget.unwrap_or(cfg.scan_budget);
            if let Some(b) = s.band {
                cfg.band = positive("scan.band", b)?;
            }
        }
        if let Some(r) = &raw.region {
            if let Some(n) = r.resolution {
                cfg.region.resolution = n;
            }
            cfg.region.slice = r.slice.unwrap_or(cfg.region.slice);
            if let Some(outs) = &r.outputs {
                cfg.region.outputs = outs
                    .iter()
                    .map(|o| match o.as_str() {
                        "csv" => Ok(RegionOutput::Csv),
                        "svg" => Ok(RegionOutput::Svg),
                        other => Err(config_err(
                            "region.outputs",
                            format!("unknown output `{other}` (expected csv or svg)"),
                        )),
                    })
                    .collect::<CliResult<_>>()?;
            }
        }
        if let Some(w) = &raw.witness {
            if let Some(t) = w.t {
                cfg.witness_t = Some(finite("witness.t", t)?);
            }
        }
        cfg.apply(ov)?;
        if let Some(m) = &raw.model {
            cfg.model = Some(build_model(m, cfg.t_max, base)?);
        }
        Ok(cfg)
    }

    /// Apply command-line overrides and validate shared fields.
    pub fn apply(&mut self, ov: &Overrides) -> CliResult<()> {
        if let Some(s) = ov.seed {
            self.seed = s;
        }
        if let Some(b) = ov.budget {
            self.budget = b;
        }
        if let Some(t) = ov.t_max {
            self.t_max = positive("--t-max", t)?;
        }
        if let Some(n) = ov.grid {
            self.grid_points = n;
            self.region.resolution = n;
        }
        if self.grid_points < 2 {
            return Err(config_err("grid.points", "need at least 2 points"));
        }
        if self.region.resolution < 2 {
            return Err(config_err("region.resolution", "need at least 2 points per axis"));
        }
        if self.budget == 0 || self.scan_budget == 0 {
            return Err(config_err("search.budget", "budget must be positive"));
        }
        Ok(())
    }
}
