//! Command-line front end: resolves a run configuration from flags, an
//! optional JSON file and the environment, then writes CSV or JSON tables.
//!
//! Precedence is flag, then config file, then `MDWINDOW_SEED` (seed only),
//! then built-in defaults.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use crate::chain_sampler::{ChainState, RngStream};
use crate::error::Error;
use crate::process_paths::{generate_path, PathSimulator};
use crate::chain_sampler::ChainSampler;
use crate::renewal_measure::{Params, ScaleWindow, MU_ORIGIN};
use crate::superposition::{build_composite, WindowSet};
use crate::tail_oracles::{
    autocovariance_dominance, autocovariance_exact, boundary_tail_exact, case1_upper, case2_certificate,
    gaussian_reference, mc_tail, predicted_rate, rate_transform, RateQuery, Target, DEFAULT_TAIL_SHARE,
};

pub const SEED_ENV: &str = "MDWINDOW_SEED";

pub const SIMULATE_HEADER: [&str; 10] =
    ["shard", "s_prime", "s_tilde", "s_dprime", "s_total", "a1", "b1", "an", "bn", "interior"];

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("invalid config: {0}")]
    Config(String),
    #[error(transparent)]
    Core(#[from] Error),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Core(Error::UnreachablePrecision(_)) => 3,
            CliError::Core(_) => 2,
            CliError::Io(_) | CliError::Csv(_) | CliError::Json(_) => 1,
        }
    }
}

fn config_error(field: &str, detail: impl std::fmt::Display) -> CliError {
    CliError::Config(format!("{field}: {detail}"))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Csv,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "mdwindow", version, about = "Moderate-deviation windows of stationary renewal-reward processes")]
pub struct Cli {
    #[command(flatten)]
    pub overrides: ConfigOverrides,
    #[command(subcommand)]
    pub command: CommandKind,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum CommandKind {
    /// Parameters, window and process constants.
    Params,
    /// One row per simulated path with its sum decomposition.
    Simulate,
    /// Certificates, Monte Carlo and reference rates over the n and gamma grids.
    Rates,
    /// Exact and empirical autocovariances.
    Autocov,
    /// Exact tail of the last boundary term over the x grid.
    Boundary,
}

/// Every field optional, shared by flags and the JSON config file.
#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigOverrides {
    /// JSON config file; flags override its entries.
    #[arg(long, global = true)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
    #[arg(long, global = true)]
    pub alpha: Option<f64>,
    #[arg(long, global = true)]
    pub beta: Option<f64>,
    /// Windows as `u:v` pairs, comma separated.
    #[arg(long, global = true, value_parser = parse_window, value_delimiter = ',')]
    pub windows: Option<Vec<(f64, f64)>>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[arg(long, global = true)]
    pub shards: Option<usize>,
    /// Horizons, comma separated.
    #[arg(long, global = true, value_delimiter = ',')]
    pub n: Option<Vec<u64>>,
    /// Scale exponents, comma separated.
    #[arg(long, global = true, value_delimiter = ',')]
    pub gamma: Option<Vec<f64>>,
    #[arg(long, global = true)]
    pub c: Option<f64>,
    #[arg(long, global = true)]
    pub reps: Option<u64>,
    #[arg(long, global = true)]
    pub confidence: Option<f64>,
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    #[arg(long, global = true)]
    pub k_max: Option<u64>,
    /// Thresholds for `boundary`, comma separated.
    #[arg(long, global = true, value_delimiter = ',')]
    pub x: Option<Vec<f64>>,
    /// Largest horizon at which `rates` runs Monte Carlo.
    #[arg(long, global = true)]
    pub mc_max_n: Option<u64>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<OutputFormat>,
}

fn parse_window(s: &str) -> Result<(f64, f64), String> {
    let (u, v) = s.split_once(':').ok_or_else(|| format!("expected u:v, got {s:?}"))?;
    let u = u.trim().parse::<f64>().map_err(|e| format!("{u:?}: {e}"))?;
    let v = v.trim().parse::<f64>().map_err(|e| format!("{v:?}: {e}"))?;
    Ok((u, v))
}

impl ConfigOverrides {
    /// Entries of `self` win over those of `base`.
    fn over(self, base: ConfigOverrides) -> ConfigOverrides {
        ConfigOverrides {
            config: self.config.or(base.config),
            alpha: self.alpha.or(base.alpha),
            beta: self.beta.or(base.beta),
            windows: self.windows.or(base.windows),
            seed: self.seed.or(base.seed),
            shards: self.shards.or(base.shards),
            n: self.n.or(base.n),
            gamma: self.gamma.or(base.gamma),
            c: self.c.or(base.c),
            reps: self.reps.or(base.reps),
            confidence: self.confidence.or(base.confidence),
            tol: self.tol.or(base.tol),
            k_max: self.k_max.or(base.k_max),
            x: self.x.or(base.x),
            mc_max_n: self.mc_max_n.or(base.mc_max_n),
            format: self.format.or(base.format),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Model {
    Single(Params),
    Windows(WindowSet),
}

/// Fully resolved and validated configuration.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub model: Model,
    pub seed: u64,
    pub shards: usize,
    pub n: Vec<u64>,
    pub gamma: Vec<f64>,
    pub c: f64,
    pub reps: u64,
    pub confidence: f64,
    pub tol: f64,
    pub k_max: u64,
    pub x: Vec<f64>,
    pub mc_max_n: u64,
    pub format: OutputFormat,
}

impl RunConfig {
    /// Reads the config file named in `flags`, if any, then resolves.
    pub fn load(flags: ConfigOverrides, env_seed: Option<&str>) -> Result<RunConfig, CliError> {
        let file = match &flags.config {
            Some(path) => {
                let text = fs::read_to_string(path).map_err(|e| config_error("config", format!("{}: {e}", path.display())))?;
                serde_json::from_str::<ConfigOverrides>(&text).map_err(|e| config_error("config", e))?
            }
            None => ConfigOverrides::default(),
        };
        let env_seed = env_seed
            .map(|s| s.trim().parse::<u64>().map_err(|e| config_error(SEED_ENV, format!("{s:?}: {e}"))))
            .transpose()?;
        Self::resolve(flags.over(file), env_seed)
    }

    pub fn resolve(o: ConfigOverrides, env_seed: Option<u64>) -> Result<RunConfig, CliError> {
        let model = match (o.alpha, o.beta, o.windows) {
            (Some(alpha), Some(beta), None) => {
                Model::Single(Params::new(alpha, beta).map_err(|e| config_error("alpha/beta", e))?)
            }
            (None, None, Some(pairs)) => {
                let set = WindowSet::from_pairs(&pairs).map_err(|e| config_error("windows", e))?;
                if set.is_empty() {
                    return Err(config_error("windows", "at least one window is required"));
                }
                Model::Windows(set)
            }
            (Some(_), None, None) => return Err(config_error("beta", "missing (alpha is set)")),
            (None, Some(_), None) => return Err(config_error("alpha", "missing (beta is set)")),
            (None, None, None) => return Err(config_error("alpha/beta", "either alpha and beta or windows is required")),
            _ => return Err(config_error("windows", "give either alpha and beta or windows, not both")),
        };
        let cfg = RunConfig {
            model,
            seed: o.seed.or(env_seed).unwrap_or(0),
            shards: o.shards.unwrap_or(1),
            n: o.n.unwrap_or_else(|| vec![1_000]),
            gamma: o.gamma.unwrap_or_else(|| vec![0.32]),
            c: o.c.unwrap_or(1.0),
            reps: o.reps.unwrap_or(1_000),
            confidence: o.confidence.unwrap_or(0.95),
            tol: o.tol.unwrap_or(1e-12),
            k_max: o.k_max.unwrap_or(20),
            x: o.x.unwrap_or_default(),
            mc_max_n: o.mc_max_n.unwrap_or(100_000),
            format: o.format.unwrap_or(OutputFormat::Csv),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<(), CliError> {
        if self.shards == 0 {
            return Err(config_error("shards", "must be >= 1"));
        }
        if self.n.is_empty() || self.n.contains(&0) {
            return Err(config_error("n", "needs at least one horizon, all >= 1"));
        }
        if self.gamma.is_empty() || self.gamma.iter().any(|&g| !(g > 0.0 && g < 0.5)) {
            return Err(config_error("gamma", "needs at least one value, all in (0, 0.5)"));
        }
        if !(self.c > 0.0 && self.c.is_finite()) {
            return Err(config_error("c", "must be a positive finite number"));
        }
        if !(self.confidence > 0.0 && self.confidence < 1.0) {
            return Err(config_error("confidence", "must lie in (0, 1)"));
        }
        if !(self.tol > 0.0) {
            return Err(config_error("tol", "must be positive"));
        }
        if self.x.iter().any(|&x| !(x > 0.0)) {
            return Err(config_error("x", "thresholds must be positive"));
        }
        Ok(())
    }

    fn single(&self, command: &str) -> Result<Params, CliError> {
        match &self.model {
            Model::Single(p) => Ok(*p),
            Model::Windows(_) => Err(config_error("windows", format!("`{command}` needs alpha and beta"))),
        }
    }

    fn single_n(&self, command: &str) -> Result<u64, CliError> {
        match self.n.as_slice() {
            [n] => Ok(*n),
            _ => Err(config_error("n", format!("`{command}` needs exactly one horizon"))),
        }
    }

    fn window_set(&self) -> WindowSet {
        match &self.model {
            Model::Single(p) => WindowSet::new(vec![p.window()]).expect("a single window is always valid"),
            Model::Windows(w) => w.clone(),
        }
    }
}

/// `%.12g`: 12 significant digits, trailing zeros trimmed.
pub fn fmt_g(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{x:.11e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..12).contains(&exp) {
        let fixed = format!("{:.*}", (11 - exp) as usize, x);
        trim_zeros(&fixed).to_string()
    } else {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{}{:02}", trim_zeros(mantissa), sign, exp.abs())
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(u128),
    Text(String),
    Bool(bool),
    Empty,
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Num(x) => fmt_g(*x),
            Cell::Int(i) => i.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Bool(b) => b.to_string(),
            Cell::Empty => String::new(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Num(x) if x.is_finite() => {
                let rounded: f64 = fmt_g(*x).parse().expect("formatted float parses");
                json!(rounded)
            }
            Cell::Num(x) => Value::String(fmt_g(*x)),
            Cell::Int(i) => u64::try_from(*i).map(Value::from).unwrap_or_else(|_| Value::String(i.to_string())),
            Cell::Text(s) => Value::String(s.clone()),
            Cell::Bool(b) => Value::Bool(*b),
            Cell::Empty => Value::Null,
        }
    }
}

fn opt_num(x: Option<f64>) -> Cell {
    x.map_or(Cell::Empty, Cell::Num)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    fn new(header: &[&'static str]) -> Self {
        Table { header: header.to_vec(), rows: Vec::new() }
    }

    fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn write<W: Write>(&self, config: &RunConfig, out: &mut W) -> Result<(), CliError> {
        match config.format {
            OutputFormat::Csv => {
                let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
                w.write_record(&self.header)?;
                for row in &self.rows {
                    w.write_record(row.iter().map(Cell::csv))?;
                }
                w.flush()?;
            }
            OutputFormat::Json => {
                let results: Vec<Value> = self
                    .rows
                    .iter()
                    .map(|row| {
                        let obj: Map<String, Value> =
                            self.header.iter().zip(row).map(|(k, v)| (k.to_string(), v.json())).collect();
                        Value::Object(obj)
                    })
                    .collect();
                let doc = json!({ "config": config, "results": results });
                serde_json::to_writer_pretty(&mut *out, &doc)?;
                out.write_all(b"\n")?;
            }
        }
        Ok(())
    }
}

/// Splits `reps` over `shards` as evenly as possible, lower shards first.
fn shard_share(reps: u64, shards: u64, shard: u64) -> u64 {
    reps / shards + u64::from(shard < reps % shards)
}

pub fn cmd_params(config: &RunConfig) -> Result<Table, CliError> {
    let mut t = Table::new(&["component", "alpha", "beta", "u", "v", "mu0", "mean_tau", "p1", "sigma", "combined_sigma"]);
    let (components, combined): (Vec<Params>, Option<f64>) = match &config.model {
        Model::Single(p) => (vec![*p], None),
        Model::Windows(w) => {
            let comp = build_composite(w, config.tol)?;
            (comp.components.iter().map(|c| c.params).collect(), Some(comp.combined_sigma))
        }
    };
    for (i, p) in components.iter().enumerate() {
        let stats = p.stats(config.tol)?;
        let ScaleWindow { u, v } = p.window();
        t.push(vec![
            Cell::Int(i as u128),
            Cell::Num(p.alpha()),
            Cell::Num(p.beta()),
            Cell::Num(u),
            Cell::Num(v),
            Cell::Num(MU_ORIGIN),
            Cell::Num(stats.mean_tau),
            Cell::Num(p.p_one()?.value),
            Cell::Num(stats.sigma),
            Cell::Num(combined.unwrap_or(stats.sigma)),
        ]);
    }
    Ok(t)
}

fn state_pair(s: ChainState) -> (u64, u64) {
    (s.age(), s.residual())
}

pub fn cmd_simulate(config: &RunConfig) -> Result<Table, CliError> {
    let params = config.single("simulate")?;
    let n = config.single_n("simulate")?;
    if config.reps == 0 {
        return Err(config_error("reps", "must be >= 1"));
    }
    let root = RngStream::new(config.seed, 0);
    let shards = config.shards as u64;
    let per_shard: Vec<Vec<Vec<Cell>>> = (0..shards)
        .into_par_iter()
        .map(|shard| {
            let mut rng = root.substream(shard);
            let mut sim = PathSimulator::new(params);
            (0..shard_share(config.reps, shards, shard))
                .map(|_| {
                    let s = sim.simulate(n, &mut rng);
                    let d = s.decomposition;
                    let (a1, b1) = state_pair(s.first);
                    let (an, bn) = state_pair(s.last);
                    vec![
                        Cell::Int(shard as u128),
                        Cell::Num(d.s_prime),
                        Cell::Num(d.s_tilde),
                        Cell::Num(d.s_double_prime),
                        Cell::Num(d.s_total),
                        Cell::Int(a1 as u128),
                        Cell::Int(b1 as u128),
                        Cell::Int(an as u128),
                        Cell::Int(bn as u128),
                        Cell::Bool(d.interior_renewal),
                    ]
                })
                .collect()
        })
        .collect();
    let mut t = Table::new(&SIMULATE_HEADER);
    per_shard.into_iter().flatten().for_each(|row| t.push(row));
    Ok(t)
}

pub const RATES_HEADER: [&str; 12] = [
    "n",
    "gamma",
    "component",
    "kind",
    "log_prob",
    "p_hat",
    "ci_low",
    "ci_high",
    "rate",
    "predicted_rate",
    "min_usable_n",
    "note",
];

pub fn cmd_rates(config: &RunConfig) -> Result<Table, CliError> {
    let windows = config.window_set();
    let components: Vec<Params> = match &config.model {
        Model::Single(p) => vec![*p],
        Model::Windows(w) => w.windows().iter().map(|&win| Params::from_window(win)).collect::<Result<_, _>>()?,
    };
    let single = matches!(config.model, Model::Single(_));
    let mut t = Table::new(&RATES_HEADER);
    for (gi, &gamma) in config.gamma.iter().enumerate() {
        let predicted = predicted_rate(&windows, gamma, config.c).ok();
        for &n in &config.n {
            let query = RateQuery::new(n, gamma, config.c)?;
            let base = |component: Option<usize>, kind: &str| {
                vec![
                    Cell::Int(n as u128),
                    Cell::Num(gamma),
                    component.map_or(Cell::Empty, |i| Cell::Int(i as u128)),
                    Cell::Text(kind.to_string()),
                ]
            };
            let tail = |log_prob: Option<f64>, est: Option<(f64, f64, f64)>, rate: f64, min_n: Option<u64>, note: &str| {
                vec![
                    opt_num(log_prob),
                    opt_num(est.map(|e| e.0)),
                    opt_num(est.map(|e| e.1)),
                    opt_num(est.map(|e| e.2)),
                    Cell::Num(rate),
                    opt_num(predicted),
                    min_n.map_or(Cell::Empty, |m| Cell::Int(m as u128)),
                    Cell::Text(note.to_string()),
                ]
            };
            let mut row = base(None, "gaussian_reference");
            row.extend(tail(None, None, gaussian_reference(config.c)?, None, ""));
            t.push(row);

            for (ci, p) in components.iter().enumerate() {
                let window = p.window();
                let component = Some(ci);
                if window.contains(gamma) {
                    match case2_certificate(p, &query) {
                        Ok(cert) => {
                            let mut row = base(component, "case2_lower");
                            row.extend(tail(Some(cert.log_prob), None, cert.rate, None, ""));
                            t.push(row);
                        }
                        Err(Error::BracketEmpty { min_usable_n, .. }) => {
                            let mut row = base(component, "case2_lower");
                            row.extend(tail(None, None, f64::NAN, Some(min_usable_n), "bracket_empty"));
                            t.push(row);
                        }
                        Err(e) => return Err(e.into()),
                    }
                } else if gamma < window.u {
                    let cert = case1_upper(p, &query)?;
                    let mut row = base(component, "case1_upper");
                    row.extend(tail(Some(cert.log_prob), None, cert.rate, None, ""));
                    t.push(row);
                }
            }

            if single && config.reps > 0 && n <= config.mc_max_n {
                // one substream per grid point keeps rows independent of grid order
                let stream = RngStream::new(config.seed, 1).substream(gi as u64).substream(n);
                let est = mc_tail(&components[0], &query, Target::Total, config.reps, config.confidence, config.shards, &stream)?;
                let log_prob = est.p_hat.ln();
                let mut row = base(Some(0), "mc");
                row.extend(tail(
                    Some(log_prob),
                    Some((est.p_hat, est.ci_low, est.ci_high)),
                    rate_transform(log_prob, n, gamma),
                    None,
                    "",
                ));
                t.push(row);
            }
        }
    }
    Ok(t)
}

pub fn cmd_autocov(config: &RunConfig) -> Result<Table, CliError> {
    let params = config.single("autocov")?;
    let n = config.single_n("autocov")? as usize;
    let k_max = config.k_max as usize;
    if k_max >= n {
        return Err(config_error("k_max", format!("must be below the horizon n = {n}")));
    }
    let reps = config.reps;
    if reps < 2 {
        return Err(config_error("reps", "autocov needs at least 2 paths for a standard error"));
    }
    let root = RngStream::new(config.seed, 2);
    let shards = config.shards as u64;
    // per path: time-averaged lag products for k = 0..=k_max
    let per_path: Vec<Vec<f64>> = (0..shards)
        .into_par_iter()
        .map(|shard| {
            let mut rng = root.substream(shard);
            let mut sampler = ChainSampler::new(params);
            (0..shard_share(reps, shards, shard))
                .map(|_| {
                    let path = generate_path(&mut sampler, n, &mut rng);
                    (0..=k_max)
                        .map(|k| path.x.iter().zip(&path.x[k..]).map(|(a, b)| a * b).sum::<f64>() / (n - k) as f64)
                        .collect::<Vec<f64>>()
                })
                .collect::<Vec<_>>()
        })
        .flatten()
        .collect();
    let mut t = Table::new(&["k", "r_exact", "dominance_bound", "r_empirical", "se"]);
    for k in 0..=k_max {
        let exact = autocovariance_exact(&params, k as u64, config.tol)?;
        let vals: Vec<f64> = per_path.iter().map(|v| v[k]).collect();
        let m = vals.len() as f64;
        let mean = vals.iter().sum::<f64>() / m;
        let var = vals.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (m - 1.0);
        t.push(vec![
            Cell::Int(k as u128),
            Cell::Num(exact.value),
            if k == 0 { Cell::Empty } else { Cell::Num(autocovariance_dominance(&params, k as u64)) },
            Cell::Num(mean),
            Cell::Num((var / m).sqrt()),
        ]);
    }
    Ok(t)
}

pub fn cmd_boundary(config: &RunConfig) -> Result<Table, CliError> {
    let params = config.single("boundary")?;
    if config.x.is_empty() {
        return Err(config_error("x", "`boundary` needs at least one threshold"));
    }
    let mut t = Table::new(&["n", "x", "log_abs", "log_signed", "truncation", "neglected"]);
    for &n in &config.n {
        for &x in &config.x {
            let tail = boundary_tail_exact(&params, n, x, DEFAULT_TAIL_SHARE)?;
            t.push(vec![
                Cell::Int(n as u128),
                Cell::Num(x),
                Cell::Num(tail.log_abs),
                Cell::Num(tail.log_signed),
                Cell::Int(tail.truncation as u128),
                Cell::Num(tail.neglected),
            ]);
        }
    }
    Ok(t)
}

pub fn execute(command: CommandKind, config: &RunConfig) -> Result<Table, CliError> {
    match command {
        CommandKind::Params => cmd_params(config),
        CommandKind::Simulate => cmd_simulate(config),
        CommandKind::Rates => cmd_rates(config),
        CommandKind::Autocov => cmd_autocov(config),
        CommandKind::Boundary => cmd_boundary(config),
    }
}

/// Parses `args` (program name first), runs the command and writes its
/// table to `out`.
pub fn run<I, T, W>(args: I, env_seed: Option<&str>, out: &mut W) -> Result<(), CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
    W: Write,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion) => {
            write!(out, "{e}")?;
            return Ok(());
        }
        Err(e) => return Err(CliError::Config(e.to_string())),
    };
    let config = RunConfig::load(cli.overrides, env_seed)?;
    execute(cli.command, &config)?.write(&config, out)
}
