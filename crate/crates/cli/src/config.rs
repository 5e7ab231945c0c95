//! Run configuration: command-line flags merged over a flat `key = value`
//! file, then documented defaults.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};

use clap::Args;
use serde::Serialize;

/// Usage problems (bad flag, bad config, invalid parameter); exit status 2.
#[derive(Debug)]
pub struct Usage(pub String);

impl fmt::Display for Usage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

pub fn usage(msg: impl Into<String>) -> anyhow::Error {
    Usage(msg.into()).into()
}

pub const OUTPUT_ENV: &str = "SPHERE_EXTREMAL_OUT";

pub const DEFAULT_TRUNCATION: usize = 21;
pub const DEFAULT_DT: f64 = 1e-3;
pub const DEFAULT_T_END: f64 = 10.0;
pub const DEFAULT_SEED: u64 = 42;
pub const DEFAULT_SAMPLE_EVERY: usize = 100;
pub const DEFAULT_OUTPUT_DIR: &str = "results";

/// Options shared by every subcommand. Each may also be given in the
/// config file under the same name (`-` and `_` are interchangeable).
#[derive(Debug, Clone, Default, Args)]
pub struct Settings {
    /// Flat `key = value` config file; flags take precedence over its keys.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Sphere spin rate Ω ≥ 0.
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub omega: Option<f64>,
    /// Relative enstrophy budget Q_rel > 0.
    #[arg(long = "q-rel", global = true, allow_negative_numbers = true)]
    pub q_rel: Option<f64>,
    /// Spectral truncation L.
    #[arg(long, short = 'L', global = true)]
    pub truncation: Option<usize>,
    #[arg(long, global = true)]
    pub dt: Option<f64>,
    #[arg(long = "t-end", global = true)]
    pub t_end: Option<f64>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Samples are recorded every this many steps.
    #[arg(long = "sample-every", global = true)]
    pub sample_every: Option<usize>,
    #[arg(long = "output-dir", global = true)]
    pub output_dir: Option<PathBuf>,
    /// Multiplier for `solve-el`.
    #[arg(long = "lambda-rel", global = true, allow_negative_numbers = true)]
    pub lambda_rel: Option<f64>,
    /// `ascend` or `descend` (oracle).
    #[arg(long, global = true)]
    pub direction: Option<String>,
    /// Oracle nominal step.
    #[arg(long, global = true)]
    pub step: Option<f64>,
    /// Oracle gradient tolerance.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    #[arg(long = "max-iter", global = true)]
    pub max_iter: Option<usize>,
    /// Base state for `probe`/`evolve`: `wmax` or `wmin`.
    #[arg(long, global = true)]
    pub base: Option<String>,
    /// Perturbation modes `l,m:amp`, separated by `;` or given repeatedly.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub modes: Vec<String>,
    /// Rescale the perturbation to this norm ‖Δw‖.
    #[arg(long = "target-norm", global = true)]
    pub target_norm: Option<f64>,
    /// Randomize perturbation phases with this seed.
    #[arg(long = "phase-seed", global = true)]
    pub phase_seed: Option<u64>,
    /// Figure number 1..=4.
    #[arg(long, global = true)]
    pub fig: Option<u32>,
    /// Figure 3 sweeps √Q_rel over (0, √q_max].
    #[arg(long = "q-max", global = true)]
    pub q_max: Option<f64>,
    #[arg(long = "sweep-start", global = true, allow_negative_numbers = true)]
    pub sweep_start: Option<f64>,
    #[arg(long = "sweep-end", global = true, allow_negative_numbers = true)]
    pub sweep_end: Option<f64>,
    #[arg(long = "sweep-points", global = true)]
    pub sweep_points: Option<usize>,
    /// Enable the high-degree spectral filter (breaks exact conservation).
    #[arg(long, global = true)]
    pub filter: bool,
    /// Also write a gnuplot script next to figure data.
    #[arg(long, global = true)]
    pub gnuplot: bool,
}

/// Parses `key = value` lines; `#` starts a comment, blank lines are skipped.
pub fn parse_config_text(text: &str) -> anyhow::Result<BTreeMap<String, String>> {
    let mut out = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) =
            line.split_once('=').ok_or_else(|| usage(format!("config line {}: expected `key = value`", i + 1)))?;
        let key = k.trim().replace('-', "_");
        if out.insert(key.clone(), v.trim().to_string()).is_some() {
            return Err(usage(format!("config line {}: duplicate key `{key}`", i + 1)));
        }
    }
    Ok(out)
}

fn parse_value<T: std::str::FromStr>(key: &str, v: &str) -> anyhow::Result<T> {
    v.parse().map_err(|_| usage(format!("config key `{key}`: cannot parse `{v}`")))
}

fn parse_bool(key: &str, v: &str) -> anyhow::Result<bool> {
    match v {
        "true" | "yes" | "1" => Ok(true),
        "false" | "no" | "0" => Ok(false),
        _ => Err(usage(format!("config key `{key}`: expected true or false, got `{v}`"))),
    }
}

impl Settings {
    /// Settings described by a config file's keys.
    pub fn from_map(map: &BTreeMap<String, String>) -> anyhow::Result<Self> {
        let mut s = Settings::default();
        for (k, v) in map {
            match k.as_str() {
                "omega" => s.omega = Some(parse_value(k, v)?),
                "q_rel" => s.q_rel = Some(parse_value(k, v)?),
                "truncation" | "l" => s.truncation = Some(parse_value(k, v)?),
                "dt" => s.dt = Some(parse_value(k, v)?),
                "t_end" => s.t_end = Some(parse_value(k, v)?),
                "seed" => s.seed = Some(parse_value(k, v)?),
                "sample_every" => s.sample_every = Some(parse_value(k, v)?),
                "output_dir" => s.output_dir = Some(PathBuf::from(v)),
                "lambda_rel" => s.lambda_rel = Some(parse_value(k, v)?),
                "direction" => s.direction = Some(v.clone()),
                "step" => s.step = Some(parse_value(k, v)?),
                "tol" => s.tol = Some(parse_value(k, v)?),
                "max_iter" => s.max_iter = Some(parse_value(k, v)?),
                "base" => s.base = Some(v.clone()),
                "modes" => s.modes = vec![v.clone()],
                "target_norm" => s.target_norm = Some(parse_value(k, v)?),
                "phase_seed" => s.phase_seed = Some(parse_value(k, v)?),
                "fig" => s.fig = Some(parse_value(k, v)?),
                "q_max" => s.q_max = Some(parse_value(k, v)?),
                "sweep_start" => s.sweep_start = Some(parse_value(k, v)?),
                "sweep_end" => s.sweep_end = Some(parse_value(k, v)?),
                "sweep_points" => s.sweep_points = Some(parse_value(k, v)?),
                "filter" => s.filter = parse_bool(k, v)?,
                "gnuplot" => s.gnuplot = parse_bool(k, v)?,
                other => return Err(usage(format!("unknown config key `{other}`"))),
            }
        }
        Ok(s)
    }

    pub fn load_file(path: &Path) -> anyhow::Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| usage(format!("cannot read config file {}: {e}", path.display())))?;
        Self::from_map(&parse_config_text(&text)?)
    }

    /// `self` where set, otherwise `file`.
    pub fn over(self, file: Settings) -> Settings {
        Settings {
            config: self.config,
            omega: self.omega.or(file.omega),
            q_rel: self.q_rel.or(file.q_rel),
            truncation: self.truncation.or(file.truncation),
            dt: self.dt.or(file.dt),
            t_end: self.t_end.or(file.t_end),
            seed: self.seed.or(file.seed),
            sample_every: self.sample_every.or(file.sample_every),
            output_dir: self.output_dir.or(file.output_dir),
            lambda_rel: self.lambda_rel.or(file.lambda_rel),
            direction: self.direction.or(file.direction),
            step: self.step.or(file.step),
            tol: self.tol.or(file.tol),
            max_iter: self.max_iter.or(file.max_iter),
            base: self.base.or(file.base),
            modes: if self.modes.is_empty() { file.modes } else { self.modes },
            target_norm: self.target_norm.or(file.target_norm),
            phase_seed: self.phase_seed.or(file.phase_seed),
            fig: self.fig.or(file.fig),
            q_max: self.q_max.or(file.q_max),
            sweep_start: self.sweep_start.or(file.sweep_start),
            sweep_end: self.sweep_end.or(file.sweep_end),
            sweep_points: self.sweep_points.or(file.sweep_points),
            filter: self.filter || file.filter,
            gnuplot: self.gnuplot || file.gnuplot,
        }
    }
}

/// Parses `l,m:amp` items separated by `;`.
pub fn parse_modes(items: &[String]) -> anyhow::Result<Vec<(usize, i64, f64)>> {
    let mut out = Vec::new();
    for item in items.iter().flat_map(|s| s.split(';')).map(str::trim).filter(|s| !s.is_empty()) {
        let bad = || usage(format!("mode `{item}`: expected `l,m:amplitude`"));
        let (lm, amp) = item.split_once(':').ok_or_else(bad)?;
        let (l, m) = lm.split_once(',').ok_or_else(bad)?;
        let l: usize = l.trim().parse().map_err(|_| bad())?;
        let m: i64 = m.trim().parse().map_err(|_| bad())?;
        let amp: f64 = amp.trim().parse().map_err(|_| bad())?;
        if l == 0 || m.unsigned_abs() as usize > l || !amp.is_finite() {
            return Err(usage(format!("mode `{item}`: need l ≥ 1, |m| ≤ l and a finite amplitude")));
        }
        out.push((l, m, amp));
    }
    Ok(out)
}

/// Fully resolved run configuration, echoed in every JSON artifact.
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub command: String,
    pub omega: f64,
    pub q_rel: Option<f64>,
    pub truncation: usize,
    pub dt: f64,
    pub t_end: f64,
    pub seed: u64,
    pub sample_every: usize,
    pub output_dir: PathBuf,
    pub lambda_rel: Option<f64>,
    pub direction: String,
    pub step: f64,
    pub tol: f64,
    pub max_iter: usize,
    pub base: Option<String>,
    pub modes: Vec<(usize, i64, f64)>,
    pub target_norm: Option<f64>,
    pub phase_seed: Option<u64>,
    pub fig: Option<u32>,
    pub q_max: f64,
    pub sweep_start: Option<f64>,
    pub sweep_end: Option<f64>,
    pub sweep_points: Option<usize>,
    pub filter: bool,
    pub gnuplot: bool,
}

fn finite(name: &str, v: Option<f64>) -> anyhow::Result<Option<f64>> {
    match v {
        Some(x) if !x.is_finite() => Err(usage(format!("`{name}` must be finite, got {x}"))),
        other => Ok(other),
    }
}

fn positive(name: &str, v: f64) -> anyhow::Result<f64> {
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(usage(format!("`{name}` must be positive and finite, got {v}")))
    }
}

impl RunConfig {
    /// Merges flags over the config file and defaults; `env_out` is the
    /// value of the output-directory environment override.
    pub fn resolve(command: &str, flags: Settings, env_out: Option<PathBuf>) -> anyhow::Result<Self> {
        let file = match &flags.config {
            Some(path) => Settings::load_file(path)?,
            None => Settings::default(),
        };
        let flag_out = flags.output_dir.clone();
        let s = flags.over(file);
        let output_dir = flag_out.or(env_out).or(s.output_dir.clone()).unwrap_or_else(|| DEFAULT_OUTPUT_DIR.into());

        let omega = finite("omega", s.omega)?.ok_or_else(|| usage("missing required `omega`"))?;
        if omega < 0.0 {
            return Err(usage(format!("`omega` must be non-negative, got {omega}")));
        }
        let q_rel = finite("q_rel", s.q_rel)?;
        if let Some(q) = q_rel {
            positive("q_rel", q)?;
        }
        let truncation = s.truncation.unwrap_or(DEFAULT_TRUNCATION);
        if truncation < 1 {
            return Err(usage("`truncation` must be at least 1"));
        }
        let direction = s.direction.unwrap_or_else(|| "ascend".into());
        if direction != "ascend" && direction != "descend" {
            return Err(usage(format!("`direction` must be ascend or descend, got `{direction}`")));
        }
        if let Some(b) = &s.base {
            if b != "wmax" && b != "wmin" {
                return Err(usage(format!("`base` must be wmax or wmin, got `{b}`")));
            }
        }
        let sample_every = s.sample_every.unwrap_or(DEFAULT_SAMPLE_EVERY);
        if sample_every == 0 {
            return Err(usage("`sample_every` must be at least 1"));
        }
        let max_iter = s.max_iter.unwrap_or(200_000);
        Ok(Self {
            command: command.to_string(),
            omega,
            q_rel,
            truncation,
            dt: positive("dt", s.dt.unwrap_or(DEFAULT_DT))?,
            t_end: positive("t_end", s.t_end.unwrap_or(DEFAULT_T_END))?,
            seed: s.seed.unwrap_or(DEFAULT_SEED),
            sample_every,
            output_dir,
            lambda_rel: finite("lambda_rel", s.lambda_rel)?,
            direction,
            step: positive("step", s.step.unwrap_or(1.0))?,
            tol: positive("tol", s.tol.unwrap_or(1e-9))?,
            max_iter,
            base: s.base,
            modes: parse_modes(&s.modes)?,
            target_norm: finite("target_norm", s.target_norm)?.map(|v| positive("target_norm", v)).transpose()?,
            phase_seed: s.phase_seed,
            fig: s.fig,
            q_max: positive("q_max", s.q_max.unwrap_or(10.0))?,
            sweep_start: finite("sweep_start", s.sweep_start)?,
            sweep_end: finite("sweep_end", s.sweep_end)?,
            sweep_points: s.sweep_points,
            filter: s.filter,
            gnuplot: s.gnuplot,
        })
    }

    pub fn require_q_rel(&self) -> anyhow::Result<f64> {
        self.q_rel.ok_or_else(|| usage(format!("`{}` requires `q_rel`", self.command)))
    }
}
