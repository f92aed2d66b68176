//! The `ebids` command line. Lives in the library so it can be driven from tests.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use crate::error::{Error, Result};
use crate::policies::PolicyKind;

use super::config::ExperimentConfig;
use super::presets::{self, PRESETS};
use super::runner::{run_experiment_with_workers, worker_count, write_outputs, ExperimentResult};
use super::validate::{run_all, ValidateOptions};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 1;
pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_RUNTIME: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "ebids", about = "Heteroskedastic linear bandit experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run every policy x replication cell of a config and write the CSVs.
    Run {
        #[arg(long)]
        config: PathBuf,
    },
    /// Run a config once per combination of EBIDS hyperparameters.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        /// `alpha=0.1,0.3` or `t_bound=50,100`; repeat for a grid.
        #[arg(long = "param", required = true)]
        params: Vec<String>,
    },
    /// Check the analysis inequalities and numerical kernels on random instances.
    Validate {
        #[arg(long, default_value_t = ValidateOptions::default().seed)]
        seed: u64,
        #[arg(long, default_value_t = ValidateOptions::default().cases)]
        cases: usize,
    },
    /// List the built-in configs, print one, or write them all to a directory.
    Presets {
        #[arg(long)]
        show: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// A swept hyperparameter and its values.
#[derive(Debug, Clone, PartialEq)]
pub enum SweepParam {
    Alpha(Vec<f64>),
    TBound(Vec<u64>),
}

impl SweepParam {
    pub fn parse(text: &str) -> Result<Self> {
        let (key, values) = text
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("expected name=v1,v2,..., got {text:?}")))?;
        let items = values.split(',').map(str::trim).filter(|s| !s.is_empty());
        let bad = |v: &str| Error::Config(format!("bad value {v:?} for {key}"));
        let param = match key.trim() {
            "alpha" => SweepParam::Alpha(items.map(|v| v.parse().map_err(|_| bad(v))).collect::<Result<_>>()?),
            "t_bound" => SweepParam::TBound(items.map(|v| v.parse().map_err(|_| bad(v))).collect::<Result<_>>()?),
            other => return Err(Error::Config(format!("cannot sweep {other:?}; use alpha or t_bound"))),
        };
        let empty = match &param {
            SweepParam::Alpha(v) => v.is_empty(),
            SweepParam::TBound(v) => v.is_empty(),
        };
        if empty {
            return Err(Error::Config(format!("no values given for {key}")));
        }
        Ok(param)
    }

    fn len(&self) -> usize {
        match self {
            SweepParam::Alpha(v) => v.len(),
            SweepParam::TBound(v) => v.len(),
        }
    }

    fn label(&self, i: usize) -> String {
        match self {
            SweepParam::Alpha(v) => format!("alpha{}", v[i]),
            SweepParam::TBound(v) => format!("t_bound{}", v[i]),
        }
    }

    fn apply(&self, i: usize, cfg: &mut ExperimentConfig) {
        for p in cfg.policies.iter_mut().filter(|p| p.kind == PolicyKind::Ebids) {
            match self {
                SweepParam::Alpha(v) => p.alpha = Some(v[i]),
                SweepParam::TBound(v) => p.t_bound = Some(v[i]),
            }
        }
    }
}

/// One grid cell of a sweep.
#[derive(Debug)]
pub struct SweepCell {
    pub label: String,
    pub config: ExperimentConfig,
    pub result: ExperimentResult,
}

impl SweepCell {
    /// Final mean cumulative regret of each EBIDS policy in the cell.
    pub fn final_means(&self) -> Vec<(String, f64)> {
        self.config
            .policies
            .iter()
            .filter(|p| p.kind == PolicyKind::Ebids)
            .filter_map(|p| {
                self.result
                    .summary_at(&p.id, self.config.horizon)
                    .map(|r| (p.id.clone(), r.mean_cum_regret))
            })
            .collect()
    }
}

fn with_suffix(path: &Path, label: &str) -> PathBuf {
    let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    let ext = path.extension().map(|e| format!(".{}", e.to_string_lossy())).unwrap_or_default();
    path.with_file_name(format!("{stem}_{label}{ext}"))
}

/// Run `base` on the Cartesian product of `params`, writing one summary CSV
/// per cell next to the configured summary path.
pub fn run_sweep(base: &ExperimentConfig, params: &[SweepParam], workers: usize) -> Result<Vec<SweepCell>> {
    if !base.policies.iter().any(|p| p.kind == PolicyKind::Ebids) {
        return Err(Error::Config("sweep needs at least one ebids policy".into()));
    }
    let mut grid: Vec<(String, ExperimentConfig)> = vec![(String::new(), base.clone())];
    for param in params {
        let mut next = Vec::with_capacity(grid.len() * param.len());
        for (label, cfg) in &grid {
            for i in 0..param.len() {
                let mut c = cfg.clone();
                param.apply(i, &mut c);
                let l = if label.is_empty() {
                    param.label(i)
                } else {
                    format!("{label}_{}", param.label(i))
                };
                next.push((l, c));
            }
        }
        grid = next;
    }
    let mut cells = Vec::with_capacity(grid.len());
    for (label, mut cfg) in grid {
        cfg.output.summary = with_suffix(&cfg.output.summary, &label);
        cfg.validate()?;
        let result = run_experiment_with_workers(&cfg, workers)?;
        super::output::write_summary_file(&cfg.output.summary, &result.summary)?;
        cells.push(SweepCell {
            label,
            config: cfg,
            result,
        });
    }
    Ok(cells)
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Config(_) | Error::InvalidArgument(_) | Error::DimensionMismatch { .. } => EXIT_CONFIG,
        _ => EXIT_RUNTIME,
    }
}

fn report_failures(result: &ExperimentResult, err: &mut dyn Write) -> bool {
    let mut any = false;
    for o in result.failures() {
        any = true;
        let _ = writeln!(
            err,
            "error: policy {} replication {}: {}",
            o.policy_id,
            o.replication,
            o.error.as_deref().unwrap_or("")
        );
    }
    any
}

fn cmd_run(config: &Path, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    let cfg = ExperimentConfig::load(config)?;
    let result = run_experiment_with_workers(&cfg, worker_count()?)?;
    write_outputs(&cfg, &result)?;
    let mut ids: Vec<&str> = cfg.policies.iter().map(|p| p.id.as_str()).collect();
    ids.sort_unstable();
    for id in ids {
        if let Some(r) = result.summary_at(id, cfg.horizon) {
            writeln!(
                out,
                "{id:<20} T={} mean_cum_regret={:.3} [{:.3}, {:.3}] n={}",
                r.t, r.mean_cum_regret, r.ci_low, r.ci_high, r.n
            )?;
        }
    }
    writeln!(out, "wrote {} and {}", cfg.output.raw.display(), cfg.output.summary.display())?;
    Ok(if report_failures(&result, err) { EXIT_RUNTIME } else { EXIT_OK })
}

fn cmd_sweep(config: &Path, params: &[String], out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    let cfg = ExperimentConfig::load(config)?;
    let params = params.iter().map(|p| SweepParam::parse(p)).collect::<Result<Vec<_>>>()?;
    let cells = run_sweep(&cfg, &params, worker_count()?)?;
    let mut finals = Vec::new();
    let mut failed = false;
    for cell in &cells {
        for (id, mean) in cell.final_means() {
            writeln!(out, "{:<24} {id:<16} final_mean_cum_regret={mean:.3}", cell.label)?;
            finals.push(mean);
        }
        writeln!(out, "  -> {}", cell.config.output.summary.display())?;
        failed |= report_failures(&cell.result, err);
    }
    let max = finals.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = finals.iter().copied().fold(f64::INFINITY, f64::min);
    writeln!(out, "max/min final mean regret across cells: {:.3}", max / min)?;
    Ok(if failed { EXIT_RUNTIME } else { EXIT_OK })
}

fn cmd_validate(seed: u64, cases: usize, out: &mut dyn Write) -> Result<i32> {
    if cases == 0 {
        return Err(Error::Config("--cases must be positive".into()));
    }
    let reports = run_all(&ValidateOptions { seed, cases })?;
    let mut ok = true;
    for r in &reports {
        writeln!(out, "{}", r.line())?;
        ok &= r.passed();
    }
    let passed = reports.iter().filter(|r| r.passed()).count();
    writeln!(out, "{passed}/{} suites passed", reports.len())?;
    Ok(if ok { EXIT_OK } else { EXIT_VALIDATION })
}

fn cmd_presets(show: Option<&str>, dir: Option<&Path>, out: &mut dyn Write) -> Result<i32> {
    if let Some(name) = show {
        let cfg = presets::preset(name).ok_or_else(|| Error::Config(format!("unknown preset {name:?}")))?;
        write!(out, "{}", cfg.to_toml()?)?;
        return Ok(EXIT_OK);
    }
    if let Some(dir) = dir {
        std::fs::create_dir_all(dir)?;
    }
    for (name, description) in PRESETS {
        writeln!(out, "{name:<8} {description}")?;
        if let Some(dir) = dir {
            let cfg = presets::preset(name).expect("listed preset exists");
            std::fs::write(dir.join(format!("{name}.toml")), cfg.to_toml()?)?;
        }
    }
    Ok(EXIT_OK)
}

/// Parse `args` (including the program name) and execute; returns the exit code.
pub fn run_cli<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                write!(err, "{text}")
            } else {
                write!(out, "{text}")
            };
            return code;
        }
    };
    let result = match &cli.command {
        Command::Run { config } => cmd_run(config, out, err),
        Command::Sweep { config, params } => cmd_sweep(config, params, out, err),
        Command::Validate { seed, cases } => cmd_validate(*seed, *cases, out),
        Command::Presets { show, out: dir } => cmd_presets(show.as_deref(), dir.as_deref(), out),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}
