//! Command-line front end: `simulate`, `ingest`, `analyze` and `reproduce`.
//!
//! Exit codes: 0 success, 1 a measurement or reproduction check failed,
//! 2 invalid parameters or usage, 3 file system error.

pub mod analyze;
pub mod config;
pub mod reproduce;

use std::io::BufWriter;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use thiserror::Error;

use crate::graph::{EventLog, Time};
use crate::io::{
    ingest_empirical, load_log, save_log, write_snapshot_csv, write_summary_json, write_tick_csv,
    IngestOptions, IoError,
};
use crate::measures::SegmentPolicy;
use crate::sim::{run, ModelParams, ResetPolicy};

pub use analyze::{run_measures, Measure, Outcome};
pub use config::{AnalysisConfig, InputConfig, RunConfig};
pub use reproduce::{reproduce, Check, Reproduction, Target};

/// Environment variable holding the log filter, e.g. `info` or `debug`.
pub const LOG_ENV: &str = "TRIADIC_NET_LOG_LEVEL";

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Invalid(String),
    #[error("{0}")]
    Io(String),
    #[error("{0}")]
    Failed(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Failed(_) => 1,
            CliError::Invalid(_) => 2,
            CliError::Io(_) => 3,
        }
    }
}

impl From<IoError> for CliError {
    fn from(e: IoError) -> Self {
        match e {
            IoError::Io(_) => CliError::Io(e.to_string()),
            _ => CliError::Invalid(e.to_string()),
        }
    }
}

impl From<crate::graph::GraphError> for CliError {
    fn from(e: crate::graph::GraphError) -> Self {
        CliError::Invalid(e.to_string())
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "triadic-net",
    version,
    about = "Simulate and measure coevolving user/item networks"
)]
pub struct Cli {
    /// TOML configuration; flags override its values.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Random seed of the model run.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Directory receiving every output file.
    #[arg(long, global = true)]
    pub out_dir: Option<PathBuf>,
    /// Worker threads for analysis.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the growth model and write its event log and per-tick reports.
    Simulate {
        #[command(flatten)]
        model: ModelFlags,
        /// Also write the final degree table.
        #[arg(long)]
        snapshot: bool,
    },
    /// Convert timestamped edge lists into a canonical event log.
    Ingest {
        /// `src,dst,day` lines.
        #[arg(long)]
        social: Option<PathBuf>,
        /// `user,item,day` lines.
        #[arg(long)]
        cross: Option<PathBuf>,
        /// Treat social links as undirected.
        #[arg(long)]
        undirected: bool,
        /// Shuffle same-day events with this seed.
        #[arg(long)]
        shuffle_seed: Option<u64>,
    },
    /// Run measurements on an event log.
    Analyze {
        /// Canonical log file.
        #[arg(long)]
        log: Option<PathBuf>,
        #[command(flatten)]
        analysis: AnalysisFlags,
    },
    /// Simulate with the reference parameters and score one result set.
    Reproduce {
        #[arg(value_enum)]
        target: Target,
        /// Score this model log instead of simulating.
        #[arg(long)]
        log: Option<PathBuf>,
        #[command(flatten)]
        model: ModelFlags,
    },
}

#[derive(Debug, Default, Args)]
pub struct ModelFlags {
    /// Items created per tick.
    #[arg(long)]
    pub m: Option<usize>,
    /// Link attempts per tick.
    #[arg(long)]
    pub n: Option<usize>,
    /// Coupling to the neighbors' degree changes.
    #[arg(long)]
    pub mu: Option<f64>,
    /// Per-tick increment of every state function.
    #[arg(long)]
    pub phi0: Option<f64>,
    /// Lower end of the range activation thresholds are drawn from.
    #[arg(long)]
    pub theta_min: Option<f64>,
    /// Upper end of the threshold range.
    #[arg(long)]
    pub theta_max: Option<f64>,
    /// Initial users.
    #[arg(long)]
    pub n0: Option<usize>,
    /// Initial items.
    #[arg(long)]
    pub m0: Option<usize>,
    /// Stop once this many users exist.
    #[arg(long)]
    pub n_final: Option<usize>,
    /// Walks tried per link attempt.
    #[arg(long)]
    pub walk_retries: Option<usize>,
    /// Whose state functions reset after a tick: `initiators` or
    /// `include-recipients`.
    #[arg(long, value_parser = parse_reset)]
    pub reset_policy: Option<ResetPolicy>,
    /// Give every user the midpoint of the threshold range.
    #[arg(long)]
    pub constant_theta: bool,
}

fn parse_reset(s: &str) -> Result<ResetPolicy, String> {
    match s {
        "initiators" => Ok(ResetPolicy::Initiators),
        "include-recipients" => Ok(ResetPolicy::IncludeRecipients),
        _ => Err(format!("unknown reset policy {s:?}")),
    }
}

impl ModelFlags {
    fn apply(&self, p: &mut ModelParams) {
        macro_rules! set {
            ($($f:ident),*) => { $( if let Some(v) = self.$f { p.$f = v; } )* };
        }
        set!(
            m,
            n,
            mu,
            phi0,
            theta_min,
            theta_max,
            n0,
            m0,
            n_final,
            walk_retries,
            reset_policy
        );
    }
}

#[derive(Debug, Default, Args)]
pub struct AnalysisFlags {
    /// Measurement spec; repeatable. `pa:<gain>:<by>`, `growth:<k>`,
    /// `dist:<k>`, `pcc:<a>:<b>`, `nn`, `influence:exposure`,
    /// `influence:shared`, `triadic`.
    #[arg(long = "measure")]
    pub measures: Vec<String>,
    /// Attachment window start; repeatable.
    #[arg(long = "t0")]
    pub t0: Vec<Time>,
    /// Attachment window length in ticks.
    #[arg(long)]
    pub dt: Option<Time>,
    /// Number of evenly spaced windows when no --t0 is given.
    #[arg(long)]
    pub windows: Option<usize>,
    /// Growth interval start; defaults to the start of the log's last tenth.
    #[arg(long)]
    pub growth_t0: Option<Time>,
    /// Growth interval end; defaults to the last event.
    #[arg(long)]
    pub growth_t1: Option<Time>,
    /// Windows crossing a time gap: `separate` drops them, `bridge` keeps them.
    #[arg(long)]
    pub segment_policy: Option<SegmentPolicy>,
    /// Longest event-free stretch inside one segment.
    #[arg(long)]
    pub max_gap: Option<Time>,
}

impl AnalysisFlags {
    fn apply(&self, a: &mut AnalysisConfig) {
        if !self.measures.is_empty() {
            a.measures = self.measures.clone();
        }
        if !self.t0.is_empty() {
            a.t0 = self.t0.clone();
        }
        macro_rules! set {
            ($($f:ident),*) => { $( if let Some(v) = self.$f { a.$f = v; } )* };
        }
        set!(dt, windows, segment_policy, max_gap);
        if self.growth_t0.is_some() {
            a.growth_t0 = self.growth_t0;
        }
        if self.growth_t1.is_some() {
            a.growth_t1 = self.growth_t1;
        }
    }
}

fn io_err(path: &Path, e: std::io::Error) -> CliError {
    CliError::Io(format!("{}: {e}", path.display()))
}

fn create(path: &Path) -> Result<BufWriter<std::fs::File>, CliError> {
    std::fs::File::create(path)
        .map(BufWriter::new)
        .map_err(|e| io_err(path, e))
}

/// Merges the config file and global flags.
pub fn resolve_config(cli: &Cli) -> Result<RunConfig, CliError> {
    let mut cfg = match &cli.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    if cli.seed.is_some() {
        cfg.seed = cli.seed;
    }
    if cli.out_dir.is_some() {
        cfg.out_dir = cli.out_dir.clone();
    }
    if cli.threads.is_some() {
        cfg.threads = cli.threads;
    }
    match &cli.command {
        Command::Simulate { model, .. } | Command::Reproduce { model, .. } => {
            model.apply(&mut cfg.model);
            if model.constant_theta {
                cfg.model = cfg.model.with_constant_theta();
            }
        }
        Command::Analyze { log, analysis } => {
            analysis.apply(&mut cfg.analysis);
            if log.is_some() {
                cfg.input.log = log.clone();
            }
        }
        Command::Ingest {
            social,
            cross,
            undirected,
            shuffle_seed,
        } => {
            if social.is_some() {
                cfg.input.social = social.clone();
            }
            if cross.is_some() {
                cfg.input.cross = cross.clone();
            }
            if *undirected {
                cfg.input.directed = false;
            }
            if shuffle_seed.is_some() {
                cfg.input.shuffle_seed = *shuffle_seed;
            }
        }
    }
    cfg.validate()?;
    Ok(cfg)
}

fn prepare_out_dir(cfg: &RunConfig) -> Result<PathBuf, CliError> {
    let dir = cfg.out_dir();
    std::fs::create_dir_all(&dir).map_err(|e| io_err(&dir, e))?;
    Ok(dir)
}

fn read_input_log(cfg: &RunConfig) -> Result<EventLog, CliError> {
    let path = cfg
        .input
        .log
        .as_ref()
        .ok_or_else(|| CliError::Invalid("no input log given (--log or input.log)".into()))?;
    let (log, report) = load_log(path)?;
    if report.dropped() > 0 || report.dangling > 0 {
        log::warn!(
            "{}: dropped {} lines, repaired {} dangling references",
            path.display(),
            report.dropped(),
            report.dangling
        );
    }
    Ok(log)
}

fn cmd_simulate(cfg: &RunConfig, snapshot: bool) -> Result<(), CliError> {
    let params = cfg.model_params();
    let dir = prepare_out_dir(cfg)?;
    log::info!("simulating to {} users", params.n_final);
    let out = run(params.clone()).map_err(|e| CliError::Invalid(e.to_string()))?;
    save_log(&out.log, &dir.join("log.csv"))?;
    write_tick_csv(&out.reports, create(&dir.join("ticks.csv"))?)?;
    if snapshot {
        let g = out.log.final_graph()?;
        write_snapshot_csv(&g, create(&dir.join("snapshot.csv"))?)?;
    }
    write_summary_json(
        &serde_json::json!({ "params": params, "events": out.log.len() }),
        &dir.join("run.json"),
    )?;
    println!(
        "{} events over {} ticks written to {}",
        out.log.len(),
        out.reports.len(),
        dir.display()
    );
    Ok(())
}

fn cmd_ingest(cfg: &RunConfig) -> Result<(), CliError> {
    let (Some(social), Some(cross)) = (&cfg.input.social, &cfg.input.cross) else {
        return Err(CliError::Invalid(
            "ingest needs --social and --cross".into(),
        ));
    };
    let dir = prepare_out_dir(cfg)?;
    let opts = IngestOptions {
        directed: cfg.input.directed,
        shuffle_seed: cfg.input.shuffle_seed,
    };
    let (log, report, ids) = ingest_empirical(social, cross, &opts)?;
    save_log(&log, &dir.join("log.csv"))?;
    ids.save(&dir.join("ids.csv"))?;
    write_summary_json(&report, &dir.join("ingest.json"))?;
    println!(
        "{} events from {} lines ({} dropped) written to {}",
        log.len(),
        report.total_lines,
        report.dropped(),
        dir.display()
    );
    Ok(())
}

fn cmd_analyze(cfg: &RunConfig) -> Result<(), CliError> {
    if cfg.analysis.measures.is_empty() {
        return Err(CliError::Invalid(
            "no measurements requested (--measure)".into(),
        ));
    }
    let log = read_input_log(cfg)?;
    let dir = prepare_out_dir(cfg)?;
    let measures: Vec<Measure> = cfg
        .analysis
        .measures
        .iter()
        .map(|s| s.parse().map_err(CliError::Invalid))
        .collect::<Result<_, _>>()?;
    let outcomes = run_measures(&log, &measures, &cfg.analysis, cfg.threads())?;
    analyze::write_curves(&outcomes, &dir)?;
    let summary = serde_json::json!({
        "input": cfg.input.log,
        "events": log.len(),
        "analysis": cfg.analysis,
        "measurements": outcomes,
    });
    write_summary_json(&summary, &dir.join("summary.json"))?;
    let mut failed = Vec::new();
    for o in &outcomes {
        match &o.error {
            None => println!("ok    {}", o.measure),
            Some(e) => {
                println!("error {}: {e}", o.measure);
                failed.push(o.measure.clone());
            }
        }
    }
    if failed.is_empty() {
        Ok(())
    } else {
        Err(CliError::Failed(format!(
            "measurements failed: {}",
            failed.join(", ")
        )))
    }
}

fn cmd_reproduce(
    cfg: &RunConfig,
    target: Target,
    log_path: Option<&Path>,
    constant_theta: bool,
) -> Result<(), CliError> {
    let params = cfg.model_params();
    let dir = prepare_out_dir(cfg)?;
    let log = match log_path {
        Some(p) => load_log(p)?.0,
        None => {
            log::info!("simulating to {} users", params.n_final);
            run(params.clone())
                .map_err(|e| CliError::Invalid(e.to_string()))?
                .log
        }
    };
    let rep = reproduce(target, &log, &params, constant_theta, cfg.threads())?;
    analyze::write_curves(&rep.measurements, &dir)?;
    write_summary_json(
        &reproduce::summary(&rep, &params),
        &dir.join(format!("{target}.json")),
    )?;
    println!(
        "{target}{}",
        if constant_theta {
            " (constant threshold)"
        } else {
            ""
        }
    );
    for c in &rep.checks {
        println!("{}", c.line());
    }
    let failures = rep.failures();
    if failures.is_empty() {
        Ok(())
    } else {
        let names: Vec<&str> = failures.iter().map(|c| c.name.as_str()).collect();
        Err(CliError::Failed(format!(
            "out of tolerance: {}",
            names.join(", ")
        )))
    }
}

pub fn execute(cli: &Cli) -> Result<(), CliError> {
    let cfg = resolve_config(cli)?;
    match &cli.command {
        Command::Simulate { snapshot, .. } => cmd_simulate(&cfg, *snapshot),
        Command::Ingest { .. } => cmd_ingest(&cfg),
        Command::Analyze { .. } => cmd_analyze(&cfg),
        Command::Reproduce { target, log, model } => {
            let p = cfg.model_params();
            let constant = model.constant_theta || p.theta_min == p.theta_max;
            cmd_reproduce(&cfg, *target, log.as_deref(), constant)
        }
    }
}

/// Entry point of the `triadic-net` binary.
pub fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or(LOG_ENV, "warn")).init();
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
