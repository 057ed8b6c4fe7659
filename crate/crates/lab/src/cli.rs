use std::ffi::OsString;
use std::path::{Path, PathBuf};
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::commands::{self, Ctx};
use crate::config;
use crate::error::{LabError, LabResult, EXIT_CONFIG, EXIT_OK};
use crate::exec::Pool;
use crate::output::OutputDir;

/// Environment variable overriding the default enumeration budget.
pub const BUDGET_ENV: &str = "COCYCLE_LAB_BUDGET";
pub const DEFAULT_SEED: u64 = 0;

#[derive(Parser, Debug)]
#[command(name = "cocycle-lab", version, about = "Experiments with SL(2,R) cocycles over subshifts")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// JSON configuration file.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Output directory (created if missing).
    #[arg(long, global = true, default_value = "out")]
    pub out: PathBuf,
    /// Worker threads; 0 uses one per core.
    #[arg(long, global = true, default_value_t = 0)]
    pub threads: usize,
    /// Overrides the seed in the configuration.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Matrix products allowed per exact enumeration.
    #[arg(long, global = true)]
    pub budget: Option<u64>,
}

#[derive(Subcommand, Debug, Clone)]
pub enum Command {
    /// Prefixes, factor sets, frequencies and the Boshernitzan profile.
    Subshift {
        /// Length of the factor set to enumerate (overrides the config).
        #[arg(long)]
        factors: Option<usize>,
    },
    /// Exponent traces, Var_n and uniformity verdicts.
    Exponent,
    /// Cone-field UH certificates and numerical splittings.
    Uh,
    /// Avalanche-principle certificates and openness trials.
    Avalanche,
    /// Spectrum scans, periodic approximants, measures and semicontinuity.
    Spectrum,
    /// Locally constant approximation of a cocycle family.
    Approximate,
    /// Staged construction of a potential with many layers.
    Construct,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Subshift { .. } => "subshift",
            Command::Exponent => "exponent",
            Command::Uh => "uh",
            Command::Avalanche => "avalanche",
            Command::Spectrum => "spectrum",
            Command::Approximate => "approximate",
            Command::Construct => "construct",
        }
    }
}

#[derive(Serialize)]
struct Versions {
    cocycle_core: &'static str,
    cocycle_lab: &'static str,
}

#[derive(Serialize)]
struct Manifest {
    command: &'static str,
    config_path: Option<String>,
    config: serde_json::Value,
    seed: u64,
    seed_source: &'static str,
    threads: usize,
    budget: Option<u64>,
    budget_source: &'static str,
    versions: Versions,
    started_unix: u64,
    wall_time_seconds: f64,
    outputs: Vec<String>,
    soft_failures: Vec<String>,
    status: &'static str,
    exit_code: i32,
    error: Option<String>,
}

fn read_config(path: Option<&Path>) -> LabResult<serde_json::Value> {
    let path = path.ok_or_else(|| LabError::config("--config PATH is required"))?;
    let text =
        std::fs::read_to_string(path).map_err(|e| LabError::config(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| LabError::config(format!("{}: {e}", path.display())))
}

fn resolve_budget(flag: Option<u64>) -> LabResult<(Option<u64>, &'static str)> {
    if let Some(b) = flag {
        return Ok((Some(b), "flag"));
    }
    match std::env::var(BUDGET_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map(|b| (Some(b), "env"))
            .map_err(|_| LabError::config(format!("{BUDGET_ENV} must be an unsigned integer, got {v:?}"))),
        Err(_) => Ok((None, "default")),
    }
}

fn dispatch(command: &Command, doc: serde_json::Value, ctx: &mut Ctx) -> LabResult<()> {
    match command {
        Command::Subshift { factors } => {
            let mut cfg: config::SubshiftRun = config::parse(doc)?;
            if factors.is_some() {
                cfg.factors = *factors;
            }
            commands::subshift(&cfg, ctx)
        }
        Command::Exponent => commands::exponent(&config::parse(doc)?, ctx),
        Command::Uh => commands::uh(&config::parse(doc)?, ctx),
        Command::Avalanche => commands::avalanche(&config::parse(doc)?, ctx),
        Command::Spectrum => commands::spectrum(&config::parse(doc)?, ctx),
        Command::Approximate => commands::approximate(&config::parse(doc)?, ctx),
        Command::Construct => commands::construct(&config::parse(doc)?, ctx),
    }
}

/// Runs one command and writes `run.json`. Returns the exit code.
pub fn run(command: &Command, common: &Common) -> i32 {
    let started = Instant::now();
    let started_unix = SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs());

    let mut doc = serde_json::Value::Null;
    let prepared = (|| -> LabResult<(u64, &'static str, Option<u64>, &'static str, serde_json::Value)> {
        doc = read_config(common.config.as_deref())?;
        let mut body = doc.clone();
        let config_seed = config::take_seed(&mut body)?;
        let (seed, seed_source) = match (common.seed, config_seed) {
            (Some(s), _) => (s, "flag"),
            (None, Some(s)) => (s, "config"),
            (None, None) => (DEFAULT_SEED, "default"),
        };
        let (budget, budget_source) = resolve_budget(common.budget)?;
        Ok((seed, seed_source, budget, budget_source, body))
    })();

    let out = match OutputDir::create(&common.out) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("cocycle-lab: {e}");
            return e.exit_code();
        }
    };
    let exec = Pool::new(common.threads);
    let threads = exec.threads();
    let (seed, seed_source, budget, budget_source, result, out, soft) = match prepared {
        Ok((seed, seed_source, budget, budget_source, body)) => {
            let mut ctx = Ctx { exec, seed, budget, out, soft_failures: Vec::new() };
            let result = dispatch(command, body, &mut ctx);
            (seed, seed_source, budget, budget_source, result, ctx.out, ctx.soft_failures)
        }
        Err(e) => (DEFAULT_SEED, "default", None, "default", Err(e), out, Vec::new()),
    };

    let (status, exit_code, error) = match &result {
        Ok(()) => ("ok", EXIT_OK, None),
        Err(e) => {
            eprintln!("cocycle-lab {}: {e}", command.name());
            (e.kind(), e.exit_code(), Some(e.to_string()))
        }
    };
    let manifest = Manifest {
        command: command.name(),
        config_path: common.config.as_ref().map(|p| p.display().to_string()),
        config: doc,
        seed,
        seed_source,
        threads,
        budget,
        budget_source,
        versions: Versions { cocycle_core: cocycle_core::VERSION, cocycle_lab: env!("CARGO_PKG_VERSION") },
        started_unix,
        wall_time_seconds: started.elapsed().as_secs_f64(),
        outputs: out.files().to_vec(),
        soft_failures: soft,
        status,
        exit_code,
        error,
    };
    let mut out = out;
    if let Err(e) = out.json("run.json", &manifest) {
        eprintln!("cocycle-lab: cannot write run.json: {e}");
    }
    exit_code
}

/// Parses arguments and runs; usage errors exit with the config code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(&cli.command, &cli.common),
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
            let _ = e.print();
            code
        }
    }
}
