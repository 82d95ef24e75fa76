//! Argument parsing and dispatch.

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::commands::{self, Context};
use crate::config::Config;
use crate::error::{LabError, LabResult};
use crate::exec::Threads;
use crate::manifest::{RunManifest, RunRecord};

#[derive(Debug, Parser)]
#[command(name = "boltzwave", version, about = "Hard-sphere collision and rarefaction-stability laboratory")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Conservation, null-space, dissipation and cross-validation checks.
    CollisionVerify(Common),
    /// Viscosity and heat conductivity over a temperature range.
    Transport(Common),
    /// Smooth rarefaction profiles at chosen times, plus a decay report.
    Profile(Common),
    /// Navier–Stokes evolution of a perturbed profile.
    Evolve(Common),
    /// Decay rates of the profile gradients.
    DecayReport(Common),
}

#[derive(Debug, Args)]
pub struct Common {
    /// Config file, or a manifest.json from an earlier run to repeat it.
    #[arg(long)]
    pub config: PathBuf,
    #[arg(long, default_value = "out")]
    pub out_dir: PathBuf,
    /// Upper bound on worker threads; results do not depend on it.
    #[arg(long, default_value_t = 1)]
    pub workers: usize,
    /// Overrides the seed from the config or manifest.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Treat warnings as failures.
    #[arg(long)]
    pub strict: bool,
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::CollisionVerify(_) => "collision-verify",
            Command::Transport(_) => "transport",
            Command::Profile(_) => "profile",
            Command::Evolve(_) => "evolve",
            Command::DecayReport(_) => "decay-report",
        }
    }

    fn common(&self) -> &Common {
        match self {
            Command::CollisionVerify(c)
            | Command::Transport(c)
            | Command::Profile(c)
            | Command::Evolve(c)
            | Command::DecayReport(c) => c,
        }
    }
}

/// Config text and seed, from either a config file or a manifest.
fn load_inputs(path: &std::path::Path) -> LabResult<(Config, Option<u64>)> {
    if path.extension().is_some_and(|e| e == "json") {
        let m = RunManifest::load(path)?;
        Ok((Config::parse(&m.config)?, Some(m.seed)))
    } else {
        Ok((Config::load(path)?, None))
    }
}

/// Runs one command; returns the process exit code.
pub fn run(cli: Cli) -> i32 {
    let name = cli.command.name();
    let common = cli.command.common();
    let (config, manifest_seed) = match load_inputs(&common.config) {
        Ok(v) => v,
        Err(e) => {
            eprintln!("error: {e}");
            return e.exit_code();
        }
    };
    let seed = match common.seed.or(manifest_seed) {
        Some(s) => s,
        None => match config.get("run", "seed", 0u64) {
            Ok(s) => s,
            Err(e) => {
                eprintln!("error: {e}");
                return e.exit_code();
            }
        },
    };
    let mut record = match RunRecord::start(&common.out_dir, name, config.canonical(), seed, common.workers, common.strict) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return e.exit_code();
        }
    };
    let mut ctx = Context { config: &config, record: &mut record, exec: Threads::new(common.workers), seed };
    let mut outcome = match &cli.command {
        Command::CollisionVerify(_) => commands::collision_verify::run(&mut ctx),
        Command::Transport(_) => commands::transport::run(&mut ctx),
        Command::Profile(_) => commands::profile::run(&mut ctx),
        Command::Evolve(_) => commands::evolve::run(&mut ctx),
        Command::DecayReport(_) => commands::decay_report::run(&mut ctx),
    };
    for w in config.unused() {
        record.warn(w);
    }
    if outcome.is_ok() && common.strict && !record.manifest.warnings.is_empty() {
        outcome = Err(LabError::Strict(record.manifest.warnings.clone()));
    }
    for w in &record.manifest.warnings {
        eprintln!("warning: {w}");
    }
    let code = match &outcome {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    };
    if let Err(e) = record.finish(&outcome) {
        eprintln!("error: cannot finalize manifest: {e}");
        return e.exit_code();
    }
    code
}

/// Parses `args` (including the program name) and runs. Parse failures exit 2.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(cli),
        Err(e) => {
            let _ = e.print();
            match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => 0,
                _ => 2,
            }
        }
    }
}
