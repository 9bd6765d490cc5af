//! Command-line interface.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::equilibrium::construct;
use crate::error::{CliError, FileError};
use crate::io::{self, ConfigFile};
use crate::market::MarketConfig;
use crate::simulate::{simulate, sweep, SimulationOptions};
use crate::strategy::StrategyProfile;
use crate::verify::{verify, Tolerances};

/// Environment variable naming the default output directory.
pub const OUT_DIR_ENV: &str = "CHAINSEARCH_OUT_DIR";

#[derive(Debug, Parser)]
#[command(
    name = "chainsearch",
    version,
    about = "Equilibria of a consumer-search market with chain stores"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build the equilibrium for a config; writes profile.toml and summary.txt.
    Construct(CommonArgs),
    /// Check a profile; writes report.toml. Exit 0 pass, 1 fail.
    Verify {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long)]
        profile: Option<PathBuf>,
        #[command(flatten)]
        tolerances: ToleranceArgs,
    },
    /// Monte Carlo run; writes simulation.csv, simulation_summary.csv and
    /// price_paid_histogram.csv.
    Simulate {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long)]
        profile: Option<PathBuf>,
        #[command(flatten)]
        run: RunArgs,
        #[arg(long, default_value_t = 100_000)]
        reps: u64,
    },
    /// Expected prices across a grid of store counts and shopper fractions;
    /// writes sweep.csv.
    Sweep {
        #[command(flatten)]
        common: CommonArgs,
        #[command(flatten)]
        run: RunArgs,
        /// Also simulate every point with this many replications.
        #[arg(long)]
        reps: Option<u64>,
    },
}

#[derive(Debug, Args)]
pub struct CommonArgs {
    #[arg(long)]
    pub config: PathBuf,
    /// Output directory.
    #[arg(long, env = OUT_DIR_ENV, default_value = ".")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct ToleranceArgs {
    #[arg(long)]
    pub tol_deviation: Option<f64>,
    #[arg(long)]
    pub tol_profit: Option<f64>,
    #[arg(long)]
    pub grid: Option<usize>,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    /// Run replications on one thread.
    #[arg(long)]
    pub serial: bool,
    /// Follow one sampled searcher per replication instead of the
    /// expected searcher flow.
    #[arg(long)]
    pub agents: bool,
}

fn ensure_dir(dir: &Path) -> Result<(), FileError> {
    std::fs::create_dir_all(dir).map_err(|source| FileError::Io {
        path: dir.display().to_string(),
        source,
    })
}

fn write_text(path: &Path, text: &str) -> Result<(), FileError> {
    std::fs::write(path, text).map_err(|source| FileError::Io {
        path: path.display().to_string(),
        source,
    })
}

fn profile_or_default(
    file: &ConfigFile,
    config: &MarketConfig,
    profile: Option<&Path>,
) -> Result<StrategyProfile, CliError> {
    match profile {
        Some(p) => Ok(io::load_profile(p)?),
        None => Ok(construct(config, file.groups.as_ref())?.profile),
    }
}

/// Runs a command and returns its exit code (0 or 1); errors mean exit 2.
pub fn run(cli: Cli) -> Result<u8, CliError> {
    match cli.command {
        Command::Construct(common) => {
            let file = io::load_config(&common.config)?;
            let config = file.market()?;
            let eq = construct(&config, file.groups.as_ref())?;
            ensure_dir(&common.out)?;
            io::save_profile(&common.out.join("profile.toml"), &eq.profile)?;
            let text = io::summary(&eq, &config);
            write_text(&common.out.join("summary.txt"), &text)?;
            print!("{text}");
            Ok(0)
        }
        Command::Verify {
            common,
            profile,
            tolerances,
        } => {
            let file = io::load_config(&common.config)?;
            let config = file.market()?;
            let profile = profile_or_default(&file, &config, profile.as_deref())?;
            let mut tol = file.tolerances.unwrap_or_default();
            tol = Tolerances {
                deviation: tolerances.tol_deviation.unwrap_or(tol.deviation),
                profit: tolerances.tol_profit.unwrap_or(tol.profit),
                grid: tolerances.grid.unwrap_or(tol.grid),
            };
            let report = verify(&profile, &config, &tol)?;
            ensure_dir(&common.out)?;
            io::save_report(&common.out.join("report.toml"), &report)?;
            for c in &report.checks {
                println!(
                    "{:<24} {}  {}",
                    c.name,
                    if c.passed { "pass" } else { "FAIL" },
                    c.detail
                );
            }
            println!("verdict: {}", if report.passed { "pass" } else { "FAIL" });
            Ok(if report.passed { 0 } else { 1 })
        }
        Command::Simulate {
            common,
            profile,
            run,
            reps,
        } => {
            let file = io::load_config(&common.config)?;
            let config = file.market()?;
            let profile = profile_or_default(&file, &config, profile.as_deref())?;
            let opts = SimulationOptions {
                replications: reps,
                seed: run.seed,
                parallel: !run.serial,
                agents: run.agents,
                ..Default::default()
            };
            let result = simulate(&profile, &config, &opts)?;
            ensure_dir(&common.out)?;
            io::write_simulation_csv(&common.out, &result)?;
            for s in &result.sellers {
                println!(
                    "seller {} ({} stores): profit {} +- {}",
                    s.seller, s.stores, s.mean_profit, s.profit_se
                );
            }
            println!(
                "searches per searcher {}, first-store purchases {}",
                result.mean_searches, result.first_store_fraction
            );
            Ok(0)
        }
        Command::Sweep { common, run, reps } => {
            let file = io::load_config(&common.config)?;
            let config = file.market()?;
            let opts = reps.map(|replications| SimulationOptions {
                replications,
                seed: run.seed,
                parallel: !run.serial,
                agents: run.agents,
                ..Default::default()
            });
            if let Some(o) = &opts {
                if o.replications == 0 {
                    return Err(crate::error::SimulateError::NoReplications.into());
                }
            }
            let rows = sweep(&config, &file.sweep_points(), opts.as_ref());
            ensure_dir(&common.out)?;
            io::write_sweep_csv(&common.out.join("sweep.csv"), &rows)?;
            for r in &rows {
                match (&r.error, r.searcher_price_ratio) {
                    (Some(e), _) => println!("{:?} mu={}: error: {e}", r.store_counts, r.mu),
                    (None, Some(x)) => println!(
                        "{:?} mu={}: P_M {} searcher price {} ({x} P_M)",
                        r.store_counts,
                        r.mu,
                        r.reserve_price.unwrap_or(f64::NAN),
                        r.searcher_price.unwrap_or(f64::NAN)
                    ),
                    _ => {}
                }
            }
            Ok(0)
        }
    }
}
