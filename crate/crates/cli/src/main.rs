use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};

use autlab_cli::config::ExperimentConfig;
use autlab_cli::{builtins_listing, runner};

#[derive(Parser)]
#[command(name = "autlab", version, about = "Experiments on shift automorphisms and group distortion")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output directory (overrides the config).
    #[arg(long, global = true)]
    out_dir: Option<PathBuf>,
    /// Maximum rows per block-code table.
    #[arg(long, global = true)]
    budget_tables: Option<usize>,
    /// Maximum states stored by a Cayley-graph search.
    #[arg(long, global = true)]
    budget_bfs: Option<usize>,
    /// Execute independent runs in parallel.
    #[arg(long, global = true)]
    parallel: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Execute every run in a config.
    Run { config: PathBuf },
    /// Print the built-in shifts, codes and groups.
    ListBuiltins,
    /// Check a config without running it.
    Validate { config: PathBuf },
}

fn load(path: &Path, cli: &Cli) -> Result<(ExperimentConfig, PathBuf)> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let mut config = ExperimentConfig::from_json(&text).with_context(|| format!("in {}", path.display()))?;
    if let Some(t) = cli.budget_tables {
        config.budgets.table_rows = t;
    }
    if let Some(b) = cli.budget_bfs {
        config.budgets.bfs_states = b;
    }
    let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
    config.validate(&base).with_context(|| format!("in {}", path.display()))?;
    Ok((config, base))
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match real_main(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn real_main(cli: &Cli) -> Result<ExitCode> {
    match &cli.command {
        Command::ListBuiltins => {
            print!("{}", builtins_listing());
            Ok(ExitCode::SUCCESS)
        }
        Command::Validate { config } => {
            let (c, _) = load(config, cli)?;
            println!("ok: {} shifts, {} codes, {} groups, {} runs", c.shifts.len(), c.codes.len(), c.groups.len(), c.runs.len());
            Ok(ExitCode::SUCCESS)
        }
        Command::Run { config } => {
            let (c, base) = load(config, cli)?;
            let out_dir = cli
                .out_dir
                .clone()
                .or_else(|| c.output_dir.as_ref().map(|d| base.join(d)))
                .unwrap_or_else(|| PathBuf::from("out"));
            let outputs = runner::run_all(&c, &base, cli.parallel);
            runner::write_outputs(&out_dir, &outputs)?;
            let failed: Vec<&str> = outputs.iter().filter(|o| o.failed).map(|o| o.name.as_str()).collect();
            if failed.is_empty() {
                log::info!("{} runs written to {}", outputs.len(), out_dir.display());
                Ok(ExitCode::SUCCESS)
            } else {
                eprintln!("failed runs: {}", failed.join(", "));
                Ok(ExitCode::FAILURE)
            }
        }
    }
}
