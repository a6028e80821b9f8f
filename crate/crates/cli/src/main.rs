use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use ghz_budget_cli::config::{load_config, RunConfig};
use ghz_budget_cli::error::{CliError, CliResult};
use ghz_budget_cli::figures::{emit_figure, FigureId};
use ghz_budget_cli::manifest::{verify, Overrides, RunManifest};
use ghz_budget_cli::output::{write_schema, write_table, Metadata, Table};
use ghz_budget_cli::sweep::run_sweep;

/// Error budget for entanglement-enhanced atom interferometry.
#[derive(Debug, Parser)]
#[command(name = "ghzbudget", version)]
struct Cli {
    /// Run configuration (TOML, or JSON by extension).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory; overrides `output.dir`.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Monte Carlo seed; overrides `oracle.seed`.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Monte Carlo shots per configuration; overrides `oracle.shots`.
    #[arg(long, global = true)]
    shots: Option<u64>,
    /// Emit the data for one figure or table.
    #[arg(long, global = true)]
    figure: Option<String>,
    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate the budget at every point of the configured sweep.
    Sweep,
    /// Emit figure or table data.
    Figure { id: String },
    /// Recheck a run manifest against its outputs and config.
    Verify { manifest: PathBuf },
    /// Parse and validate a config file.
    Validate { config: PathBuf },
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn run(cli: Cli) -> CliResult<()> {
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(CliError::Usage("--threads must be >= 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Usage(format!("thread pool: {e}")))?;
    }
    match (&cli.command, &cli.figure) {
        (Some(Command::Verify { manifest }), _) => {
            for line in verify(manifest, cli.config.as_deref())? {
                println!("{line}");
            }
            Ok(())
        }
        (Some(Command::Validate { config }), _) => {
            let cfg = load_config(config)?;
            println!("ok {} ({} sweep points)", config.display(), ghz_budget_cli::sweep::sweep_points(&cfg).len());
            println!("config_hash: {}", cfg.hash());
            Ok(())
        }
        (Some(Command::Figure { id }), _) | (None, Some(id)) => {
            let id: FigureId = id.parse()?;
            let cfg = resolve(&cli)?;
            let tables = emit_figure(&cfg, id)?;
            finish(&cli, &cfg, &format!("figure {id}"), &tables)
        }
        (Some(Command::Sweep), _) | (None, None) => {
            let cfg = resolve(&cli)?;
            let table = run_sweep(&cfg)?;
            finish(&cli, &cfg, "sweep", &[table])
        }
    }
}

fn resolve(cli: &Cli) -> CliResult<RunConfig> {
    let mut cfg = match &cli.config {
        Some(p) => load_config(p)?,
        None => RunConfig::default(),
    };
    if cli.shots == Some(0) {
        return Err(CliError::Usage("--shots must be >= 1".into()));
    }
    overrides(cli).apply(&mut cfg);
    if let Some(o) = &cli.out {
        cfg.output_dir = o.clone();
    }
    Ok(cfg)
}

fn overrides(cli: &Cli) -> Overrides {
    Overrides { seed: cli.seed, shots: cli.shots }
}

fn finish(cli: &Cli, cfg: &RunConfig, command: &str, tables: &[Table]) -> CliResult<()> {
    let dir: &Path = &cfg.output_dir;
    let meta = Metadata { config_hash: cfg.hash(), seed: cfg.oracle.seed, command: command.into() };
    let mut manifest = RunManifest::new(cfg, cli.config.as_deref(), overrides(cli), command);
    for t in tables {
        let p = write_table(dir, t, &meta)?;
        manifest.add_output(dir, &p)?;
        println!("wrote {} ({} rows)", p.display(), t.rows.len());
    }
    let schema = write_schema(dir, tables)?;
    manifest.add_output(dir, &schema)?;
    let m = manifest.write(dir)?;
    println!("wrote {}", m.display());
    Ok(())
}
