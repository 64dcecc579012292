#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod commands;
mod config;

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};
use prake_core::experiments::OutputFormat;
use prake_core::Error;

use commands::Status;
use config::RunConfig;

/// Energy-efficient power control with partial-Rake receivers.
#[derive(Debug, Parser)]
#[command(name = "prake", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Flat TOML file with run settings; omitted keys take built-in defaults.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output file (stdout when omitted); the resolved config goes to `<out>.config.toml`.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_parser = ["csv", "jsonl"])]
    format: Option<String>,
    #[arg(long, global = true)]
    trials: Option<usize>,
    #[arg(long, global = true)]
    tolerance: Option<f64>,
    /// Override one config key, e.g. `--set frames=4`; repeatable.
    #[arg(long = "set", global = true, value_name = "KEY=VALUE")]
    assignments: Vec<String>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Tabulate the large-system interference factors.
    Curves,
    /// Solve the power-control game on one sampled network.
    Equilibrium,
    /// Saturation probability against the number of frames.
    PoSweep,
    /// Equilibrium utilities of one network next to the large-system prediction.
    UtilityScatter,
    /// Smallest rake ratio whose predicted utility loss stays within `target_loss_db`.
    Design {
        #[arg(long)]
        target_loss_db: Option<f64>,
    },
    /// Sample the interference factors and compare them with the closed forms.
    ValidateLsa,
}

fn resolve(cli: &Cli) -> Result<RunConfig> {
    let mut cfg = RunConfig::load(cli.config.as_deref(), &cli.assignments)?;
    if let Some(s) = cli.seed {
        cfg.seed = s;
    }
    if let Some(f) = &cli.format {
        cfg.format = f.parse::<OutputFormat>()?;
    }
    if let Some(t) = cli.trials {
        cfg.trials = t;
    }
    if let Some(t) = cli.tolerance {
        cfg.tolerance = t;
    }
    if let Command::Design {
        target_loss_db: Some(t),
    } = cli.command
    {
        cfg.target_loss_db = t;
    }
    Ok(cfg)
}

fn run(cli: &Cli) -> Result<Status> {
    let cfg = resolve(cli)?;
    let mut out: Box<dyn Write> = match &cli.out {
        Some(path) => {
            let sidecar = path.with_extension(match path.extension() {
                Some(ext) => format!("{}.config.toml", ext.to_string_lossy()),
                None => "config.toml".to_string(),
            });
            std::fs::write(&sidecar, cfg.to_toml())
                .with_context(|| format!("writing {}", sidecar.display()))?;
            Box::new(BufWriter::new(
                File::create(path).with_context(|| format!("creating {}", path.display()))?,
            ))
        }
        None => {
            eprint!("# resolved configuration\n{}", cfg.to_toml());
            Box::new(std::io::stdout().lock())
        }
    };
    let status = match cli.command {
        Command::Curves => commands::curves(&cfg, &mut out),
        Command::Equilibrium => commands::equilibrium(&cfg, &mut out),
        Command::PoSweep => commands::po_sweep(&cfg, &mut out),
        Command::UtilityScatter => commands::utility_scatter(&cfg, &mut out),
        Command::Design { .. } => commands::design(&cfg, &mut out),
        Command::ValidateLsa => commands::validate(&cfg, &mut out),
    }?;
    out.flush()?;
    Ok(status)
}

fn failure_status(err: &anyhow::Error) -> Status {
    match err.downcast_ref::<Error>() {
        Some(Error::Infeasible(_) | Error::UnattainableLoss { .. } | Error::NoTargetSinr(_)) => {
            Status::Saturated
        }
        _ => Status::Usage,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() {
                Status::Usage
            } else {
                Status::Ok
            };
            let _ = e.print();
            return ExitCode::from(code as u8);
        }
    };
    match run(&cli) {
        Ok(status) => ExitCode::from(status as u8),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(failure_status(&e) as u8)
        }
    }
}
