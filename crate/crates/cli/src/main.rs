use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use veronese_cli::config::JobConfig;
use veronese_cli::plot::write_slices;
use veronese_cli::report::{schema, Report};
use veronese_cli::run::{self, RunError, RunOptions};

const INVALID: u8 = 2;

#[derive(Parser)]
#[command(
    name = "veronese",
    version,
    about = "Batch verifier for 3D Veronese webs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// JSON job file.
    config: PathBuf,
    /// Seed for random sampling.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Worker threads (default: one per core).
    #[arg(long)]
    jobs: Option<usize>,
    /// Write the report here instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Run the configured checks over the domain.
    Verify {
        #[command(flatten)]
        common: Common,
        /// Write a PNG heat slice per check into this directory.
        #[arg(long)]
        plot: Option<PathBuf>,
        /// Pixels per side of each heat slice.
        #[arg(long, default_value_t = 64)]
        plot_size: usize,
    },
    /// Integrate a Bäcklund transform over the domain.
    Backlund {
        #[command(flatten)]
        common: Common,
    },
    /// Solve for a self-propelled function of the cross-ratio web.
    SolveSelfPropelled {
        #[command(flatten)]
        common: Common,
    },
    /// Report format utilities.
    Report {
        /// Print the JSON Schema of the report.
        #[arg(long)]
        schema: bool,
    },
}

fn load(path: &Path) -> Result<JobConfig, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    JobConfig::from_json(&text).map_err(|e| e.to_string())
}

fn emit(text: &str, output: Option<&Path>) -> Result<(), String> {
    match output {
        Some(path) => {
            fs::write(path, format!("{text}\n")).map_err(|e| format!("{}: {e}", path.display()))
        }
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn execute(
    common: &Common,
    f: impl FnOnce(&JobConfig, RunOptions) -> Result<Report, RunError>,
    after: impl FnOnce(&JobConfig, RunOptions) -> Result<(), String>,
) -> Result<u8, (u8, String)> {
    let config = load(&common.config).map_err(|e| (INVALID, e))?;
    let opts = RunOptions {
        seed: common.seed,
        jobs: common.jobs,
    };
    let report = f(&config, opts).map_err(|e| (INVALID, e.to_string()))?;
    let text = serde_json::to_string_pretty(&report).map_err(|e| (1, e.to_string()))?;
    emit(&text, common.output.as_deref()).map_err(|e| (1, e))?;
    after(&config, opts).map_err(|e| (1, e))?;
    log::info!("{}: {:?}", report.command, report.status);
    Ok(report.status.exit_code())
}

fn dispatch(cli: Cli) -> Result<u8, (u8, String)> {
    let none = |_: &JobConfig, _: RunOptions| Ok(());
    match cli.command {
        Command::Verify {
            common,
            plot,
            plot_size,
        } => execute(&common, run::verify, |config, opts| {
            let Some(dir) = plot else { return Ok(()) };
            let job = config.validate(opts.seed).map_err(|e| e.to_string())?;
            for path in write_slices(&job, &dir, plot_size).map_err(|e| e.to_string())? {
                log::info!("wrote {}", path.display());
            }
            Ok(())
        }),
        Command::Backlund { common } => execute(&common, run::backlund, none),
        Command::SolveSelfPropelled { common } => execute(&common, run::solve_self_propelled, none),
        Command::Report { schema: true } => {
            let text = serde_json::to_string_pretty(&schema()).map_err(|e| (1, e.to_string()))?;
            emit(&text, None).map_err(|e| (1, e))?;
            Ok(0)
        }
        Command::Report { schema: false } => {
            Err((INVALID, "report: nothing to do, pass --schema".to_string()))
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("VERONESE_LOG", "warn")).init();
    match dispatch(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err((code, message)) => {
            eprintln!("error: {message}");
            ExitCode::from(code)
        }
    }
}
