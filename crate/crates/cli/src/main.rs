use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use jcsim_cli::config;
use jcsim_cli::error::CliError;
use jcsim_cli::run;

/// Truncated Jaynes-Cummings master-equation runner.
///
/// Modes (from the config file, overridable with --mode):
///   evolve  integrate one trajectory and emit an observables CSV
///   sweep   integrate across truncation levels and emit a convergence CSV
///   check   run claim verification and emit a JSON report
///
/// Exit codes: 0 success, 1 error, 2 check found a non-allow-listed
/// violation.
#[derive(Debug, Parser)]
#[command(name = "jcsim", version, about, verbatim_doc_comment)]
struct Cli {
    /// Path to the JSON run configuration.
    #[arg(long)]
    config: PathBuf,

    /// Directory receiving all output artifacts.
    #[arg(long, default_value = ".")]
    output_dir: PathBuf,

    /// Override the config's mode (evolve | sweep | check).
    #[arg(long)]
    mode: Option<String>,

    /// Override the config's seed.
    #[arg(long)]
    seed: Option<u64>,

    /// Suppress the run summary on stdout.
    #[arg(long)]
    quiet: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match try_main(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("{}", err.to_json());
            ExitCode::from(1)
        }
    }
}

fn try_main(cli: &Cli) -> Result<u8, CliError> {
    let cfg = config::load(&cli.config, cli.mode.as_deref(), cli.seed)?;
    let outcome = run::execute(&cfg, &cli.output_dir)?;
    if !cli.quiet {
        for line in &outcome.summary {
            println!("{line}");
        }
    }
    Ok(outcome.exit_code)
}
