use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::Context;
use clap::{Parser, Subcommand};
use selberg_cli::commands::{self, ConnectArgs, RacahArgs, VerifyArgs};
use selberg_core::config::Config;

#[derive(Debug, Parser)]
#[command(
    name = "selberg",
    version,
    about = "Connection matrices, q-Racah values and verification reports for Selberg-type integrals"
)]
struct Cli {
    /// key = value file overriding the built-in defaults.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Write the JSON report here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Also write every result matrix as CSV.
    #[arg(long, global = true)]
    csv: Option<PathBuf>,
    /// Worker threads for the quadrature.
    #[arg(long, global = true, env = "SELBERG_THREADS")]
    threads: Option<usize>,
    /// Leave the wall-clock timing out so identical runs give identical reports.
    #[arg(long, global = true)]
    no_timing: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Connection matrix for one chart, with the spread across formula variants.
    Connect(ConnectArgs),
    /// Run residual checks and compare each with its threshold.
    Verify(VerifyArgs),
    /// q-Racah polynomial, weight and norm.
    Racah(RacahArgs),
}

fn configure_threads(n: Option<usize>) -> anyhow::Result<()> {
    #[cfg(feature = "parallel")]
    if let Some(n) = n {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .context("cannot configure the thread pool")?;
    }
    #[cfg(not(feature = "parallel"))]
    let _ = n;
    Ok(())
}

fn run(cli: Cli) -> anyhow::Result<i32> {
    configure_threads(cli.threads)?;
    let cfg = match &cli.config {
        Some(p) => Config::load(p),
        None => Ok(Config::default()),
    };
    let cfg = match cfg {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return Ok(2);
        }
    };
    let start = Instant::now();
    let mut report = match &cli.command {
        Command::Connect(a) => commands::connect(a, &cfg),
        Command::Verify(a) => commands::verify(a, &cfg),
        Command::Racah(a) => commands::racah(a, &cfg),
    };
    if !cli.no_timing {
        report.timing_ms = Some(start.elapsed().as_millis() as u64);
    }
    let json = report.to_json();
    match &cli.output {
        Some(p) => std::fs::write(p, json).with_context(|| format!("writing {}", p.display()))?,
        None => print!("{json}"),
    }
    if let Some(p) = &cli.csv {
        let f = std::fs::File::create(p).with_context(|| format!("creating {}", p.display()))?;
        report.write_csv(f)?;
    }
    for e in &report.errors {
        eprintln!("error: {e}");
    }
    for r in report.residuals.iter().filter(|r| !r.pass) {
        eprintln!(
            "FAIL {}: {:?} (threshold {:e})",
            r.name, r.value, r.threshold
        );
    }
    Ok(report.outcome.exit_code())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(3)
        }
    }
}
