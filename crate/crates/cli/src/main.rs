//! `rado`: every analysis as a subcommand, JSON in and JSON out.
//!
//! Exit codes: 0 computed, 2 invalid input, 3 budget exceeded, 4 internal
//! invariant violated.

mod commands;
mod input;

use std::process::ExitCode;
use std::time::Instant;

use clap::Parser;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use commands::Command;
use input::Failure;

#[derive(Parser, Debug)]
#[command(name = "rado", version, about = "Structure and solution counts for systems of diagonal Diophantine equations")]
struct Cli {
    /// Print a human-readable summary instead of the JSON report
    #[arg(long, global = true)]
    pretty: bool,
    /// Worker threads for parallel enumeration
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[arg(long, global = true, hide = true)]
    inject_fault: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct Request {
    subcommand: String,
    input: Value,
    options: Value,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct Timing {
    #[serde(rename = "elapsedMs")]
    elapsed_ms: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct AnalysisReport {
    #[serde(rename = "toolVersion")]
    tool_version: String,
    request: Request,
    result: Value,
    timing: Timing,
}

fn summary(report: &AnalysisReport) -> String {
    let mut out = format!("{} ({:.1} ms)\n", report.request.subcommand, report.timing.elapsed_ms);
    match &report.result {
        Value::Object(map) => {
            for (k, v) in map {
                out.push_str(&format!("  {k}: {v}\n"));
            }
        }
        other => out.push_str(&format!("  {other}\n")),
    }
    out
}

fn execute(cli: &Cli) -> Result<AnalysisReport, Failure> {
    if cli.inject_fault {
        return Err(Failure::Core(rado_core::Error::Invariant("injected fault".into())));
    }
    let start = Instant::now();
    let outcome = commands::run(&cli.command)?;
    Ok(AnalysisReport {
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        request: Request { subcommand: outcome.subcommand.into(), input: outcome.input, options: outcome.options },
        result: outcome.result,
        timing: Timing { elapsed_ms: start.elapsed().as_secs_f64() * 1e3 },
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if n == 0 {
            eprintln!("invalid input: --threads must be at least 1");
            return ExitCode::from(2);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("could not size the thread pool: {e}");
            return ExitCode::from(4);
        }
    }
    match execute(&cli) {
        Ok(report) => {
            if cli.pretty {
                print!("{}", summary(&report));
            } else {
                println!("{}", serde_json::to_string(&report).expect("report serializes"));
            }
            ExitCode::SUCCESS
        }
        Err(f) => {
            eprintln!("{f}");
            ExitCode::from(f.exit_code())
        }
    }
}
