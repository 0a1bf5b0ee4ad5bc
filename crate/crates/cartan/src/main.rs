use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use cartan::inspect::inspect_str;
use cartan::suites::{run_all, run_suite, SuiteConfig, SuiteId, UsageError};
use clap::{Parser, Subcommand};
use serde_json::Value;

#[derive(Parser)]
#[command(name = "cartan", version, about = "Adjoint quotient checks for W_n and S_n")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a verification suite and emit a JSON report.
    Suite {
        /// Suite name, or "all".
        #[arg(long)]
        suite: String,
        #[arg(long, default_value_t = 5)]
        p: u32,
        /// Defaults to 2 for W-suites and 3 for S-suites.
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        trials: u64,
        /// Write the report here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
    /// Print an analysis of the element stored in a JSON file.
    Inspect { file: PathBuf },
}

const EXIT_FAIL: u8 = 1;
const EXIT_USAGE: u8 = 2;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Suite {
            suite,
            p,
            n,
            seed,
            trials,
            out,
            jobs,
        } => {
            let cfg = SuiteConfig {
                p,
                n,
                seed,
                trials,
                jobs,
            };
            let reports = if suite == "all" {
                run_all(&cfg)
            } else {
                suite
                    .parse::<SuiteId>()
                    .and_then(|id| run_suite(id, &cfg))
                    .map(|r| vec![r])
            };
            let reports = match reports {
                Ok(r) => r,
                Err(UsageError(msg)) => {
                    eprintln!("error: {msg}");
                    return ExitCode::from(EXIT_USAGE);
                }
            };
            for r in &reports {
                eprintln!("{}", r.summary_line());
            }
            let json = if reports.len() == 1 {
                reports[0].to_json()
            } else {
                Value::Array(reports.iter().map(|r| r.to_json()).collect())
            };
            let text = serde_json::to_string_pretty(&json).expect("report serializes") + "\n";
            match out {
                Some(path) => {
                    if let Err(e) = fs::write(&path, text) {
                        eprintln!("error: cannot write {}: {e}", path.display());
                        return ExitCode::from(EXIT_USAGE);
                    }
                }
                None => print!("{text}"),
            }
            if reports.iter().all(|r| r.passed()) {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(EXIT_FAIL)
            }
        }
        Command::Inspect { file } => {
            let text = match fs::read_to_string(&file) {
                Ok(t) => t,
                Err(e) => {
                    eprintln!("error: cannot read {}: {e}", file.display());
                    return ExitCode::from(EXIT_USAGE);
                }
            };
            match inspect_str(&text) {
                Ok(report) => {
                    print!("{report}");
                    ExitCode::SUCCESS
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    ExitCode::from(EXIT_USAGE)
                }
            }
        }
    }
}
