use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use berkpatch_cli::{dispatch, parse_mode, run_suite, Options, Request};
use clap::{Parser, Subcommand};
use serde_json::Value;

#[derive(Parser)]
#[command(name = "berkpatch", version, about = "Quadratic forms, Berkovich line covers and patching over Q_p")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Odd prime; overrides a `prime` field in the payload.
    #[arg(long, global = true)]
    prime: Option<u64>,
    /// Truncation window N for series; identities are asserted to N/2.
    #[arg(long, global = true, default_value_t = berkpatch_cli::DEFAULT_PRECISION)]
    precision: i64,
    #[arg(long, global = true, default_value_t = berkpatch_cli::DEFAULT_SEED)]
    seed: u64,
    /// Decomposition mode: free or general.
    #[arg(long, global = true)]
    mode: Option<String>,
    /// Replay a certificate: input is {"payload": ..., "result": ...}.
    #[arg(long, global = true)]
    verify: bool,
    /// JSON output; the default and only format.
    #[arg(long, global = true)]
    json: bool,
    /// Per-iteration lines on stderr.
    #[arg(long, global = true)]
    trace: bool,
}

#[derive(clap::Args)]
struct Input {
    /// JSON payload file; stdin when absent or `-`.
    file: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Isotropy over Q_p, at a point of the line, or over a finite field.
    Isotropy(Input),
    /// Unit block decomposition with certificates.
    Decompose(Input),
    /// Strong u-invariant bounds from a field profile.
    Ubound(Input),
    /// Type of a point of the line.
    Classify(Input),
    /// Nice refinement of a list of domains.
    Refine(Input),
    /// Parity function of a nice cover.
    Parity(Input),
    /// Nice cover of a domain with prescribed intersection points.
    CoverWithS(Input),
    /// Split a Laurent series into disc and outer parts.
    Split(Input),
    /// Successive approximation in a chart.
    Approximate(Input),
    /// Factor an SL_2 matrix near the identity.
    Factor(Input),
    /// Patch transition matrices over a cover.
    Patch(Input),
    /// Run every `<name>.request.json` against `<name>.expected.json`.
    Suite { dir: PathBuf },
}

impl Command {
    fn engine(self) -> Option<(&'static str, Input)> {
        Some(match self {
            Command::Isotropy(i) => ("isotropy", i),
            Command::Decompose(i) => ("decompose", i),
            Command::Ubound(i) => ("ubound", i),
            Command::Classify(i) => ("classify", i),
            Command::Refine(i) => ("refine", i),
            Command::Parity(i) => ("parity", i),
            Command::CoverWithS(i) => ("cover-with-s", i),
            Command::Split(i) => ("split", i),
            Command::Approximate(i) => ("approximate", i),
            Command::Factor(i) => ("factor", i),
            Command::Patch(i) => ("patch", i),
            Command::Suite { .. } => return None,
        })
    }
}

fn read_input(path: Option<&String>) -> Result<String, String> {
    match path {
        Some(p) if p != "-" => std::fs::read_to_string(p).map_err(|e| format!("cannot read {}: {}", p, e)),
        _ => {
            let mut s = String::new();
            std::io::stdin().read_to_string(&mut s).map_err(|e| format!("cannot read stdin: {}", e))?;
            Ok(s)
        }
    }
}

fn usage_error(msg: &str) -> ExitCode {
    let v = serde_json::json!({
        "status": "error",
        "result": null,
        "diagnostics": [],
        "error": { "kind": "usage", "message": msg },
    });
    println!("{}", serde_json::to_string_pretty(&v).expect("serializable"));
    ExitCode::from(2)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mode = match cli.mode.as_deref().map(parse_mode).transpose() {
        Ok(m) => m,
        Err(e) => return usage_error(&e.to_string()),
    };
    let options = Options { prime: cli.prime, precision: cli.precision, seed: cli.seed, mode, verify: cli.verify };
    if let Command::Suite { dir } = &cli.command {
        return match run_suite(dir) {
            Ok(report) => {
                print!("{}", report.render());
                if report.all_passed() {
                    ExitCode::SUCCESS
                } else {
                    ExitCode::from(1)
                }
            }
            Err(e) => {
                eprintln!("{}", e);
                ExitCode::from(2)
            }
        };
    }
    let (command, input) = cli.command.engine().expect("suite handled above");
    let text = match read_input(input.file.as_ref()) {
        Ok(t) => t,
        Err(e) => return usage_error(&e),
    };
    let payload: Value = match serde_json::from_str(&text) {
        Ok(v) => v,
        Err(e) => return usage_error(&format!("input is not JSON: {}", e)),
    };
    let response = dispatch(&Request { command: command.to_string(), payload, options });
    if cli.trace {
        for line in &response.trace {
            eprintln!("{}", line);
        }
    }
    println!("{}", serde_json::to_string_pretty(&response.to_json()).expect("serializable"));
    ExitCode::from(response.exit_code() as u8)
}
