//! `wsc`: closure computations for monomial ideals from the command line.

use std::io::Read;
use std::process::ExitCode;

use clap::Parser;
use wsclosure_cli::{reports_json, run_script, Options};

#[derive(Parser, Debug)]
#[command(name = "wsc", version, about = "Integral and weak subintegral closure computations")]
struct Cli {
    /// Script text, e.g. `igt (x^2, x*y^2, y^3)`; words are joined with spaces.
    script: Vec<String>,
    /// Read the script from a file (`-` for stdin).
    #[arg(short, long, conflicts_with = "script")]
    file: Option<String>,
    /// Emit JSON instead of text.
    #[arg(long)]
    json: bool,
    /// Seed for the arc sampler and sample points.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Arc pairs tried by the refuter; the order cap for `ord`.
    #[arg(long)]
    budget: Option<usize>,
    /// Truncation for `relclose ... at (arc pair)`.
    #[arg(long)]
    trunc: Option<u32>,
    /// Largest q for certificate construction and search.
    #[arg(long)]
    q_max: Option<u32>,
    /// Expectations file replacing the built-in one for `paper-examples`.
    #[arg(long)]
    expectations: Option<String>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let script = match read_script(&cli) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };
    let expectations = match &cli.expectations {
        Some(path) => match std::fs::read_to_string(path) {
            Ok(s) => Some(s),
            Err(e) => {
                eprintln!("error: cannot read {path}: {e}");
                return ExitCode::from(1);
            }
        },
        None => None,
    };
    let opts = Options {
        seed: cli.seed,
        budget: cli.budget,
        trunc: cli.trunc,
        q_max: cli.q_max,
        expectations,
    };
    match run_script(&script, &opts) {
        Ok((reports, status)) => {
            if cli.json {
                println!("{}", serde_json::to_string_pretty(&reports_json(&reports)).expect("serializable"));
            } else {
                for r in &reports {
                    print!("{}", r.to_text());
                }
            }
            ExitCode::from(status.exit_code())
        }
        Err(e) => {
            if cli.json {
                let doc = serde_json::json!({
                    "schema": wsclosure_cli::SCHEMA_VERSION,
                    "error": { "code": "E_PARSE", "message": e.to_string() },
                });
                println!("{}", serde_json::to_string_pretty(&doc).expect("serializable"));
            } else {
                eprintln!("error: {e}");
            }
            ExitCode::from(1)
        }
    }
}

fn read_script(cli: &Cli) -> std::io::Result<String> {
    match cli.file.as_deref() {
        Some("-") => read_stdin(),
        Some(path) => std::fs::read_to_string(path),
        None if cli.script.is_empty() => read_stdin(),
        None => Ok(cli.script.join(" ")),
    }
}

fn read_stdin() -> std::io::Result<String> {
    let mut s = String::new();
    std::io::stdin().read_to_string(&mut s)?;
    Ok(s)
}
