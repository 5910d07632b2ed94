use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use clifford_obstruct::cli::{run, Format, Input, RunConfig, SearchOverrides, EXIT_INPUT_ERROR};
use clifford_obstruct::embedding::SearchMode;
use clifford_obstruct::obstructions::CheckId;

/// Exact obstructions to Clifford-closed cohomology realizations.
///
/// Exit status: 0 no obstruction found, 2 obstruction, 1 input error.
#[derive(Parser, Debug)]
#[command(name = "clifford-obstruct", version)]
struct Args {
    /// Preset expression, e.g. `connsum(prod(S2,S2),prod(S2,S2))`.
    #[arg(conflicts_with_all = ["input", "preset"])]
    expr: Option<String>,
    /// Ring description in JSON.
    #[arg(long, conflicts_with = "preset")]
    input: Option<PathBuf>,
    /// Preset expression (same as the positional argument).
    #[arg(long)]
    preset: Option<String>,
    /// Comma-separated checks: betti_bound, b1, middle_split,
    /// wedge_surjectivity, dim4_clifford.
    #[arg(long, value_delimiter = ',')]
    checks: Option<Vec<String>>,
    /// Run an embedding search: wedge, wedge+star or wedge+star+clifford.
    #[arg(long)]
    search: Option<String>,
    #[arg(long)]
    restarts: Option<usize>,
    #[arg(long)]
    iterations: Option<usize>,
    /// human or json.
    #[arg(long, default_value = "human")]
    format: String,
    #[arg(long)]
    seed: Option<u64>,
}

fn config(args: Args) -> Result<RunConfig, String> {
    let input = match (args.expr.or(args.preset), args.input) {
        (Some(expr), None) => Input::Preset(expr),
        (None, Some(path)) => Input::File(path),
        _ => return Err("give a preset expression or --input <file>".into()),
    };
    let checks = args
        .checks
        .map(|list| list.iter().map(|c| c.parse::<CheckId>()).collect::<Result<Vec<_>, _>>())
        .transpose()
        .map_err(|e| e.to_string())?;
    let mode = args
        .search
        .map(|m| m.parse::<SearchMode>())
        .transpose()
        .map_err(|e| e.to_string())?;
    let format: Format = args.format.parse().map_err(|e: clifford_obstruct::error::Error| e.to_string())?;
    Ok(RunConfig {
        input,
        checks,
        search: SearchOverrides {
            mode,
            restarts: args.restarts,
            iterations: args.iterations,
        },
        format,
        seed: args.seed,
    })
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) if e.use_stderr() => {
            let _ = e.print();
            return ExitCode::from(EXIT_INPUT_ERROR as u8);
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
    };
    let cfg = match config(args) {
        Ok(c) => c,
        Err(msg) => {
            eprintln!("error: {msg}");
            return ExitCode::from(EXIT_INPUT_ERROR as u8);
        }
    };
    let out = run(&cfg);
    print!("{}", out.stdout);
    eprint!("{}", out.stderr);
    let _ = std::io::stdout().flush();
    ExitCode::from(out.exit_code as u8)
}
