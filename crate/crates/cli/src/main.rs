use std::path::PathBuf;
use std::process::ExitCode;

use charp_cli::{parse_session, run_command, CliError, Options, COMMANDS};
use clap::Parser;

/// Exact verification of Frobenius-trace, diagonal Cartier-algebra and
/// symbolic-power statements over prime fields.
///
/// Exit status: 0 pass, 1 fail, 2 inconclusive, 3 error.
#[derive(Debug, Parser)]
#[command(name = "charp", version)]
struct Args {
    /// Session file.
    #[arg(long)]
    input: PathBuf,
    /// One of: trace-eval, lala-check, lift-verify, dn-witness,
    /// compat-check, testideal, subadd-check, bs-check, symbolic, ustp.
    #[arg(long)]
    command: String,
    #[arg(long)]
    e_max: Option<u32>,
    #[arg(long)]
    n_max: Option<u32>,
    #[arg(long)]
    degree_bound: Option<u32>,
    /// Cap on enumerated elements (basis classes, spanning images).
    #[arg(long)]
    cap: Option<u64>,
    /// Cap on unknowns in a single linear system.
    #[arg(long)]
    unknown_cap: Option<u64>,
    /// Write the JSON-lines report here instead of stdout.
    #[arg(long)]
    report: Option<PathBuf>,
    #[arg(long)]
    threads: Option<usize>,
}

fn run(args: &Args) -> Result<i32, CliError> {
    if !COMMANDS.contains(&args.command.as_str()) {
        return Err(CliError::Usage(format!(
            "unknown command {:?}; expected one of {}",
            args.command,
            COMMANDS.join(", ")
        )));
    }
    if let Some(n) = args.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Usage(format!("thread pool: {e}")))?;
    }
    let text = std::fs::read_to_string(&args.input)?;
    let spec = parse_session(&text)?;
    let opts = Options {
        e_max: args.e_max,
        n_max: args.n_max,
        degree_bound: args.degree_bound,
        cap: args.cap,
        unknown_cap: args.unknown_cap,
    };
    let report = run_command(&spec, &args.command, &opts)?;
    match &args.report {
        Some(path) => report.write_atomic(path)?,
        None => print!("{}", report.to_json_lines()?),
    }
    Ok(report.exit_code())
}

fn main() -> ExitCode {
    let args = Args::parse();
    match run(&args) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("charp: {e}");
            ExitCode::from(3)
        }
    }
}
