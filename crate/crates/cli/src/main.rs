//! `milnor`: computes singularity invariants for a corpus of germs and checks
//! the relations between them.

use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use milnor_core::corpus::{
    bundled_corpus, emit_report, parse_corpus, run_corpus, verdict_label, CheckSelection, CorpusEntry, Format,
    RunConfig, BUNDLED_CORPUS,
};
use milnor_core::{EngineOptions, Field};

const EXIT_INPUT: u8 = 2;

#[derive(Parser)]
#[command(
    name = "milnor",
    version,
    about = "Milnor, Tjurina and Samuel invariants of isolated complete intersections"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate every entry of a corpus file and emit a report.
    Run(RunArgs),
    /// Print the bundled corpus.
    Corpus,
}

#[derive(Args)]
struct RunArgs {
    /// Corpus file, or `-` for standard input.
    #[arg(required_unless_present = "bundled", conflicts_with = "bundled")]
    file: Option<String>,
    /// Use the bundled corpus instead of a file.
    #[arg(long)]
    bundled: bool,
    /// Coefficient field: 0 for the rationals, otherwise an odd prime.
    #[arg(long, default_value_t = 0)]
    field: u32,
    /// Largest t at which Samuel functions are evaluated.
    #[arg(long, default_value_t = 30)]
    max_t: usize,
    /// Consecutive equal finite differences required for stabilization.
    #[arg(long, default_value_t = 3)]
    window: usize,
    /// Seed for the generic linear combinations.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Worker threads.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    /// Reduction steps allowed per standard basis computation.
    #[arg(long, default_value_t = EngineOptions::default().step_budget)]
    step_budget: u64,
    /// Comma separated check groups: bounds, inequality, jets, all.
    #[arg(long, default_value = "all")]
    checks: CheckSelection,
    #[arg(long, default_value = "json")]
    format: Format,
    /// Write the report here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Recompute the invariants over the other field (F_32003 or Q) and report agreement.
    #[arg(long)]
    cross_check: bool,
    /// Include per-phase wall-clock times in the JSON report.
    #[arg(long)]
    timings: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Corpus => {
            print!("{BUNDLED_CORPUS}");
            ExitCode::SUCCESS
        }
        Command::Run(args) => match run(args) {
            Ok(code) => ExitCode::from(code),
            Err(msg) => {
                eprintln!("error: {msg}");
                ExitCode::from(EXIT_INPUT)
            }
        },
    }
}

fn load(args: &RunArgs) -> Result<Vec<CorpusEntry>, String> {
    if args.bundled {
        return Ok(bundled_corpus());
    }
    let path = args.file.as_deref().expect("clap requires a file without --bundled");
    let text = if path == "-" {
        let mut s = String::new();
        io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| format!("reading standard input: {e}"))?;
        s
    } else {
        fs::read_to_string(path).map_err(|e| format!("reading {path}: {e}"))?
    };
    parse_corpus(&text).map_err(|e| format!("{path}: {e}"))
}

fn run(args: RunArgs) -> Result<u8, String> {
    let entries = load(&args)?;
    let field = Field::from_characteristic(args.field).map_err(|e| e.to_string())?;
    let config = RunConfig {
        field,
        max_t: args.max_t,
        window: args.window,
        seed: args.seed,
        jobs: args.jobs,
        step_budget: args.step_budget,
        checks: args.checks,
        cross_check: args.cross_check,
        timings: args.timings,
    };
    let outcome = run_corpus(&entries, &config).map_err(|e| e.to_string())?;
    let bytes = emit_report(&outcome.reports, args.format);
    match &args.out {
        Some(path) => fs::write(path, &bytes).map_err(|e| format!("writing {}: {e}", path.display()))?,
        None => io::stdout()
            .write_all(&bytes)
            .map_err(|e| format!("writing standard output: {e}"))?,
    }
    for r in &outcome.reports {
        let label = verdict_label(r);
        if label != "pass" {
            let reason = match &r.error {
                Some(e) => e.message.clone(),
                None => r
                    .checks
                    .iter()
                    .filter(|(_, v)| v.fails())
                    .map(|(k, v)| format!("{k} ({})", v.detail))
                    .collect::<Vec<_>>()
                    .join(", "),
            };
            eprintln!("{}: {label}: {reason}", r.name);
        }
    }
    let passed = outcome.reports.iter().filter(|r| r.passed()).count();
    eprintln!("{passed} of {} entries passed", outcome.reports.len());
    Ok(outcome.exit_code as u8)
}
