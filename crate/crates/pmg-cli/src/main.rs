//! `pmg`: compute polarized metrized graph invariants from JSON graph
//! documents or built-in families.
//!
//! Exit codes: 0 success, 2 validation failure, 3 parse failure,
//! 4 numeric failure.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use pmg_core::error::Error;
use pmg_core::families;
use pmg_core::invariants::ComputeOptions;
use pmg_core::io::{compute_report, parse_graph, validation_report, ReportFormat};
use pmg_core::reduce::LoopStrategy;
use pmg_core::scalar::{parse_rational, ScalarMode};
use pmg_core::PMGraph;

#[derive(Parser)]
#[command(name = "pmg", version, about = "Polarized metrized graph invariants")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute invariants of a graph document.
    Compute {
        /// Path to a JSON graph document.
        #[arg(long)]
        input: PathBuf,
        #[command(flatten)]
        flags: ComputeFlags,
    },
    /// Compute invariants of a built-in family.
    Family {
        #[command(subcommand)]
        family: FamilyCommand,
    },
    /// Validate a graph document and report its genus.
    Check {
        #[arg(long)]
        input: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Exact,
    Machine,
    Bigfloat,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
    Table,
}

#[derive(Clone, Copy, ValueEnum)]
enum LoopStrategyArg {
    Analytic,
    Subdivide,
}

#[derive(Args)]
struct ComputeFlags {
    /// Arithmetic backend.
    #[arg(long, value_enum, default_value = "exact")]
    mode: ModeArg,
    /// Significant digits: working precision for bigfloat (>= 18) and
    /// display precision for float output.
    #[arg(long, default_value_t = 12)]
    digits: u32,
    #[arg(long, value_enum, default_value = "table")]
    format: FormatArg,
    /// Include the canonical and admissible measure decompositions.
    #[arg(long)]
    measures: bool,
    /// How self-loops are handled before the Laplacian is built.
    #[arg(long, value_enum, default_value = "analytic")]
    loop_strategy: LoopStrategyArg,
    /// Relative residual above which float modes report precision loss.
    #[arg(long, default_value_t = 1e-6)]
    tolerance: f64,
}

#[derive(Subcommand)]
enum FamilyCommand {
    /// Ladder with n rungs of length b and rails of length a.
    Ladder {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
        #[command(flatten)]
        flags: ComputeFlags,
    },
    /// Complete graph on four vertices.
    Complete4 {
        /// Six edge lengths in lexicographic pair order, comma-separated.
        #[arg(long)]
        lengths: String,
        /// Uniform polarization on all four vertices.
        #[arg(long, default_value_t = 0)]
        q: u32,
        #[command(flatten)]
        flags: ComputeFlags,
    },
    /// One vertex with the given self-loop lengths.
    Bouquet {
        /// Loop lengths, comma-separated.
        #[arg(long)]
        loops: String,
        #[arg(long, default_value_t = 0)]
        q: u32,
        #[command(flatten)]
        flags: ComputeFlags,
    },
    /// Circle of circumference length.
    Circle {
        #[arg(long)]
        length: String,
        #[command(flatten)]
        flags: ComputeFlags,
    },
    /// Mixed fixture: loop, polarization, parallel edges, leaf segments.
    Example3 {
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
        #[arg(long)]
        c: String,
        #[arg(long)]
        d: String,
        #[arg(long)]
        e: String,
        #[command(flatten)]
        flags: ComputeFlags,
    },
}

fn exit_code_for(err: &Error) -> u8 {
    match err {
        Error::Parse(_) => 3,
        Error::SingularMatrix
        | Error::GenusMismatch { .. }
        | Error::NotAdequate(_)
        | Error::PrecisionTooLow(_)
        | Error::PrecisionLoss { .. } => 4,
        _ => 2,
    }
}

fn run_compute(graph: &PMGraph, flags: &ComputeFlags) -> Result<(), Error> {
    let mode = match flags.mode {
        ModeArg::Exact => ScalarMode::Exact,
        ModeArg::Machine => ScalarMode::Machine,
        ModeArg::Bigfloat => ScalarMode::big_float(flags.digits)?,
    };
    let opts = ComputeOptions {
        loop_strategy: match flags.loop_strategy {
            LoopStrategyArg::Analytic => LoopStrategy::Analytic,
            LoopStrategyArg::Subdivide => LoopStrategy::Subdivide,
        },
        tolerance: flags.tolerance,
        ..Default::default()
    };
    let report = compute_report(graph, mode, &opts, flags.digits, flags.measures)?;
    let format = match flags.format {
        FormatArg::Json => ReportFormat::Json,
        FormatArg::Csv => ReportFormat::Csv,
        FormatArg::Table => ReportFormat::Table,
    };
    print!("{}", report.emit(format));
    if let Some(p) = &report.precision {
        if p.flagged {
            return Err(Error::PrecisionLoss {
                residual: p.max_residual,
                tolerance: p.tolerance,
            });
        }
    }
    Ok(())
}

fn read_graph(path: &PathBuf) -> Result<PMGraph, Error> {
    let text = fs::read_to_string(path)
        .map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.display())))?;
    parse_graph(&text)
}

fn parse_list(text: &str) -> Result<Vec<pmg_core::BigRational>, Error> {
    text.split(',').map(parse_rational).collect()
}

fn build_family(family: &FamilyCommand) -> Result<PMGraph, Error> {
    match family {
        FamilyCommand::Ladder { n, a, b, .. } => {
            families::ladder(*n, &parse_rational(a)?, &parse_rational(b)?)
        }
        FamilyCommand::Complete4 { lengths, q, .. } => {
            let lengths = parse_list(lengths)?;
            families::complete_graph(4, &lengths, &[*q; 4])
        }
        FamilyCommand::Bouquet { loops, q, .. } => {
            let loops = parse_list(loops)?;
            families::bouquet(&loops, *q)
        }
        FamilyCommand::Circle { length, .. } => families::circle(&parse_rational(length)?),
        FamilyCommand::Example3 { a, b, c, d, e, .. } => families::example3(
            &parse_rational(a)?,
            &parse_rational(b)?,
            &parse_rational(c)?,
            &parse_rational(d)?,
            &parse_rational(e)?,
        ),
    }
}

fn family_flags(family: &FamilyCommand) -> &ComputeFlags {
    match family {
        FamilyCommand::Ladder { flags, .. }
        | FamilyCommand::Complete4 { flags, .. }
        | FamilyCommand::Bouquet { flags, .. }
        | FamilyCommand::Circle { flags, .. }
        | FamilyCommand::Example3 { flags, .. } => flags,
    }
}

fn run() -> Result<(), Error> {
    let cli = Cli::parse();
    match &cli.command {
        Command::Compute { input, flags } => {
            let graph = read_graph(input)?;
            run_compute(&graph, flags)
        }
        Command::Family { family } => {
            let graph = build_family(family)?;
            run_compute(&graph, family_flags(family))
        }
        Command::Check { input } => {
            let graph = read_graph(input)?;
            let outcome = graph.validate(true);
            println!("{}", validation_report(&graph, &outcome));
            if outcome.is_valid() {
                Ok(())
            } else {
                Err(outcome
                    .first_error(&graph)
                    .expect("invalid outcome has an error"))
            }
        }
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code_for(&err))
        }
    }
}
