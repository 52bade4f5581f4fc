use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use deligne_core::lattice_invariants::{Lattice, Subgroup};
use deligne_core::lie_algebra::DEFAULT_SEED;
use deligne_core::rational::parse_q;
use deligne_core::root_system::TypeLabel;
use deligne_core::runner::{run, run_all, Command, Format, RunConfig};
use deligne_core::Q;

#[derive(Clone, Copy, Debug, ValueEnum)]
enum OutputFormat {
    Text,
    Json,
}

/// Exact reproductions for level-one affine vertex algebras of the Deligne series.
///
/// Subcommands: tables (--which 1|2), classify, traces, strings, fixedpoint,
/// invariants, casimir (--which coefficients|singular), radical
/// (--which identities|commutator), appendixb, census.
#[derive(Debug, Parser)]
#[command(name = "deligne", version)]
struct Cli {
    /// Subcommand to run; omit with --all.
    #[arg(value_parser = parse_command, required_unless_present = "all")]
    command: Option<Command>,
    /// Run every reproduction and print a scoreboard.
    #[arg(long, conflicts_with = "command")]
    all: bool,
    /// Root system type, e.g. A1, G2, E8.
    #[arg(long = "type", value_parser = parse_type)]
    type_label: Option<TypeLabel>,
    /// Series order, or the census bound for `census`.
    #[arg(long)]
    order: Option<i64>,
    /// Seed for sampled checks.
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Number of sampled tuples or states.
    #[arg(long)]
    samples: Option<usize>,
    /// Check every basis tuple instead of sampling.
    #[arg(long)]
    exhaustive: bool,
    /// Table number or sub-check.
    #[arg(long)]
    which: Option<String>,
    /// Lattice for `invariants`: A2 or D4.
    #[arg(long, value_parser = parse_lattice)]
    lattice: Option<Lattice>,
    /// Subgroup for `invariants`: full, W, E, S4, H, minus-one, minus-one-tau, identity.
    #[arg(long, value_parser = parse_subgroup)]
    subgroup: Option<Subgroup>,
    /// Top polynomial degree for `invariants`.
    #[arg(long)]
    degree: Option<usize>,
    /// Central charge for `casimir`, as p/q.
    #[arg(long, value_parser = parse_rational)]
    c: Option<Q>,
    /// Dimension for `casimir`, as p/q.
    #[arg(long, value_parser = parse_rational)]
    d: Option<Q>,
    /// Top degree for `casimir`.
    #[arg(long)]
    n: Option<usize>,
    #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
    format: OutputFormat,
    /// Write the report to this file instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
}

fn parse_command(s: &str) -> Result<Command, String> {
    s.parse().map_err(|e: deligne_core::Error| e.to_string())
}

fn parse_type(s: &str) -> Result<TypeLabel, String> {
    s.parse::<TypeLabel>().and_then(TypeLabel::validate).map_err(|e| e.to_string())
}

fn parse_lattice(s: &str) -> Result<Lattice, String> {
    s.parse().map_err(|e: deligne_core::Error| e.to_string())
}

fn parse_subgroup(s: &str) -> Result<Subgroup, String> {
    s.parse().map_err(|e: deligne_core::Error| e.to_string())
}

fn parse_rational(s: &str) -> Result<Q, String> {
    parse_q(s).map_err(|e| e.to_string())
}

fn emit(text: &str, output: Option<&PathBuf>) -> std::io::Result<()> {
    match output {
        Some(path) => std::fs::write(path, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let format = match cli.format {
        OutputFormat::Text => Format::Text,
        OutputFormat::Json => Format::Json,
    };
    let (rendered, passed) = if cli.all {
        let suite = run_all(cli.seed);
        (suite.render(format), suite.passed())
    } else {
        let command = cli.command.expect("clap requires a subcommand without --all");
        let config = RunConfig {
            command,
            type_label: cli.type_label,
            order: cli.order,
            seed: cli.seed,
            samples: cli.samples,
            exhaustive: cli.exhaustive,
            which: cli.which,
            lattice: cli.lattice,
            subgroup: cli.subgroup,
            degree: cli.degree,
            c: cli.c,
            d: cli.d,
            n: cli.n,
        };
        match run(&config) {
            Ok(report) => (report.render(format), report.passed),
            Err(e) => {
                eprintln!("error: {e}");
                return ExitCode::from(2);
            }
        }
    };
    if let Err(e) = emit(&rendered, cli.output.as_ref()) {
        eprintln!("error: cannot write report: {e}");
        return ExitCode::from(2);
    }
    if passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
