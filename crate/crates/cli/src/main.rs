//! `qlogic`: validate, convert and query lattice, state and s-map files.

mod commands;
mod describe;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use commands::{Ctx, InputError};
use report::Report;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "qlogic", version, about = "Finite orthomodular lattices, conditional states and s-maps")]
struct Cli {
    /// Report format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    /// Seed for the random generators.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Print rationals as exact decimals instead of fractions.
    #[arg(long, global = true)]
    decimal: bool,
    /// With --decimal, round values without a finite decimal expansion to
    /// this many places instead of failing.
    #[arg(long, global = true, value_name = "PLACES", requires = "decimal")]
    approx: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check a lattice and any number of state, conditional-state, s-map or
    /// observable files against it.
    Validate {
        /// Lattice file, or a catalog name such as `mo(2)`.
        lattice: String,
        files: Vec<PathBuf>,
    },
    /// Turn an s-map file into its conditional state or back.
    Convert {
        #[arg(long)]
        lattice: String,
        file: PathBuf,
        /// Where to write the converted table.
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Independence at the top condition, in the form p(a, b) = p(a, a) p(b, b).
    Indep {
        #[arg(long)]
        lattice: String,
        /// S-map (or conditional-state) file.
        file: PathBuf,
        /// List every ordered pair independent in one direction only.
        #[arg(long, conflicts_with_all = ["a", "b"])]
        scan: bool,
        /// Is A independent of B?
        #[arg(required_unless_present = "scan", requires = "b")]
        a: Option<String>,
        #[arg(required_unless_present = "scan")]
        b: Option<String>,
    },
    /// Conditional expectation of an observable onto the Boolean subalgebra
    /// {0, d, d', 1}.
    Condexp {
        #[arg(long)]
        lattice: String,
        /// Conditional-state (or s-map) file.
        #[arg(long)]
        cond: PathBuf,
        #[arg(long)]
        observable: PathBuf,
        /// Label of the element d generating the subalgebra.
        #[arg(long)]
        subalgebra: String,
        /// Also write the solved observable to this file.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Write catalog lattices and seeded random objects on them.
    Gen {
        /// `mo`, `boolean`, `o6` or `chain2`; `mo(3)` style also works.
        #[arg(long)]
        kind: String,
        /// Size parameter for `mo` and `boolean`.
        #[arg(long)]
        n: Option<usize>,
        /// Comma-separated subset of lattice, smap, conditional, state, observable.
        #[arg(long, value_delimiter = ',', default_value = "lattice")]
        emit: Vec<commands::Emit>,
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Validate { .. } => "validate",
            Command::Convert { .. } => "convert",
            Command::Indep { .. } => "indep",
            Command::Condexp { .. } => "condexp",
            Command::Gen { .. } => "gen",
        }
    }
}

fn run(cli: &Cli, ctx: &Ctx) -> Result<Report, InputError> {
    match &cli.command {
        Command::Validate { lattice, files } => commands::validate(lattice, files),
        Command::Convert { lattice, file, output } => commands::convert(ctx, lattice, file, output),
        Command::Indep { lattice, file, scan, a, b } => {
            let pair = if *scan { None } else { a.as_deref().zip(b.as_deref()) };
            commands::indep(ctx, lattice, file, pair)
        }
        Command::Condexp { lattice, cond, observable, subalgebra, output } => {
            commands::condexp(ctx, lattice, cond, observable, subalgebra, output.as_deref())
        }
        Command::Gen { kind, n, emit, out_dir } => commands::generate(kind, *n, emit, out_dir, cli.seed),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let ctx = Ctx { decimal: cli.decimal, approx: cli.approx };
    let (report, code) = match run(&cli, &ctx) {
        Ok(report) => {
            let code = if report.is_ok() { 0 } else { 1 };
            (report, code)
        }
        Err(err) => {
            let report = Report::failed(cli.command.name(), err.to_string());
            if cli.format == Format::Text {
                eprintln!("error: {err}");
                return ExitCode::from(2);
            }
            (report, 2)
        }
    };
    match cli.format {
        Format::Text => print!("{}", report.to_text()),
        Format::Json => println!("{}", serde_json::to_string_pretty(&report).expect("report serializes")),
    }
    ExitCode::from(code)
}
