//! `flowbrace`: convert and verify pre-Lie algebras and braces.
//!
//! Exit status: 0 when every check passes, 1 for usage or parse errors,
//! 2 when the input violates an axiom or a check fails.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use flowbrace::format::{self, AlgebraFile};
use flowbrace::free_expansion::doubling_matrix;
use flowbrace::sampling::DEFAULT_SEED;
use flowbrace::{
    bch, flows, limits, ChainReport, Error, GradedBrace, PreLieAlgebra, ScalarField, Subspace,
};

#[derive(Parser)]
#[command(
    name = "flowbrace",
    version,
    about = "Nilpotent pre-Lie algebras and strongly nilpotent braces"
)]
struct Cli {
    /// Read file values in this field instead ("Q", or a prime such as 7)
    #[arg(long, global = true)]
    field: Option<ScalarField>,

    /// Random samples for the randomized checks
    #[arg(long, global = true, default_value_t = 50)]
    trials: usize,

    /// Seed for the randomized checks
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the axioms of an algebra or brace file
    Validate { path: PathBuf },
    /// Build the brace of a pre-Lie algebra
    ToBrace {
        path: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Recover the pre-Lie algebra of a brace
    ToPrelie {
        path: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Convert there and back and compare
    Roundtrip { path: PathBuf },
    /// Print the three radical chains of the brace
    Chains { path: PathBuf },
    /// Check W(a)∘W(b) = W(C(a,b)) with the BCH series C
    Bch { path: PathBuf },
    /// Print the doubling matrix on star words up to a degree
    DoublingMatrix {
        #[arg(long)]
        degree: usize,
    },
}

/// A failed run: either unusable input or a mathematical violation.
enum Failure {
    Usage(String),
    Violation(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::NotPreLie(_)
            | Error::InvalidBrace(_)
            | Error::NotNilpotent
            | Error::CharacteristicTooSmall { .. }
            | Error::NotLieElement(_)
            | Error::InternalInconsistency(_) => Failure::Violation(e.to_string()),
            other => Failure::Usage(other.to_string()),
        }
    }
}

type Outcome = Result<(), Failure>;

fn fail<E: std::fmt::Display>(what: &str, violation: E) -> Failure {
    Failure::Violation(format!("{what}: {violation}"))
}

fn load(path: &Path, field: Option<ScalarField>) -> Result<AlgebraFile, Failure> {
    format::read(path, field).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn validated_prelie(mut alg: PreLieAlgebra) -> Result<PreLieAlgebra, Failure> {
    alg.validate()?;
    Ok(alg)
}

fn validate_brace(brace: &GradedBrace, trials: usize, seed: u64) -> Outcome {
    brace
        .field()
        .require_characteristic_above(brace.class_bound())?;
    brace
        .check_left_brace(trials, seed)
        .map_err(|v| fail("left-brace law", v))?;
    brace
        .check_group(trials, seed)
        .map_err(|v| fail("group law", v))?;
    brace
        .check_fbrace(trials, seed)
        .map_err(|v| fail("F-brace law", v))?;
    let chains = brace.radical_chains()?;
    match chains.strong_index {
        Some(n) if n <= brace.class_bound() => Ok(()),
        _ => Err(Failure::Violation(format!(
            "strong radical chain does not vanish by step {}",
            brace.class_bound()
        ))),
    }
}

fn emit(file: &AlgebraFile, out: Option<&Path>) -> Outcome {
    match out {
        Some(path) => format::write(path, file)
            .map_err(|e| Failure::Usage(format!("{}: {e}", path.display()))),
        None => {
            print!("{}", format::to_string(file));
            Ok(())
        }
    }
}

fn dims(chain: &[Subspace]) -> String {
    chain
        .iter()
        .map(|s| s.dim().to_string())
        .collect::<Vec<_>>()
        .join(",")
}

fn verdict(name: &str, index: Option<usize>) -> String {
    match index {
        Some(n) => format!("{name} nilpotent: yes, index {n}"),
        None => format!("{name} nilpotent: no"),
    }
}

fn print_chains(report: &ChainReport) {
    let strong = match report.strong_index {
        Some(n) => format!("strongly nilpotent, index {n}"),
        None => "not strongly nilpotent".to_string(),
    };
    println!(
        "A: {}; A^(): {}; A^[]: {}; {strong}",
        dims(&report.left),
        dims(&report.right),
        dims(&report.strong)
    );
    println!("{}", verdict("left", report.left_index));
    println!("{}", verdict("right", report.right_index));
    println!("{}", verdict("strongly", report.strong_index));
}

fn run(cli: Cli) -> Outcome {
    let (trials, seed) = (cli.trials, cli.seed);
    match cli.command {
        Command::Validate { path } => match load(&path, cli.field)? {
            AlgebraFile::PreLie(alg) => {
                alg.check_prelie_identity().map_err(|v| fail("FAIL", v))?;
                let alg = validated_prelie(alg)?;
                println!(
                    "PASS: pre-Lie algebra over {}, dim {}, nilpotency index {}",
                    alg.field(),
                    alg.dim(),
                    alg.class()?
                );
                Ok(())
            }
            AlgebraFile::Brace(brace) => {
                validate_brace(&brace, trials, seed)?;
                println!(
                    "PASS: strongly nilpotent brace over {}, dim {}, class bound {}",
                    brace.field(),
                    brace.dim(),
                    brace.class_bound()
                );
                Ok(())
            }
        },
        Command::ToBrace { path, out } => match load(&path, cli.field)? {
            AlgebraFile::PreLie(alg) => {
                let brace = flows::to_brace(&validated_prelie(alg)?)?;
                emit(&AlgebraFile::Brace(brace), out.as_deref())
            }
            AlgebraFile::Brace(_) => Err(Failure::Usage("to-brace expects a pre-Lie file".into())),
        },
        Command::ToPrelie { path, out } => match load(&path, cli.field)? {
            AlgebraFile::Brace(brace) => {
                validate_brace(&brace, trials, seed)?;
                let alg = limits::to_prelie(&brace)?;
                emit(&AlgebraFile::PreLie(alg), out.as_deref())
            }
            AlgebraFile::PreLie(_) => Err(Failure::Usage("to-prelie expects a brace file".into())),
        },
        Command::Roundtrip { path } => {
            let result = match load(&path, cli.field)? {
                AlgebraFile::PreLie(alg) => limits::roundtrip_prelie(&validated_prelie(alg)?)?,
                AlgebraFile::Brace(brace) => {
                    validate_brace(&brace, trials, seed)?;
                    limits::roundtrip_brace(&brace)?
                }
            };
            result.map_err(|v| fail("FAIL", v))?;
            println!("PASS: round trip reproduces the input exactly");
            Ok(())
        }
        Command::Chains { path } => {
            let brace = match load(&path, cli.field)? {
                AlgebraFile::PreLie(alg) => flows::to_brace(&validated_prelie(alg)?)?,
                AlgebraFile::Brace(brace) => brace,
            };
            print_chains(&brace.radical_chains()?);
            Ok(())
        }
        Command::Bch { path } => {
            let alg = match load(&path, cli.field)? {
                AlgebraFile::PreLie(alg) => validated_prelie(alg)?,
                AlgebraFile::Brace(brace) => {
                    validate_brace(&brace, trials, seed)?;
                    limits::to_prelie(&brace)?
                }
            };
            bch::verify_flows_bch(&alg, trials, seed)?.map_err(|v| fail("FAIL", v))?;
            println!("PASS: W(a)∘W(b) = W(C(a,b)) on {trials} random pairs");
            Ok(())
        }
        Command::DoublingMatrix { degree } => {
            let dm = doubling_matrix(degree)?;
            println!("words:");
            for (i, w) in dm.words.iter().enumerate() {
                println!("  {}: {w}", i + 1);
            }
            println!("matrix:");
            for i in 0..dm.matrix.rows() {
                let row: Vec<String> = (0..dm.matrix.cols())
                    .map(|j| dm.matrix.get(i, j).to_string())
                    .collect();
                println!("  [{}]", row.join(", "));
            }
            let diagonal: Vec<String> =
                dm.matrix.diagonal().iter().map(|c| c.to_string()).collect();
            let triangular = if dm.matrix.is_upper_triangular() {
                "yes"
            } else {
                "no"
            };
            println!("upper triangular: {triangular}");
            println!("diagonal: {}", diagonal.join(", "));
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Violation(msg)) => {
            println!("{msg}");
            ExitCode::from(2)
        }
    }
}
