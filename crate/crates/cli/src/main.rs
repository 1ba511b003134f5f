//! `qfa` — validate, evaluate, convert, and equivalence-test quantum
//! finite automata described in the JSON interchange format.
//!
//! Results go to stdout, diagnostics to stderr. Exit codes: 0 for success
//! (and for "equivalent"), 1 for "not equivalent", 2 for any error,
//! refusal, or usage problem.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use qfa_core::equivalence::{
    equiv_any, equiv_bound_mo1g, EquivalenceMethod, EquivalenceVerdict, RESIDUAL_NOTE_THRESHOLD,
};
use qfa_core::formats::{parse_machine, serialize_machine, FormatError};
use qfa_core::machines::{Machine, MachineKind};
use qfa_core::transforms::{
    convert_machine, dfa_to_mo1g, dfa_to_qcfa_certainty, dfa_to_qfac_certainty, to_mo1g,
};

#[derive(Parser)]
#[command(name = "qfa", version, about = "Quantum finite automata toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

/// How `--input`/`--output` strings split into symbols.
#[derive(Clone, Copy, Default, PartialEq, Eq, ValueEnum)]
enum SymbolMode {
    /// Each character is one symbol.
    #[default]
    Chars,
    /// Comma-separated multi-character symbols.
    Csv,
}

impl SymbolMode {
    fn split(&self, s: &str) -> Vec<String> {
        if s.is_empty() {
            return Vec::new();
        }
        match self {
            SymbolMode::Chars => s.chars().map(|c| c.to_string()).collect(),
            SymbolMode::Csv => s.split(',').map(str::to_string).collect(),
        }
    }

    fn join(&self, symbols: &[String]) -> String {
        match self {
            SymbolMode::Chars => symbols.concat(),
            SymbolMode::Csv => symbols.join(","),
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Check a machine description; print violations if any.
    Validate { file: PathBuf },
    /// Print the acceptance probability of an input (for qsm, the
    /// probability of printing --output on --input).
    Eval {
        file: PathBuf,
        #[arg(long)]
        input: String,
        /// Output word (qsm only).
        #[arg(long)]
        output: Option<String>,
        #[arg(long, value_enum, default_value_t)]
        symbols: SymbolMode,
    },
    /// Convert a machine along the unique transform path to another kind.
    Convert {
        file: PathBuf,
        /// Target kind: mo1g, qfac, qcfa, or ancilla depending on the source.
        #[arg(long, value_name = "KIND")]
        to: String,
        /// Write to a file instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Accepting states for the qsm -> ancilla path (comma-separated).
        #[arg(long)]
        accepting: Option<String>,
    },
    /// Decide whether two machines accept every string with the same
    /// probability.
    Equiv {
        file1: PathBuf,
        file2: PathBuf,
        #[arg(long, default_value = "bounded")]
        method: String,
        /// Override the decidability bound on string length (bounded method).
        #[arg(long)]
        max_len: Option<usize>,
        #[arg(long, value_enum, default_value_t)]
        symbols: SymbolMode,
    },
    /// Emit a machine recognizing the DFA's language with certainty.
    Recognize {
        file: PathBuf,
        /// Target model: qfac, qcfa, or mo1g.
        #[arg(long = "as", value_name = "KIND")]
        as_kind: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the equivalence length bound for a pair of machines.
    Bound { file1: PathBuf, file2: PathBuf },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}

fn load(path: &Path) -> Result<Machine, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    parse_machine(&text).map_err(|e| format!("{}: {e}", path.display()))
}

fn emit(text: &str, out: Option<&Path>) -> Result<(), String> {
    match out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| format!("cannot write {}: {e}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(command: Command) -> Result<ExitCode, String> {
    match command {
        Command::Validate { file } => {
            let text = std::fs::read_to_string(&file)
                .map_err(|e| format!("cannot read {}: {e}", file.display()))?;
            match parse_machine(&text) {
                Ok(_) => {
                    println!("ok");
                    Ok(ExitCode::SUCCESS)
                }
                Err(FormatError::Invalid(violations)) => {
                    for v in violations {
                        println!("violation: {v}");
                    }
                    Ok(ExitCode::from(2))
                }
                Err(other) => Err(format!("{}: {other}", file.display())),
            }
        }
        Command::Eval {
            file,
            input,
            output,
            symbols,
        } => {
            let machine = load(&file)?;
            let input = symbols.split(&input);
            let p = match (&machine, output) {
                (Machine::Qsm(m), Some(output)) => m
                    .output_prob(&input, &symbols.split(&output))
                    .map_err(|e| e.to_string())?,
                (Machine::Qsm(_), None) => {
                    return Err("a qsm needs --output to evaluate p(y|x)".into());
                }
                (_, Some(_)) => {
                    return Err("--output only applies to qsm machines".into());
                }
                (m, None) => m.accept_prob(&input).map_err(|e| e.to_string())?,
            };
            println!("{p:.12}");
            Ok(ExitCode::SUCCESS)
        }
        Command::Convert {
            file,
            to,
            out,
            accepting,
        } => {
            let machine = load(&file)?;
            let kind: MachineKind = to.parse()?;
            let accepting: Option<Vec<String>> =
                accepting.map(|csv| csv.split(',').map(str::to_string).collect());
            let converted = convert_machine(&machine, kind, accepting.as_deref())
                .map_err(|e| e.to_string())?;
            emit(&serialize_machine(&converted), out.as_deref())?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Equiv {
            file1,
            file2,
            method,
            max_len,
            symbols,
        } => {
            let m1 = load(&file1)?;
            let m2 = load(&file2)?;
            let method: EquivalenceMethod = method.parse()?;
            let verdict = equiv_any(&m1, &m2, method, max_len).map_err(|e| e.to_string())?;
            print_verdict(&verdict, symbols);
            Ok(if verdict.equivalent {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
        Command::Recognize { file, as_kind, out } => {
            let machine = load(&file)?;
            let Machine::Dfa(dfa) = &machine else {
                return Err(format!(
                    "recognize expects a dfa document, got {}",
                    machine.kind()
                ));
            };
            let built = match as_kind.as_str() {
                "mo1g" => Machine::Mo1g(dfa_to_mo1g(dfa)),
                "qfac" => Machine::Qfac(dfa_to_qfac_certainty(dfa)),
                "qcfa" => Machine::Qcfa(dfa_to_qcfa_certainty(dfa)),
                other => {
                    return Err(format!(
                        "unknown target {other:?} (expected qfac, qcfa, or mo1g)"
                    ));
                }
            };
            emit(&serialize_machine(&built), out.as_deref())?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Bound { file1, file2 } => {
            let m1 = load(&file1)?;
            let m2 = load(&file2)?;
            let n1 = to_mo1g(&m1).map_err(|e| e.to_string())?.dim();
            let n2 = to_mo1g(&m2).map_err(|e| e.to_string())?.dim();
            println!("{}", equiv_bound_mo1g(n1, n2));
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn print_verdict(verdict: &EquivalenceVerdict, symbols: SymbolMode) {
    if verdict.equivalent {
        if verdict.max_residual > RESIDUAL_NOTE_THRESHOLD {
            println!(
                "equivalent (within tolerance; max residual {:.1e})",
                verdict.max_residual
            );
        } else {
            println!("equivalent");
        }
    } else {
        println!("not equivalent");
        if let Some(word) = &verdict.counterexample {
            println!("counterexample: \"{}\"", symbols.join(word));
        }
        if let (Some(left), Some(right)) = (verdict.prob_left, verdict.prob_right) {
            println!("left probability: {left:.12}");
            println!("right probability: {right:.12}");
        }
    }
    println!("method: {}", verdict.method);
    if let Some(n) = verdict.strings_checked {
        println!("strings checked: {n}");
    }
    if let Some(d) = verdict.span_dimension {
        println!("span dimension: {d}");
    }
}
