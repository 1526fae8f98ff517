//! The `hyperbpa` command line.
//!
//! Exit codes: 0 for success or an affirmative verdict, 1 for a negative
//! verdict, 2 for usage, input or parse errors. Verdicts go to stdout,
//! diagnostics to stderr.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::automata::Dfa;
use crate::constructions::{is_permutation_complete, permutation_complete_with_report, tighten, Completeness};
use crate::equiv::{representation_equivalent, Equivalence};
use crate::error::{Error, Result};
use crate::hyperltl::{assignment_closure, is_universally_safe, parse_hyper, HyperFormula, TeacherSession};
use crate::learner::{learn, LearnConfig};
use crate::ltl::bad_prefix_dfa;
use crate::repr::TraceSet;

#[derive(Debug, Parser)]
#[command(name = "hyperbpa", version, about = "Bad-prefix automata for k-safety hyperproperties")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Output {
    /// Write the resulting automaton here instead of stdout.
    #[arg(short = 'o', value_name = "PATH")]
    out: Option<PathBuf>,
    /// Also write a Graphviz rendering.
    #[arg(long, value_name = "PATH")]
    dot: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Compile a universally-safe formula into a minimal tight bad-prefix automaton.
    Compile {
        formula: PathBuf,
        /// Arity of the automaton (defaults to the quantifier count).
        #[arg(long)]
        arity: Option<usize>,
        #[command(flatten)]
        output: Output,
    },
    /// Decide whether a trace file is a bad prefix of a formula.
    Member { formula: PathBuf, traces: PathBuf },
    /// Check two automata for representation-equivalence.
    Equiv {
        a: PathBuf,
        b: PathBuf,
        /// Write the witness trace set here on inequivalence.
        #[arg(short = 'o', value_name = "PATH")]
        out: Option<PathBuf>,
    },
    /// Make an automaton tight.
    Tighten {
        automaton: PathBuf,
        #[command(flatten)]
        output: Output,
    },
    /// Build the permutation-complete automaton.
    Permclose {
        automaton: PathBuf,
        #[command(flatten)]
        output: Output,
        /// Write construction sizes as `key value` lines.
        #[arg(long, value_name = "PATH")]
        stats: Option<PathBuf>,
    },
    /// Check whether an automaton is permutation-complete.
    CheckComplete { automaton: PathBuf },
    /// Minimize an automaton.
    Min {
        automaton: PathBuf,
        #[command(flatten)]
        output: Output,
    },
    /// Classify a formula as universally-safe or not.
    Classify { formula: PathBuf },
    /// Learn a bad-prefix automaton with the formula as teacher.
    Learn {
        #[arg(long, value_name = "PATH")]
        formula: PathBuf,
        #[arg(long)]
        max_arity: Option<usize>,
        #[arg(long, default_value_t = LearnConfig::default().max_rounds)]
        max_rounds: usize,
        #[command(flatten)]
        output: Output,
        /// Write learning statistics as `key value` lines.
        #[arg(long, value_name = "PATH")]
        stats: Option<PathBuf>,
    },
}

struct Io<'a> {
    out: &'a mut dyn Write,
    err: &'a mut dyn Write,
}

#[derive(Debug)]
enum Failure {
    Lib(Error),
    Io(PathBuf, std::io::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

type CmdResult = std::result::Result<u8, Failure>;

fn read(path: &Path) -> std::result::Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Io(path.to_path_buf(), e))
}

fn write_file(path: &Path, text: &str) -> std::result::Result<(), Failure> {
    fs::write(path, text).map_err(|e| Failure::Io(path.to_path_buf(), e))
}

fn read_automaton(path: &Path) -> std::result::Result<Dfa, Failure> {
    Ok(Dfa::from_text(&read(path)?)?)
}

fn read_formula(path: &Path) -> std::result::Result<HyperFormula, Failure> {
    Ok(parse_hyper(&read(path)?)?)
}

fn emit(io: &mut Io<'_>, dfa: &Dfa, output: &Output) -> std::result::Result<(), Failure> {
    match &output.out {
        Some(p) => write_file(p, &dfa.to_text())?,
        None => {
            let _ = io.out.write_all(dfa.to_text().as_bytes());
        }
    }
    if let Some(p) = &output.dot {
        write_file(p, &dfa.to_dot())?;
    }
    Ok(())
}

/// Runs the command line with the given arguments (program name first) and
/// returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = out.write_all(text.as_bytes());
                    0
                }
                _ => {
                    let _ = err.write_all(text.as_bytes());
                    2
                }
            };
        }
    };
    let mut io = Io { out, err };
    match dispatch(cli.command, &mut io) {
        Ok(code) => code,
        Err(Failure::Lib(e)) => {
            let _ = writeln!(io.err, "error: {e}");
            2
        }
        Err(Failure::Io(path, e)) => {
            let _ = writeln!(io.err, "error: {}: {e}", path.display());
            2
        }
    }
}

fn dispatch(command: Command, io: &mut Io<'_>) -> CmdResult {
    match command {
        Command::Compile { formula, arity, output } => cmd_compile(io, &formula, arity, &output),
        Command::Member { formula, traces } => cmd_member(io, &formula, &traces),
        Command::Equiv { a, b, out } => cmd_equiv(io, &a, &b, out.as_deref()),
        Command::Tighten { automaton, output } => {
            let dfa = read_automaton(&automaton)?;
            emit(io, &tighten(&dfa), &output)?;
            Ok(0)
        }
        Command::Permclose { automaton, output, stats } => {
            let dfa = read_automaton(&automaton)?;
            let (closed, report) = permutation_complete_with_report(&dfa);
            emit(io, &closed, &output)?;
            if let Some(p) = stats {
                let text = format!(
                    "input_states {}\noutput_states {}\ncopies {}\n",
                    report.input_states, report.output_states, report.copies
                );
                write_file(&p, &text)?;
            }
            let _ = writeln!(io.err, "elapsed {:?}", report.elapsed);
            Ok(0)
        }
        Command::CheckComplete { automaton } => {
            let dfa = read_automaton(&automaton)?;
            match is_permutation_complete(&dfa) {
                Completeness::Complete => {
                    let _ = writeln!(io.out, "permutation-complete");
                    Ok(0)
                }
                Completeness::Witness { map, word } => {
                    let _ = writeln!(io.out, "not-permutation-complete");
                    let _ = writeln!(io.out, "map {map}");
                    let _ = writeln!(io.out, "witness {}", dfa.alphabet().format_word(&word));
                    Ok(1)
                }
            }
        }
        Command::Min { automaton, output } => {
            let dfa = read_automaton(&automaton)?;
            emit(io, &dfa.minimize(), &output)?;
            Ok(0)
        }
        Command::Classify { formula } => {
            let f = read_formula(&formula)?;
            let safe = is_universally_safe(&f);
            let verdict = if safe { "universally-safe" } else { "not-universally-safe" };
            let _ = writeln!(io.out, "{verdict}");
            let _ = writeln!(io.out, "quantifiers {}", f.arity());
            Ok(if safe { 0 } else { 1 })
        }
        Command::Learn {
            formula,
            max_arity,
            max_rounds,
            output,
            stats,
        } => cmd_learn(io, &formula, max_arity, max_rounds, &output, stats.as_deref()),
    }
}

fn cmd_compile(io: &mut Io<'_>, formula: &Path, arity: Option<usize>, output: &Output) -> CmdResult {
    let f = read_formula(formula)?;
    let dfa = compile(&f, arity)?;
    let k = dfa.alphabet().arity();
    emit(io, &dfa, output)?;
    let summary = format!("states {} arity {}", dfa.num_states(), k);
    if output.out.is_some() {
        let _ = writeln!(io.out, "{summary}");
    } else {
        let _ = writeln!(io.err, "{summary}");
    }
    Ok(0)
}

fn cmd_member(io: &mut Io<'_>, formula: &Path, traces: &Path) -> CmdResult {
    let f = read_formula(formula)?;
    let mut session = TeacherSession::new(f)?;
    let t = TraceSet::parse(session.aps().clone(), &read(traces)?)?;
    if session.member(&t)? {
        let _ = writeln!(io.out, "bad-prefix");
        Ok(0)
    } else {
        let _ = writeln!(io.out, "not-a-bad-prefix");
        Ok(1)
    }
}

fn cmd_equiv(io: &mut Io<'_>, a: &Path, b: &Path, out: Option<&Path>) -> CmdResult {
    let a = read_automaton(a)?;
    let b = read_automaton(b)?;
    match representation_equivalent(&a, &b)? {
        Equivalence::Equivalent => {
            let _ = writeln!(io.out, "equivalent");
            Ok(0)
        }
        Equivalence::Violation { direction, witness } => {
            let _ = writeln!(io.out, "not-equivalent");
            let _ = writeln!(io.out, "direction {}", direction.number());
            let _ = writeln!(io.out, "witness {witness}");
            if let Some(p) = out {
                write_file(p, &witness.to_text())?;
            }
            Ok(1)
        }
    }
}

fn cmd_learn(
    io: &mut Io<'_>,
    formula: &Path,
    max_arity: Option<usize>,
    max_rounds: usize,
    output: &Output,
    stats: Option<&Path>,
) -> CmdResult {
    let f = read_formula(formula)?;
    let mut session = TeacherSession::new(f)?;
    let config = LearnConfig { max_rounds, max_arity };
    let report = match learn(&mut session, config) {
        Ok(r) => r,
        Err(Error::BudgetExceeded { reason, report }) => {
            let _ = writeln!(io.err, "learning stopped: {reason}");
            if let Some(p) = stats {
                write_file(p, &report.stats_text())?;
            }
            return Ok(1);
        }
        Err(e) => return Err(e.into()),
    };
    emit(io, &report.automaton, output)?;
    if let Some(p) = stats {
        write_file(p, &report.stats_text())?;
    }
    let summary = format!(
        "learned {} states at arity {} with {} equivalence queries",
        report.automaton.num_states(),
        report.arity,
        report.equivalence_queries
    );
    if output.out.is_some() {
        let _ = writeln!(io.out, "{summary}");
    } else {
        let _ = writeln!(io.err, "{summary}");
    }
    Ok(0)
}

/// Convenience for callers holding a parsed formula: the automaton `compile`
/// would write.
pub fn compile(f: &HyperFormula, arity: Option<usize>) -> Result<Dfa> {
    if !is_universally_safe(f) {
        return Err(Error::NotUniversallySafe);
    }
    let k = arity.unwrap_or(f.arity());
    if k == 0 {
        return Err(Error::Format("arity must be at least 1".into()));
    }
    let phi = assignment_closure(f, k)?;
    Ok(tighten(&bad_prefix_dfa(&phi, f.aps(), k)?).minimize())
}
