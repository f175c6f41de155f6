//! The `o2` command line: membership, parsing, verification, generation,
//! fuzzing and bump listing for the balanced language O₂.
//!
//! [`run`] takes the argument vector and two sinks, so tests can drive it
//! in-process; the binary is a thin wrapper around it.

use std::ffi::OsString;
use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use o2_mcfg::grammar::{self, certify, from_json, from_sexp, to_json, to_sexp};
use o2_mcfg::parser::{parse, ParseError, Strategy};
use o2_mcfg::sample::{seeded_rng, uniform_balanced};
use o2_mcfg::words::{self, Word};
use o2_mcfg::{g2, DerivationTree, Mcfg};
use rand::Rng;
use rayon::prelude::*;

pub const EXIT_OK: u8 = 0;
pub const EXIT_REJECTED: u8 = 1;
pub const EXIT_NOT_BALANCED: u8 = 2;
pub const EXIT_VERIFY_FAILED: u8 = 3;
pub const EXIT_USAGE: u8 = 64;
pub const EXIT_INTERNAL: u8 = 70;
pub const EXIT_IO: u8 = 74;

const BUG_BANNER: &str = "o2: BUG: a balanced pair had no balanced decomposition. \
Every balanced word is derivable, so this is a defect in o2; please report it with the input.";

#[derive(Debug, Parser)]
#[command(
    name = "o2",
    version,
    about = "Recognise, parse and generate words of the language O2"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Exit 0 if the word is balanced, 1 otherwise.
    Check {
        /// A word such as `abAB`, or `-` to read it from stdin.
        word: String,
        /// Print the balance tuple on stderr.
        #[arg(short, long)]
        verbose: bool,
        /// Number of letter pairs; `a<i>`/`A<i>` name pair i.
        #[arg(long = "n", default_value_t = 2)]
        n: usize,
    },
    /// Print a derivation of the word in the grammar.
    Parse {
        word: String,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[arg(long, value_enum, default_value_t = StrategyArg::Guided)]
        strategy: StrategyArg,
    },
    /// Re-check a serialized derivation (JSON or s-expression).
    Verify {
        file: PathBuf,
        /// Also require the derivation to yield this word.
        #[arg(long)]
        word: Option<String>,
    },
    /// Print uniformly sampled balanced words, one per line.
    Gen {
        #[arg(long)]
        length: usize,
        #[arg(long, default_value_t = 1)]
        count: usize,
        #[arg(long, env = "O2_SEED", default_value_t = 0)]
        seed: u64,
    },
    /// Parse random words with both strategies and verify every tree.
    Fuzz {
        #[arg(long)]
        max_len: usize,
        #[arg(long, default_value_t = 1000)]
        count: usize,
        #[arg(long, env = "O2_SEED", default_value_t = 0)]
        seed: u64,
    },
    /// List the bumps of a word as `direction:[start,end]`.
    Bumps {
        /// A word, or `-` to read it from stdin.
        word: String,
        #[arg(long = "n", default_value_t = 2)]
        n: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Sexp,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum StrategyArg {
    Guided,
    Search,
}

impl From<StrategyArg> for Strategy {
    fn from(s: StrategyArg) -> Strategy {
        match s {
            StrategyArg::Guided => Strategy::Guided,
            StrategyArg::Search => Strategy::Search,
        }
    }
}

enum Failure {
    Usage(String),
    Io(String),
    Internal(String),
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e.to_string())
    }
}

type Outcome = Result<u8, Failure>;

/// Runs one invocation and returns its exit code.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{text}");
                EXIT_USAGE
            } else {
                let _ = write!(out, "{text}");
                EXIT_OK
            };
        }
    };
    let outcome = match cli.command {
        Command::Check { word, verbose, n } => check(&word, verbose, n, err),
        Command::Parse {
            word,
            format,
            strategy,
        } => parse_cmd(&word, format, strategy.into(), out, err),
        Command::Verify { file, word } => verify(&file, word.as_deref(), out, err),
        Command::Gen {
            length,
            count,
            seed,
        } => gen(length, count, seed, out),
        Command::Fuzz {
            max_len,
            count,
            seed,
        } => fuzz(max_len, count, seed, out, err),
        Command::Bumps { word, n } => bumps(&word, n, out),
    };
    match outcome {
        Ok(code) => code,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "o2: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Io(msg)) => {
            let _ = writeln!(err, "o2: I/O error: {msg}");
            EXIT_IO
        }
        Err(Failure::Internal(msg)) => {
            let _ = writeln!(err, "o2: internal error: {msg}");
            let _ = writeln!(err, "{BUG_BANNER}");
            EXIT_INTERNAL
        }
    }
}

fn read_word(arg: &str, n: usize) -> Result<Word, Failure> {
    if n == 0 {
        return Err(Failure::Usage("--n must be at least 1".into()));
    }
    let text = if arg == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s)?;
        s.trim().to_string()
    } else {
        arg.to_string()
    };
    Word::parse_bounded(&text, n).map_err(|e| Failure::Usage(format!("bad word {text:?}: {e}")))
}

fn check(arg: &str, verbose: bool, n: usize, err: &mut dyn Write) -> Outcome {
    let w = read_word(arg, n)?;
    let balance = words::balance(&w, n).map_err(|e| Failure::Usage(e.to_string()))?;
    if verbose {
        writeln!(err, "{balance}")?;
    }
    Ok(if balance.is_zero() {
        EXIT_OK
    } else {
        EXIT_REJECTED
    })
}

fn parse_cmd(
    arg: &str,
    format: Format,
    strategy: Strategy,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Outcome {
    let w = read_word(arg, 2)?;
    match parse(&w, strategy) {
        Ok(t) => {
            let text = match format {
                Format::Json => to_json(&t),
                Format::Sexp => to_sexp(&t),
            };
            writeln!(out, "{text}")?;
            Ok(EXIT_OK)
        }
        Err(ParseError::NotBalanced(b)) => {
            writeln!(err, "o2: {w:?} is not balanced: {b}", w = w.to_string())?;
            Ok(EXIT_NOT_BALANCED)
        }
        Err(ParseError::Alphabet(e)) => Err(Failure::Usage(e.to_string())),
        Err(e) => Err(Failure::Internal(e.to_string())),
    }
}

fn read_tree(text: &str) -> Result<DerivationTree, grammar::SerialError> {
    if text.trim_start().starts_with('(') {
        from_sexp(text)
    } else {
        from_json(text)
    }
}

fn verify(
    file: &PathBuf,
    expected: Option<&str>,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Outcome {
    let expected = expected.map(|s| read_word(s, 2)).transpose()?;
    let text =
        fs::read_to_string(file).map_err(|e| Failure::Io(format!("{}: {e}", file.display())))?;
    let tree = match read_tree(&text) {
        Ok(t) => t,
        Err(e) => {
            writeln!(err, "o2: {e}")?;
            return Ok(EXIT_VERIFY_FAILED);
        }
    };
    let word = match certify(&g2(), &tree) {
        Ok(w) => w,
        Err(r) => {
            writeln!(err, "o2: derivation rejected at {r}")?;
            return Ok(EXIT_VERIFY_FAILED);
        }
    };
    if let Some(e) = expected {
        if e != word {
            writeln!(
                err,
                "o2: derivation yields {:?}, expected {:?}",
                word.to_string(),
                e.to_string()
            )?;
            return Ok(EXIT_VERIFY_FAILED);
        }
    }
    writeln!(out, "ok {:?}", word.to_string())?;
    Ok(EXIT_OK)
}

fn gen(length: usize, count: usize, seed: u64, out: &mut dyn Write) -> Outcome {
    if length % 2 == 1 {
        return Err(Failure::Usage(format!(
            "no balanced word has odd length {length}"
        )));
    }
    let mut rng = seeded_rng(seed);
    for _ in 0..count {
        let w = uniform_balanced(length, &mut rng).expect("even length");
        writeln!(out, "{w}")?;
    }
    Ok(EXIT_OK)
}

/// Parses `w` with both strategies and checks each tree, including after a
/// JSON and s-expression round trip.
fn fuzz_one(g: &Mcfg, w: &Word) -> Result<(), String> {
    for strategy in [Strategy::Guided, Strategy::Search] {
        let t = parse(w, strategy).map_err(|e| format!("{strategy}: {e}"))?;
        let y = certify(g, &t).map_err(|r| format!("{strategy}: tree rejected at {r}"))?;
        if &y != w {
            return Err(format!("{strategy}: tree yields {y}"));
        }
        for (name, text) in [("json", to_json(&t)), ("sexp", to_sexp(&t))] {
            match read_tree(&text) {
                Ok(back) if back == t => {}
                Ok(_) => return Err(format!("{strategy}: {name} round trip changed the tree")),
                Err(e) => return Err(format!("{strategy}: {name} round trip failed: {e}")),
            }
        }
    }
    Ok(())
}

fn fuzz(
    max_len: usize,
    count: usize,
    seed: u64,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Outcome {
    let mut rng = seeded_rng(seed);
    let inputs: Vec<Word> = (0..count)
        .map(|_| {
            let len = 2 * rng.gen_range(0..=max_len / 2);
            uniform_balanced(len, &mut rng).expect("even length")
        })
        .collect();
    let g = g2();
    let results: Vec<Result<(), String>> = inputs.par_iter().map(|w| fuzz_one(&g, w)).collect();
    let failures: Vec<(usize, &String)> = results
        .iter()
        .enumerate()
        .filter_map(|(k, r)| r.as_ref().err().map(|e| (k, e)))
        .collect();
    match failures.iter().min_by_key(|(k, _)| (inputs[*k].len(), *k)) {
        None => {
            writeln!(
                out,
                "fuzz: {count} words passed (seed {seed}, max length {max_len})"
            )?;
            Ok(EXIT_OK)
        }
        Some(&(k, reason)) => {
            writeln!(
                err,
                "fuzz: {} of {count} words failed (seed {seed})",
                failures.len()
            )?;
            writeln!(out, "minimal failing word: {}", inputs[k])?;
            writeln!(out, "reason: {reason}")?;
            Ok(EXIT_REJECTED)
        }
    }
}

fn bumps(arg: &str, n: usize, out: &mut dyn Write) -> Outcome {
    let w = read_word(arg, n)?;
    for bp in words::bumps(&w) {
        writeln!(out, "{bp}")?;
    }
    Ok(EXIT_OK)
}
