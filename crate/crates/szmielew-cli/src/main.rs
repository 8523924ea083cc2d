//! Command line front end: evaluate sentences on descriptors, classify
//! descriptors, search for models, and decide membership in the theory
//! of square-like abelian groups. Results go to stdout as JSON; errors
//! go to stderr as JSON with a nonzero exit code.

use std::fs;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{error::ErrorKind, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use szmielew::{
    descriptor_to_json, discriminating_companion, eval_sentence, in_theory, is_discriminating,
    is_square_like, parse_descriptor, parse_sentence, satisfiable_square_like,
    satisfiable_szmielew, to_positive_dnf, Sentence, SzmielewDescriptor,
};

#[derive(Parser)]
#[command(
    name = "szmielew",
    version,
    about = "Decision procedures for abelian group sentences built from Szmielew invariants"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a sentence on the group described by a descriptor file.
    Eval {
        /// Path to a JSON Szmielew descriptor.
        #[arg(long, value_name = "FILE")]
        group: PathBuf,
        /// Sentence over the invariants, e.g. "Phi(2,0)=1 & Theta(3,1)>0".
        #[arg(long)]
        sentence: String,
    },
    /// Classify the group described by a descriptor file.
    Classify {
        /// Path to a JSON Szmielew descriptor.
        #[arg(long, value_name = "FILE")]
        group: PathBuf,
    },
    /// Search for a model of a sentence and print its descriptor.
    Sat {
        /// Sentence over the invariants.
        #[arg(long)]
        sentence: String,
        /// Class of groups to search. "discriminating" and "square-like"
        /// admit the same sentences and share one search.
        #[arg(long, value_enum, default_value_t = Mode::SquareLike)]
        mode: Mode,
    },
    /// Decide whether a sentence holds in every square-like abelian group.
    Prove {
        /// Sentence over the invariants.
        #[arg(long)]
        sentence: String,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    /// Any countable abelian group.
    Szmielew,
    /// Discriminating groups only.
    Discriminating,
    /// Square-like groups only.
    SquareLike,
}

fn read_descriptor(path: &PathBuf) -> Result<SzmielewDescriptor, String> {
    let text = fs::read_to_string(path)
        .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    parse_descriptor(&text).map_err(|e| format!("bad descriptor in {}: {e}", path.display()))
}

fn read_sentence(text: &str) -> Result<Sentence, String> {
    parse_sentence(text).map_err(|e| format!("bad sentence: {e}"))
}

fn satisfiable_anywhere(s: &Sentence) -> Option<SzmielewDescriptor> {
    to_positive_dnf(s).iter().find_map(satisfiable_szmielew)
}

fn run(cli: Cli) -> Result<Value, String> {
    match cli.command {
        Command::Eval { group, sentence } => {
            let d = read_descriptor(&group)?;
            let s = read_sentence(&sentence)?;
            Ok(json!({ "holds": eval_sentence(&s, &d) }))
        }
        Command::Classify { group } => {
            let d = read_descriptor(&group)?;
            let mut out = json!({
                "discriminating": is_discriminating(&d),
                "square_like": is_square_like(&d),
            });
            if let Ok(c) = discriminating_companion(&d) {
                out["companion"] = descriptor_to_json(&c);
            }
            Ok(out)
        }
        Command::Sat { sentence, mode } => {
            let s = read_sentence(&sentence)?;
            let witness = match mode {
                Mode::Szmielew => satisfiable_anywhere(&s),
                Mode::Discriminating | Mode::SquareLike => satisfiable_square_like(&s),
            };
            let mut out = json!({ "satisfiable": witness.is_some() });
            if let Some(w) = witness {
                out["witness"] = descriptor_to_json(&w);
            }
            Ok(out)
        }
        Command::Prove { sentence } => {
            let s = read_sentence(&sentence)?;
            let verdict = in_theory(&s);
            let mut out = json!({ "member": verdict.member });
            if let Some(cm) = verdict.counter_model {
                out["counter_model"] = descriptor_to_json(&cm);
            }
            Ok(out)
        }
    }
}

fn fail(message: &str, code: u8) -> ExitCode {
    eprintln!("{}", json!({ "error": message }));
    ExitCode::from(code)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            e.exit()
        }
        Err(e) => return fail(&e.to_string(), 1),
    };
    match catch_unwind(AssertUnwindSafe(|| run(cli))) {
        Ok(Ok(value)) => {
            println!("{}", serde_json::to_string_pretty(&value).expect("serializable output"));
            ExitCode::SUCCESS
        }
        Ok(Err(message)) => fail(&message, 1),
        Err(payload) => {
            let detail = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".to_string());
            fail(&format!("internal invariant violation: {detail}"), 2)
        }
    }
}
