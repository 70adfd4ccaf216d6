//! `k3lag`: JSON-in, JSON-out front end for the lattice toolkit.
//!
//! Exit codes: 0 success, 1 a precondition of the operation failed, 2 malformed
//! input, 3 a bounded search ended undecided.

mod commands;
mod verify;
mod wire;

use std::io::{IsTerminal, Read};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use k3lag::sampling::SampleMode;
use k3lag::{Error, RootChoice};
use serde_json::{json, Value};

use commands::Options;

#[derive(Debug, Clone)]
pub struct CliError {
    pub code: String,
    pub message: String,
    pub exit: u8,
}

impl CliError {
    pub fn malformed(code: &str, message: impl Into<String>) -> Self {
        CliError { code: code.into(), message: message.into(), exit: 2 }
    }

    /// Shape errors in the input exit with 2, violated preconditions with 1.
    pub fn core(e: Error) -> Self {
        let exit = match e {
            Error::RankMismatch { .. } | Error::GramNotSquare | Error::GramNotSymmetric => 2,
            _ => 1,
        };
        CliError { code: e.code().into(), message: e.to_string(), exit }
    }
}

#[derive(Parser)]
#[command(name = "k3lag", version, about = "Exact lattice computations for Lagrangian classes on K3 surfaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Lattice by name ("K3", "U", "E8", "U+<-2>") or a JSON file holding a Gram matrix.
    #[arg(long, global = true)]
    lattice: Option<String>,
    /// Coordinate height for bounded searches.
    #[arg(long, global = true, env = "K3LAG_HEIGHT", default_value_t = 6)]
    height: u64,
    #[arg(long, global = true, default_value_t = 42)]
    seed: u64,
    /// Number of samples.
    #[arg(long, global = true)]
    count: Option<usize>,
    /// Half-width of the sampling box for the hyperbolic coordinates.
    #[arg(long = "box", global = true, allow_negative_numbers = true)]
    box_size: Option<i64>,
    #[arg(long, global = true, value_enum, default_value_t = Root::Plus)]
    root_choice: Root,
    #[arg(long, global = true, value_enum, default_value_t = Mode::Both)]
    mode: Mode,
    /// Read the input document from this file instead of standard input.
    #[arg(long, global = true)]
    input: Option<PathBuf>,
    /// Write the output document here instead of standard output.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
}

#[derive(Subcommand, Clone, Copy)]
enum Command {
    /// Rank, Gram, signature, and an isotropic vector search.
    Info,
    /// Decide whether a lattice is generated by classes of square at least -2.
    Classify,
    /// Certificate decomposing a Lagrangian class.
    Decompose,
    /// Realize a sublattice as a Lagrangian lattice.
    Realize,
    /// Isotropic class orthogonal to a polarization, or a nef walk.
    Syz,
    /// Eichler canonical form of a primitive vector.
    Eichler,
    /// Roots, short vectors, or a root slice.
    Roots,
    /// Random polarizations with re-verified witnesses.
    Sample,
    /// Re-check an emitted result document.
    Verify,
}

impl Command {
    fn name(self) -> &'static str {
        match self {
            Command::Info => "info",
            Command::Classify => "classify",
            Command::Decompose => "decompose",
            Command::Realize => "realize",
            Command::Syz => "syz",
            Command::Eichler => "eichler",
            Command::Roots => "roots",
            Command::Sample => "sample",
            Command::Verify => "verify",
        }
    }
}

#[derive(ValueEnum, Clone, Copy)]
enum Root {
    #[value(name = "+")]
    Plus,
    #[value(name = "-")]
    Minus,
}

#[derive(ValueEnum, Clone, Copy)]
enum Mode {
    Positive,
    Isotropic,
    Both,
}

fn read_input(path: &Option<PathBuf>) -> Result<Value, CliError> {
    let text = match path {
        Some(p) => std::fs::read_to_string(p).map_err(|e| wire::malformed(format!("cannot read {}: {e}", p.display())))?,
        None => {
            let stdin = std::io::stdin();
            if stdin.is_terminal() {
                String::new()
            } else {
                let mut s = String::new();
                stdin.lock().read_to_string(&mut s).map_err(|e| wire::malformed(format!("cannot read input: {e}")))?;
                s
            }
        }
    };
    if text.trim().is_empty() {
        return Ok(Value::Null);
    }
    serde_json::from_str(&text).map_err(|e| CliError::malformed("malformed_json", e.to_string()))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let command = cli.command.name();
    let opts = Options {
        lattice: cli.lattice.clone(),
        height: cli.height,
        seed: cli.seed,
        count: cli.count,
        box_size: cli.box_size,
        root_choice: match cli.root_choice {
            Root::Plus => RootChoice::Plus,
            Root::Minus => RootChoice::Minus,
        },
        mode: match cli.mode {
            Mode::Positive => SampleMode::Positive,
            Mode::Isotropic => SampleMode::Isotropic,
            Mode::Both => SampleMode::Both,
        },
    };
    let outcome = read_input(&cli.input).and_then(|input| {
        let out = commands::run(command, &input, &opts)?;
        Ok((input, out))
    });
    let (doc, exit) = match outcome {
        Ok((input, out)) => {
            let mut exit = if out.unknown { 3 } else { 0 };
            if command == "verify" && out.result["verified"] == json!(false) {
                exit = 1;
            }
            (json!({ "command": command, "input": input, "options": opts.to_json(), "result": out.result }), exit)
        }
        Err(e) => (json!({ "command": command, "error": { "code": e.code, "message": e.message } }), e.exit),
    };
    let text = serde_json::to_string_pretty(&doc).expect("json values serialize") + "\n";
    match &cli.output {
        Some(p) => {
            if let Err(e) = std::fs::write(p, &text) {
                eprintln!("cannot write {}: {e}", p.display());
                return ExitCode::from(2);
            }
        }
        None => print!("{text}"),
    }
    ExitCode::from(exit)
}
