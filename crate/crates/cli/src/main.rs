mod commands;
mod manifest;
mod objects;

use std::fmt;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use spinnet::tensor::{EvalError, PlanError};

#[derive(Parser)]
#[command(name = "spinnet", version, about = "ZXH diagrams for SU(2) recoupling coefficients")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Exact,
    Float,
}

#[derive(Subcommand)]
enum Cmd {
    /// Prints a coupling coefficient from the closed-form oracle.
    ///
    /// 3jm: j1 j2 j3 m1 m2 m3. 4jm: j1..j4 m1..m4 j. 6j: j1..j6.
    /// cg: j1 m1 j2 m2 j m.
    Symbol {
        kind: String,
        #[arg(allow_hyphen_values = true)]
        args: Vec<String>,
    },
    /// Builds a diagram and writes it as JSON, with a `.correction.json`
    /// sidecar next to it.
    ///
    /// Kinds: symmetriser N, link J, 3jm J1 J2 J3, 4jm J1..J4 --j J,
    /// 6j J1..J6, theta J1 J2 J3, loop J, cswap, crown N, 15j J1..J15.
    Build {
        kind: String,
        args: Vec<String>,
        /// One of i/o per leg, e.g. `iio`.
        #[arg(long)]
        orient: Option<String>,
        #[arg(long)]
        anticlockwise: bool,
        /// Intermediate spin of a 4jm vertex.
        #[arg(long)]
        j: Option<String>,
        /// Diagram file; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Contracts a diagram file and prints its value.
    Eval {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "exact")]
        mode: ModeArg,
        /// One character per boundary (inputs, then outputs): 0, 1, or - to
        /// leave the wire open.
        #[arg(long)]
        plug: Option<String>,
        /// Comma-separated magnetic indices, one per spin leg of the sidecar.
        #[arg(long, allow_hyphen_values = true)]
        ms: Option<String>,
        #[arg(long)]
        rank_cap: Option<usize>,
        /// Runs the default simplifier first.
        #[arg(long)]
        simplify: bool,
        /// Writes the raw tensor as JSON.
        #[arg(long)]
        json: Option<PathBuf>,
        /// Writes the raw tensor as a complex128 .npy array.
        #[arg(long)]
        npy: Option<PathBuf>,
    },
    /// Runs every case of a manifest and reports per case.
    Verify {
        manifest: PathBuf,
        /// Only cases with this kind or id.
        #[arg(long)]
        only: Option<String>,
    },
    /// Simplifies a diagram file and prints the rewrite trace as JSON.
    Simplify {
        file: PathBuf,
        /// Comma-separated rule names; the shrinking rules by default.
        #[arg(long)]
        rules: Option<String>,
        #[arg(long, default_value_t = 1)]
        lookahead: usize,
        /// Where to write the simplified diagram.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// An error with its exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub msg: String,
}

impl Failure {
    pub fn usage(msg: impl Into<String>) -> Self {
        Failure { code: 2, msg: msg.into() }
    }

    /// A builder or oracle rejecting its arguments.
    pub fn domain(e: impl fmt::Display) -> Self {
        Failure { code: 2, msg: e.to_string() }
    }

    pub fn verify(msg: impl Into<String>) -> Self {
        Failure { code: 1, msg: msg.into() }
    }

    pub fn io(path: &std::path::Path, e: impl fmt::Display) -> Self {
        Failure { code: 2, msg: format!("{}: {e}", path.display()) }
    }
}

impl From<EvalError> for Failure {
    fn from(e: EvalError) -> Self {
        let code = match e {
            EvalError::Plan(PlanError::RankCap { .. } | PlanError::LeafRank { .. }) => 3,
            _ => 2,
        };
        Failure { code, msg: e.to_string() }
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.cmd {
        Cmd::Symbol { kind, args } => commands::symbol(&kind, &args),
        Cmd::Build { kind, args, orient, anticlockwise, j, out, dot } => {
            let obj = objects::Object::from_args(&kind, &args, orient, anticlockwise, j)?;
            commands::build(&obj, out.as_deref(), dot.as_deref())
        }
        Cmd::Eval { file, mode, plug, ms, rank_cap, simplify, json, npy } => commands::eval(&commands::EvalArgs {
            file,
            mode,
            plug,
            ms,
            rank_cap,
            simplify,
            json,
            npy,
        }),
        Cmd::Verify { manifest, only } => manifest::verify(&manifest, only.as_deref()),
        Cmd::Simplify { file, rules, lookahead, out } => {
            commands::simplify(&file, rules.as_deref(), lookahead, out.as_deref())
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            if !f.msg.is_empty() {
                eprintln!("error: {}", f.msg);
            }
            ExitCode::from(f.code)
        }
    }
}
