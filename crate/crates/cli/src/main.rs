//! `rnm`: solve, certify and inspect random normed module instances.
//!
//! Every command writes one deterministic JSON report to stdout and a short
//! summary to stderr. Exit codes: 0 success, 1 negative verdict (infeasible,
//! not separable, ...), 2 input error, 3 internal error.

mod instance;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use rnm_core::Error;
use serde_json::json;

use crate::instance::{read_instance, InputError, Loaded};
use crate::report::Outcome;

#[derive(Parser, Debug)]
#[command(name = "rnm", version, about = "Random normed module solver")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Instance file (JSON).
    #[arg(long, global = true)]
    instance: Option<PathBuf>,

    /// Seed for every sampling step.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Rank and consistency tolerance.
    #[arg(long, global = true)]
    tolerance: Option<f64>,

    /// Worker threads for per-atom parallelism.
    #[arg(long, global = true)]
    jobs: Option<usize>,

    /// Sample count for oracles and property suites.
    #[arg(long, global = true)]
    samples: Option<usize>,
}

#[derive(Subcommand, Debug, Clone, Copy, PartialEq, Eq)]
enum Command {
    /// Decide the Helly condition and report a certificate when it fails.
    Check,
    /// Solve the equations within the budget, or report a certificate.
    Solve,
    /// Separate two convex bodies on their disjointness set.
    Separate,
    /// Quasi-free stratification of the functional family.
    Stratify,
    /// Gauge of `bodies.g` at `point`.
    Gauge,
    /// Unit-ball element matching the targets within epsilon.
    Goldstine,
    /// Neighborhoods excluding each functional from the dual unit ball.
    Exclude,
    /// Run the finite-support counterexample.
    Counterexample,
    /// Run the module and algebra axiom suites.
    Axioms,
}

impl Command {
    fn name(self) -> &'static str {
        match self {
            Command::Check => "check",
            Command::Solve => "solve",
            Command::Separate => "separate",
            Command::Stratify => "stratify",
            Command::Gauge => "gauge",
            Command::Goldstine => "goldstine",
            Command::Exclude => "exclude",
            Command::Counterexample => "counterexample",
            Command::Axioms => "axioms",
        }
    }

    fn needs_instance(self) -> bool {
        !matches!(self, Command::Counterexample | Command::Axioms)
    }
}

/// Why a command stopped without a result.
enum Failure {
    Input(InputError),
    /// Negative verdict expressed as a core precondition error.
    Negative(Error),
    Internal(Error),
}

impl From<InputError> for Failure {
    fn from(e: InputError) -> Self {
        Failure::Input(e)
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::NoSeparation | Error::InsideUnitBall | Error::NotInUnitBidualBall { .. } => Failure::Negative(e),
            Error::Inconsistent { .. } | Error::CertificateUnverified { .. } => Failure::Internal(e),
            other => Failure::Input(InputError::new("", other.to_string())),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let run = || execute(&cli);
    let result = match cli.jobs {
        Some(jobs) => match rayon::ThreadPoolBuilder::new().num_threads(jobs).build() {
            Ok(pool) => pool.install(run),
            Err(e) => Err(Failure::Input(InputError::new("--jobs", e.to_string()))),
        },
        None => run(),
    };
    let (code, body) = match result {
        Ok((instance, outcome)) => {
            eprintln!("{}", outcome.summary);
            let code = if outcome.success { 0 } else { 1 };
            (code, json!({ "instance": instance, "result": outcome.result }))
        }
        Err(Failure::Input(e)) => {
            eprintln!("input error {e}");
            (
                2,
                json!({ "error": { "kind": "input", "pointer": e.pointer, "message": e.message } }),
            )
        }
        Err(Failure::Negative(e)) => {
            eprintln!("{e}");
            (
                1,
                json!({ "error": { "kind": "precondition", "message": e.to_string(), "detail": report::error_detail(&e) } }),
            )
        }
        Err(Failure::Internal(e)) => {
            eprintln!("internal error: {e}");
            (3, json!({ "error": { "kind": "internal", "message": e.to_string() } }))
        }
    };
    let report = json!({
        "command": cli.command.name(),
        "seed": cli.seed,
        "tolerance": cli.tolerance,
        "report": body,
    });
    println!("{}", serde_json::to_string_pretty(&report).expect("report serializes"));
    ExitCode::from(code)
}

fn execute(cli: &Cli) -> Result<(serde_json::Value, Outcome), Failure> {
    let loaded = if cli.command.needs_instance() {
        let path = cli
            .instance
            .as_ref()
            .ok_or_else(|| InputError::new("--instance", format!("`{}` needs an instance file", cli.command.name())))?;
        Some(Loaded::new(read_instance(path)?)?)
    } else {
        None
    };
    if let Some(t) = cli.tolerance {
        if !(t > 0.0 && t < 1.0) {
            return Err(InputError::new("--tolerance", "tolerance must lie in (0, 1)").into());
        }
    }
    let echo = loaded.as_ref().map_or(serde_json::Value::Null, |l| {
        serde_json::to_value(&l.file).expect("instance serializes")
    });
    let outcome = match (cli.command, loaded.as_ref()) {
        (Command::Check, Some(l)) => report::check(l, cli.tolerance, cli.samples, cli.seed)?,
        (Command::Solve, Some(l)) => report::solve(l, cli.tolerance)?,
        (Command::Separate, Some(l)) => report::separate(l)?,
        (Command::Stratify, Some(l)) => report::stratify(l, cli.tolerance)?,
        (Command::Gauge, Some(l)) => report::gauge(l)?,
        (Command::Goldstine, Some(l)) => report::goldstine(l)?,
        (Command::Exclude, Some(l)) => report::exclude(l)?,
        (Command::Counterexample, _) => report::counterexample(cli.seed, cli.samples.unwrap_or(1000))?,
        (Command::Axioms, _) => report::axioms(cli.seed, cli.samples.unwrap_or(1000)),
        (_, None) => unreachable!("instance loaded for every command that needs one"),
    };
    Ok((echo, outcome))
}
