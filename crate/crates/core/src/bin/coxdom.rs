use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use coxdom::report::{envelope, error_record, exit_code, pretty, run_command, Command, Request};
use coxdom::{load_datum, CoxeterDatum, Error, Rational, Scalar};

#[derive(Parser)]
#[command(name = "coxdom", version, about = "Dominance, heights and imaginary cones of Coxeter groups")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Check the datum and print its bonds.
    Validate(Opts),
    /// Positive roots by depth.
    Roots(Opts),
    /// Decide whether x dominates y.
    Dominates(Opts),
    /// The sets D_0 ... D_n.
    Dn(Opts),
    /// Elementary (small) roots.
    SmallRoots(Opts),
    /// Standard and infinity height of a reflection.
    Height(Opts),
    /// Reflections of infinity height at most n.
    Tn(Opts),
    /// Split the inversion set of a reflection over dihedral planes.
    Decompose(Opts),
    /// Maximal dihedral subsystem through x and y.
    Chains(Opts),
    /// Imaginary cone membership of x - y, or of x alone.
    Cone(Opts),
    /// Key witness and dominance cover test for x and y.
    Witness(Opts),
    /// Run the identity checks.
    Verify(Opts),
    /// Full dossier for the datum.
    Report(Opts),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Backend {
    Float,
    Rational,
}

#[derive(Args, Clone, Debug)]
struct Opts {
    /// Datum file.
    #[arg(long)]
    datum: PathBuf,
    #[arg(long)]
    depth: Option<usize>,
    #[arg(long)]
    n: Option<usize>,
    /// Root or vector literal such as `2,1,1`.
    #[arg(long, allow_hyphen_values = true)]
    x: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    y: Option<String>,
    /// Word literal such as `1.2.1`.
    #[arg(long)]
    word: Option<String>,
    #[arg(long, value_enum, default_value = "float")]
    backend: Backend,
    /// Comparison tolerance for the float backend.
    #[arg(long)]
    epsilon: Option<f64>,
    #[arg(long)]
    threads: Option<usize>,
    /// Cap on stored positive roots.
    #[arg(long)]
    max_roots: Option<usize>,
    /// Human-readable output instead of JSON.
    #[arg(long)]
    pretty: bool,
}

impl Cmd {
    fn split(self) -> (Command, Opts) {
        match self {
            Cmd::Validate(o) => (Command::Validate, o),
            Cmd::Roots(o) => (Command::Roots, o),
            Cmd::Dominates(o) => (Command::Dominates, o),
            Cmd::Dn(o) => (Command::Dn, o),
            Cmd::SmallRoots(o) => (Command::SmallRoots, o),
            Cmd::Height(o) => (Command::Height, o),
            Cmd::Tn(o) => (Command::Tn, o),
            Cmd::Decompose(o) => (Command::Decompose, o),
            Cmd::Chains(o) => (Command::Chains, o),
            Cmd::Cone(o) => (Command::Cone, o),
            Cmd::Witness(o) => (Command::Witness, o),
            Cmd::Verify(o) => (Command::Verify, o),
            Cmd::Report(o) => (Command::Report, o),
        }
    }
}

fn echo(opts: &Opts) -> Value {
    json!({
        "datum": opts.datum.display().to_string(),
        "depth": opts.depth,
        "n": opts.n,
        "x": opts.x,
        "y": opts.y,
        "word": opts.word,
        "epsilon": opts.epsilon,
        "max_roots": opts.max_roots,
    })
}

fn execute<S: Scalar>(cmd: Command, text: &str, opts: &Opts) -> (Value, i32) {
    let datum = match load_datum::<S>(text) {
        Ok(d) => match opts.epsilon {
            Some(eps) if !S::EXACT => d.with_epsilon(eps),
            _ => d,
        },
        Err(e) => return (failure(cmd, opts, &e), exit_code(&e)),
    };
    let req = Request {
        depth: opts.depth,
        n: opts.n,
        x: opts.x.clone(),
        y: opts.y.clone(),
        word: opts.word.clone(),
        max_roots: opts.max_roots,
    };
    let outcome = run_command(cmd, datum.clone(), &req);
    envelope::<S>(cmd, &datum as &CoxeterDatum<S>, echo(opts), outcome)
}

fn failure(cmd: Command, opts: &Opts, e: &Error) -> Value {
    json!({
        "command": cmd.name(),
        "options": echo(opts),
        "status": "error",
        "error": error_record(e),
    })
}

fn main() -> ExitCode {
    let (cmd, opts) = Cli::parse().command.split();
    let run = || match std::fs::read_to_string(&opts.datum) {
        Err(io) => {
            let e = Error::Input(format!("cannot read {}: {io}", opts.datum.display()));
            (failure(cmd, &opts, &e), 1)
        }
        Ok(text) => match opts.backend {
            Backend::Float => execute::<f64>(cmd, &text, &opts),
            Backend::Rational => execute::<Rational>(cmd, &text, &opts),
        },
    };
    let (doc, code) = match opts.threads {
        Some(k) => match rayon::ThreadPoolBuilder::new().num_threads(k.max(1)).build() {
            Ok(pool) => pool.install(run),
            Err(e) => {
                let e = Error::Input(format!("thread pool: {e}"));
                (failure(cmd, &opts, &e), 1)
            }
        },
        None => run(),
    };
    if opts.pretty {
        print!("{}", pretty(&doc));
    } else {
        println!("{}", serde_json::to_string(&doc).expect("serialisable"));
    }
    ExitCode::from(code as u8)
}
