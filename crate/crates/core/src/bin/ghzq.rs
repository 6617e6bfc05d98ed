use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use ghzq::report::{self, exit_code_for, Command, RunConfig, Span, EXIT_USAGE};
use ghzq::{DEFAULT_AMP_BOUND, DEFAULT_LHV_BOUND, EIGEN_TOL};

/// Certify GHZ contradictions for N qudits of dimension D.
#[derive(Parser)]
#[command(name = "ghzq", version)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Divisor criterion only.
    Check(Single),
    /// Quantum check, exhaustive LHV search, gcd test and genuineness checks.
    Certify {
        #[command(flatten)]
        target: Single,
        /// Number of Y settings per constraint.
        #[arg(long = "n2", conflicts_with = "divisor")]
        n2: Option<usize>,
        /// Nonunit divisor g of D; uses N2 = g.
        #[arg(long)]
        divisor: Option<usize>,
        #[arg(long, default_value_t = EIGEN_TOL)]
        tolerance: f64,
        #[arg(long = "lhv-bound", default_value_t = DEFAULT_LHV_BOUND)]
        lhv_bound: u64,
        #[arg(long = "amp-bound", default_value_t = DEFAULT_AMP_BOUND)]
        amp_bound: u64,
    },
    /// Existence table over a grid of (N, D).
    Sweep {
        /// Party range, e.g. 3..5 (inclusive).
        #[arg(long)]
        parties: Span,
        /// Dimension range, e.g. 2..6 (inclusive).
        #[arg(long)]
        dim: Span,
        #[arg(long = "lhv-bound", default_value_t = DEFAULT_LHV_BOUND)]
        lhv_bound: u64,
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },
    /// Genuinely N-partite and D-dimensional checks.
    Genuineness(Single),
}

#[derive(Args)]
struct Single {
    #[arg(long)]
    parties: usize,
    #[arg(long)]
    dim: usize,
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
}

fn config(cmd: Cmd) -> RunConfig {
    match cmd {
        Cmd::Check(t) => with_out(RunConfig::single(Command::Check, t.parties, t.dim), t.out),
        Cmd::Genuineness(t) => with_out(RunConfig::single(Command::Genuineness, t.parties, t.dim), t.out),
        Cmd::Certify {
            target,
            n2,
            divisor,
            tolerance,
            lhv_bound,
            amp_bound,
        } => {
            let mut c = RunConfig::single(Command::Certify, target.parties, target.dim);
            c.n2 = n2;
            c.divisor = divisor;
            c.tolerance = tolerance;
            c.lhv_bound = lhv_bound;
            c.amp_bound = amp_bound;
            with_out(c, target.out)
        }
        Cmd::Sweep {
            parties,
            dim,
            lhv_bound,
            out,
        } => {
            let mut c = RunConfig::new(Command::Sweep, parties, dim);
            c.lhv_bound = lhv_bound;
            with_out(c, out)
        }
    }
}

fn with_out(mut c: RunConfig, out: Option<PathBuf>) -> RunConfig {
    c.output = out;
    c
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE as u8 } else { 0 });
        }
    };
    let config = config(cli.command);
    let doc = match report::run(&config) {
        Ok(doc) => doc,
        Err(e) => {
            eprintln!("ghzq: {e}");
            return ExitCode::from(exit_code_for(&e) as u8);
        }
    };
    print!("{}", doc.to_json());
    if let Some(path) = &config.output {
        if let Err(e) = doc.write(path) {
            eprintln!("ghzq: {e}");
            return ExitCode::from(EXIT_USAGE as u8);
        }
    }
    ExitCode::from(doc.exit_code() as u8)
}
