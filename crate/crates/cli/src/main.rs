//! `anharm` - exact and numerically verified bound states of the radial
//! Schrodinger equation with V(r) = a r^2 + b r^-4 + c r^-6.

mod commands;
mod render;

use std::io::Write;
use std::path::PathBuf;

use anharm_core::{CoreError, Dimension, ProblemSpec, StateLabel};
use clap::{Parser, Subcommand, ValueEnum};

use commands::{CommandOutput, VerifyOptions};

#[derive(Parser)]
#[command(
    name = "anharm",
    version,
    about = "Exact ground and first-excited states of V(r) = a r^2 + b r^-4 + c r^-6, \
             with independent numerical verification"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve the coupling constraints and print the exact solution record as JSON
    Solve(SolveArgs),
    /// Evaluate the constraint residuals of explicit couplings
    Check(CheckArgs),
    /// Verify solutions against the finite-difference eigensolver and ODE residuals
    Verify(VerifyArgs),
    /// Emit a sampled radial-function table as CSV
    Radial(RadialArgs),
    /// Re-examine the built-in reference coupling set and print the corrected family
    Critique(CritiqueArgs),
}

#[derive(clap::Args)]
struct QuantumArgs {
    /// Spatial dimension
    #[arg(long, value_parser = clap::value_parser!(u8).range(2..=3))]
    dim: u8,
    /// Angular momentum of the ground state (3-D)
    #[arg(long)]
    ell: Option<u32>,
    /// Magnetic quantum number (2-D)
    #[arg(long)]
    m: Option<u32>,
    /// Distinct excited-state angular momentum (3-D only)
    #[arg(long = "ell-prime")]
    ell_prime: Option<u32>,
}

impl QuantumArgs {
    fn build_spec(&self) -> Result<ProblemSpec, CoreError> {
        match self.dim {
            3 => {
                if self.m.is_some() {
                    return Err(CoreError::InvalidInput(
                        "--m applies to --dim 2; use --ell in 3-D".into(),
                    ));
                }
                let ell = self.ell.ok_or_else(|| {
                    CoreError::InvalidInput("--ell is required with --dim 3".into())
                })?;
                ProblemSpec::new(Dimension::ThreeD, ell, self.ell_prime)
            }
            2 => {
                if self.ell.is_some() || self.ell_prime.is_some() {
                    return Err(CoreError::InvalidInput(
                        "--ell/--ell-prime apply to --dim 3; use --m in 2-D".into(),
                    ));
                }
                let m = self.m.ok_or_else(|| {
                    CoreError::InvalidInput("--m is required with --dim 2".into())
                })?;
                ProblemSpec::new(Dimension::TwoD, m, None)
            }
            _ => unreachable!("clap bounds --dim to 2..=3"),
        }
    }
}

#[derive(clap::Args)]
struct SolveArgs {
    #[command(flatten)]
    qn: QuantumArgs,
    /// Coupling of the r^2 term (must be positive)
    #[arg(long)]
    a: f64,
    /// Write the output here instead of standard output
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(clap::Args)]
struct CheckArgs {
    #[command(flatten)]
    qn: QuantumArgs,
    #[arg(long)]
    a: f64,
    /// Coupling of the r^-4 term
    #[arg(long, allow_hyphen_values = true)]
    b: f64,
    /// Coupling of the r^-6 term (must be positive)
    #[arg(long)]
    c: f64,
    /// Structured output instead of text
    #[arg(long)]
    json: bool,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(clap::Args)]
struct VerifyArgs {
    #[command(flatten)]
    qn: QuantumArgs,
    #[arg(long)]
    a: f64,
    /// Explicit r^-4 coupling (default: solve the constraints)
    #[arg(long, allow_hyphen_values = true)]
    b: Option<f64>,
    /// Explicit r^-6 coupling (default: solve the constraints)
    #[arg(long)]
    c: Option<f64>,
    /// Interior points of the eigensolver grid
    #[arg(long = "grid-n")]
    grid_n: Option<usize>,
    /// Left wall of the eigensolver window
    #[arg(long = "r-min")]
    r_min: Option<f64>,
    /// Right wall of the eigensolver window
    #[arg(long = "r-max")]
    r_max: Option<f64>,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum StateArg {
    Ground,
    Excited,
}

#[derive(clap::Args)]
struct RadialArgs {
    #[command(flatten)]
    qn: QuantumArgs,
    #[arg(long)]
    a: f64,
    /// Which bound state to tabulate
    #[arg(long, value_enum)]
    state: StateArg,
    /// Apply the quadrature normalization factor
    #[arg(long)]
    normalized: bool,
    /// Number of log-spaced samples
    #[arg(long, default_value_t = 512)]
    samples: usize,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(clap::Args)]
struct CritiqueArgs {
    /// Structured output instead of text
    #[arg(long)]
    json: bool,
    #[arg(long)]
    output: Option<PathBuf>,
}

fn run(cli: Cli) -> (CommandOutput, Option<PathBuf>) {
    match cli.command {
        Command::Solve(args) => {
            let out = match args.qn.build_spec() {
                Ok(spec) => commands::cmd_solve(args.a, &spec),
                Err(e) => CommandOutput::invalid(&e),
            };
            (out, args.output)
        }
        Command::Check(args) => {
            let out = match args.qn.build_spec() {
                Ok(spec) => commands::cmd_check(args.a, args.b, args.c, &spec, args.json),
                Err(e) => CommandOutput::invalid(&e),
            };
            (out, args.output)
        }
        Command::Verify(args) => {
            let out = match args.qn.build_spec() {
                Ok(spec) => commands::cmd_verify(
                    args.a,
                    &spec,
                    &VerifyOptions {
                        b: args.b,
                        c: args.c,
                        grid_n: args.grid_n,
                        r_min: args.r_min,
                        r_max: args.r_max,
                    },
                ),
                Err(e) => CommandOutput::invalid(&e),
            };
            (out, args.output)
        }
        Command::Radial(args) => {
            let state = match args.state {
                StateArg::Ground => StateLabel::Ground,
                StateArg::Excited => StateLabel::FirstExcited,
            };
            let out = match args.qn.build_spec() {
                Ok(spec) => {
                    commands::cmd_radial(args.a, &spec, state, args.normalized, args.samples)
                }
                Err(e) => CommandOutput::invalid(&e),
            };
            (out, args.output)
        }
        Command::Critique(args) => (commands::cmd_critique(args.json), args.output),
    }
}

fn main() {
    let cli = Cli::parse();
    let (out, path) = run(cli);
    match path {
        Some(p) => {
            if let Err(e) = std::fs::write(&p, out.text.as_bytes()) {
                eprintln!("failed to write {}: {e}", p.display());
                std::process::exit(2);
            }
        }
        None => {
            let mut stdout = std::io::stdout().lock();
            if stdout.write_all(out.text.as_bytes()).is_err() || stdout.flush().is_err() {
                std::process::exit(2);
            }
        }
    }
    std::process::exit(out.exit);
}
