use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use doa::commands::{self, opt, EvolveArgs, MembershipArgs};
use doa::tolerances::tolerances_from_env;
use doa::Result;

/// Attraction domains of steady states of Lindblad master equations.
///
/// Exit codes: 0 success (member), 1 non-member, 2 usage or parse error,
/// 3 validation error, 4 defective peripheral spectrum, 5 numerical failure.
/// Tolerance defaults can be overridden with DOA_TOLERANCES, a JSON object
/// such as {"member": 1e-6}.
#[derive(Debug, Parser)]
#[command(name = "doa", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Eigenvalues, peripheral counts and non-decaying observables.
    Spectrum {
        model: PathBuf,
        /// Write the JSON report here instead of stdout.
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Decide whether an initial state flows to a steady state.
    Membership {
        model: PathBuf,
        #[arg(long)]
        steady: PathBuf,
        #[arg(long)]
        initial: PathBuf,
        /// Membership tolerance on the identification deltas.
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Propagate a state on a uniform time grid and write CSV.
    Evolve {
        model: PathBuf,
        #[arg(long)]
        initial: PathBuf,
        /// Reference state for the distance column.
        #[arg(long = "ref")]
        reference: Option<PathBuf>,
        #[arg(long)]
        tmax: f64,
        /// Number of samples including t = 0 and t = tmax.
        #[arg(long, default_value_t = 301)]
        steps: usize,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Steady-state summary: kernel dimension, uniqueness, representatives.
    Report {
        model: PathBuf,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Rewrite a model file (including presets) in dense form.
    Export {
        model: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write a named state of the four-site XXZ chain.
    PresetState {
        #[arg(value_parser = clap::builder::PossibleValuesParser::new(commands::PRESET_STATES))]
        name: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn run(cli: Cli) -> Result<commands::Outcome> {
    let mut tol = tolerances_from_env()?;
    match cli.command {
        Command::Spectrum { model, json } => commands::spectrum(&model, opt(&json), &tol),
        Command::Membership {
            model,
            steady,
            initial,
            tol: member,
            json,
        } => {
            if let Some(m) = member {
                tol.member = m;
                tol.validate()?;
            }
            let args = MembershipArgs {
                model: &model,
                steady: &steady,
                initial: &initial,
                json_out: opt(&json),
            };
            commands::membership_cmd(&args, &tol)
        }
        Command::Evolve {
            model,
            initial,
            reference,
            tmax,
            steps,
            csv,
        } => {
            let args = EvolveArgs {
                model: &model,
                initial: &initial,
                reference: opt(&reference),
                tmax,
                steps,
                csv_out: opt(&csv),
            };
            commands::evolve(&args, &tol)
        }
        Command::Report { model, json } => commands::report(&model, opt(&json), &tol),
        Command::Export { model, out } => commands::export(&model, opt(&out), &tol),
        Command::PresetState { name, out } => commands::preset_state(&name, opt(&out), &tol),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(outcome) => {
            if !outcome.stdout.is_empty() {
                let mut out = std::io::stdout().lock();
                let _ = out.write_all(outcome.stdout.as_bytes());
                if !outcome.stdout.ends_with('\n') {
                    let _ = out.write_all(b"\n");
                }
            }
            ExitCode::from(outcome.code as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
