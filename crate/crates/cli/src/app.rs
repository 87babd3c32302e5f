use std::ffi::OsString;

use clap::{Args, Parser, Subcommand};

use crate::commands::{self, load_theory, search_config_from_env, DEFAULT_SUITE};
use crate::error::{CliError, CliResult, EXIT_USAGE};
use crate::report::{Report, ReportFormat};

#[derive(Parser, Debug)]
#[command(name = "gpt", version, about = "Phase groups, phase dynamics and interference in GPTs")]
pub struct Cli {
    /// Output format: text, csv or json.
    #[arg(long, global = true, default_value = "text")]
    pub format: ReportFormat,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Inspect, validate or export a theory.
    #[command(subcommand)]
    Theory(TheoryCommand),
    /// Allowed transformation group of a theory.
    AutoGroup {
        theory: String,
        #[arg(long)]
        exclude_reflections: bool,
    },
    /// Phase group of a measurement.
    PhaseGroup {
        theory: String,
        measurement: String,
        #[arg(long)]
        exclude_reflections: bool,
    },
    /// Interferometer outputs for every phase element.
    Interfere {
        theory: String,
        measurement: String,
        /// Also print the full conjugated output state of each row.
        #[arg(long)]
        full_state: bool,
    },
    /// Check that phase dynamics is trivial exactly on classical theories.
    VerifyTheorem {
        /// Comma-separated built-in names or theory file paths.
        #[arg(long, value_delimiter = ',')]
        theories: Option<Vec<String>>,
    },
    /// Floating-point qubit formulas.
    #[command(subcommand)]
    Qubit(QubitCommand),
}

#[derive(Subcommand, Debug)]
pub enum TheoryCommand {
    Show { theory: String },
    Validate { theory: String },
    /// Print the theory as a theory file.
    Export { theory: String },
}

#[derive(Args, Debug)]
pub struct Basis {
    #[arg(long, allow_negative_numbers = true)]
    pub alpha: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub beta: f64,
    /// Gauge A,B,C with A + B + C = 1; default 0,0,1.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub gauge: Option<Vec<f64>>,
}

#[derive(Subcommand, Debug)]
pub enum QubitCommand {
    /// Mach-Zehnder output probabilities for a Z-axis phase.
    Mzi {
        #[arg(long, allow_negative_numbers = true)]
        phi: f64,
        /// Four values l1,l2,l3,l4 of the phase map; default 1,1,0,0.
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        lambda: Option<Vec<f64>>,
    },
    /// Effect covectors of the basis {|e>, |e_perp>}.
    Effects {
        #[command(flatten)]
        basis: Basis,
    },
    /// Probability-coordinate matrix of the unitary mapping Z to that basis.
    Tprob {
        #[command(flatten)]
        basis: Basis,
        #[arg(long, default_value_t = gpt_phase::qubit::DEFAULT_SEED)]
        seed: u64,
    },
}

/// Captured result of one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

fn execute(cli: &Cli) -> CliResult<Report> {
    let cfg = search_config_from_env()?;
    match &cli.command {
        Command::Theory(TheoryCommand::Show { theory }) => commands::theory_show(&load_theory(theory)?, &cfg),
        Command::Theory(TheoryCommand::Validate { theory }) => commands::theory_validate(&load_theory(theory)?),
        Command::Theory(TheoryCommand::Export { theory }) => Ok(commands::theory_export(&load_theory(theory)?)),
        Command::AutoGroup { theory, exclude_reflections } => {
            commands::auto_group(&load_theory(theory)?, *exclude_reflections, &cfg)
        }
        Command::PhaseGroup { theory, measurement, exclude_reflections } => {
            commands::phase_group_cmd(&load_theory(theory)?, measurement, *exclude_reflections, &cfg)
        }
        Command::Interfere { theory, measurement, full_state } => {
            commands::interfere(&load_theory(theory)?, measurement, *full_state, &cfg)
        }
        Command::VerifyTheorem { theories } => {
            let list: Vec<String> = match theories {
                Some(l) => l.iter().map(|s| s.trim().to_string()).collect(),
                None => DEFAULT_SUITE.iter().map(|s| s.to_string()).collect(),
            };
            if list.is_empty() || list.iter().any(|s| s.is_empty()) {
                return Err(CliError::Usage("--theories needs at least one non-empty name".into()));
            }
            commands::verify_theorem_cmd(&list, &cfg)
        }
        Command::Qubit(QubitCommand::Mzi { phi, lambda }) => commands::qubit_mzi(*phi, lambda.as_deref()),
        Command::Qubit(QubitCommand::Effects { basis }) => {
            commands::qubit_effects(basis.alpha, basis.beta, basis.gauge.as_deref())
        }
        Command::Qubit(QubitCommand::Tprob { basis, seed }) => {
            commands::qubit_tprob(basis.alpha, basis.beta, basis.gauge.as_deref(), *seed)
        }
    }
}

pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Outcome { stdout: text, stderr: String::new(), code }
            } else {
                Outcome { stdout: String::new(), stderr: text, code }
            };
        }
    };
    match execute(&cli).and_then(|r| Ok((r.render(cli.format)?, r.exit_code))) {
        Ok((stdout, code)) => Outcome { stdout, stderr: String::new(), code },
        Err(e) => Outcome { stdout: String::new(), stderr: format!("error: {e}\n"), code: e.exit_code() },
    }
}
