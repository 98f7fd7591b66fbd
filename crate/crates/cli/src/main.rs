//! `sve`: batch front end for shared value economics computations.

mod commands;
mod error;
mod io;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use crate::error::CliError;

#[derive(Parser, Debug)]
#[command(name = "sve", version, about = "Shared value games, compromise programming and value creation metrics")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// JSON input file.
    #[arg(long)]
    pub input: PathBuf,
    /// Directory for CSV curve output.
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
    /// Seed for Monte Carlo estimates.
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    /// Tolerance for core and convexity inequalities.
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Convexity, core and shared value status of a game.
    Classify(Common),
    /// Core non-emptiness with a witness payoff (exit 1 when empty).
    CoreCheck(Common),
    /// Supermodularity check with the first violating pair.
    Convexity(Common),
    /// Compromise programming on a bicriteria frontier.
    Cp(Common),
    /// Weighted goal programming.
    Gp(Common),
    /// Shared value creation between two frontiers, point sets or GP objectives.
    Svc(Common),
    /// Carpooling marketplace accounting and its rider/regulator game.
    Carpool {
        #[command(flatten)]
        common: Common,
        /// Chosen trip indices; defaults to the surplus-optimal assignment.
        #[arg(long, value_delimiter = ',')]
        assignment: Option<Vec<usize>>,
    },
    /// Equality versus benefits frontier of the law firm model.
    Equality {
        #[command(flatten)]
        common: Common,
        /// Bargaining weights `w1,w2` for the paradox check.
        #[arg(long, value_delimiter = ',', num_args = 1)]
        weights: Option<Vec<f64>>,
    },
    /// Feasible coalitions of a game's graph and the best coalition structure.
    Coalitions {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 2)]
        min_size: usize,
    },
}

fn run(command: Command) -> Result<commands::Outcome, CliError> {
    let common = match &command {
        Command::Classify(c)
        | Command::CoreCheck(c)
        | Command::Convexity(c)
        | Command::Cp(c)
        | Command::Gp(c)
        | Command::Svc(c) => c,
        Command::Carpool { common, .. }
        | Command::Equality { common, .. }
        | Command::Coalitions { common, .. } => common,
    };
    if !(common.tol.is_finite() && common.tol > 0.0) {
        return Err(CliError::Input(format!("--tol must be positive, got {}", common.tol)));
    }
    match &command {
        Command::Classify(c) => commands::classify(c),
        Command::CoreCheck(c) => commands::core_check(c),
        Command::Convexity(c) => commands::convexity(c),
        Command::Cp(c) => commands::cp(c),
        Command::Gp(c) => commands::gp(c),
        Command::Svc(c) => commands::svc(c),
        Command::Carpool { common, assignment } => commands::carpool(common, assignment.as_deref()),
        Command::Equality { common, weights } => commands::equality(common, weights.as_deref()),
        Command::Coalitions { common, min_size } => commands::coalitions(common, *min_size),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli.command) {
        Ok(outcome) => {
            for w in &outcome.warnings {
                eprintln!("warning: {w}");
            }
            print!("{}", io::render(outcome.json));
            ExitCode::from(outcome.exit_code)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
