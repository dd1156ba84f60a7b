mod commands;
mod input;
mod report;

use std::io::Write;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use report::{CliError, Outcome};

#[derive(Debug, Parser)]
#[command(name = "arrform", version, about = "Formality, weak perspective representations, rigidity and Betti tables of arrangements")]
struct Cli {
    /// Exit with status 1 when the command's yes/no verdict is negative.
    #[arg(long, global = true)]
    assert: bool,
    /// Human-readable output: the Betti table grid for `betti`, indented JSON otherwise.
    #[arg(long, global = true)]
    pretty: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Whether the relation space is generated by relations of length three (or K).
    Formality {
        file: String,
        #[arg(long, default_value_t = 3)]
        rank: usize,
    },
    /// Weak perspective representations up to rank K.
    Wprep {
        file: String,
        #[arg(long)]
        rank: usize,
        /// Also build one arrangement per nontrivial basis vector.
        #[arg(long)]
        realize: bool,
    },
    /// Jacobian ideal against its codimension-K saturation in degree D.
    Jacobian {
        file: String,
        #[arg(long, default_value_t = 2)]
        codim: usize,
        /// Defaults to n - 1.
        #[arg(long)]
        degree: Option<u32>,
    },
    /// Minimal resolution of D_0 for a line arrangement.
    Betti {
        file: String,
    },
    /// Infinitesimal motions of a framework and their parallel redrawings.
    Rigidity {
        file: String,
    },
    /// Emit a named construction as arrangement or framework JSON.
    Gen {
        name: String,
        /// Construction parameter, repeatable.
        #[arg(long = "param", value_name = "KEY=VALUE")]
        params: Vec<String>,
    },
    /// Compare b_{1,n-1}, the saturation quotient and the weak P-Rep count.
    Crosscheck {
        file: String,
    },
    /// Evaluate every corpus entry against its expectations.
    Corpus,
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Formality { .. } => "formality",
            Command::Wprep { .. } => "wprep",
            Command::Jacobian { .. } => "jacobian",
            Command::Betti { .. } => "betti",
            Command::Rigidity { .. } => "rigidity",
            Command::Gen { .. } => "gen",
            Command::Crosscheck { .. } => "crosscheck",
            Command::Corpus => "corpus",
        }
    }
}

fn dispatch(command: &Command) -> Result<Outcome, CliError> {
    match command {
        Command::Formality { file, rank } => commands::formality(&input::read(file)?, *rank),
        Command::Wprep { file, rank, realize } => commands::wprep(&input::read(file)?, *rank, *realize),
        Command::Jacobian { file, codim, degree } => {
            commands::jacobian(&input::read(file)?, *codim, *degree)
        }
        Command::Betti { file } => commands::betti(&input::read(file)?),
        Command::Rigidity { file } => commands::rigidity(&input::read(file)?),
        Command::Gen { name, params } => commands::gen(name, params),
        Command::Crosscheck { file } => commands::crosscheck(&input::read(file)?),
        Command::Corpus => commands::corpus(),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let name = cli.command.name();
    match dispatch(&cli.command) {
        Ok(outcome) => {
            let text = match (&outcome.rendering, cli.pretty) {
                (Some(r), true) => r.clone(),
                (_, true) => serde_json::to_string_pretty(&outcome.body).expect("JSON values serialize"),
                (_, false) => outcome.body.to_string(),
            };
            // a closed pipe is not an error worth reporting
            let _ = writeln!(std::io::stdout(), "{text}");
            if (cli.assert || outcome.strict) && !outcome.holds {
                eprintln!("{name}: asserted verdict is negative");
                return ExitCode::from(1);
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("{name}: {e}");
            let _ = writeln!(std::io::stdout(), "{}", e.to_json(name));
            ExitCode::from(e.exit_code())
        }
    }
}
