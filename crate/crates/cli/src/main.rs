use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use gradsym_cli::{load_config, run, Command, GenmetricOp, Options, Outcome, Suite};

#[derive(Parser)]
#[command(name = "gradsym", version, about = "Exact checks for graded symplectic algebroids")]
struct Cli {
    /// Path to the JSON configuration.
    #[arg(short, long, global = true, default_value = "gradsym.json")]
    config: String,
    /// Emit the machine-readable report.
    #[arg(long, global = true)]
    json: bool,
    /// Maximum total degree of random polynomial coefficients.
    #[arg(long, global = true)]
    max_coeff_degree: Option<u32>,
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Evaluate (Θ, Θ).
    CheckMaster,
    /// Check Q² = 0 on generators and random elements.
    QSquare {
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Derived Dorfman bracket of two named sections.
    Bracket {
        #[arg(long = "A", alias = "a")]
        a: String,
        #[arg(long = "B", alias = "b")]
        b: String,
    },
    /// Run an axiom suite.
    Axioms {
        #[arg(long, value_enum)]
        suite: SuiteArg,
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Module ranks by degree.
    Rank {
        #[arg(long)]
        n: Option<u32>,
    },
    /// Closure of the twist and its potentials.
    Classify,
    /// Generalised metric operations.
    Genmetric {
        #[arg(value_enum)]
        op: OpArg,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum SuiteArg {
    Courant,
    Leibniz,
}

#[derive(Clone, Copy, ValueEnum)]
enum OpArg {
    Build,
    Act,
    Extract,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let command = match cli.command {
        Cmd::CheckMaster => Command::CheckMaster,
        Cmd::QSquare { samples, seed } => Command::QSquare { samples, seed },
        Cmd::Bracket { a, b } => Command::Bracket { a, b },
        Cmd::Axioms { suite, trials, seed } => Command::Axioms {
            suite: match suite {
                SuiteArg::Courant => Suite::Courant,
                SuiteArg::Leibniz => Suite::Leibniz,
            },
            trials,
            seed,
        },
        Cmd::Rank { n } => Command::Rank { n },
        Cmd::Classify => Command::Classify,
        Cmd::Genmetric { op } => Command::Genmetric(match op {
            OpArg::Build => GenmetricOp::Build,
            OpArg::Act => GenmetricOp::Act,
            OpArg::Extract => GenmetricOp::Extract,
        }),
    };
    let env_seed = std::env::var("GB_SEED").ok().and_then(|s| s.trim().parse().ok());
    let opts = Options { max_coeff_degree: cli.max_coeff_degree, env_seed };
    let outcome = match load_config(&cli.config) {
        Ok(cfg) => run(&command, &cfg, &opts),
        Err(e) => Outcome::error(command.name(), e),
    };
    let text = outcome.render(cli.json);
    if outcome.exit_code() == 2 && !cli.json {
        eprint!("{text}");
    } else {
        print!("{text}");
    }
    ExitCode::from(outcome.exit_code() as u8)
}
