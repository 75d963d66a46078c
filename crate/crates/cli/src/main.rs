use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use credence::rational::parse_fraction;
use credence::{ChoiceRule, DEFAULT_ATOM_CAP};

use credence_cli::run::{run_file, CommandKind, Flags};

/// Batch evaluator for uncertain-argument files over exact credal sets.
#[derive(Parser)]
#[command(name = "credence", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct CommonArgs {
    /// Argument files, processed in order.
    #[arg(required = true, value_name = "FILE")]
    files: Vec<PathBuf>,
    /// Emit one JSON document per file instead of human-readable text.
    #[arg(long)]
    json: bool,
    /// Cap on atoms per world space (default 16).
    #[arg(long, value_name = "N")]
    max_atoms: Option<usize>,
}

#[derive(Clone, Copy, ValueEnum)]
enum RuleArg {
    #[value(name = "gamma_maximin", alias = "gamma-maximin")]
    GammaMaximin,
    #[value(name = "interval_dominance", alias = "interval-dominance")]
    IntervalDominance,
}

#[derive(Subcommand)]
enum Command {
    /// Exact probability interval of the query given the premises.
    Eval {
        #[command(flatten)]
        common: CommonArgs,
        /// Also report brute-force grid-oracle bounds at this resolution.
        #[arg(long, value_name = "N")]
        resolution: Option<u32>,
    },
    /// Threshold acceptance: detach the query when its lower probability
    /// reaches the acceptance level.
    Accept {
        #[command(flatten)]
        common: CommonArgs,
        /// Acceptance level, overriding the file's `threshold` line.
        #[arg(long, value_name = "P")]
        threshold: Option<String>,
    },
    /// Rewrite the argument so accepted premises are replaced by their
    /// support blocks, with the total-probability expansion.
    Eliminate {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Conjunction audit: do the query's conjuncts stay acceptable
    /// together?
    Audit {
        #[command(flatten)]
        common: CommonArgs,
        /// Acceptance level, overriding the file's `threshold` line.
        #[arg(long, value_name = "P")]
        threshold: Option<String>,
    },
    /// Interval expected utilities and act selection.
    Decide {
        #[command(flatten)]
        common: CommonArgs,
        /// Selection rule for interval-valued expectations.
        #[arg(long, value_enum, default_value = "gamma_maximin")]
        rule: RuleArg,
    },
    /// Entropy-maximizing admissible distribution.
    Maxent {
        #[command(flatten)]
        common: CommonArgs,
    },
}

fn parse_threshold(text: Option<String>) -> Result<Option<credence::Fraction>, String> {
    match text {
        None => Ok(None),
        Some(t) => parse_fraction(&t).map(Some).map_err(|e| e.to_string()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();

    let (kind, common, mut flags) = match cli.command {
        Command::Eval { common, resolution } => (
            CommandKind::Eval,
            common,
            Flags {
                resolution,
                ..Flags::default()
            },
        ),
        Command::Accept { common, threshold } => {
            let threshold = match parse_threshold(threshold) {
                Ok(t) => t,
                Err(e) => {
                    eprintln!("error: invalid --threshold: {e}");
                    return ExitCode::from(4);
                }
            };
            (
                CommandKind::Accept,
                common,
                Flags {
                    threshold,
                    ..Flags::default()
                },
            )
        }
        Command::Eliminate { common } => (CommandKind::Eliminate, common, Flags::default()),
        Command::Audit { common, threshold } => {
            let threshold = match parse_threshold(threshold) {
                Ok(t) => t,
                Err(e) => {
                    eprintln!("error: invalid --threshold: {e}");
                    return ExitCode::from(4);
                }
            };
            (
                CommandKind::Audit,
                common,
                Flags {
                    threshold,
                    ..Flags::default()
                },
            )
        }
        Command::Decide { common, rule } => {
            let rule = match rule {
                RuleArg::GammaMaximin => ChoiceRule::GammaMaximin,
                RuleArg::IntervalDominance => ChoiceRule::IntervalDominance,
            };
            (
                CommandKind::Decide,
                common,
                Flags {
                    rule,
                    ..Flags::default()
                },
            )
        }
        Command::Maxent { common } => (CommandKind::Maxent, common, Flags::default()),
    };
    flags.max_atoms = common.max_atoms.unwrap_or(DEFAULT_ATOM_CAP);

    let mut worst: i32 = 0;
    for path in &common.files {
        match run_file(kind, path, &flags) {
            Ok(result) => {
                if common.json {
                    println!("{}", result.to_json());
                } else {
                    println!("{}", result.render_human());
                }
                worst = worst.max(result.exit_code());
            }
            Err(failure) => {
                eprintln!("error: {}", failure.message);
                worst = worst.max(failure.exit_code);
            }
        }
    }
    ExitCode::from(worst.clamp(0, 255) as u8)
}
