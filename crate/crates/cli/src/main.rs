use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

mod commands;

/// Convex capacities, Choquet integrals, and conditioning rules.
///
/// Exit status: 0 on success, 1 when a checked property fails, 2 on bad
/// input. Set CHOQUET_TOL to override the numeric tolerance (testing only).
#[derive(Debug, Parser)]
#[command(name = "capupdate", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Write the result here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check that a capacity is normalized, monotone and convex.
    Validate {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Generate a random convex capacity.
    Generate {
        /// belief-function, epsilon-contamination or additive.
        #[arg(long)]
        kind: String,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        epsilon: Option<f64>,
        /// Number of focal draws for belief functions.
        #[arg(long)]
        focal_sets: Option<usize>,
    },
    /// Condition a capacity on an event.
    Update {
        #[arg(long = "in")]
        input: PathBuf,
        /// Conditioning event, as `|`-joined state labels.
        #[arg(long)]
        event: String,
        #[command(flatten)]
        rule: RuleArgs,
    },
    /// Vertices of the core of a convex capacity.
    CoreVertices {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Choquet integral of an act.
    Choquet {
        #[arg(long = "in")]
        input: PathBuf,
        /// Utilities in state order, comma-separated.
        #[arg(long, value_delimiter = ',', num_args = 1.., allow_negative_numbers = true)]
        act: Vec<f64>,
    },
    /// Compare the extended update with the lower envelope of the mixed
    /// credal set, on every nonnull event and weight in the grid.
    #[command(name = "check-prop1")]
    CheckEnvelope {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, value_delimiter = ',', default_value = "0,0.25,0.5,0.75,1")]
        alpha_grid: Vec<f64>,
    },
    /// Decide whether a credal set is the core of a convex capacity.
    CheckComonotonic {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Sample the three updating axioms against a rule.
    CheckAxioms {
        #[arg(long)]
        prior: PathBuf,
        #[command(flatten)]
        rule: RuleArgs,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Non-vacuous instances per axiom.
        #[arg(long, default_value_t = 500)]
        samples: usize,
    },
    /// Recover the weight of the extended update from a posterior.
    InferAlpha {
        #[arg(long)]
        prior: PathBuf,
        #[arg(long)]
        posterior: PathBuf,
        #[arg(long)]
        event: String,
    },
}

#[derive(Debug, Clone, Args)]
pub struct RuleArgs {
    /// ds, fh, erml, hybrid-event, hybrid-act or perturbed.
    #[arg(long, default_value = "erml")]
    pub rule: String,
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Second weight for the hybrid rules.
    #[arg(long)]
    pub alt_alpha: Option<f64>,
    /// Event shifted by the perturbed rule.
    #[arg(long)]
    pub target: Option<String>,
    #[arg(long)]
    pub delta: Option<f64>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Ok(raw) = std::env::var("CHOQUET_TOL") {
        match raw.trim().parse::<f64>() {
            Ok(tol) if capupdate::set_tolerance(tol) => {}
            _ => {
                eprintln!("error: CHOQUET_TOL must be a non-negative number, got `{raw}`");
                return ExitCode::from(2);
            }
        }
    }
    match commands::run(&cli.command) {
        Ok(outcome) => {
            let mut text = serde_json::to_string_pretty(&outcome.report).expect("reports serialize");
            text.push('\n');
            let written = match &cli.out {
                Some(path) => std::fs::write(path, text)
                    .map_err(|e| format!("cannot write {}: {e}", path.display())),
                None => {
                    print!("{text}");
                    Ok(())
                }
            };
            if let Err(e) = written {
                eprintln!("error: {e}");
                return ExitCode::from(2);
            }
            if outcome.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
