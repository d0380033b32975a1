//! Front end of `addel`: curve files in, classification and conic
//! addition/deletion reports out.

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use addel_core::addel::Direction;

pub mod commands;
pub mod config;
pub mod error;
pub mod field;
pub mod report;
pub mod search;
pub mod suite;

use config::{FieldMode, Format, RunConfig};
use error::{exit, CliError};
use report::Report;

#[derive(Debug, Parser)]
#[command(name = "addel", version, about = "Freeness of plane curves under addition and deletion of conics")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub global: GlobalArgs,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// Work over F_p: the given prime, or random 31-bit primes with a
    /// majority vote.
    #[arg(long, global = true, num_args = 0..=1, value_name = "PRIME")]
    pub modular: Option<Option<u64>>,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Largest degree scanned by the classifier (default 2d).
    #[arg(long, global = true)]
    pub cap: Option<u32>,
    /// Height bound of the rational point search on conics.
    #[arg(long, global = true, default_value_t = 100)]
    pub height_bound: u64,
    #[arg(long, global = true)]
    pub json: bool,
    /// Print warnings to stderr.
    #[arg(short, long, global = true)]
    pub verbose: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Classify a curve and check the count constraints of its components.
    Analyze {
        #[arg(long)]
        curve: PathBuf,
    },
    /// Delete a smooth conic component from a free curve.
    Delete {
        #[arg(long)]
        curve: PathBuf,
        #[arg(long)]
        conic: String,
    },
    /// Add a smooth conic to a free curve.
    Add {
        #[arg(long)]
        curve: PathBuf,
        #[arg(long)]
        conic: String,
    },
    /// Run the built-in regression scenarios.
    PaperSuite {
        /// Directory overriding the built-in curve files.
        #[arg(long)]
        fixtures: Option<PathBuf>,
    },
    /// Classify random arrangements of lines and conics.
    Search {
        /// e.g. `lines=3,conics=1,height=1`
        #[arg(long, default_value = "lines=3,conics=1,height=1")]
        components: String,
        #[arg(long, default_value_t = 100)]
        trials: usize,
    },
}

impl GlobalArgs {
    pub fn config(&self) -> RunConfig {
        RunConfig {
            field: match self.modular {
                None => FieldMode::Rational,
                Some(prime) => FieldMode::Modular { prime },
            },
            seed: self.seed,
            cap: self.cap,
            height_bound: self.height_bound,
            format: if self.json { Format::Json } else { Format::Human },
            verbose: self.verbose,
        }
    }
}

fn read_curve(path: &PathBuf) -> Result<addel_core::curve::CurveSpec, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    commands::load_curve(&text).map_err(|e| match e {
        CliError::Input(m) => CliError::Input(format!("{}: {m}", path.display())),
        e => e,
    })
}

fn dispatch(cli: &Cli, cfg: &RunConfig, out: &mut dyn Write) -> Result<Report, CliError> {
    match &cli.command {
        Command::Analyze { curve } => commands::analyze(read_curve(curve)?, cfg),
        Command::Delete { curve, conic } => commands::triple(read_curve(curve)?, conic, Direction::Deletion, cfg),
        Command::Add { curve, conic } => commands::triple(read_curve(curve)?, conic, Direction::Addition, cfg),
        Command::PaperSuite { fixtures } => suite::paper_suite(cfg, fixtures.as_deref()),
        Command::Search { components, trials } => {
            let params = search::SearchParams { components: components.parse()?, trials: *trials };
            search::search(cfg, &params, |line| {
                let _ = writeln!(out, "{line}");
            })
        }
    }
}

/// Runs `cli`, writing the report to `out` and diagnostics to `err`;
/// returns the exit code.
pub fn run(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let cfg = cli.global.config();
    match dispatch(cli, &cfg, out) {
        Ok(report) => {
            let text = match (cfg.format, &report.result) {
                // search lines are JSON already; the summary follows as one line
                (Format::Json, report::Payload::Search(_)) => serde_json::to_string(&report).expect("serializable"),
                (Format::Json, _) => report.to_json(),
                (Format::Human, _) => report.render(),
            };
            let _ = writeln!(out, "{}", text.trim_end());
            if cfg.verbose {
                for w in &report.warnings {
                    let _ = writeln!(err, "warning: {w}");
                }
            }
            if report.is_mismatch() {
                exit::MISMATCH
            } else {
                exit::OK
            }
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}
