use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};

use rfh_core::commands::{self, Report, EXIT_PARSE};
use rfh_core::rational::parse_rational;
use rfh_core::{Rational, Scenario};

#[derive(Parser)]
#[command(
    name = "rfh",
    about = "Filtered Rabinowitz Floer chain complex of a negative line bundle"
)]
struct Cli {
    /// Scenario file.
    #[arg(long, global = true)]
    scenario: Option<PathBuf>,
    /// Seed for random tables and cycles (defaults to the scenario seed).
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check bundle parameters and the differential table.
    Validate,
    /// List the generators of a slice.
    Enumerate {
        /// Doubled degree (odd).
        #[arg(long, allow_hyphen_values = true)]
        degree: i64,
        #[arg(long, value_parser = rational, allow_hyphen_values = true)]
        floor: Rational,
        /// Level window LO:HI.
        #[arg(long, value_parser = window, allow_hyphen_values = true, default_value = "-12:12")]
        window: (i64, i64),
        #[arg(long, value_parser = rational, allow_hyphen_values = true)]
        ceiling: Option<Rational>,
    },
    /// Apply the differential to a named cycle.
    Diff {
        #[arg(long)]
        cycle: String,
    },
    /// Build and verify a primitive of a named cycle.
    Primitive {
        #[arg(long)]
        cycle: String,
    },
    /// Run the property suite on the scenario.
    Check,
}

fn rational(s: &str) -> Result<Rational, String> {
    parse_rational(s)
}

fn window(s: &str) -> Result<(i64, i64), String> {
    let (lo, hi) = s.split_once(':').ok_or("expected LO:HI")?;
    let lo = lo
        .trim()
        .parse()
        .map_err(|_| format!("invalid bound `{lo}`"))?;
    let hi = hi
        .trim()
        .parse()
        .map_err(|_| format!("invalid bound `{hi}`"))?;
    Ok((lo, hi))
}

fn run(cli: Cli) -> Report {
    let Some(path) = cli.scenario else {
        return Report {
            text: "error: --scenario is required\n".into(),
            code: EXIT_PARSE,
        };
    };
    let scenario = match Scenario::load(&path) {
        Ok(s) => s,
        Err(e) => return commands::error_report(&e),
    };
    let seed = cli.seed.unwrap_or(scenario.seed);
    match cli.command {
        Command::Validate => commands::cmd_validate(&scenario, seed),
        Command::Enumerate {
            degree,
            floor,
            window,
            ceiling,
        } => commands::cmd_enumerate(&scenario, degree, floor, window, ceiling)
            .unwrap_or_else(|e| commands::error_report(&e)),
        Command::Diff { cycle } => commands::cmd_diff(&scenario, &cycle, seed),
        Command::Primitive { cycle } => commands::cmd_primitive(&scenario, &cycle, seed),
        Command::Check => commands::cmd_check(&scenario, seed),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(EXIT_PARSE as u8),
            };
        }
    };
    let report = run(cli);
    print!("{}", report.text);
    ExitCode::from(report.code as u8)
}
