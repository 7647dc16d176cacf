use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Result;
use clap::{Parser, Subcommand};
use k3twist::battery::BatteryOptions;
use k3twist::scenario_file::load_scenario;

#[derive(Parser)]
#[command(
    name = "k3twist",
    version,
    about = "Exact lattice and stability checks for a twisted degree-2 K3"
)]
struct Cli {
    /// Scenario JSON file; the built-in default is used when absent.
    #[arg(long, global = true)]
    scenario: Option<PathBuf>,
    /// Emit the machine-readable report.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the full verification battery.
    Verify {
        #[arg(long, default_value_t = 8)]
        max_coeff: u32,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        #[arg(long, default_value_t = BatteryOptions::default().seed)]
        seed: u64,
    },
    /// Walls between two Mukai vectors.
    Walls {
        #[arg(long)]
        v: String,
        #[arg(long)]
        w: String,
    },
    /// Destabilizer candidates for a vector at a fixed m.
    Scan {
        #[arg(long, default_value = "J")]
        v: String,
        #[arg(long)]
        m: String,
        #[arg(long, default_value_t = 8)]
        max_coeff: u32,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
    /// Gram matrix of the twisted Picard lattice.
    Picard,
    /// Euler characteristic of a sum of line bundles on the plane.
    Chi {
        #[arg(long)]
        preset: Option<String>,
        /// Twists of the summands, e.g. `0,-1,-1,-1,-2,-2,-2,-3`.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        twists: Vec<i64>,
    },
    /// Does a binary form represent an integer?
    Represent {
        /// Row-major entries a,b,b,c.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        gram: Vec<i64>,
        #[arg(long)]
        target: i64,
        #[arg(long, default_value_t = 64)]
        bound: u64,
    },
}

fn run(cli: Cli) -> Result<i32> {
    let json = cli.json;
    let out = match cli.command {
        Command::Verify {
            max_coeff,
            jobs,
            seed,
        } => {
            let sc = load_scenario(cli.scenario.as_deref())?;
            let opts = BatteryOptions {
                max_coeff,
                jobs,
                seed,
            };
            let report = k3twist::verify(&sc, &opts);
            if json {
                println!("{}", report.to_json());
            } else {
                print!("{}", report.to_text());
            }
            return Ok(report.exit);
        }
        Command::Walls { v, w } => {
            k3twist::walls(&load_scenario(cli.scenario.as_deref())?, &v, &w)?
        }
        Command::Scan {
            v,
            m,
            max_coeff,
            jobs,
        } => k3twist::scan(
            &load_scenario(cli.scenario.as_deref())?,
            &v,
            &m,
            max_coeff,
            jobs,
        )?,
        Command::Picard => k3twist::picard(&load_scenario(cli.scenario.as_deref())?)?,
        Command::Chi { preset, twists } => k3twist::chi(preset.as_deref(), &twists)?,
        Command::Represent {
            gram,
            target,
            bound,
        } => k3twist::represent(&gram, target, bound)?,
    };
    print!("{}", out.render(json));
    Ok(out.report.exit)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
