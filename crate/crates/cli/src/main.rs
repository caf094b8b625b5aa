//! `wcf`: honest statistics, cheating bounds, operating points and
//! verification for the single-photon weak coin flipping protocol.

mod commands;
mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use config::Format;

#[derive(Debug, Parser)]
#[command(name = "wcf", version, about = "Single-photon weak coin flipping toolkit")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Args)]
pub struct CommonArgs {
    /// JSON run configuration; flags override its values.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Write results here instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Photon-number cap of the Fock simulations.
    #[arg(long, global = true, value_name = "N")]
    pub truncation: Option<usize>,
    /// Also run the eigenvalue oracle (cheat).
    #[arg(long, global = true)]
    pub oracle: bool,
}

#[derive(Debug, Args, Default)]
pub struct ParamArgs {
    #[arg(long)]
    pub x: Option<f64>,
    #[arg(long)]
    pub y: Option<f64>,
    #[arg(long)]
    pub z: Option<f64>,
}

#[derive(Debug, Args, Default)]
pub struct LossArgs {
    /// Transmission of the channel between the parties.
    #[arg(long)]
    pub eta_t: Option<f64>,
    #[arg(long)]
    pub eta_f_a: Option<f64>,
    #[arg(long)]
    pub eta_f_b: Option<f64>,
    #[arg(long)]
    pub eta_d_a: Option<f64>,
    #[arg(long)]
    pub eta_d_b: Option<f64>,
    /// Dark-count probability of the threshold detectors.
    #[arg(long)]
    pub p_dc: Option<f64>,
}

impl LossArgs {
    pub fn any(&self) -> bool {
        [self.eta_t, self.eta_f_a, self.eta_f_b, self.eta_d_a, self.eta_d_b, self.p_dc]
            .iter()
            .any(Option::is_some)
    }
}

#[derive(Debug, Args, Default)]
pub struct LinkArgs {
    #[arg(long)]
    pub attenuation_db_per_km: Option<f64>,
    #[arg(long)]
    pub switch_time_ns: Option<f64>,
    #[arg(long)]
    pub group_velocity_km_per_s: Option<f64>,
}

#[derive(Debug, Args, Default)]
pub struct RangeArgs {
    /// Explicit comma-separated distances in km.
    #[arg(long, value_delimiter = ',', conflicts_with_all = ["d_start", "d_stop", "d_step"])]
    pub distances: Option<Vec<f64>>,
    #[arg(long)]
    pub d_start: Option<f64>,
    #[arg(long)]
    pub d_stop: Option<f64>,
    #[arg(long)]
    pub d_step: Option<f64>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Honest outcome distribution, closed form against Fock simulation.
    Honest {
        #[command(flatten)]
        params: ParamArgs,
        #[command(flatten)]
        losses: LossArgs,
    },
    /// Optimal cheating probabilities of both parties.
    Cheat {
        #[command(flatten)]
        params: ParamArgs,
        #[command(flatten)]
        losses: LossArgs,
    },
    /// Fair and balanced operating point for one link or loss budget.
    Solve {
        #[arg(long)]
        z: Option<f64>,
        /// Detector efficiency of both parties.
        #[arg(long)]
        eta_d: Option<f64>,
        #[arg(long)]
        distance: Option<f64>,
        #[command(flatten)]
        link: LinkArgs,
        #[command(flatten)]
        losses: LossArgs,
    },
    /// Operating points over a range of distances.
    Sweep {
        #[arg(long)]
        z: Option<f64>,
        #[arg(long)]
        eta_d: Option<f64>,
        #[command(flatten)]
        link: LinkArgs,
        #[command(flatten)]
        range: RangeArgs,
    },
    /// Strong coin flip built from an unbalanced weak one.
    Scf,
    /// Run the property suite.
    Verify {
        #[arg(long)]
        seed: Option<u64>,
        /// Random states per randomized check.
        #[arg(long)]
        samples: Option<usize>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(code) => code,
        Err(commands::Failure::Config(e)) => {
            eprintln!("wcf: configuration error: {e:#}");
            ExitCode::from(2)
        }
        Err(commands::Failure::Compute(e)) => {
            eprintln!("wcf: {e:#}");
            ExitCode::from(1)
        }
    }
}
