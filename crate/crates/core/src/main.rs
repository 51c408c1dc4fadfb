use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use qbit_core::algorithms::OracleId;
use qbit_core::cli::{
    budget_report, dj_report, ghz_report, nmr_sep_report, parse_circuit, run_program, to_json,
};
use qbit_core::nmr::PureKind;

#[derive(Parser)]
#[command(
    name = "qbit",
    version,
    about = "Small-register quantum computation simulator"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a circuit file and report the outcome distribution
    Run {
        file: PathBuf,
        /// Also draw one outcome with this RNG seed
        #[arg(long)]
        sample: Option<u64>,
    },
    /// Deutsch-Jozsa on one of f1..f4
    Dj {
        #[arg(long)]
        function: OracleId,
    },
    /// Prepare the GHZ state by the rotation + XOR cascade
    Ghz {
        #[arg(long, default_value_t = 3)]
        n: usize,
    },
    /// Decoherence budget against the factoring cost of a `bits`-bit number
    Budget {
        #[arg(long)]
        tau_dec: f64,
        #[arg(long)]
        tau_op: f64,
        #[arg(long)]
        bits: u32,
    },
    /// Separability of an NMR pseudo-pure state
    NmrSep {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        epsilon: f64,
        #[arg(long)]
        pure: PureKind,
    },
}

fn execute(command: Command) -> Result<String, String> {
    let json = match command {
        Command::Run { file, sample } => {
            let text = fs::read_to_string(&file).map_err(|e| format!("{}: {e}", file.display()))?;
            let program = parse_circuit(&text).map_err(|e| format!("{}: {e}", file.display()))?;
            let report = run_program(&program).map_err(|e| e.to_string())?;
            let report = match sample {
                Some(seed) => report.with_sample(seed),
                None => report,
            };
            to_json(&report)
        }
        Command::Dj { function } => to_json(&dj_report(function).map_err(|e| e.to_string())?),
        Command::Ghz { n } => to_json(&ghz_report(n).map_err(|e| e.to_string())?),
        Command::Budget {
            tau_dec,
            tau_op,
            bits,
        } => to_json(&budget_report(tau_dec, tau_op, bits).map_err(|e| e.to_string())?),
        Command::NmrSep { n, epsilon, pure } => {
            to_json(&nmr_sep_report(n, epsilon, pure).map_err(|e| e.to_string())?)
        }
    };
    Ok(json)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli.command) {
        Ok(json) => {
            println!("{json}");
            ExitCode::SUCCESS
        }
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::FAILURE
        }
    }
}
