mod commands;
mod error;
mod report;
mod spec;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use pht_core::fixtures::RodParameters;

use crate::commands::{CommandOutput, ExampleName};
use crate::error::CliError;
use crate::spec::ProblemSpec;

/// Boundary triplets and boundary-condition classification for implicit
/// port-Hamiltonian systems on an interval.
#[derive(Debug, Parser)]
#[command(name = "pht", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Common {
    /// Problem specification (JSON).
    spec: PathBuf,
    /// Write the JSON report to this file.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Relative rank tolerance.
    #[arg(long)]
    rtol: Option<f64>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Structural checks, defect dimensions and the coercivity certificate.
    Check {
        #[command(flatten)]
        common: Common,
        /// Number of Fourier modes to scan.
        #[arg(long)]
        k_max: Option<usize>,
    },
    /// Boundary matrices, factorizations and boundary maps.
    Triplet {
        #[command(flatten)]
        common: Common,
    },
    /// Classify the boundary conditions given in the spec.
    Classify {
        #[command(flatten)]
        common: Common,
    },
    /// Green-identity residuals on seeded random polynomials.
    Green {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, env = "PHT_SEED", default_value_t = 0)]
        seed: u64,
        /// Maximal polynomial degree (default 2N + 4).
        #[arg(long)]
        degree: Option<usize>,
    },
    /// Sufficient-condition coercivity certificate.
    Coercivity {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        k_max: Option<usize>,
    },
    /// Write a worked example as `<name>.json` plus `<name>.expected.json`.
    Example {
        #[arg(value_enum)]
        name: ExampleName,
        /// Output directory.
        #[arg(long, default_value = ".")]
        dir: PathBuf,
        #[arg(long, default_value_t = 1.0)]
        mu: f64,
        #[arg(long, default_value_t = 1.0)]
        tension: f64,
        #[arg(long, default_value_t = 1.0)]
        kappa: f64,
        #[arg(long = "rho-a", default_value_t = 1.0)]
        rho_a: f64,
    },
}

fn read_spec(path: &Path) -> Result<ProblemSpec, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    ProblemSpec::from_json(&text)
}

fn write_json(path: &Path, value: &serde_json::Value) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(value).expect("report serializes");
    std::fs::write(path, text + "\n").map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn run_spec_command(
    common: &Common,
    k_max: Option<usize>,
    run: impl FnOnce(&ProblemSpec, &pht_core::Tolerances) -> Result<CommandOutput, CliError>,
) -> Result<(), CliError> {
    let spec = read_spec(&common.spec)?;
    let tols = spec.tolerances(common.rtol, k_max)?;
    let output = run(&spec, &tols)?;
    for line in &output.summary {
        println!("{line}");
    }
    if let Some(path) = &common.out {
        write_json(path, &output.report)?;
    }
    output.failure.map_or(Ok(()), Err)
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Check { common, k_max } => run_spec_command(&common, k_max, commands::check),
        Command::Triplet { common } => run_spec_command(&common, None, commands::triplet),
        Command::Classify { common } => run_spec_command(&common, None, commands::classify),
        Command::Green {
            common,
            samples,
            seed,
            degree,
        } => run_spec_command(&common, None, |spec, tols| {
            commands::green(spec, tols, samples, seed, degree)
        }),
        Command::Coercivity { common, k_max } => {
            run_spec_command(&common, k_max, commands::coercivity)
        }
        Command::Example {
            name,
            dir,
            mu,
            tension,
            kappa,
            rho_a,
        } => {
            let params = RodParameters {
                mu,
                tension,
                kappa,
                rho_a,
            };
            params.validate()?;
            let (spec, expected) = commands::example(name, params)?;
            let stem = name.file_stem();
            let spec_path = dir.join(format!("{stem}.json"));
            let expected_path = dir.join(format!("{stem}.expected.json"));
            std::fs::write(&spec_path, spec.to_json_pretty() + "\n")
                .map_err(|e| CliError::Io(format!("{}: {e}", spec_path.display())))?;
            write_json(&expected_path, &expected)?;
            println!(
                "wrote {} and {}",
                spec_path.display(),
                expected_path.display()
            );
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
