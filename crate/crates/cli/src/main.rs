use anyhow::{bail, Result};
use clap::{Parser, Subcommand, ValueEnum};
use qcert::certifier::{certify, Direction, SolverSettings};
use qcert::distance::{
    d_op_exact, d_op_fidelity_bound, d_op_frobenius_bound, d_op_norm_bound, d_op_two_design_exact,
    DistanceReport, TwoDesign,
};
use qcert::stats::bhc_epsilon;
use qcert_cli::{config, experiments, files, output};
use std::path::PathBuf;

#[derive(Parser)]
#[command(
    name = "qcert",
    about = "Certified bounds on linear observables of quantum states \
             measured with noisy, finite-shot devices"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum DistanceKindArg {
    Exact,
    Norm,
    Frobenius,
    Fidelity,
    TwoDesign,
}

#[derive(Clone, Copy, ValueEnum)]
enum DirectionArg {
    Min,
    Max,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Svg,
    Both,
}

#[derive(Subcommand)]
enum Command {
    /// Shot-noise radius for N shots, m outcomes and confidence 1 - delta.
    Epsilon {
        #[arg(long)]
        shots: u64,
        #[arg(long)]
        outcomes: usize,
        #[arg(long, default_value_t = 0.003)]
        delta: f64,
    },
    /// Operational distance between two POVM files.
    Dop {
        /// Target (ideal) POVM file.
        #[arg(long)]
        target: PathBuf,
        /// Implemented POVM file.
        #[arg(long)]
        actual: PathBuf,
        #[arg(long, value_enum, default_value_t = DistanceKindArg::Exact)]
        kind: DistanceKindArg,
    },
    /// One-off certified bound from a region file.
    Certify {
        /// Region block (frequencies, radii, confidence).
        #[arg(long)]
        region: PathBuf,
        /// POVM file the region refers to.
        #[arg(long)]
        povm: PathBuf,
        /// Observable file with the objective.
        #[arg(long)]
        objective: PathBuf,
        #[arg(long, value_enum, default_value_t = DirectionArg::Min)]
        direction: DirectionArg,
        #[arg(long, default_value_t = 1e-7)]
        tol: f64,
    },
    /// Run an experiment config and emit its tables and plots.
    Experiment {
        config: PathBuf,
        /// Override the config seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Override the trial count.
        #[arg(long)]
        trials: Option<usize>,
        /// Override the solver tolerance.
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
        #[arg(long, value_enum, default_value_t = FormatArg::Both)]
        format: FormatArg,
    },
}

fn print_report(report: &DistanceReport) {
    println!("kind = {}", report.kind.label());
    println!("value = {}", report.value);
    if let Some(se) = report.std_error {
        println!("std_error = {se}");
    }
    let detail = report
        .detail
        .iter()
        .map(f64::to_string)
        .collect::<Vec<_>>()
        .join(",");
    println!("detail = {detail}");
}

fn main() -> Result<()> {
    let cli = Cli::parse();
    match cli.command {
        Command::Epsilon {
            shots,
            outcomes,
            delta,
        } => {
            println!("{}", bhc_epsilon(shots, outcomes, delta)?);
        }
        Command::Dop {
            target,
            actual,
            kind,
        } => {
            let e = files::read_povm(&target)?;
            let f = files::read_povm(&actual)?;
            let report = match kind {
                DistanceKindArg::Exact => d_op_exact(&e, &f)?,
                DistanceKindArg::Norm => d_op_norm_bound(&e, &f)?,
                DistanceKindArg::Frobenius => d_op_frobenius_bound(&e, &f)?,
                DistanceKindArg::Fidelity => d_op_fidelity_bound(&e, &f)?,
                DistanceKindArg::TwoDesign => {
                    let design = match e.dim() {
                        2 => TwoDesign::qubit_pauli(),
                        4 => TwoDesign::dim4_stabilizer(),
                        d => bail!("no built-in 2-design for dimension {d}"),
                    };
                    d_op_two_design_exact(&e, &f, &design)?
                }
            };
            print_report(&report);
        }
        Command::Certify {
            region,
            povm,
            objective,
            direction,
            tol,
        } => {
            let povm = files::read_povm(&povm)?;
            let region = files::read_region(&region, &povm)?;
            let objective = files::read_observable(&objective)?;
            let direction = match direction {
                DirectionArg::Min => Direction::Min,
                DirectionArg::Max => Direction::Max,
            };
            let settings = SolverSettings {
                tol,
                ..SolverSettings::default()
            };
            let bound = certify(&region, &objective, direction, &settings)?;
            println!("direction,dual_bound,primal_value,residual,status,iterations");
            println!("{}", bound.to_csv_row());
        }
        Command::Experiment {
            config: config_path,
            seed,
            trials,
            tol,
            out_dir,
            format,
        } => {
            let mut config = config::read_config(&config_path)?;
            if let Some(seed) = seed {
                config.seed = seed;
            }
            if let Some(trials) = trials {
                config.n_trials = trials;
            }
            if let Some(tol) = tol {
                config.solver_tol = tol;
            }
            config.validate()?;

            let result = experiments::run(&config)?;
            for (key, value) in &result.meta {
                println!("{key} = {value}");
            }
            std::fs::create_dir_all(&out_dir)?;
            let stem = config.experiment.label();
            if matches!(format, FormatArg::Csv | FormatArg::Both) {
                let path = out_dir.join(format!("{stem}.csv"));
                output::emit_csv(&result, &path)?;
                println!("wrote {}", path.display());
            }
            if matches!(format, FormatArg::Svg | FormatArg::Both) {
                let path = out_dir.join(format!("{stem}.svg"));
                output::emit_svg(&result, &path)?;
                println!("wrote {}", path.display());
            }
        }
    }
    Ok(())
}
