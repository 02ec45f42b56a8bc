//! Command-line front end.
//!
//! Exit status: 0 on success, 1 on invalid input or an inconsistent report,
//! 2 when the solver stops without meeting its convergence tolerances.
//! Set `RAYON_NUM_THREADS=1` to force single-threaded execution.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};

use chancal::io::{
    emit_plot_data, evaluate, load_config, load_dataset, load_report, reconstruct_dataset,
    run_pipeline, write_dataset, write_report, RunConfig, RunReport,
};
use chancal::reconstruct::sweep_lambda;
use chancal::sim::simulate_run;

#[derive(Parser)]
#[command(name = "chancal", version, about = "Channel transmittance and noise statistics from photon-number-resolved counts")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// JSON run configuration.
    #[arg(long)]
    config: PathBuf,
    /// Overrides the seed in the configuration.
    #[arg(long)]
    seed: Option<u64>,
    /// Output path (file or directory, depending on the subcommand).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate photocount histograms and write a dataset CSV.
    Simulate(Common),
    /// Reconstruct noise statistics and transmittance from a dataset.
    Reconstruct {
        #[command(flatten)]
        common: Common,
        /// Dataset CSV; simulated from the configuration when omitted.
        #[arg(long)]
        dataset: Option<PathBuf>,
    },
    /// Recompute every derived number of a report and write plot tables.
    Evaluate {
        /// Report JSON written by `reconstruct` or `pipeline`.
        #[arg(long)]
        report: PathBuf,
        /// Directory for plot tables.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Simulate, reconstruct and write dataset, report and plot tables.
    Pipeline(Common),
    /// Misfit and penalty over a range of regularization weights.
    SweepLambda {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        dataset: Option<PathBuf>,
        /// Comma-separated weights; defaults to 1e-10, 1e-9, ..., 1e-2.
        #[arg(long, value_delimiter = ',')]
        lambdas: Option<Vec<f64>>,
    },
}

enum Outcome {
    Done,
    NotConverged,
}

fn config_with_seed(common: &Common) -> anyhow::Result<RunConfig> {
    let mut cfg = load_config(&common.config)
        .with_context(|| format!("loading {}", common.config.display()))?;
    if let Some(seed) = common.seed {
        cfg.seed = seed;
    }
    Ok(cfg)
}

fn out_dir(common: &Common, cfg: &RunConfig) -> PathBuf {
    common.out.clone().unwrap_or_else(|| cfg.output.dir.clone())
}

fn ensure_parent(path: &Path) -> anyhow::Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    }
    Ok(())
}

fn summarize(report: &RunReport) -> Outcome {
    let body = &report.comparable_body;
    let r = &body.result;
    println!("tau = {}", r.tau);
    println!("noise fidelity = {}", body.fidelity.distribution_fidelity);
    let min_fi = body
        .fidelity
        .setting_fidelities
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min);
    println!("min setting fidelity = {min_fi}");
    println!("objective = {} after {} iterations", r.objective, r.iterations);
    if r.converged {
        Outcome::Done
    } else {
        eprintln!(
            "warning: not converged (projected gradient {}, tau bracket {})",
            r.projected_gradient_norm, r.tau_interval
        );
        Outcome::NotConverged
    }
}

fn dataset_for(common: &Common, cfg: &RunConfig, path: &Option<PathBuf>) -> anyhow::Result<chancal::sim::EmpiricalDataset> {
    match path {
        Some(p) => load_dataset(p).with_context(|| format!("loading {}", p.display())),
        None => Ok(simulate_run(&cfg.simulation()?)?),
    }
    .with_context(|| format!("preparing data for {}", common.config.display()))
}

fn run(cli: Cli) -> anyhow::Result<Outcome> {
    match cli.command {
        Command::Simulate(common) => {
            let cfg = config_with_seed(&common)?;
            let ds = simulate_run(&cfg.simulation()?)?;
            let path = common
                .out
                .clone()
                .unwrap_or_else(|| cfg.output.dir.join("dataset.csv"));
            ensure_parent(&path)?;
            write_dataset(&ds, &path)?;
            println!("wrote {}", path.display());
            Ok(Outcome::Done)
        }
        Command::Reconstruct { common, dataset } => {
            let cfg = config_with_seed(&common)?;
            let ds = dataset_for(&common, &cfg, &dataset)?;
            let report = reconstruct_dataset(&cfg, &ds)?;
            let path = common
                .out
                .clone()
                .unwrap_or_else(|| cfg.output.dir.join("report.json"));
            ensure_parent(&path)?;
            write_report(&report, &path)?;
            println!("wrote {}", path.display());
            Ok(summarize(&report))
        }
        Command::Evaluate { report, out } => {
            let rep = load_report(&report).with_context(|| format!("loading {}", report.display()))?;
            let mismatches = evaluate(&rep)?;
            if !mismatches.is_empty() {
                bail!("report is inconsistent in: {}", mismatches.join(", "));
            }
            println!("report reproduces bit for bit");
            let dir = out.unwrap_or_else(|| report.parent().unwrap_or(Path::new(".")).to_path_buf());
            for p in emit_plot_data(&rep, &dir)? {
                println!("wrote {}", p.display());
            }
            Ok(summarize(&rep))
        }
        Command::Pipeline(common) => {
            let cfg = config_with_seed(&common)?;
            let dir = out_dir(&common, &cfg);
            let report = run_pipeline(&cfg)?;
            std::fs::create_dir_all(&dir).with_context(|| format!("creating {}", dir.display()))?;
            write_dataset(&report.comparable_body.dataset, dir.join("dataset.csv"))?;
            write_report(&report, dir.join("report.json"))?;
            emit_plot_data(&report, &dir)?;
            println!("wrote results to {}", dir.display());
            Ok(summarize(&report))
        }
        Command::SweepLambda {
            common,
            dataset,
            lambdas,
        } => {
            let cfg = config_with_seed(&common)?;
            let ds = dataset_for(&common, &cfg, &dataset)?;
            let lambdas =
                lambdas.unwrap_or_else(|| (-10..=-2).map(|e| 10f64.powi(e)).collect());
            let points = sweep_lambda(&cfg.problem(&ds)?, &lambdas)?;
            let path = common
                .out
                .clone()
                .unwrap_or_else(|| cfg.output.dir.join("lcurve.csv"));
            ensure_parent(&path)?;
            let mut w = csv::Writer::from_path(&path)?;
            w.write_record(["lambda", "misfit", "penalty", "tau", "converged"])?;
            for p in &points {
                w.write_record([
                    p.lambda.to_string(),
                    p.misfit.to_string(),
                    p.penalty.to_string(),
                    p.tau.to_string(),
                    p.converged.to_string(),
                ])?;
            }
            w.flush()?;
            println!("wrote {}", path.display());
            if points.iter().all(|p| p.converged) {
                Ok(Outcome::Done)
            } else {
                Ok(Outcome::NotConverged)
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(Outcome::Done) => ExitCode::SUCCESS,
        Ok(Outcome::NotConverged) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
