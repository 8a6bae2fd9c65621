//! Benchmark CLI: generate data, run experiments, re-format reports, and run
//! the identity verifier grid.

use clap::{Parser, Subcommand, ValueEnum};
use recipgamma_harness::{
    gen_data, read_csv, read_json, run::aggregate_rows, run_experiment, write_csv, write_json,
    ExperimentSpec, PersistedExperiment,
};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "recipgamma",
    about = "Benchmark harness for data-augmentation shape-parameter samplers"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Generate one replication's synthetic dataset as JSON.
    GenData {
        /// Experiment configuration (JSON).
        #[arg(long)]
        config: PathBuf,
        /// Replication index.
        #[arg(long, default_value_t = 0)]
        rep: usize,
        /// Output path.
        #[arg(long)]
        out: PathBuf,
        /// Override the config's seed.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Run an experiment: all replications, aggregation, report files.
    Run {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
        /// Override the config's replication count.
        #[arg(long)]
        reps: Option<usize>,
        /// Report output path; a `<out>.reps.json` file with per-replication
        /// results is written alongside.
        #[arg(long, default_value = "report.csv")]
        out: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        /// Worker threads (RECIPGAMMA_THREADS overrides).
        #[arg(long, default_value_t = 1)]
        parallel: usize,
    },
    /// Re-emit the aggregate table from persisted replication results.
    Report {
        /// A `.reps.json` file produced by `run`.
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Run the closed-form identity verifier grid and report the residuals.
    VerifyIdentities,
}

fn read_spec(path: &Path) -> Result<ExperimentSpec, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    serde_json::from_str(&text).map_err(|e| format!("cannot parse {}: {e}", path.display()))
}

fn thread_override(parallel: usize) -> usize {
    match std::env::var("RECIPGAMMA_THREADS") {
        Ok(v) => v.parse().unwrap_or(parallel),
        Err(_) => parallel,
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::FAILURE
        }
    }
}

fn run() -> Result<ExitCode, String> {
    let cli = Cli::parse();
    match cli.command {
        Command::GenData {
            config,
            rep,
            out,
            seed,
        } => {
            let mut spec = read_spec(&config)?;
            if let Some(s) = seed {
                spec.seed = s;
            }
            let dataset = gen_data(&spec, rep).map_err(|e| e.to_string())?;
            let text = serde_json::to_string_pretty(&dataset).map_err(|e| e.to_string())?;
            std::fs::write(&out, text)
                .map_err(|e| format!("cannot write {}: {e}", out.display()))?;
            println!("wrote dataset for replication {rep} to {}", out.display());
            Ok(ExitCode::SUCCESS)
        }
        Command::Run {
            config,
            seed,
            reps,
            out,
            format,
            parallel,
        } => {
            let mut spec = read_spec(&config)?;
            if let Some(s) = seed {
                spec.seed = s;
            }
            if let Some(r) = reps {
                spec.replications = r;
            }
            let workers = thread_override(parallel);
            let result = run_experiment(&spec, workers).map_err(|e| e.to_string())?;
            match format {
                Format::Csv => write_csv(&result.rows, &out).map_err(|e| e.to_string())?,
                Format::Json => write_json(&result.rows, &out).map_err(|e| e.to_string())?,
            }
            let reps_path = out.with_extension("reps.json");
            let text = serde_json::to_string_pretty(&result.persisted)
                .map_err(|e| e.to_string())?;
            std::fs::write(&reps_path, text)
                .map_err(|e| format!("cannot write {}: {e}", reps_path.display()))?;
            for (rep, err) in &result.failures {
                eprintln!("replication {rep} failed: {err}");
            }
            println!(
                "{} replications, report at {}, per-replication results at {}",
                result.persisted.reps.len(),
                out.display(),
                reps_path.display()
            );
            for row in &result.rows {
                println!(
                    "  {:>10}  ESS {:>9.1}  sESS {:>11.1}  CT {:.3}s  MSE {:.3e}  accept {:.3}",
                    row.param, row.ess, row.sess, row.ct_seconds, row.mse, row.accept_rate
                );
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Report { input, out, format } => {
            let text = std::fs::read_to_string(&input)
                .map_err(|e| format!("cannot read {}: {e}", input.display()))?;
            let persisted: PersistedExperiment =
                serde_json::from_str(&text).map_err(|e| e.to_string())?;
            let rows = aggregate_rows(&persisted).map_err(|e| e.to_string())?;
            match format {
                Format::Csv => write_csv(&rows, &out).map_err(|e| e.to_string())?,
                Format::Json => write_json(&rows, &out).map_err(|e| e.to_string())?,
            }
            // Round-trip guard so a corrupted write never goes unnoticed.
            let back = match format {
                Format::Csv => read_csv(&out).map_err(|e| e.to_string())?,
                Format::Json => read_json(&out).map_err(|e| e.to_string())?,
            };
            if back != rows {
                return Err("report round-trip mismatch".into());
            }
            println!("wrote {} rows to {}", rows.len(), out.display());
            Ok(ExitCode::SUCCESS)
        }
        Command::VerifyIdentities => {
            let ms = [1u32, 2, 3, 5, 10, 50, 100];
            let xis = [0.01, 0.1, 1.0, 10.0, 100.0];
            let ks = [0u32, 1, 3, 5];
            let mut worst_mult: f64 = 0.0;
            let mut worst_power: f64 = 0.0;
            let mut worst_k: f64 = 0.0;
            for &m in &ms {
                for &xi in &xis {
                    let r = recipgamma::identity::verify_multiplication_identity(xi, m)
                        .map_err(|e| e.to_string())?;
                    worst_mult = worst_mult.max(r.residual.abs());
                    let r = recipgamma::identity::verify_gamma_power_identity(xi, m)
                        .map_err(|e| e.to_string())?;
                    worst_power = worst_power.max(r.residual.abs());
                    for &k in &ks {
                        let r = recipgamma::identity::verify_k_level_identity(xi, m, k)
                            .map_err(|e| e.to_string())?;
                        worst_k = worst_k.max(r.residual.abs());
                    }
                }
            }
            println!("max |residual|, multiplication rewrite: {worst_mult:.3e}");
            println!("max |residual|, power-integral rewrite: {worst_power:.3e}");
            println!("max |residual|, duplication-level rewrite: {worst_k:.3e}");
            let ok = worst_mult < 1e-8 && worst_power < 1e-8 && worst_k < 1e-8;
            println!("{}", if ok { "all identities verified" } else { "FAILED" });
            Ok(if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            })
        }
    }
}
