//! `dmi`: run experiments, suites and the hypervolume/statistics helpers
//! from the command line.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};
use dmi_core::driver::{emit_front, read_front_csv, run_dmi, run_suite, summary_row, write_summary, RunRecord};
use dmi_core::metrics::hypervolume_of;
use dmi_core::{ComparisonReport, ExperimentConfig, SuiteConfig};

#[derive(Parser)]
#[command(name = "dmi", version, about = "Surrogate-assisted optimisation with Pareto-manifold interpolation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one experiment and write its record, front and summary.
    Run {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
        /// Skip the manifold interpolation step.
        #[arg(long)]
        no_interpolation: bool,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run every problem x instance x seed of a suite config.
    Suite {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Hypervolume of a front CSV against a reference point.
    Hv {
        #[arg(long)]
        front: PathBuf,
        /// One value per objective, in order.
        #[arg(long = "ref", required = true, allow_negative_numbers = true)]
        reference: Vec<f64>,
    },
    /// Paired comparison of two samples (Wilcoxon signed-rank and A12).
    Stats {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
    },
    /// Extract the final front of a run record as CSV.
    Front {
        #[arg(long)]
        record: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn run(config: &Path, seed: Option<u64>, no_interpolation: bool, out: &Path) -> Result<()> {
    let mut cfg = ExperimentConfig::from_json(&read(config)?)?;
    if let Some(s) = seed {
        cfg.seed = s;
    }
    if no_interpolation {
        cfg.interpolation_enabled = false;
    }
    let record = run_dmi(&cfg)?;
    fs::create_dir_all(out)?;
    fs::write(out.join("record.json"), record.to_json()?)?;
    emit_front(&record, &out.join("front.csv"))?;
    write_summary(&out.join("summary.csv"), &[summary_row(&record)])?;
    println!(
        "{} on {}: HV {} -> {} with {} true evaluations",
        record.instance, cfg.problem, record.initial_hv, record.final_hv, record.true_fes
    );
    Ok(())
}

fn suite(config: &Path, out: &Path) -> Result<()> {
    let cfg = SuiteConfig::from_json(&read(config)?)?;
    let outcome = run_suite(&cfg, Some(out))?;
    let failed = outcome.runs.iter().filter(|r| r.result.is_err()).count();
    println!("{} runs, {failed} failed; summary in {}", outcome.runs.len(), out.join("summary.csv").display());
    if failed > 0 {
        bail!("{failed} run(s) failed");
    }
    Ok(())
}

fn hv(front: &Path, reference: &[f64]) -> Result<()> {
    let points = read_front_csv(front)?;
    let refs: Vec<&[f64]> = points.iter().map(Vec::as_slice).collect();
    println!("{:.12e}", hypervolume_of(&refs, reference)?);
    Ok(())
}

/// Reads a sample: the `final_hv` column when present, else the first one.
fn read_sample(path: &Path) -> Result<Vec<f64>> {
    let mut r = csv::Reader::from_path(path).with_context(|| format!("reading {}", path.display()))?;
    let col = r.headers()?.iter().position(|h| h == "final_hv").unwrap_or(0);
    let mut out = Vec::new();
    for (i, row) in r.records().enumerate() {
        let row = row?;
        let v = row.get(col).unwrap_or("").trim();
        out.push(
            v.parse::<f64>()
                .with_context(|| format!("{}: row {}: '{v}' is not a number", path.display(), i + 1))?,
        );
    }
    Ok(out)
}

fn stats(a: &Path, b: &Path) -> Result<()> {
    let (x, y) = (read_sample(a)?, read_sample(b)?);
    if x.len() != y.len() || x.is_empty() {
        bail!("paired samples need equal, non-zero lengths (got {} and {})", x.len(), y.len());
    }
    let r = ComparisonReport::compare(&x, &y);
    println!("n\t{}", x.len());
    println!("wilcoxon_p\t{}", r.p_value);
    println!("a12\t{}", r.a12);
    println!("magnitude\t{}", r.magnitude);
    Ok(())
}

fn front(record: &Path, out: &Path) -> Result<()> {
    let rec = RunRecord::from_json(&read(record)?)?;
    let pf = emit_front(&rec, out)?;
    println!("{} points to {} (true front in {})", rec.front.len(), out.display(), pf.display());
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Run {
            config,
            seed,
            no_interpolation,
            out,
        } => run(config, *seed, *no_interpolation, out),
        Command::Suite { config, out } => suite(config, out),
        Command::Hv { front, reference } => hv(front, reference),
        Command::Stats { a, b } => stats(a, b),
        Command::Front { record, out } => front(record, out),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("dmi: error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
