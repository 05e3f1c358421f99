//! Command-line interface.

use std::fs;
use std::num::NonZeroUsize;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use serde_json::json;
use spinmarket_core::dynamics::run;
use spinmarket_core::phase::analyze;
use spinmarket_core::rng::{derive_seed, stream};

use crate::config::{ExperimentConfig, ModelSpec};
use crate::error::{AppError, Result};
use crate::experiment::{replicate_json, run_experiment, ReplicateResult};
use crate::format::{ensure_dir, json_document, write_atomic};
use crate::output::{self, push_interval_rows, INTERVALS_FILE, INTERVALS_HEADER};
use crate::reanalyze::{reanalyze, ReanalyzeOptions};

#[derive(Debug, Parser)]
#[command(
    name = "spinmarket",
    version,
    about = "Ordered/disordered phase statistics of a spin market model"
)]
pub struct Cli {
    /// Experiment config (JSON); omitted fields take their defaults.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Master seed, overriding the config.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Output directory, overriding the config.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Worker threads (default: available parallelism).
    #[arg(long, global = true)]
    pub jobs: Option<NonZeroUsize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run one model once and dump its trajectory, network and intervals.
    Simulate {
        /// Model label: ring2, vn4, moore8 or moore8-minus{k}.
        #[arg(long, default_value = "moore8")]
        model: String,
    },
    /// Run every configured model and replicate and write the full report.
    Experiment,
    /// Recompute statistics from a dumped intervals.csv.
    Stats {
        /// Interval dump (`replicate,model,start,duration,censored`).
        #[arg(long)]
        intervals: PathBuf,
        /// Replicates per model; inferred from the dump when omitted.
        #[arg(long)]
        replicates: Option<usize>,
    },
}

impl Cli {
    fn load_config(&self) -> Result<ExperimentConfig> {
        let mut config = match &self.config {
            Some(path) => ExperimentConfig::load(path)?,
            None => ExperimentConfig::default(),
        };
        if let Some(seed) = self.seed {
            config.seed = seed;
        }
        if let Some(out) = &self.out {
            config.output_dir = out.clone();
        }
        Ok(config)
    }

    fn jobs(&self) -> NonZeroUsize {
        self.jobs
            .or_else(|| std::thread::available_parallelism().ok())
            .unwrap_or(NonZeroUsize::MIN)
    }
}

/// Runs the parsed command, printing a short summary to stdout.
pub fn execute(cli: &Cli) -> Result<()> {
    let config = cli.load_config()?;
    match &cli.command {
        Command::Simulate { model } => simulate(&config, model),
        Command::Experiment => {
            let report = run_experiment(&config, cli.jobs())?;
            for m in &report.models {
                let rate = m.mean_rate.map_or("n/a".to_string(), |r| format!("{r:.4}"));
                println!(
                    "{:<14} mean ratio {:.4}  mean rate {rate}",
                    m.label(),
                    m.mean_ratio
                );
            }
            println!("wrote {}", config.output_dir.display());
            Ok(())
        }
        Command::Stats {
            intervals,
            replicates,
        } => {
            let text = fs::read_to_string(intervals).map_err(|e| AppError::io(intervals, e))?;
            let rows = output::parse_intervals_csv(&text)?;
            let opts = ReanalyzeOptions {
                params: config.model_params(),
                replicates: *replicates,
                min_count: config.min_count,
                seed: config.seed,
            };
            let report = reanalyze(&rows, &opts)?;
            output::write_report(&report, &config.output_dir)?;
            output::emit_plot_data(&report, &config.output_dir)?;
            print!("{}", json_document(report.to_json()));
            Ok(())
        }
    }
}

fn simulate(config: &ExperimentConfig, label: &str) -> Result<()> {
    let spec = ModelSpec::from_label(label)
        .ok_or_else(|| AppError::Config(format!("unknown model `{label}`")))?;
    let params = config.model_params();
    let net = spec
        .build(&mut stream(derive_seed(config.seed, 0)))
        .map_err(|e| AppError::Config(e.to_string()))?;
    let trajectory = run(&net, &params, derive_seed(config.seed, 1))
        .map_err(|e| AppError::Config(e.to_string()))?;
    let phase =
        analyze(&trajectory.h, params.threshold).map_err(|e| AppError::runtime(label, e))?;

    let dir = &config.output_dir;
    ensure_dir(dir)?;
    write_atomic(
        &dir.join("trajectory.csv"),
        &output::trajectory_csv(&trajectory),
    )?;
    write_atomic(&dir.join("network.txt"), &net.dump())?;
    let mut intervals = format!("{INTERVALS_HEADER}\n");
    push_interval_rows(&mut intervals, 0, label, &phase.intervals);
    write_atomic(&dir.join(INTERVALS_FILE), &intervals)?;

    let degree = net.constant_in_degree().unwrap_or(0);
    let summary = ReplicateResult::from_phase(0, config.seed, degree, phase, config.min_count);
    let mut doc = replicate_json(&summary);
    doc["model"] = json!(label);
    print!("{}", json_document(doc));
    Ok(())
}
