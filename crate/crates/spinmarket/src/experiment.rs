//! Replicated runs across model variants and the cross-model statistics.

use std::num::NonZeroUsize;

use rayon::prelude::*;
use serde_json::{json, Value};
use spinmarket_core::dynamics::run;
use spinmarket_core::phase::{analyze, phase_stats, OrderedInterval};
use spinmarket_core::rng::{derive_seed, stream};
use spinmarket_core::stats::{
    anova_one_way, exponentiality_ks, fit_exponential_rate, fit_power_law, survival_function,
    tukey_kramer, AnovaResult, ExponentialFit, KsCheck, PValue, PowerLawFit, SurvivalCurve,
    TukeyResult,
};
use spinmarket_core::{Error, ModelParams, PhaseStats, Trajectory};

use crate::config::{ExperimentConfig, ModelSpec};
use crate::error::{AppError, Result};
use crate::output;

/// Confidence level of the Tukey–Kramer comparisons.
pub const TUKEY_LEVEL: f64 = 0.95;

const NETWORK_STREAM: u64 = 0;
const DYNAMICS_STREAM: u64 = 1;

/// Seed of replicate `replicate` of model `model` under the master seed.
pub fn replicate_seed(seed: u64, model: usize, replicate: usize) -> u64 {
    derive_seed(derive_seed(seed, model as u64), replicate as u64)
}

#[derive(Debug, Clone)]
pub struct ReplicateResult {
    pub replicate: usize,
    pub seed: u64,
    pub in_degree: usize,
    pub phase: PhaseStats,
    /// Uncensored interval durations.
    pub durations: Vec<u64>,
    pub rate: std::result::Result<ExponentialFit, Error>,
    pub ks: std::result::Result<KsCheck, Error>,
}

impl ReplicateResult {
    /// Statistics of one replicate from its extracted intervals.
    pub fn from_phase(
        replicate: usize,
        seed: u64,
        in_degree: usize,
        phase: PhaseStats,
        min_count: u64,
    ) -> Self {
        let durations = phase.complete_durations();
        let rate = survival_function(&durations).and_then(|c| fit_exponential_rate(&c, min_count));
        let ks = exponentiality_ks(&durations);
        Self {
            replicate,
            seed,
            in_degree,
            phase,
            durations,
            rate,
            ks,
        }
    }
}

#[derive(Debug, Clone)]
pub struct ModelReport {
    pub spec: ModelSpec,
    pub replicates: Vec<ReplicateResult>,
    /// Uncensored durations pooled over replicates, in replicate order.
    pub pooled_durations: Vec<u64>,
    pub survival: Option<SurvivalCurve>,
    pub pooled_fit: std::result::Result<ExponentialFit, Error>,
    pub mean_ratio: f64,
    /// Mean of the per-replicate rates that could be fitted.
    pub mean_rate: Option<f64>,
    /// Trajectory of replicate 0.
    pub trace: Option<Trajectory>,
}

impl ModelReport {
    pub fn from_replicates(
        spec: ModelSpec,
        replicates: Vec<ReplicateResult>,
        trace: Option<Trajectory>,
        min_count: u64,
    ) -> Self {
        let pooled_durations: Vec<u64> = replicates
            .iter()
            .flat_map(|r| r.durations.iter().copied())
            .collect();
        let survival = survival_function(&pooled_durations).ok();
        let pooled_fit = match &survival {
            Some(c) => fit_exponential_rate(c, min_count),
            None => Err(Error::InsufficientData("no complete ordered intervals")),
        };
        let ratios = ratio_samples(&replicates);
        let mean_ratio = ratios.iter().sum::<f64>() / ratios.len() as f64;
        let rates = rate_samples(&replicates);
        let mean_rate = (!rates.is_empty()).then(|| rates.iter().sum::<f64>() / rates.len() as f64);
        Self {
            spec,
            replicates,
            pooled_durations,
            survival,
            pooled_fit,
            mean_ratio,
            mean_rate,
            trace,
        }
    }

    pub fn label(&self) -> String {
        self.spec.label()
    }

    pub fn ratio_samples(&self) -> Vec<f64> {
        ratio_samples(&self.replicates)
    }

    /// Per-replicate rates; replicates without a fit are left out.
    pub fn rate_samples(&self) -> Vec<f64> {
        rate_samples(&self.replicates)
    }

    /// Fraction of replicates whose durations pass the exponentiality check.
    pub fn ks_pass_fraction(&self) -> f64 {
        let passed = self
            .replicates
            .iter()
            .filter(|r| matches!(&r.ks, Ok(k) if k.passes))
            .count();
        passed as f64 / self.replicates.len() as f64
    }
}

fn ratio_samples(replicates: &[ReplicateResult]) -> Vec<f64> {
    replicates.iter().map(|r| r.phase.ratio).collect()
}

fn rate_samples(replicates: &[ReplicateResult]) -> Vec<f64> {
    replicates
        .iter()
        .filter_map(|r| r.rate.as_ref().ok().map(|f| f.rate))
        .collect()
}

#[derive(Debug, Clone)]
pub struct Comparison {
    pub anova: AnovaResult,
    pub tukey: TukeyResult,
}

impl Comparison {
    pub fn new(groups: &[Vec<f64>]) -> spinmarket_core::Result<Self> {
        Ok(Self {
            anova: anova_one_way(groups)?,
            tukey: tukey_kramer(groups, TUKEY_LEVEL)?,
        })
    }
}

/// ANOVA + Tukey over the ratio samples and the rate samples of a set of
/// models.
#[derive(Debug, Clone)]
pub struct ComparisonFamily {
    pub name: String,
    pub models: Vec<String>,
    pub ratio: std::result::Result<Comparison, Error>,
    pub rate: std::result::Result<Comparison, Error>,
}

impl ComparisonFamily {
    pub fn new(name: &str, models: &[&ModelReport]) -> Self {
        let ratios: Vec<Vec<f64>> = models.iter().map(|m| m.ratio_samples()).collect();
        let rates: Vec<Vec<f64>> = models.iter().map(|m| m.rate_samples()).collect();
        Self {
            name: name.to_string(),
            models: models.iter().map(|m| m.label()).collect(),
            ratio: Comparison::new(&ratios),
            rate: Comparison::new(&rates),
        }
    }
}

/// A power law of a per-model mean against in-degree.
#[derive(Debug, Clone)]
pub struct PowerLawBranch {
    pub name: String,
    pub degrees: Vec<f64>,
    pub values: Vec<f64>,
    pub fit: std::result::Result<PowerLawFit, Error>,
}

impl PowerLawBranch {
    fn new(name: &str, points: &[(f64, Option<f64>)]) -> Self {
        let degrees: Vec<f64> = points.iter().map(|p| p.0).collect();
        let fit = if points.iter().any(|p| p.1.is_none()) {
            Err(Error::InsufficientData("a model has no mean value"))
        } else {
            let values: Vec<f64> = points.iter().filter_map(|p| p.1).collect();
            fit_power_law(&degrees, &values)
        };
        let values = points.iter().map(|p| p.1.unwrap_or(f64::NAN)).collect();
        Self {
            name: name.to_string(),
            degrees,
            values,
            fit,
        }
    }
}

#[derive(Debug, Clone)]
pub struct ExperimentReport {
    pub seed: u64,
    pub replicates: usize,
    pub min_count: u64,
    pub params: ModelParams,
    pub models: Vec<ModelReport>,
    pub comparisons: Vec<ComparisonFamily>,
    pub power_laws: Vec<PowerLawBranch>,
}

impl ExperimentReport {
    pub fn model(&self, label: &str) -> Option<&ModelReport> {
        self.models.iter().find(|m| m.label() == label)
    }

    pub fn comparison(&self, name: &str) -> Option<&ComparisonFamily> {
        self.comparisons.iter().find(|c| c.name == name)
    }

    pub fn power_law(&self, name: &str) -> Option<&PowerLawBranch> {
        self.power_laws.iter().find(|b| b.name == name)
    }

    pub fn to_json(&self) -> Value {
        let p = &self.params;
        json!({
            "seed": self.seed,
            "replicates": self.replicates,
            "min_count": self.min_count,
            "params": {
                "alpha": p.alpha,
                "beta": p.beta,
                "steps": p.steps,
                "tracked_site": p.tracked_site,
                "threshold": p.threshold,
                "burn_in": p.burn_in,
            },
            "models": self.models.iter().map(model_json).collect::<Vec<_>>(),
            "comparisons": self.comparisons.iter().map(family_json).collect::<Vec<_>>(),
            "power_laws": self.power_laws.iter().map(branch_json).collect::<Vec<_>>(),
        })
    }
}

/// Lattice and depleted families, each with enough models to compare.
pub fn default_families(models: &[ModelReport]) -> Vec<ComparisonFamily> {
    let lattice: Vec<&ModelReport> = models.iter().filter(|m| m.spec.is_lattice()).collect();
    let depleted: Vec<&ModelReport> = models.iter().filter(|m| !m.spec.is_lattice()).collect();
    let mut out = Vec::new();
    if lattice.len() >= 2 {
        out.push(ComparisonFamily::new("lattice", &lattice));
    }
    if depleted.len() >= 2 {
        out.push(ComparisonFamily::new("depleted", &depleted));
    }
    out
}

/// Ratio and rate power laws: lattice models on one branch, depleted models
/// plus the intact Moore lattice on the other.
pub fn power_law_branches(models: &[ModelReport]) -> Vec<PowerLawBranch> {
    let anchor = models
        .iter()
        .find(|m| m.spec == ModelSpec::lattice(crate::config::Topology::Moore8));
    let lattice: Vec<&ModelReport> = models.iter().filter(|m| m.spec.is_lattice()).collect();
    let mut depleted: Vec<&ModelReport> = models.iter().filter(|m| !m.spec.is_lattice()).collect();
    if !depleted.is_empty() {
        depleted.extend(anchor);
    }
    let mut out = Vec::new();
    for (branch, set) in [("lattice", &lattice), ("depleted", &depleted)] {
        if set.len() < 2 {
            continue;
        }
        let ratio: Vec<_> = set
            .iter()
            .map(|m| (m.spec.degree() as f64, Some(m.mean_ratio)))
            .collect();
        let rate: Vec<_> = set
            .iter()
            .map(|m| (m.spec.degree() as f64, m.mean_rate))
            .collect();
        out.push(PowerLawBranch::new(&format!("ratio-{branch}"), &ratio));
        out.push(PowerLawBranch::new(&format!("rate-{branch}"), &rate));
    }
    out
}

struct Task {
    model: usize,
    replicate: usize,
}

fn run_replicate(
    spec: &ModelSpec,
    task: &Task,
    config: &ExperimentConfig,
    params: &ModelParams,
) -> std::result::Result<(ReplicateResult, Option<Trajectory>), Error> {
    let seed = replicate_seed(config.seed, task.model, task.replicate);
    let net = spec.build(&mut stream(derive_seed(seed, NETWORK_STREAM)))?;
    let trajectory = run(&net, params, derive_seed(seed, DYNAMICS_STREAM))?;
    let phase = analyze(&trajectory.h, params.threshold)?;
    let degree = net.constant_in_degree().unwrap_or(0);
    let result = ReplicateResult::from_phase(task.replicate, seed, degree, phase, config.min_count);
    Ok((result, (task.replicate == 0).then_some(trajectory)))
}

/// Runs every replicate of every model on `jobs` worker threads and
/// aggregates the results. Output does not depend on `jobs`.
pub fn compute_experiment(
    config: &ExperimentConfig,
    jobs: NonZeroUsize,
) -> Result<ExperimentReport> {
    config.validate()?;
    let params = config.model_params();
    let tasks: Vec<Task> = (0..config.models.len())
        .flat_map(|model| (0..config.replicates).map(move |replicate| Task { model, replicate }))
        .collect();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.get())
        .build()
        .map_err(|e| AppError::Config(format!("worker pool: {e}")))?;
    let results: Vec<_> = pool.install(|| {
        tasks
            .par_iter()
            .map(|t| run_replicate(&config.models[t.model], t, config, &params))
            .collect()
    });

    let mut per_model: Vec<(Vec<ReplicateResult>, Option<Trajectory>)> =
        config.models.iter().map(|_| (Vec::new(), None)).collect();
    for (task, result) in tasks.iter().zip(results) {
        let (rep, trace) = result.map_err(|e| {
            AppError::runtime(
                format!(
                    "model {} replicate {}",
                    config.models[task.model].label(),
                    task.replicate
                ),
                e,
            )
        })?;
        let slot = &mut per_model[task.model];
        slot.0.push(rep);
        if trace.is_some() {
            slot.1 = trace;
        }
    }
    let models: Vec<ModelReport> = config
        .models
        .iter()
        .zip(per_model)
        .map(|(spec, (reps, trace))| {
            ModelReport::from_replicates(*spec, reps, trace, config.min_count)
        })
        .collect();

    Ok(ExperimentReport {
        seed: config.seed,
        replicates: config.replicates,
        min_count: config.min_count,
        params,
        comparisons: default_families(&models),
        power_laws: power_law_branches(&models),
        models,
    })
}

/// [`compute_experiment`], then `report.json` and the plot data files in
/// `config.output_dir`.
pub fn run_experiment(config: &ExperimentConfig, jobs: NonZeroUsize) -> Result<ExperimentReport> {
    let report = compute_experiment(config, jobs)?;
    output::write_report(&report, &config.output_dir)?;
    output::emit_plot_data(&report, &config.output_dir)?;
    Ok(report)
}

/// Rebuilds replicate statistics from dumped intervals.
pub fn replicate_from_intervals(
    replicate: usize,
    intervals: Vec<OrderedInterval>,
    total_transitions: usize,
    min_count: u64,
) -> spinmarket_core::Result<ReplicateResult> {
    let phase = phase_stats(intervals, total_transitions)?;
    Ok(ReplicateResult::from_phase(
        replicate, 0, 0, phase, min_count,
    ))
}

pub(crate) fn error_json(e: &Error) -> Value {
    json!({ "error": e.kind(), "message": e.to_string() })
}

fn fit_json(fit: &std::result::Result<ExponentialFit, Error>) -> Value {
    match fit {
        Ok(f) => json!({
            "rate": f.rate,
            "intercept": f.intercept,
            "r_squared": f.r_squared,
            "n_points": f.n_points,
        }),
        Err(e) => error_json(e),
    }
}

fn p_value_json(a: &AnovaResult) -> Value {
    match a.p_value_report() {
        PValue::Value(p) => json!(p),
        PValue::BelowFloor => json!("<1e-15"),
    }
}

pub(crate) fn comparison_json(
    c: &std::result::Result<Comparison, Error>,
    labels: &[String],
) -> Value {
    let c = match c {
        Ok(c) => c,
        Err(e) => return error_json(e),
    };
    let a = &c.anova;
    json!({
        "anova": {
            "f_stat": if a.infinite_f { Value::Null } else { json!(a.f_stat) },
            "infinite_f": a.infinite_f,
            "p_value": p_value_json(a),
            "df_between": a.df_between,
            "df_within": a.df_within,
            "group_means": a.group_means,
            "group_sizes": a.group_sizes,
        },
        "tukey": {
            "level": c.tukey.level,
            "q_critical": c.tukey.q_critical,
            "pairs": c.tukey.pairs.iter().map(|p| json!({
                "group_a": labels[p.group_a],
                "group_b": labels[p.group_b],
                "mean_diff": p.mean_diff,
                "critical_span": p.critical_span,
                "significant": p.significant,
            })).collect::<Vec<_>>(),
        },
    })
}

fn model_json(m: &ModelReport) -> Value {
    json!({
        "model": m.label(),
        "degree": m.spec.degree(),
        "mean_ratio": m.mean_ratio,
        "mean_rate": m.mean_rate,
        "rate_replicates": m.rate_samples().len(),
        "complete_intervals": m.pooled_durations.len(),
        "pooled_fit": fit_json(&m.pooled_fit),
        "ks_pass_fraction": m.ks_pass_fraction(),
        "replicates": m.replicates.iter().map(replicate_json).collect::<Vec<_>>(),
    })
}

pub(crate) fn replicate_json(r: &ReplicateResult) -> Value {
    json!({
        "replicate": r.replicate,
        "ratio": r.phase.ratio,
        "intervals": r.phase.intervals.len(),
        "ordered_transitions": r.phase.ordered_transitions,
        "rate": fit_json(&r.rate),
        "ks": match &r.ks {
            Ok(k) => json!({
                "statistic": k.statistic,
                "modified": k.modified,
                "critical_value": k.critical_value,
                "passes": k.passes,
            }),
            Err(e) => error_json(e),
        },
    })
}

fn family_json(f: &ComparisonFamily) -> Value {
    json!({
        "family": f.name,
        "models": f.models,
        "ratio": comparison_json(&f.ratio, &f.models),
        "rate": comparison_json(&f.rate, &f.models),
    })
}

fn branch_json(b: &PowerLawBranch) -> Value {
    let fit = match &b.fit {
        Ok(f) => {
            json!({ "exponent": f.exponent, "prefactor": f.prefactor, "r_squared": f.r_squared })
        }
        Err(e) => error_json(e),
    };
    json!({ "branch": b.name, "degrees": b.degrees, "values": b.values, "fit": fit })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::Topology;

    fn nz(n: usize) -> NonZeroUsize {
        NonZeroUsize::new(n).unwrap()
    }

    fn small(models: Vec<ModelSpec>) -> ExperimentConfig {
        ExperimentConfig {
            models,
            replicates: 3,
            params: crate::config::ParamsConfig {
                steps: 600,
                ..Default::default()
            },
            ..ExperimentConfig::default()
        }
    }

    #[test]
    fn depleted_replicates_have_reduced_degree() {
        let report = compute_experiment(&small(vec![ModelSpec::depleted(3)]), nz(2)).unwrap();
        let m = &report.models[0];
        assert_eq!(m.replicates.len(), 3);
        assert!(m.replicates.iter().all(|r| r.in_degree == 5));
        assert!(m.trace.as_ref().is_some_and(|t| t.len() == 600));
    }

    #[test]
    fn jobs_do_not_change_results() {
        let c = small(vec![
            ModelSpec::lattice(Topology::Ring2),
            ModelSpec::depleted(2),
        ]);
        let a = compute_experiment(&c, nz(1)).unwrap();
        let b = compute_experiment(&c, nz(4)).unwrap();
        assert_eq!(a.to_json(), b.to_json());
    }

    #[test]
    fn families_and_branches() {
        let c = small(vec![
            ModelSpec::lattice(Topology::Ring2),
            ModelSpec::lattice(Topology::Moore8),
            ModelSpec::depleted(1),
        ]);
        let r = compute_experiment(&c, nz(2)).unwrap();
        assert_eq!(r.comparisons.len(), 1);
        assert_eq!(r.comparisons[0].models, vec!["ring2", "moore8"]);
        let names: Vec<&str> = r.power_laws.iter().map(|b| b.name.as_str()).collect();
        assert_eq!(
            names,
            vec![
                "ratio-lattice",
                "rate-lattice",
                "ratio-depleted",
                "rate-depleted"
            ]
        );
        assert_eq!(
            r.power_law("ratio-depleted").unwrap().degrees,
            vec![7.0, 8.0]
        );
    }

    #[test]
    fn seeds_are_distinct_per_task() {
        let mut seen = std::collections::HashSet::new();
        for m in 0..6 {
            for r in 0..30 {
                assert!(seen.insert(replicate_seed(1, m, r)));
            }
        }
    }
}
