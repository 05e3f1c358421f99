//! Statistics recomputed from an interval dump.

use std::collections::BTreeMap;

use spinmarket_core::phase::OrderedInterval;
use spinmarket_core::ModelParams;

use crate::config::ModelSpec;
use crate::error::{AppError, Result};
use crate::experiment::{
    default_families, power_law_branches, replicate_from_intervals, ExperimentReport, ModelReport,
};
use crate::output::IntervalRow;

/// Options for re-analysis.
#[derive(Debug, Clone)]
pub struct ReanalyzeOptions {
    pub params: ModelParams,
    /// Replicates per model; inferred from the largest replicate id when
    /// `None`. Replicates without intervals have ratio 0.
    pub replicates: Option<usize>,
    pub min_count: u64,
    pub seed: u64,
}

/// Rebuilds an [`ExperimentReport`] (without traces) from interval rows.
/// Models keep the order of their first appearance.
pub fn reanalyze(rows: &[IntervalRow], opts: &ReanalyzeOptions) -> Result<ExperimentReport> {
    if rows.is_empty() {
        return Err(AppError::Config("interval dump has no rows".into()));
    }
    let total_transitions = (opts.params.steps - opts.params.burn_in).saturating_sub(1);
    let replicates = match opts.replicates {
        Some(n) => n,
        None => rows.iter().map(|r| r.replicate).max().unwrap_or(0) + 1,
    };

    let mut order: Vec<String> = Vec::new();
    let mut grouped: BTreeMap<(String, usize), Vec<OrderedInterval>> = BTreeMap::new();
    for row in rows {
        if row.replicate >= replicates {
            return Err(AppError::Config(format!(
                "replicate {} out of range for {replicates} replicates",
                row.replicate
            )));
        }
        if !order.contains(&row.model) {
            order.push(row.model.clone());
        }
        grouped
            .entry((row.model.clone(), row.replicate))
            .or_default()
            .push(row.interval);
    }

    let mut models = Vec::with_capacity(order.len());
    for label in &order {
        let spec = ModelSpec::from_label(label)
            .ok_or_else(|| AppError::Config(format!("unknown model `{label}`")))?;
        let mut reps = Vec::with_capacity(replicates);
        for rep in 0..replicates {
            let mut intervals = grouped.remove(&(label.clone(), rep)).unwrap_or_default();
            intervals.sort_by_key(|iv| iv.start);
            let r = replicate_from_intervals(rep, intervals, total_transitions, opts.min_count)
                .map_err(|e| AppError::runtime(format!("model {label} replicate {rep}"), e))?;
            reps.push(r);
        }
        models.push(ModelReport::from_replicates(
            spec,
            reps,
            None,
            opts.min_count,
        ));
    }

    Ok(ExperimentReport {
        seed: opts.seed,
        replicates,
        min_count: opts.min_count,
        params: opts.params,
        comparisons: default_families(&models),
        power_laws: power_law_branches(&models),
        models,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::output::parse_intervals_csv;

    fn opts(steps: usize) -> ReanalyzeOptions {
        ReanalyzeOptions {
            params: ModelParams {
                steps,
                ..ModelParams::default()
            },
            replicates: None,
            min_count: 1,
            seed: 0,
        }
    }

    #[test]
    fn ratios_from_dump() {
        let text = "replicate,model,start,duration,censored\n\
                    0,ring2,0,2,false\n1,ring2,3,4,false\n1,ring2,8,1,true\n";
        let rows = parse_intervals_csv(text).unwrap();
        let r = reanalyze(&rows, &opts(11)).unwrap();
        let m = &r.models[0];
        assert_eq!(m.replicates.len(), 2);
        assert!((m.replicates[0].phase.ratio - 0.2).abs() < 1e-15);
        assert!((m.replicates[1].phase.ratio - 0.5).abs() < 1e-15);
        assert_eq!(m.pooled_durations, vec![2, 4]);
    }

    #[test]
    fn rejects_unknown_models_and_overflow() {
        let rows =
            parse_intervals_csv("replicate,model,start,duration,censored\n0,hex6,0,2,false\n")
                .unwrap();
        assert!(matches!(
            reanalyze(&rows, &opts(100)),
            Err(AppError::Config(_))
        ));
        let rows =
            parse_intervals_csv("replicate,model,start,duration,censored\n0,vn4,0,20,false\n")
                .unwrap();
        assert!(matches!(
            reanalyze(&rows, &opts(10)),
            Err(AppError::Runtime { .. })
        ));
    }
}
