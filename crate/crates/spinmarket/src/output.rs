//! CSV and JSON outputs.
//!
//! Every CSV starts with a header row, uses `,` as separator and `\n` as
//! line terminator. Reals are printed with 9 significant digits.

use std::fmt::Write as _;
use std::path::Path;

use spinmarket_core::phase::OrderedInterval;
use spinmarket_core::stats::SurvivalCurve;
use spinmarket_core::Trajectory;

use crate::error::{AppError, Result};
use crate::experiment::ExperimentReport;
use crate::format::{ensure_dir, json_document, sig9, write_atomic};

pub const REPORT_FILE: &str = "report.json";
pub const RATIOS_FILE: &str = "ratios.csv";
pub const RATES_FILE: &str = "rates.csv";
pub const POWERLAW_FILE: &str = "powerlaw.csv";
pub const INTERVALS_FILE: &str = "intervals.csv";
pub const INTERVALS_HEADER: &str = "replicate,model,start,duration,censored";

/// `t,h,m`, one row per recorded step.
pub fn trajectory_csv(tr: &Trajectory) -> String {
    let mut out = String::from("t,h,m\n");
    for (t, (h, m)) in tr.h.iter().zip(&tr.m).enumerate() {
        let _ = writeln!(out, "{t},{},{}", sig9(*h), sig9(*m));
    }
    out
}

/// `t,log_survival` for every point with positive survival; header only
/// when there is no curve.
pub fn survival_csv(curve: Option<&SurvivalCurve>) -> String {
    let mut out = String::from("t,log_survival\n");
    if let Some(c) = curve {
        for (t, ls) in c.log_points() {
            let _ = writeln!(out, "{},{}", sig9(t), sig9(ls));
        }
    }
    out
}

pub fn push_interval_rows(
    out: &mut String,
    replicate: usize,
    model: &str,
    intervals: &[OrderedInterval],
) {
    for iv in intervals {
        let _ = writeln!(
            out,
            "{replicate},{model},{},{},{}",
            iv.start, iv.duration, iv.censored
        );
    }
}

/// One row of an interval dump.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntervalRow {
    pub replicate: usize,
    pub model: String,
    pub interval: OrderedInterval,
}

/// Parses an interval dump written by [`emit_plot_data`] or `simulate`.
pub fn parse_intervals_csv(text: &str) -> Result<Vec<IntervalRow>> {
    let mut lines = text.lines();
    match lines.next() {
        Some(h) if h.trim_end() == INTERVALS_HEADER => {}
        _ => {
            return Err(AppError::Config(format!(
                "interval dump must start with `{INTERVALS_HEADER}`"
            )))
        }
    }
    let mut rows = Vec::new();
    for (no, line) in lines.enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let bad = || AppError::Config(format!("interval dump line {}: `{line}`", no + 2));
        let fields: Vec<&str> = line.trim_end().split(',').collect();
        let [rep, model, start, duration, censored] = fields[..] else {
            return Err(bad());
        };
        let interval = OrderedInterval {
            start: start.parse().map_err(|_| bad())?,
            duration: duration.parse().map_err(|_| bad())?,
            censored: censored.parse().map_err(|_| bad())?,
        };
        if interval.duration == 0 {
            return Err(bad());
        }
        rows.push(IntervalRow {
            replicate: rep.parse().map_err(|_| bad())?,
            model: model.to_string(),
            interval,
        });
    }
    Ok(rows)
}

pub fn write_report(report: &ExperimentReport, dir: &Path) -> Result<()> {
    ensure_dir(dir)?;
    write_atomic(&dir.join(REPORT_FILE), &json_document(report.to_json()))
}

/// Writes `survival_<model>.csv` and `trace_<model>.csv` for every model,
/// plus `ratios.csv`, `rates.csv`, `powerlaw.csv` and `intervals.csv`.
pub fn emit_plot_data(report: &ExperimentReport, dir: &Path) -> Result<()> {
    ensure_dir(dir)?;
    let mut ratios = String::from("model,degree,replicate,ratio\n");
    let mut rates = String::from("model,degree,replicate,rate\n");
    let mut intervals = format!("{INTERVALS_HEADER}\n");
    for m in &report.models {
        let label = m.label();
        let degree = m.spec.degree();
        write_atomic(
            &dir.join(format!("survival_{label}.csv")),
            &survival_csv(m.survival.as_ref()),
        )?;
        let trace = m
            .trace
            .as_ref()
            .map(trajectory_csv)
            .unwrap_or_else(|| "t,h,m\n".into());
        write_atomic(&dir.join(format!("trace_{label}.csv")), &trace)?;
        for r in &m.replicates {
            let _ = writeln!(
                ratios,
                "{label},{degree},{},{}",
                r.replicate,
                sig9(r.phase.ratio)
            );
            if let Ok(fit) = &r.rate {
                let _ = writeln!(rates, "{label},{degree},{},{}", r.replicate, sig9(fit.rate));
            }
            push_interval_rows(&mut intervals, r.replicate, &label, &r.phase.intervals);
        }
    }
    let mut powerlaw = String::from("branch,exponent,prefactor,r_squared\n");
    for b in &report.power_laws {
        if let Ok(f) = &b.fit {
            let _ = writeln!(
                powerlaw,
                "{},{},{},{}",
                b.name,
                sig9(f.exponent),
                sig9(f.prefactor),
                sig9(f.r_squared)
            );
        }
    }
    write_atomic(&dir.join(RATIOS_FILE), &ratios)?;
    write_atomic(&dir.join(RATES_FILE), &rates)?;
    write_atomic(&dir.join(POWERLAW_FILE), &powerlaw)?;
    write_atomic(&dir.join(INTERVALS_FILE), &intervals)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trajectory_rows() {
        let tr = Trajectory {
            h: vec![-2.0, 0.25],
            m: vec![1.0, -0.125],
            seed: 0,
        };
        assert_eq!(trajectory_csv(&tr), "t,h,m\n0,-2,1\n1,0.25,-0.125\n");
    }

    #[test]
    fn empty_survival_is_header_only() {
        assert_eq!(survival_csv(None), "t,log_survival\n");
    }

    #[test]
    fn interval_dump_round_trip() {
        let ivs = [
            OrderedInterval {
                start: 0,
                duration: 3,
                censored: false,
            },
            OrderedInterval {
                start: 9,
                duration: 2,
                censored: true,
            },
        ];
        let mut text = format!("{INTERVALS_HEADER}\n");
        push_interval_rows(&mut text, 4, "moore8-minus1", &ivs);
        let rows = parse_intervals_csv(&text).unwrap();
        assert_eq!(rows.len(), 2);
        assert_eq!(rows[1].replicate, 4);
        assert_eq!(rows[1].model, "moore8-minus1");
        assert_eq!(rows[1].interval, ivs[1]);
        assert!(parse_intervals_csv("a,b\n").is_err());
        assert!(parse_intervals_csv(&format!("{INTERVALS_HEADER}\n1,ring2,0,x,false\n")).is_err());
    }
}
