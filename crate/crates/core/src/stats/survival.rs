//! Survival curves of ordered-phase durations and their exponential fits.

use alloc::vec::Vec;

use crate::stats::regression::ols;
use crate::{Error, Result};

/// Points with fewer survivors than this are left out of rate fits.
pub const DEFAULT_MIN_COUNT: u64 = 5;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SurvivalPoint {
    pub t: f64,
    /// `Pr(T > t)`.
    pub s: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SurvivalCurve {
    pub points: Vec<SurvivalPoint>,
    /// Number of durations behind the curve, so `s · sample_size` is the
    /// surviving count at each point.
    pub sample_size: usize,
}

impl SurvivalCurve {
    pub fn from_points(points: Vec<SurvivalPoint>, sample_size: usize) -> Self {
        Self {
            points,
            sample_size,
        }
    }

    /// `(t, ln s)` for every point with `s > 0`.
    pub fn log_points(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.points
            .iter()
            .filter(|p| p.s > 0.0)
            .map(|p| (p.t, libm::log(p.s)))
    }
}

/// Empirical `Pr(T > t)` at `t = 0, 1, ..., max(T)`.
pub fn survival_function(durations: &[u64]) -> Result<SurvivalCurve> {
    let max = *durations
        .iter()
        .max()
        .ok_or(Error::InsufficientData("no durations"))?;
    let n = durations.len();
    let mut counts = alloc::vec![0usize; max as usize + 1];
    for &d in durations {
        counts[d as usize] += 1;
    }
    let mut surviving = n;
    let points = counts
        .iter()
        .enumerate()
        .map(|(t, &c)| {
            surviving -= c;
            SurvivalPoint {
                t: t as f64,
                s: surviving as f64 / n as f64,
            }
        })
        .collect();
    Ok(SurvivalCurve {
        points,
        sample_size: n,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExponentialFit {
    /// Decay rate per transition step, `−slope` of `ln s` against `t`.
    pub rate: f64,
    pub intercept: f64,
    pub r_squared: f64,
    pub n_points: usize,
}

/// Least-squares line through `ln s(t)` over the points that still have at
/// least `min_count` survivors.
pub fn fit_exponential_rate(curve: &SurvivalCurve, min_count: u64) -> Result<ExponentialFit> {
    let n = curve.sample_size as f64;
    // every point at 0 or 1: all durations were equal
    if !curve.points.is_empty() && curve.points.iter().all(|p| p.s == 0.0 || p.s == 1.0) {
        return Err(Error::DegenerateFit("survival curve is a single step"));
    }
    let (ts, ls): (Vec<f64>, Vec<f64>) = curve
        .points
        .iter()
        .filter(|p| p.s > 0.0 && p.s * n + 1e-9 >= min_count as f64)
        .map(|p| (p.t, libm::log(p.s)))
        .unzip();
    if ts.len() < 3 {
        return Err(Error::InsufficientData(
            "fewer than three points with enough survivors",
        ));
    }
    let line = ols(&ts, &ls)?;
    if !(line.slope < 0.0) {
        return Err(Error::DegenerateFit("survival curve does not decay"));
    }
    Ok(ExponentialFit {
        rate: -line.slope,
        intercept: line.intercept,
        r_squared: line.r_squared,
        n_points: line.n,
    })
}

/// Outcome of the exponentiality check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KsCheck {
    /// `sup_t |F_n(t) − F(t)|`.
    pub statistic: f64,
    /// Stephens-modified statistic `(D − 0.2/n)(√n + 0.26 + 0.5/√n)`.
    pub modified: f64,
    pub critical_value: f64,
    pub sample_size: usize,
    /// Per-step rate of the fitted law, `−ln(1 − p)`.
    pub fitted_rate: f64,
    pub passes: bool,
}

/// Kolmogorov–Smirnov check of integer durations against the discretised
/// exponential law `Pr(T > t) = (1 − p)^t` with `p = 1 / mean(T)` estimated
/// from the same sample.
///
/// Both CDFs jump only at integers, so the supremum is taken over
/// `t = 0..=max(T)`. The test uses Stephens' modification for the
/// estimated-mean exponential case, whose 5% critical value is 1.094.
pub fn exponentiality_ks(durations: &[u64]) -> Result<KsCheck> {
    const CRITICAL_5PCT: f64 = 1.094;
    if durations.len() < 3 {
        return Err(Error::InsufficientData(
            "exponentiality check needs three durations",
        ));
    }
    if durations.contains(&0) {
        return Err(Error::Domain("durations must be positive"));
    }
    let curve = survival_function(durations)?;
    let n = durations.len() as f64;
    let mean = durations.iter().sum::<u64>() as f64 / n;
    let keep = 1.0 - 1.0 / mean;
    let statistic = curve
        .points
        .iter()
        .map(|p| ((1.0 - p.s) - (1.0 - libm::pow(keep, p.t))).abs())
        .fold(0.0, f64::max);
    let root = libm::sqrt(n);
    let modified = (statistic - 0.2 / n) * (root + 0.26 + 0.5 / root);
    let fitted_rate = if keep > 0.0 {
        -libm::log(keep)
    } else {
        f64::INFINITY
    };
    Ok(KsCheck {
        statistic,
        modified,
        critical_value: CRITICAL_5PCT,
        sample_size: durations.len(),
        fitted_rate,
        passes: modified < CRITICAL_5PCT,
    })
}
