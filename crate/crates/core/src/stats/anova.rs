use alloc::vec::Vec;
use core::fmt;

use crate::stats::mean;
use crate::stats::special::f_upper_tail;
use crate::{Error, Result};

/// p-values below this are reported as `<1e-15`.
pub const P_VALUE_FLOOR: f64 = 1e-15;

/// A p-value as reported: either a number or "below the floor".
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PValue {
    Value(f64),
    BelowFloor,
}

impl fmt::Display for PValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PValue::Value(p) => write!(f, "{p}"),
            PValue::BelowFloor => f.write_str("<1e-15"),
        }
    }
}

/// Single-factor ANOVA.
#[derive(Debug, Clone, PartialEq)]
pub struct AnovaResult {
    /// `MSB / MSW`; `+∞` when the groups have no internal spread.
    pub f_stat: f64,
    /// Upper tail of `F(df_between, df_within)` at `f_stat`.
    pub p_value: f64,
    pub df_between: usize,
    pub df_within: usize,
    pub group_means: Vec<f64>,
    pub group_sizes: Vec<usize>,
    pub ms_between: f64,
    pub ms_within: f64,
    /// Zero within-group variance with separated means.
    pub infinite_f: bool,
}

impl AnovaResult {
    pub fn p_value_report(&self) -> PValue {
        if self.p_value < P_VALUE_FLOOR {
            PValue::BelowFloor
        } else {
            PValue::Value(self.p_value)
        }
    }
}

pub fn anova_one_way<G: AsRef<[f64]>>(groups: &[G]) -> Result<AnovaResult> {
    if groups.len() < 2 {
        return Err(Error::InsufficientData("ANOVA needs at least two groups"));
    }
    if groups.iter().any(|g| g.as_ref().len() < 2) {
        return Err(Error::InsufficientData(
            "every ANOVA group needs two observations",
        ));
    }
    let group_sizes: Vec<usize> = groups.iter().map(|g| g.as_ref().len()).collect();
    let group_means: Vec<f64> = groups.iter().map(|g| mean(g.as_ref())).collect();
    let total: usize = group_sizes.iter().sum();
    let grand = groups.iter().flat_map(|g| g.as_ref()).sum::<f64>() / total as f64;

    let ss_between: f64 = group_means
        .iter()
        .zip(&group_sizes)
        .map(|(&m, &n)| n as f64 * (m - grand) * (m - grand))
        .sum();
    let ss_within: f64 = groups
        .iter()
        .zip(&group_means)
        .map(|(g, &m)| g.as_ref().iter().map(|&x| (x - m) * (x - m)).sum::<f64>())
        .sum();

    let df_between = groups.len() - 1;
    let df_within = total - groups.len();
    let ms_between = ss_between / df_between as f64;
    let ms_within = ss_within / df_within as f64;

    // relative to the data's own scale, so shifted data behaves the same
    let scale = groups
        .iter()
        .flat_map(|g| g.as_ref())
        .map(|&x| (x - grand).abs())
        .fold(0.0, f64::max);
    let negligible = |ss: f64| ss <= (scale * 1e-12) * (scale * 1e-12) * total as f64;

    let (f_stat, p_value, infinite_f) = match (negligible(ss_within), negligible(ss_between)) {
        (true, true) => return Err(Error::UndefinedF),
        (true, false) => (f64::INFINITY, 0.0, true),
        (false, _) => {
            let f = ms_between / ms_within;
            (
                f,
                f_upper_tail(f, df_between as f64, df_within as f64),
                false,
            )
        }
    };

    Ok(AnovaResult {
        f_stat,
        p_value,
        df_between,
        df_within,
        group_means,
        group_sizes,
        ms_between,
        ms_within,
        infinite_f,
    })
}
