//! Statistics: survival curves and exponential rate fits, one-way ANOVA
//! with Tukey–Kramer comparisons, and power-law regression.

mod anova;
mod powerlaw;
mod regression;
pub mod special;
mod survival;
mod tukey;

pub use anova::{anova_one_way, AnovaResult, PValue, P_VALUE_FLOOR};
pub use powerlaw::{fit_power_law, PowerLawFit};
pub use regression::{ols, LineFit};
pub use survival::{
    exponentiality_ks, fit_exponential_rate, survival_function, ExponentialFit, KsCheck,
    SurvivalCurve, SurvivalPoint, DEFAULT_MIN_COUNT,
};
pub use tukey::{
    studentized_range_cdf, studentized_range_quantile, tukey_kramer, TukeyPair, TukeyResult,
};

pub(crate) fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}
