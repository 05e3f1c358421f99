//! Studentized range distribution and the Tukey–Kramer procedure.
//!
//! For `k` standard normals the range `R` satisfies
//!
//! ```text
//! Pr(R < w) = k ∫ φ(z) [Φ(z) − Φ(z − w)]^(k−1) dz
//! ```
//!
//! and the studentized range `Q = R / s`, with `s² ~ χ²_ν / ν`, mixes that
//! over the density of `s`. Both integrals use composite 16-point
//! Gauss–Legendre panels.

use alloc::vec::Vec;

use crate::stats::anova::anova_one_way;
use crate::stats::special::{gauss_legendre, ln_gamma, normal_cdf, normal_pdf};
use crate::{Error, Result};

const INNER_PANELS: usize = 16;
const INNER_LIMIT: f64 = 8.5;
const OUTER_PANELS: usize = 24;

struct RangeIntegrator {
    z: Vec<f64>,
    weight_pdf: Vec<f64>,
    cdf: Vec<f64>,
    x: [f64; 16],
    w: [f64; 16],
}

impl RangeIntegrator {
    fn new() -> Self {
        let (x, w) = gauss_legendre::<16>();
        let panel = 2.0 * INNER_LIMIT / INNER_PANELS as f64;
        let mut z = Vec::with_capacity(16 * INNER_PANELS);
        let mut weight_pdf = Vec::with_capacity(16 * INNER_PANELS);
        for p in 0..INNER_PANELS {
            let mid = -INNER_LIMIT + (p as f64 + 0.5) * panel;
            for (xi, wi) in x.iter().zip(&w) {
                let zi = mid + 0.5 * panel * xi;
                z.push(zi);
                weight_pdf.push(0.5 * panel * wi * normal_pdf(zi));
            }
        }
        let cdf = z.iter().map(|&zi| normal_cdf(zi)).collect();
        Self {
            z,
            weight_pdf,
            cdf,
            x,
            w,
        }
    }

    /// `Pr(R < w)` for the range of `k` standard normals.
    fn range_cdf(&self, w: f64, k: usize) -> f64 {
        if w <= 0.0 {
            return 0.0;
        }
        let power = (k - 1) as f64;
        let total: f64 = self
            .z
            .iter()
            .zip(&self.weight_pdf)
            .zip(&self.cdf)
            .map(|((&z, &wp), &c)| wp * libm::pow(c - normal_cdf(z - w), power))
            .sum();
        (k as f64 * total).clamp(0.0, 1.0)
    }

    fn studentized_cdf(&self, q: f64, k: usize, df: f64) -> f64 {
        if q <= 0.0 {
            return 0.0;
        }
        if df.is_infinite() {
            return self.range_cdf(q, k);
        }
        // s = sqrt(chi2_df / df) concentrates at 1 with sd ~ 1/sqrt(2 df)
        let spread = 10.0 / libm::sqrt(2.0 * df);
        let lo = (1.0 - spread).max(0.0);
        let hi = 1.0 + spread;
        let ln_norm = 0.5 * df * libm::log(df)
            - ln_gamma(0.5 * df)
            - (0.5 * df - 1.0) * core::f64::consts::LN_2;
        let panel = (hi - lo) / OUTER_PANELS as f64;
        let mut total = 0.0;
        for p in 0..OUTER_PANELS {
            let mid = lo + (p as f64 + 0.5) * panel;
            for (xi, wi) in self.x.iter().zip(&self.w) {
                let s = mid + 0.5 * panel * xi;
                let ln_density = ln_norm + (df - 1.0) * libm::log(s) - 0.5 * df * s * s;
                total += 0.5 * panel * wi * libm::exp(ln_density) * self.range_cdf(q * s, k);
            }
        }
        total.clamp(0.0, 1.0)
    }
}

fn check_shape(k: usize, df: f64) -> Result<()> {
    if k < 2 {
        return Err(Error::InvalidArgument(
            "studentized range needs at least two groups",
        ));
    }
    if !(df > 0.0) {
        return Err(Error::InvalidArgument(
            "degrees of freedom must be positive",
        ));
    }
    Ok(())
}

/// `Pr(Q < q)` for the studentized range of `k` means with `df` degrees of
/// freedom (`f64::INFINITY` for a known variance).
pub fn studentized_range_cdf(q: f64, k: usize, df: f64) -> Result<f64> {
    check_shape(k, df)?;
    Ok(RangeIntegrator::new().studentized_cdf(q, k, df))
}

/// The `level` quantile of the studentized range, by bisection on the CDF.
pub fn studentized_range_quantile(level: f64, k: usize, df: f64) -> Result<f64> {
    check_shape(k, df)?;
    if !(level > 0.0 && level < 1.0) {
        return Err(Error::InvalidArgument("level must lie in (0, 1)"));
    }
    let integ = RangeIntegrator::new();
    let mut lo = 0.0;
    let mut hi = 4.0;
    while integ.studentized_cdf(hi, k, df) < level {
        lo = hi;
        hi *= 2.0;
        if hi > 1e4 {
            return Err(Error::InvalidArgument("quantile out of range"));
        }
    }
    while hi - lo > 1e-9 * hi {
        let mid = 0.5 * (lo + hi);
        if integ.studentized_cdf(mid, k, df) < level {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

#[derive(Debug, Clone, PartialEq)]
pub struct TukeyPair {
    pub group_a: usize,
    pub group_b: usize,
    /// `mean_a − mean_b`.
    pub mean_diff: f64,
    pub critical_span: f64,
    pub significant: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TukeyResult {
    pub level: f64,
    /// Studentized-range quantile used for every pair.
    pub q_critical: f64,
    pub pairs: Vec<TukeyPair>,
}

/// Tukey–Kramer pairwise comparisons at confidence `level` (e.g. 0.95).
///
/// Pair `(a, b)` is significant when
/// `|mean_a − mean_b| > q · sqrt(MSW / 2 · (1/n_a + 1/n_b))`.
pub fn tukey_kramer<G: AsRef<[f64]>>(groups: &[G], level: f64) -> Result<TukeyResult> {
    let anova = anova_one_way(groups)?;
    let k = groups.len();
    let q_critical = studentized_range_quantile(level, k, anova.df_within as f64)?;
    let mut pairs = Vec::with_capacity(k * (k - 1) / 2);
    for a in 0..k {
        for b in a + 1..k {
            let mean_diff = anova.group_means[a] - anova.group_means[b];
            let inv = 1.0 / anova.group_sizes[a] as f64 + 1.0 / anova.group_sizes[b] as f64;
            let critical_span = q_critical * libm::sqrt(anova.ms_within / 2.0 * inv);
            pairs.push(TukeyPair {
                group_a: a,
                group_b: b,
                mean_diff,
                critical_span,
                significant: mean_diff.abs() > critical_span,
            });
        }
    }
    Ok(TukeyResult {
        level,
        q_critical,
        pairs,
    })
}
