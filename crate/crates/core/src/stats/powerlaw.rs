use alloc::vec::Vec;

use crate::stats::regression::ols;
use crate::{Error, Result};

/// `y ≈ prefactor · x^exponent`, fitted by least squares in log-log space.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerLawFit {
    pub exponent: f64,
    pub prefactor: f64,
    pub r_squared: f64,
}

pub fn fit_power_law(x: &[f64], y: &[f64]) -> Result<PowerLawFit> {
    if x.len() != y.len() {
        return Err(Error::InvalidArgument("x and y lengths differ"));
    }
    if x.iter().chain(y).any(|&v| !(v > 0.0 && v.is_finite())) {
        return Err(Error::Domain("power-law fit needs positive finite values"));
    }
    let lx: Vec<f64> = x.iter().map(|&v| libm::log(v)).collect();
    let ly: Vec<f64> = y.iter().map(|&v| libm::log(v)).collect();
    let line = ols(&lx, &ly)?;
    Ok(PowerLawFit {
        exponent: line.slope,
        prefactor: libm::exp(line.intercept),
        r_squared: line.r_squared,
    })
}
