use crate::stats::mean;
use crate::{Error, Result};

/// Ordinary least-squares line `y = intercept + slope · x`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LineFit {
    pub slope: f64,
    pub intercept: f64,
    /// Coefficient of determination, clamped to `[0, 1]`. A perfectly flat
    /// response that is fitted exactly counts as `1`.
    pub r_squared: f64,
    pub n: usize,
}

pub fn ols(xs: &[f64], ys: &[f64]) -> Result<LineFit> {
    if xs.len() != ys.len() {
        return Err(Error::InvalidArgument("x and y lengths differ"));
    }
    if xs.len() < 2 {
        return Err(Error::InsufficientData("a line needs at least two points"));
    }
    let (mx, my) = (mean(xs), mean(ys));
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    let mut syy = 0.0;
    for (&x, &y) in xs.iter().zip(ys) {
        let (dx, dy) = (x - mx, y - my);
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if sxx == 0.0 {
        return Err(Error::DegenerateFit("all abscissae are equal"));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_res: f64 = xs
        .iter()
        .zip(ys)
        .map(|(&x, &y)| {
            let r = y - (intercept + slope * x);
            r * r
        })
        .sum();
    let r_squared = if syy == 0.0 {
        1.0
    } else {
        (1.0 - ss_res / syy).clamp(0.0, 1.0)
    };
    Ok(LineFit {
        slope,
        intercept,
        r_squared,
        n: xs.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_line() {
        let fit = ols(&[0.0, 1.0, 2.0, 3.0], &[1.0, 3.0, 5.0, 7.0]).unwrap();
        assert!((fit.slope - 2.0).abs() < 1e-14);
        assert!((fit.intercept - 1.0).abs() < 1e-14);
        assert!((fit.r_squared - 1.0).abs() < 1e-14);
    }

    #[test]
    fn noisy_line_r_squared() {
        let xs = [0.0, 1.0, 2.0, 3.0];
        let ys = [1.0, 0.0, 3.0, 2.0];
        let fit = ols(&xs, &ys).unwrap();
        // sxx = 5, sxy = 3, syy = 5
        assert!((fit.slope - 0.6).abs() < 1e-14);
        assert!((fit.intercept - 0.6).abs() < 1e-14);
        // ss_res = syy - slope * sxy = 3.2
        assert!((fit.r_squared - 0.36).abs() < 1e-14);
    }

    #[test]
    fn degenerate() {
        assert!(matches!(
            ols(&[1.0, 1.0], &[0.0, 1.0]),
            Err(Error::DegenerateFit(_))
        ));
        assert!(matches!(
            ols(&[1.0], &[0.0]),
            Err(Error::InsufficientData(_))
        ));
    }
}
