//! Power-law fits for scaling studies.

use serde::{Deserialize, Serialize};

/// Least-squares fit of `log y = intercept + exponent · log x`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerLawFit {
    pub exponent: f64,
    pub intercept: f64,
    /// Standard error of the exponent; `None` with fewer than three points.
    pub exponent_stderr: Option<f64>,
}

/// Returns `None` unless there are at least two points, all positive, with
/// distinct `x`.
pub fn fit_power_law(xs: &[f64], ys: &[f64]) -> Option<PowerLawFit> {
    if xs.len() != ys.len()
        || xs.len() < 2
        || xs.iter().chain(ys).any(|&v| v <= 0.0 || !v.is_finite())
    {
        return None;
    }
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let n = lx.len() as f64;
    let (mx, my) = (lx.iter().sum::<f64>() / n, ly.iter().sum::<f64>() / n);
    let sxx: f64 = lx.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let exponent = sxy / sxx;
    let intercept = my - exponent * mx;
    let exponent_stderr = (lx.len() > 2).then(|| {
        let rss: f64 = lx
            .iter()
            .zip(&ly)
            .map(|(x, y)| (y - intercept - exponent * x).powi(2))
            .sum();
        (rss / (n - 2.0) / sxx).sqrt()
    });
    Some(PowerLawFit {
        exponent,
        intercept,
        exponent_stderr,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_power_law() {
        let xs = [2.0, 4.0, 8.0, 16.0];
        let ys: Vec<f64> = xs.iter().map(|x: &f64| 3.0 * x.powf(2.5)).collect();
        let f = fit_power_law(&xs, &ys).unwrap();
        assert!((f.exponent - 2.5).abs() < 1e-12);
        assert!((f.intercept - 3f64.ln()).abs() < 1e-12);
        assert!(f.exponent_stderr.unwrap() < 1e-12);
    }

    #[test]
    fn degenerate_inputs() {
        assert_eq!(fit_power_law(&[1.0], &[1.0]), None);
        assert_eq!(fit_power_law(&[1.0, 1.0], &[1.0, 2.0]), None);
        assert_eq!(fit_power_law(&[1.0, 2.0], &[1.0, -2.0]), None);
        assert_eq!(
            fit_power_law(&[1.0, 2.0], &[1.0, 2.0])
                .unwrap()
                .exponent_stderr,
            None
        );
    }
}
