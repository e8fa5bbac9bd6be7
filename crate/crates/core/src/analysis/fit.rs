use serde::{Deserialize, Serialize};

use super::{domain, AnalysisError};

/// Least-squares line through `(ln x, ln y)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExponentFit {
    pub slope: f64,
    pub intercept: f64,
    /// Largest `|ln y - (intercept + slope ln x)|` over the points.
    pub max_residual: f64,
    /// Smallest and largest `x` used.
    pub window: (f64, f64),
    pub points: usize,
}

impl ExponentFit {
    pub fn predict(&self, x: f64) -> f64 {
        (self.intercept + self.slope * x.ln()).exp()
    }
}

/// Fits `y ≈ C x^slope` by least squares in log-log coordinates.
pub fn fit_exponent(pairs: &[(f64, f64)]) -> Result<ExponentFit, AnalysisError> {
    if pairs.len() < 3 {
        return Err(AnalysisError::TooFewPoints(pairs.len()));
    }
    if let Some(index) = pairs
        .iter()
        .position(|&(x, y)| !(x > 0.0 && y > 0.0 && x.is_finite() && y.is_finite()))
    {
        return Err(AnalysisError::NonPositive { index });
    }
    let logs: Vec<(f64, f64)> = pairs.iter().map(|&(x, y)| (x.ln(), y.ln())).collect();
    let k = logs.len() as f64;
    let mx = logs.iter().map(|p| p.0).sum::<f64>() / k;
    let my = logs.iter().map(|p| p.1).sum::<f64>() / k;
    let sxx: f64 = logs.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = logs.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if sxx == 0.0 {
        return Err(domain("all x values coincide"));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let max_residual = logs
        .iter()
        .map(|&(lx, ly)| (ly - intercept - slope * lx).abs())
        .fold(0.0, f64::max);
    let xs = pairs.iter().map(|p| p.0);
    let window = (xs.clone().fold(f64::INFINITY, f64::min), xs.fold(0.0, f64::max));
    Ok(ExponentFit { slope, intercept, max_residual, window, points: pairs.len() })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_square_law() {
        let pts: Vec<_> = (1..=10).map(|r| (r as f64, (r * r) as f64)).collect();
        let fit = fit_exponent(&pts).unwrap();
        assert!((fit.slope - 2.0).abs() < 1e-12);
        assert!(fit.intercept.abs() < 1e-12);
        assert!(fit.max_residual < 1e-12);
        assert_eq!(fit.window, (1.0, 10.0));
    }

    #[test]
    fn constant_has_zero_slope() {
        let pts: Vec<_> = (1..=5).map(|r| (r as f64, 7.0)).collect();
        assert!(fit_exponent(&pts).unwrap().slope.abs() < 1e-12);
    }

    #[test]
    fn errors() {
        assert_eq!(fit_exponent(&[(1.0, 1.0), (2.0, 2.0)]), Err(AnalysisError::TooFewPoints(2)));
        assert_eq!(
            fit_exponent(&[(1.0, 1.0), (2.0, 0.0), (3.0, 1.0)]),
            Err(AnalysisError::NonPositive { index: 1 })
        );
    }
}
