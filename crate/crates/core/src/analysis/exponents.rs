//! Closed-form exponent relations between `p`, `β`, `δ_Σ`, `δ_G` and `ν`.

use serde::{Deserialize, Serialize};

use super::{domain, AnalysisError};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DimInequality {
    pub holds: bool,
    pub slack: f64,
}

/// Evaluates `(δ_G - δ_Σ)/p - δ_G/β + 1`; the inequality holds when this
/// is `≤ 0`. A graph of dimensions `(δ_Σ, δ_G)` satisfying the Nash-type
/// inequality with parameters `(p, β)` must satisfy it.
pub fn dim_inequality(p: f64, beta: f64, delta_sigma: f64, delta_g: f64) -> DimInequality {
    let slack = (delta_g - delta_sigma) / p - delta_g / beta + 1.0;
    DimInequality { holds: slack <= 0.0, slack }
}

/// Growth exponent of the Nash ratio along the test functions `g_{2n}`:
/// `1 + (δ_G - δ_Σ)/p - δ_G/β`, the same expression as the slack above.
pub fn nash_slope_law(p: f64, beta: f64, delta_sigma: f64, delta_g: f64) -> f64 {
    dim_inequality(p, beta, delta_sigma, delta_g).slack
}

/// Smallest `p` allowed by the dimension inequality:
/// `β(δ_G - δ_Σ)/(δ_G - β)`.
pub fn p_lower_bound(beta: f64, delta_sigma: f64, delta_g: f64) -> Result<f64, AnalysisError> {
    if !(beta > 0.0) {
        return Err(domain(format!("beta = {beta} must be positive")));
    }
    if !(delta_g > delta_sigma) {
        return Err(domain(format!("delta_G = {delta_g} must exceed delta_Sigma = {delta_sigma}")));
    }
    if !(delta_g > beta) {
        return Err(AnalysisError::BetaTooLarge { beta, delta_g });
    }
    Ok(beta * (delta_g - delta_sigma) / (delta_g - beta))
}

/// `2ν/(ν + 1)`: the Nash exponent coming from heat-kernel decay
/// `t^{-ν/(ν+1)}`.
pub fn beta_from_nu(nu: f64) -> f64 {
    2.0 * nu / (nu + 1.0)
}

/// Critical exponent `p_c = 2(δ_G - δ_Σ)/(δ_G/ν' - 2δ_Σ + 2)` with
/// `ν' = ν/(ν - 1)`.
///
/// Evaluated as `2(δ_G - δ_Σ)ν / (δ_G(ν - 1) + (2 - 2δ_Σ)ν)`, which is the
/// same quantity and returns exactly 2 when `δ_Σ = 1` and `δ_G = ν`.
pub fn critical_p(delta_sigma: f64, delta_g: f64, nu: f64) -> Result<f64, AnalysisError> {
    if !(delta_sigma >= 1.0) {
        return Err(domain(format!("delta_Sigma = {delta_sigma} must be at least 1")));
    }
    if !(delta_g > delta_sigma) {
        return Err(domain(format!("delta_G = {delta_g} must exceed delta_Sigma = {delta_sigma}")));
    }
    if !(nu > 1.0) || !nu.is_finite() {
        return Err(domain(format!("nu = {nu} must exceed 1 so that nu' = nu/(nu-1) is finite")));
    }
    let denominator = delta_g * (nu - 1.0) + (2.0 - 2.0 * delta_sigma) * nu;
    if !(denominator > 0.0) {
        return Err(domain(format!(
            "delta_G/nu' - 2 delta_Sigma + 2 = {} must be positive",
            denominator / nu
        )));
    }
    Ok(2.0 * (delta_g - delta_sigma) * nu / denominator)
}

#[cfg(test)]
mod tests {
    use super::*;

    const LOG3_5: f64 = 1.464_973_520_717_927;

    #[test]
    fn inequality_examples() {
        // δ_Σ = δ_G: holds iff β ≤ δ_G.
        assert!(dim_inequality(3.0, 1.5, 2.0, 2.0).holds);
        assert!(!dim_inequality(3.0, 2.5, 2.0, 2.0).holds);
        let b = beta_from_nu(LOG3_5);
        assert!(dim_inequality(2.0, b, 1.0, LOG3_5).slack.abs() < 1e-12);
        let at4 = dim_inequality(4.0, b, 1.0, LOG3_5);
        assert!(at4.holds && at4.slack < -0.1);
        assert!((at4.slack + 0.116_24).abs() < 1e-4);
    }

    #[test]
    fn lower_bound_examples() {
        assert!((p_lower_bound(1.5, 1.5, 3.0).unwrap() - 1.5).abs() < 1e-15);
        assert!(p_lower_bound(1e-9, 1.0, 2.0).unwrap() < 1e-8);
        let b = beta_from_nu(LOG3_5);
        assert!((p_lower_bound(b, 1.0, LOG3_5).unwrap() - 2.0).abs() < 1e-12);
        assert!(matches!(p_lower_bound(3.0, 1.0, 2.0), Err(AnalysisError::BetaTooLarge { .. })));
        assert!(matches!(p_lower_bound(1.0, 2.0, 2.0), Err(AnalysisError::DomainError(_))));
    }

    #[test]
    fn beta_examples() {
        assert_eq!(beta_from_nu(1.0), 1.0);
        assert!((beta_from_nu(LOG3_5) - 1.188_64).abs() < 1e-5);
        assert!((beta_from_nu(1e12) - 2.0).abs() < 1e-11);
    }

    #[test]
    fn critical_examples() {
        for d in [1.2, LOG3_5, 2.0, 3.0, 1.46497] {
            assert_eq!(critical_p(1.0, d, d).unwrap(), 2.0);
        }
        assert!((critical_p(1.5, 3.0, 3.0).unwrap() - 3.0).abs() < 1e-12);
        assert!(critical_p(1.0, 2.0, 1.0001).unwrap() > 2.0);
        assert!(matches!(critical_p(1.0, 2.0, 1.0), Err(AnalysisError::DomainError(_))));
        assert!(matches!(critical_p(2.0, 2.5, 1.5), Err(AnalysisError::DomainError(_))));
    }

    #[test]
    fn conjugate_pair() {
        let (ds, dg, nu) = (1.2, 2.7, 2.1);
        let pc = critical_p(ds, dg, nu).unwrap();
        let pl = p_lower_bound(beta_from_nu(nu), ds, dg).unwrap();
        assert!((1.0 / pc + 1.0 / pl - 1.0).abs() < 1e-12);
    }
}
