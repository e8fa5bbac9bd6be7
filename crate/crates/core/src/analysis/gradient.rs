use crate::graph::Graph;

use super::{domain, AnalysisError};

/// `|∇f(x)| = ((1/2) Σ_{y~x} |f(y) - f(x)|² / m(x))^{1/2}`, one pass per
/// vertex.
pub fn graph_gradient(g: &Graph, f: &[f64]) -> Vec<f64> {
    assert_eq!(f.len(), g.vertex_count(), "function length must match vertex count");
    (0..g.vertex_count())
        .map(|x| {
            let fx = f[x];
            let sum: f64 = g.neighbors(x).iter().map(|&y| (f[y] - fx).powi(2)).sum();
            (0.5 * sum / g.degree(x) as f64).sqrt()
        })
        .collect()
}

/// Same quantity as [`graph_gradient`], accumulated edge by edge.
pub fn graph_gradient_edges(g: &Graph, f: &[f64]) -> Vec<f64> {
    assert_eq!(f.len(), g.vertex_count(), "function length must match vertex count");
    let mut acc = vec![0.0f64; g.vertex_count()];
    for (u, v) in g.edges() {
        let d2 = (f[u] - f[v]).powi(2);
        acc[u] += d2;
        acc[v] += d2;
    }
    acc.iter()
        .enumerate()
        .map(|(x, &s)| (s / (2 * g.degree(x)) as f64).sqrt())
        .collect()
}

/// `(Σ |f(x)|^p)^{1/p}` with counting measure; `p = ∞` gives the maximum.
/// Scaled by the maximum so large `p` does not overflow.
pub fn lp_norm(f: &[f64], p: f64) -> f64 {
    let max = f.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if p.is_infinite() || max == 0.0 {
        return max;
    }
    let sum: f64 = f.iter().map(|v| (v.abs() / max).powf(p)).sum();
    max * sum.powf(1.0 / p)
}

pub(crate) fn ratio_from_norms(norm1: f64, normp: f64, gradp: f64, p: f64, beta: f64) -> f64 {
    if gradp == 0.0 {
        return f64::INFINITY;
    }
    let q = p / (p - 1.0) / beta;
    ((1.0 + q) * normp.ln() - q * norm1.ln() - gradp.ln()).exp()
}

pub(crate) fn check_exponents(p: f64, beta: f64) -> Result<(), AnalysisError> {
    if !(p > 1.0) || !p.is_finite() {
        return Err(domain(format!("p = {p} must be a finite number above 1")));
    }
    if !(beta > 0.0) || !beta.is_finite() {
        return Err(domain(format!("beta = {beta} must be positive")));
    }
    Ok(())
}

/// `‖f‖_p^{1+p'/β} / (‖f‖_1^{p'/β} ‖∇f‖_p)`; infinite when `∇f ≡ 0`.
pub fn nash_ratio(g: &Graph, f: &[f64], p: f64, beta: f64) -> Result<f64, AnalysisError> {
    if g.vertex_count() < 2 {
        return Err(AnalysisError::DegenerateGraph);
    }
    check_exponents(p, beta)?;
    let norm1 = lp_norm(f, 1.0);
    if norm1 == 0.0 {
        return Err(domain("f must be nonzero"));
    }
    let gradp = lp_norm(&graph_gradient(g, f), p);
    Ok(ratio_from_norms(norm1, lp_norm(f, p), gradp, p, beta))
}
