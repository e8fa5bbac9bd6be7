//! The Nash-type ratio along the spinal test functions `g_{2n}`.

use serde::{Deserialize, Serialize};

use crate::graph::{BfsScratch, VertexId};
use crate::spinal::SpinalGraph;
use crate::volume::FP_SLACK;

use super::gradient::{check_exponents, graph_gradient, lp_norm, ratio_from_norms};
use super::{domain, fit_exponent, nash_slope_law, AnalysisError, ExponentFit};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NashEntry {
    pub n: usize,
    pub norm1: f64,
    pub normp: f64,
    pub gradp: f64,
    pub ratio: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NashCurve {
    pub x0: VertexId,
    pub p: f64,
    pub beta: f64,
    pub entries: Vec<NashEntry>,
    /// Log-log fit of ratio against `n`; absent with fewer than 3 points.
    pub fit: Option<ExponentFit>,
}

/// Fitted slope compared with `1 + (δ_G - δ_Σ)/p - δ_G/β`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SlopeCheck {
    pub expected: f64,
    pub measured: f64,
    pub error: f64,
    /// Allowed error: `rel_tol * max(|expected|, abs_floor)`.
    pub allowed: f64,
    pub pass: bool,
}

impl NashCurve {
    pub fn slope_check(&self, delta_sigma: f64, delta_g: f64, rel_tol: f64, abs_floor: f64) -> Option<SlopeCheck> {
        let fit = self.fit.as_ref()?;
        let expected = nash_slope_law(self.p, self.beta, delta_sigma, delta_g);
        let error = (fit.slope - expected).abs();
        let allowed = rel_tol * expected.abs().max(abs_floor);
        Some(SlopeCheck { expected, measured: fit.slope, error, allowed, pass: error <= allowed })
    }
}

fn require_safe(sg: &SpinalGraph, x0: VertexId, radius: usize) -> Result<(), AnalysisError> {
    if !sg.is_spine(x0) {
        return Err(AnalysisError::NotOnSpine(x0));
    }
    let safe = sg.safe_spinal_radius(x0);
    if radius > safe {
        return Err(AnalysisError::RadiusUnsafe { requested: radius, safe });
    }
    Ok(())
}

/// Evaluates the ratio on `f = g_{2n}` for each `n` in `n_list`.
///
/// Uses that `g_{2n}` is constant on fibers, so norms are sums over spine
/// vertices weighted by fiber size and the gradient lives on the spine.
pub fn nash_curve(
    sg: &SpinalGraph,
    x0: VertexId,
    p: f64,
    beta: f64,
    n_list: &[usize],
) -> Result<NashCurve, AnalysisError> {
    check_exponents(p, beta)?;
    if n_list.is_empty() || n_list[0] == 0 || n_list.windows(2).any(|w| w[0] >= w[1]) {
        return Err(domain("n_list must be positive and strictly increasing"));
    }
    let n_max = *n_list.last().unwrap();
    require_safe(sg, x0, 2 * n_max)?;
    let skeleton = sg.skeleton();
    let spine = sg.spine();
    let g = sg.graph();
    let mut bfs = BfsScratch::new(skeleton.vertex_count());
    bfs.run(skeleton, sg.spine_position(x0).unwrap(), 2 * n_max);
    let order = bfs.order().to_vec();

    let mut entries = Vec::with_capacity(n_list.len());
    let mut grads = Vec::new();
    for &n in n_list {
        let two_n = 2 * n;
        let numer = |i: usize| -> usize {
            bfs.distance(i).map_or(0, |d| two_n.saturating_sub(d))
        };
        let denom = two_n as f64;
        let (mut norm1, mut sum_p) = (0.0f64, 0.0f64);
        grads.clear();
        for &i in &order {
            let d = bfs.distance(i).unwrap();
            if d > two_n {
                break;
            }
            let k = numer(i);
            let fiber = sg.fiber(spine[i]).len() as f64;
            if k > 0 {
                let v = k as f64 / denom;
                norm1 += fiber * v;
                sum_p += fiber * v.powf(p);
            }
            let diff2: usize = skeleton
                .neighbors(i)
                .iter()
                .map(|&j| {
                    let kj = numer(j);
                    kj.abs_diff(k).pow(2)
                })
                .sum();
            if diff2 > 0 {
                let m = g.degree(spine[i]) as f64;
                grads.push((diff2 as f64 / (2.0 * m)).sqrt() / denom);
            }
        }
        let normp = sum_p.powf(1.0 / p);
        let gradp = lp_norm(&grads, p);
        entries.push(NashEntry { n, norm1, normp, gradp, ratio: ratio_from_norms(norm1, normp, gradp, p, beta) });
    }
    let fit = if entries.len() >= 3 && entries.iter().all(|e| e.ratio.is_finite()) {
        Some(fit_exponent(&entries.iter().map(|e| (e.n as f64, e.ratio)).collect::<Vec<_>>())?)
    } else {
        None
    };
    Ok(NashCurve { x0, p, beta, entries, fit })
}

/// The three explicit bounds on `g_{2n}` together with the support claims
/// for its gradient.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Lemma4Report {
    pub x0: VertexId,
    pub n: usize,
    pub p: f64,
    pub norm1: f64,
    /// `|D(x0, 2n)|`, upper bound for `norm1`.
    pub spinal_volume_2n: usize,
    pub norm1_ok: bool,
    pub normp: f64,
    /// `|D(x0, n)|^{1/p} / 2`, lower bound for `normp`.
    pub normp_lower: f64,
    pub normp_ok: bool,
    pub gradp: f64,
    /// `|B_Σ(x0, 2n)|^{1/p} / (2√2 n)`, upper bound for `gradp`.
    pub gradp_upper: f64,
    pub gradp_ok: bool,
    pub gradient_vanishes_off_spine: bool,
    pub gradient_vanishes_outside: bool,
}

impl Lemma4Report {
    pub fn passes(&self) -> bool {
        self.norm1_ok
            && self.normp_ok
            && self.gradp_ok
            && self.gradient_vanishes_off_spine
            && self.gradient_vanishes_outside
    }
}

/// Checks the norm and gradient bounds for `g_{2n}` by direct evaluation
/// on the whole graph.
pub fn lemma4_bounds_check(
    sg: &SpinalGraph,
    x0: VertexId,
    n: usize,
    p: f64,
) -> Result<Lemma4Report, AnalysisError> {
    if n == 0 {
        return Err(domain("n must be positive"));
    }
    if !(p >= 1.0) {
        return Err(domain(format!("p = {p} must be at least 1")));
    }
    require_safe(sg, x0, 2 * n)?;
    let g = sg.test_function(x0, 2 * n as u64)?;
    let values = g.values();
    let grad = graph_gradient(sg.graph(), &values);
    let norm1 = lp_norm(&values, 1.0);
    let normp = lp_norm(&values, p);
    let gradp = lp_norm(&grad, p);

    let spinal = sg.spinal_volumes(x0, 2 * n);
    let spine_ball = sg.spine_ball_size(x0, 2 * n);
    let normp_lower = (spinal[n] as f64).powf(1.0 / p) / 2.0;
    let gradp_upper = (spine_ball as f64).powf(1.0 / p) / (2.0 * 2f64.sqrt() * n as f64);

    let in_d2n = sg.spinal_set(x0, 2 * n);
    let mut inside = vec![false; values.len()];
    for v in in_d2n {
        inside[v] = true;
    }
    let gradient_vanishes_off_spine =
        (0..grad.len()).all(|x| sg.is_spine(x) || grad[x] == 0.0);
    let gradient_vanishes_outside = (0..grad.len()).all(|x| inside[x] || grad[x] == 0.0);

    Ok(Lemma4Report {
        x0,
        n,
        p,
        norm1,
        spinal_volume_2n: spinal[2 * n],
        norm1_ok: norm1 <= spinal[2 * n] as f64 * (1.0 + FP_SLACK),
        normp,
        normp_lower,
        normp_ok: normp >= normp_lower * (1.0 - FP_SLACK),
        gradp,
        gradp_upper,
        gradp_ok: gradp <= gradp_upper * (1.0 + FP_SLACK),
        gradient_vanishes_off_spine,
        gradient_vanishes_outside,
    })
}
