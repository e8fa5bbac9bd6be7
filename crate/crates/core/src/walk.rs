//! Return probabilities `p_t(x, x)` of the simple random walk.
//!
//! The exact routine uses `p_{2s}(x,x) = Σ_y p_s(x,y)² m(x)/m(y)`, valid by
//! reversibility, so only `t_max/2` steps are iterated and the walk only
//! has to stay clear of the truncation boundary for `t_max/2` steps.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::analysis::{fit_exponent, AnalysisError, ExponentFit};
use crate::graph::{BfsScratch, Graph, Truncation, VertexId};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum WalkError {
    #[error("the walk would reach distance {needed} but the truncation boundary is at distance {available}")]
    BoundaryReached { needed: usize, available: usize },
    #[error("need at least 3 positive even times in the window, got {0}")]
    TooFewPoints(usize),
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error(transparent)]
    Analysis(#[from] AnalysisError),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReturnProbSeries {
    pub start: VertexId,
    /// `(t, p_t(x, x))` for even `t` from 0 to `t_max`.
    pub entries: Vec<(usize, f64)>,
    pub exact: bool,
    /// Monte Carlo standard errors, aligned with `entries`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub std_errors: Option<Vec<f64>>,
    /// Largest `|Σ_y p_s(x, y) - 1|` seen while iterating (exact mode).
    pub max_mass_error: f64,
}

impl ReturnProbSeries {
    pub fn get(&self, t: usize) -> Option<f64> {
        self.entries.iter().find(|e| e.0 == t).map(|e| e.1)
    }

    /// Even times at which `p_t` exceeds its predecessor.
    pub fn monotonicity_violations(&self) -> Vec<usize> {
        self.entries.windows(2).filter(|w| w[1].1 > w[0].1).map(|w| w[1].0).collect()
    }
}

fn check_boundary(g: &Graph, truncation: &Truncation, x: VertexId, t_max: usize) -> Result<(), WalkError> {
    let available = truncation.boundary_distance(g, x);
    let needed = t_max / 2;
    if needed >= available {
        return Err(WalkError::BoundaryReached { needed, available });
    }
    Ok(())
}

/// Compensated sum, so mass conservation can be checked at 1e-12.
fn neumaier_sum(values: impl Iterator<Item = f64>) -> f64 {
    let (mut sum, mut comp) = (0.0f64, 0.0f64);
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

/// Exact `p_t(x, x)` for even `t ≤ t_max`, by iterating the transition
/// `t_max/2` times on the ball `B(x, t_max/2)`.
pub fn return_probabilities_exact(
    g: &Graph,
    truncation: &Truncation,
    x: VertexId,
    t_max: usize,
) -> Result<ReturnProbSeries, WalkError> {
    check_boundary(g, truncation, x, t_max)?;
    let s_max = t_max / 2;
    let mut bfs = BfsScratch::new(g.vertex_count());
    bfs.run(g, x, s_max);
    let order = bfs.order();
    let len = order.len();
    // Local ids in BFS order; the support after s steps is a prefix.
    let mut local = vec![usize::MAX; g.vertex_count()];
    for (i, &v) in order.iter().enumerate() {
        local[v] = i;
    }
    let layers = bfs.layer_sizes();
    let mut prefix = vec![0usize; layers.len() + 1];
    for (d, &c) in layers.iter().enumerate() {
        prefix[d + 1] = prefix[d] + c;
    }
    let inv_degree: Vec<f64> = order.iter().map(|&v| 1.0 / g.degree(v) as f64).collect();
    let mut offsets = Vec::with_capacity(len + 1);
    let mut adj = Vec::new();
    offsets.push(0);
    for &v in order {
        adj.extend(g.neighbors(v).iter().map(|&w| local[w]).filter(|&w| w != usize::MAX));
        offsets.push(adj.len());
    }
    let m_x = g.degree(x) as f64;

    let mut cur = vec![0.0f64; len];
    let mut next = vec![0.0f64; len];
    cur[0] = 1.0;
    let mut entries = vec![(0usize, 1.0f64)];
    let mut max_mass_error = 0.0f64;
    for s in 1..=s_max {
        let sources = prefix[s.min(layers.len())];
        let reach = prefix[(s + 1).min(layers.len())];
        next[..reach].iter_mut().for_each(|v| *v = 0.0);
        for u in 0..sources {
            let share = cur[u] * inv_degree[u];
            if share != 0.0 {
                for &w in &adj[offsets[u]..offsets[u + 1]] {
                    next[w] += share;
                }
            }
        }
        std::mem::swap(&mut cur, &mut next);
        let mass = neumaier_sum(cur[..reach].iter().copied());
        max_mass_error = max_mass_error.max((mass - 1.0).abs());
        let ret = neumaier_sum((0..reach).map(|y| cur[y] * cur[y] * m_x * inv_degree[y]));
        entries.push((2 * s, ret));
    }
    Ok(ReturnProbSeries { start: x, entries, exact: true, std_errors: None, max_mass_error })
}

/// Exact `p_t(x, x)` by iterating all `t_max` steps over the whole graph.
/// Quadratic work; used to cross-check the half-time routine.
pub fn return_probabilities_direct(g: &Graph, x: VertexId, t_max: usize) -> ReturnProbSeries {
    let n = g.vertex_count();
    let mut cur = vec![0.0f64; n];
    let mut next = vec![0.0f64; n];
    cur[x] = 1.0;
    let mut entries = vec![(0usize, 1.0)];
    let mut max_mass_error = 0.0f64;
    for t in 1..=t_max {
        next.iter_mut().for_each(|v| *v = 0.0);
        for (u, &mass) in cur.iter().enumerate() {
            let share = mass / g.degree(u) as f64;
            for &w in g.neighbors(u) {
                next[w] += share;
            }
        }
        std::mem::swap(&mut cur, &mut next);
        max_mass_error = max_mass_error.max((neumaier_sum(cur.iter().copied()) - 1.0).abs());
        if t % 2 == 0 {
            entries.push((t, cur[x]));
        }
    }
    ReturnProbSeries { start: x, entries, exact: true, std_errors: None, max_mass_error }
}

/// Seeded Monte Carlo estimate of `p_t(x, x)` for even `t ≤ t_max`.
/// Walkers are split into fixed chunks, each with its own ChaCha stream,
/// so results do not depend on the thread count.
pub fn return_probabilities_mc(
    g: &Graph,
    truncation: &Truncation,
    x: VertexId,
    t_max: usize,
    walkers: usize,
    seed: u64,
) -> Result<ReturnProbSeries, WalkError> {
    if walkers == 0 {
        return Err(WalkError::InvalidParameters("at least one walker is needed".into()));
    }
    check_boundary(g, truncation, x, t_max)?;
    const CHUNK: usize = 1024;
    let chunks = walkers.div_ceil(CHUNK);
    let half = t_max / 2;
    let counts = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(c as u64);
            let mut hits = vec![0u64; half + 1];
            let size = CHUNK.min(walkers - c * CHUNK);
            for _ in 0..size {
                let mut pos = x;
                hits[0] += 1;
                for t in 1..=2 * half {
                    let nb = g.neighbors(pos);
                    pos = nb[rng.random_range(0..nb.len())];
                    if t % 2 == 0 && pos == x {
                        hits[t / 2] += 1;
                    }
                }
            }
            hits
        })
        .reduce(
            || vec![0u64; half + 1],
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                a
            },
        );
    let w = walkers as f64;
    let entries: Vec<(usize, f64)> = counts.iter().enumerate().map(|(s, &c)| (2 * s, c as f64 / w)).collect();
    let std_errors = entries.iter().map(|&(_, p)| (p * (1.0 - p) / w).sqrt()).collect();
    Ok(ReturnProbSeries { start: x, entries, exact: false, std_errors: Some(std_errors), max_mass_error: 0.0 })
}

/// Log-log slope of `p_t(x, x)` against `t` over even `t` in the window.
pub fn decay_fit(series: &ReturnProbSeries, t_window: (usize, usize)) -> Result<ExponentFit, WalkError> {
    let pts: Vec<(f64, f64)> = series
        .entries
        .iter()
        .filter(|&&(t, p)| t >= t_window.0 && t <= t_window.1 && t > 0 && p > 0.0)
        .map(|&(t, p)| (t as f64, p))
        .collect();
    if pts.len() < 3 {
        return Err(WalkError::TooFewPoints(pts.len()));
    }
    Ok(fit_exponent(&pts)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::path_graph;

    fn cut_path(n: usize) -> (Graph, Truncation) {
        (path_graph(n), Truncation { boundary: vec![0, n - 1], analysis_radius: None })
    }

    #[test]
    fn k2_flips() {
        let g = path_graph(2);
        let s = return_probabilities_exact(&g, &Truncation::none(), 0, 10).unwrap();
        assert!(s.entries.iter().all(|&(_, p)| (p - 1.0).abs() < 1e-15));
    }

    #[test]
    fn interior_path_two_steps() {
        let (g, t) = cut_path(101);
        let s = return_probabilities_exact(&g, &t, 50, 4).unwrap();
        assert_eq!(s.get(2), Some(0.5));
        assert_eq!(s.get(4), Some(0.375));
    }

    #[test]
    fn half_time_matches_direct() {
        let (g, t) = cut_path(201);
        let half = return_probabilities_exact(&g, &t, 100, 180).unwrap();
        let direct = return_probabilities_direct(&g, 100, 180);
        for (a, b) in half.entries.iter().zip(&direct.entries) {
            assert_eq!(a.0, b.0);
            assert!((a.1 - b.1).abs() < 1e-14, "t={}: {} vs {}", a.0, a.1, b.1);
        }
        assert!(half.max_mass_error < 1e-12 && direct.max_mass_error < 1e-12);
    }

    #[test]
    fn boundary_is_enforced() {
        let (g, t) = cut_path(21);
        assert!(matches!(
            return_probabilities_exact(&g, &t, 10, 20),
            Err(WalkError::BoundaryReached { needed: 10, available: 10 })
        ));
        assert!(return_probabilities_exact(&g, &t, 10, 19).is_ok());
    }

    #[test]
    fn monte_carlo_is_seeded() {
        let (g, t) = cut_path(101);
        let a = return_probabilities_mc(&g, &t, 50, 20, 3000, 9).unwrap();
        let b = return_probabilities_mc(&g, &t, 50, 20, 3000, 9).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.entries[0], (0, 1.0));
    }

    #[test]
    fn decay_fit_needs_points() {
        let (g, t) = cut_path(101);
        let s = return_probabilities_exact(&g, &t, 50, 8).unwrap();
        assert!(matches!(decay_fit(&s, (6, 8)), Err(WalkError::TooFewPoints(2))));
    }
}
