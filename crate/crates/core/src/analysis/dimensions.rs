//! Measured constants for the spinal dimension conditions and for
//! polynomial lower volume bounds.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::graph::{BfsScratch, Graph, Truncation, VertexId};
use crate::spinal::SpinalGraph;
use crate::volume::DEFAULT_RATIO_THRESHOLD;

use super::{domain, AnalysisError};

/// Pass thresholds for a [`DimensionCertificate`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DimensionThresholds {
    /// Bound on `|D(x0, 2n_k)| / |D(x0, n_k)|`.
    pub doubling: f64,
    /// Bound on `|B_Σ(x0, 2n_k)| / n_k^{δ_Σ}`.
    pub spine: f64,
    /// Bound on `max / min` of `|D(x0, n_k)| / n_k^{δ_G}`.
    pub window: f64,
}

impl Default for DimensionThresholds {
    /// The spine bound is twice the others: a spine made of `2^d` rays has
    /// `|B_Σ(x0, 2n)| = 2^{d+1} n + 1`, just above 8 for `d = 2`.
    fn default() -> Self {
        DimensionThresholds {
            doubling: DEFAULT_RATIO_THRESHOLD,
            spine: 2.0 * DEFAULT_RATIO_THRESHOLD,
            window: DEFAULT_RATIO_THRESHOLD,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DimensionRow {
    pub n: usize,
    pub spinal_volume: usize,
    pub spinal_volume_2n: usize,
    pub spine_ball_2n: usize,
    pub doubling_ratio: f64,
    pub spine_ratio: f64,
    pub window_ratio: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DimensionCertificate {
    pub x0: VertexId,
    pub n_seq: Vec<usize>,
    pub delta_sigma: f64,
    pub delta_g: f64,
    pub thresholds: DimensionThresholds,
    pub c_double: f64,
    pub c_spine: f64,
    pub c_lo: f64,
    pub c_hi: f64,
    pub rows: Vec<DimensionRow>,
    pub doubling_ok: bool,
    pub spine_ok: bool,
    pub window_ok: bool,
    pub passes: bool,
}

/// Measures the doubling, spine-growth and volume-window constants along
/// `n_list` and compares them with `thresholds`.
pub fn certify_dimensions(
    sg: &SpinalGraph,
    x0: VertexId,
    n_list: &[usize],
    delta_sigma: f64,
    delta_g: f64,
    thresholds: DimensionThresholds,
) -> Result<DimensionCertificate, AnalysisError> {
    if !sg.is_spine(x0) {
        return Err(AnalysisError::NotOnSpine(x0));
    }
    if n_list.is_empty() || n_list[0] == 0 || n_list.windows(2).any(|w| w[0] >= w[1]) {
        return Err(domain("n sequence must be positive and strictly increasing"));
    }
    let top = 2 * n_list.last().unwrap();
    let safe = sg.safe_spinal_radius(x0);
    if top > safe {
        return Err(AnalysisError::RadiusUnsafe { requested: top, safe });
    }
    let spinal = sg.spinal_volumes(x0, top);
    let spine = sg.spine_volumes(x0, top);
    let rows: Vec<DimensionRow> = n_list
        .iter()
        .map(|&n| {
            let nf = n as f64;
            DimensionRow {
                n,
                spinal_volume: spinal[n],
                spinal_volume_2n: spinal[2 * n],
                spine_ball_2n: spine[2 * n],
                doubling_ratio: spinal[2 * n] as f64 / spinal[n] as f64,
                spine_ratio: spine[2 * n] as f64 / nf.powf(delta_sigma),
                window_ratio: spinal[n] as f64 / nf.powf(delta_g),
            }
        })
        .collect();
    let c_double = rows.iter().map(|r| r.doubling_ratio).fold(0.0, f64::max);
    let c_spine = rows.iter().map(|r| r.spine_ratio).fold(0.0, f64::max);
    let c_lo = rows.iter().map(|r| r.window_ratio).fold(f64::INFINITY, f64::min);
    let c_hi = rows.iter().map(|r| r.window_ratio).fold(0.0, f64::max);
    let doubling_ok = c_double <= thresholds.doubling;
    let spine_ok = c_spine <= thresholds.spine;
    let window_ok = c_hi / c_lo <= thresholds.window;
    Ok(DimensionCertificate {
        x0,
        n_seq: n_list.to_vec(),
        delta_sigma,
        delta_g,
        thresholds,
        c_double,
        c_spine,
        c_lo,
        c_hi,
        rows,
        doubling_ok,
        spine_ok,
        window_ok,
        passes: doubling_ok && spine_ok && window_ok,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VolumeLowerBound {
    /// `min |B(x, r)| / r^D` over the sample.
    pub min_constant: f64,
    pub argmin: (VertexId, usize),
    pub samples: usize,
}

/// Smallest `|B(x, r)| / r^D` over `centers × r_list`, rejecting radii the
/// truncation cannot support.
pub fn volume_lower_bound_check(
    g: &Graph,
    truncation: &Truncation,
    d: f64,
    centers: &[VertexId],
    r_list: &[usize],
) -> Result<VolumeLowerBound, AnalysisError> {
    if centers.is_empty() || r_list.is_empty() || r_list.contains(&0) {
        return Err(domain("need at least one center and positive radii"));
    }
    let r_max = *r_list.iter().max().unwrap();
    for &x in centers {
        let safe = truncation.safe_radius(g, x);
        if r_max > safe {
            return Err(AnalysisError::RadiusUnsafe { requested: r_max, safe });
        }
    }
    let best = centers
        .par_iter()
        .map_init(
            || BfsScratch::new(g.vertex_count()),
            |bfs, &x| {
                bfs.run(g, x, r_max);
                let mut volumes = bfs.layer_sizes();
                volumes.resize(r_max + 1, 0);
                for r in 1..=r_max {
                    volumes[r] += volumes[r - 1];
                }
                r_list
                    .iter()
                    .map(|&r| (volumes[r] as f64 / (r as f64).powf(d), (x, r)))
                    .fold((f64::INFINITY, (x, 0)), |a, b| if b.0 < a.0 { b } else { a })
            },
        )
        .collect::<Vec<_>>();
    let (min_constant, argmin) = best
        .into_iter()
        .fold((f64::INFINITY, (0, 0)), |a, b| if b.0 < a.0 { b } else { a });
    Ok(VolumeLowerBound { min_constant, argmin, samples: centers.len() * r_list.len() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{path_graph, vicsek};

    #[test]
    fn path_passes() {
        let sg = SpinalGraph::new(path_graph(301), (0..301).collect(), (0..301).collect())
            .unwrap()
            .with_truncation(Truncation { boundary: vec![0, 300], analysis_radius: None });
        let ns: Vec<usize> = (0..7).map(|k| 1 << k).collect();
        let cert = certify_dimensions(&sg, 150, &ns, 1.0, 1.0, DimensionThresholds::default()).unwrap();
        assert!(cert.passes);
        assert!(cert.c_double <= 3.0 && cert.c_spine <= 5.0);
        let vlb = volume_lower_bound_check(sg.graph(), sg.truncation(), 1.0, &[150, 100], &[1, 5, 50]).unwrap();
        assert!(vlb.min_constant >= 1.0);
    }

    #[test]
    fn vicsek_wrong_dimension_fails_window() {
        let v = vicsek(2, 4).unwrap();
        let ns = [1, 3, 9, 27];
        let ok = certify_dimensions(&v.spinal, 0, &ns, 1.0, 5f64.log(3.0), DimensionThresholds::default()).unwrap();
        assert!(ok.passes, "{ok:?}");
        let bad = certify_dimensions(&v.spinal, 0, &ns, 1.0, 2.5, DimensionThresholds::default()).unwrap();
        assert!(!bad.window_ok);
    }

    #[test]
    fn unsafe_radius() {
        let v = vicsek(2, 2).unwrap();
        assert!(matches!(
            certify_dimensions(&v.spinal, 0, &[3, 9], 1.0, 1.4, DimensionThresholds::default()),
            Err(AnalysisError::RadiusUnsafe { requested: 18, safe: 9 })
        ));
    }
}
