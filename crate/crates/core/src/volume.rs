//! Volume growth measurements on a [`Graph`]: doubling constants and the
//! ball-intersection ratio `|B(x,r) ∩ B(y,R)| / |B(x,r)|`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{BfsScratch, Graph, VertexId};

/// Default cap for any measured "≲" constant.
pub const DEFAULT_RATIO_THRESHOLD: f64 = 8.0;

/// Relative rounding allowance when replaying floating-point certificates.
pub const FP_SLACK: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SampleError {
    #[error("empty sample")]
    EmptySample,
    #[error("invalid radius range {r_min}..={r_max} (need 1 <= r_min < r_max)")]
    InvalidRadii { r_min: usize, r_max: usize },
}

/// `C_d` on the `nu` grid, one point per grid value.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DoublingPoint {
    pub nu: f64,
    pub c_d: f64,
}

/// Doubling constants `(C_d, nu)` with `|B(x,R)| <= C_d (R/r)^nu |B(x,r)|`
/// on every sampled triple.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DoublingEstimate {
    pub c_d: f64,
    pub nu: f64,
    /// Whether `c_d <= c_cap`; when no grid point qualifies the largest
    /// grid `nu` is reported with `feasible = false`.
    pub feasible: bool,
    pub c_cap: f64,
    pub centers: Vec<VertexId>,
    pub r_min: usize,
    pub r_max: usize,
    pub curve: Vec<DoublingPoint>,
}

/// Grid `0.1, 0.2, ..., 6.0`.
pub fn nu_grid() -> Vec<f64> {
    (1..=60).map(|i| i as f64 / 10.0).collect()
}

impl DoublingEstimate {
    /// Induced constant at a grid value of `nu`.
    pub fn c_d_at(&self, nu: f64) -> Option<f64> {
        self.curve.iter().find(|p| (p.nu - nu).abs() < 1e-9).map(|p| p.c_d)
    }

    /// Re-checks the bound on every sampled triple.
    pub fn replay(&self, g: &Graph) -> bool {
        self.centers.iter().all(|&x| {
            let vt = g.volume_table(x, self.r_max);
            (self.r_min..self.r_max).all(|r| {
                (r + 1..=self.r_max).all(|big_r| {
                    let bound = self.c_d
                        * (big_r as f64 / r as f64).powf(self.nu)
                        * vt.volume(r) as f64;
                    vt.volume(big_r) as f64 <= bound * (1.0 + FP_SLACK)
                })
            })
        })
    }
}

/// Scans `nu` over [`nu_grid`]; for each value `C_d` is the largest ratio
/// over all triples `(x, r, R)` with `r_min <= r < R <= r_max`. Reports the
/// smallest `nu` whose `C_d` is within [`DEFAULT_RATIO_THRESHOLD`].
pub fn measure_doubling(
    g: &Graph,
    centers: &[VertexId],
    r_min: usize,
    r_max: usize,
) -> Result<DoublingEstimate, SampleError> {
    measure_doubling_with_cap(g, centers, r_min, r_max, DEFAULT_RATIO_THRESHOLD)
}

pub fn measure_doubling_with_cap(
    g: &Graph,
    centers: &[VertexId],
    r_min: usize,
    r_max: usize,
    c_cap: f64,
) -> Result<DoublingEstimate, SampleError> {
    if centers.is_empty() {
        return Err(SampleError::EmptySample);
    }
    if r_min == 0 || r_min >= r_max {
        return Err(SampleError::InvalidRadii { r_min, r_max });
    }
    let grid = nu_grid();
    let per_center: Vec<Vec<f64>> = centers
        .par_iter()
        .map(|&x| {
            let vt = g.volume_table(x, r_max);
            let mut worst = vec![0.0f64; grid.len()];
            for r in r_min..r_max {
                for big_r in r + 1..=r_max {
                    let ratio = vt.volume(big_r) as f64 / vt.volume(r) as f64;
                    let scale = big_r as f64 / r as f64;
                    for (w, &nu) in worst.iter_mut().zip(&grid) {
                        *w = w.max(ratio / scale.powf(nu));
                    }
                }
            }
            worst
        })
        .collect();
    let curve: Vec<DoublingPoint> = grid
        .iter()
        .enumerate()
        .map(|(i, &nu)| DoublingPoint {
            nu,
            c_d: per_center.iter().map(|w| w[i]).fold(0.0, f64::max),
        })
        .collect();
    let chosen = curve
        .iter()
        .find(|p| p.c_d <= c_cap)
        .unwrap_or_else(|| curve.last().unwrap());
    Ok(DoublingEstimate {
        c_d: chosen.c_d,
        nu: chosen.nu,
        feasible: chosen.c_d <= c_cap,
        c_cap,
        centers: centers.to_vec(),
        r_min,
        r_max,
        curve,
    })
}

/// Parameters of a ball-intersection scan. For each `y` in `centers` and
/// `R` in `radii`, `x` ranges over `B(y, R)` and `r` over
/// `1..=min(2R, r_cap)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IntersectionScan {
    pub centers: Vec<VertexId>,
    pub radii: Vec<usize>,
    pub r_cap: usize,
    /// Maximum number of `(y, R, x, r)` tuples. Larger scans are replaced
    /// by seeded sampling of `(y, R, x)` until the budget is spent.
    pub budget: usize,
    pub seed: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntersectionTuple {
    pub y: VertexId,
    #[serde(rename = "R")]
    pub big_r: usize,
    pub x: VertexId,
    pub r: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IntersectionReport {
    pub min_ratio: f64,
    /// `|B(x,r) ∩ B(y,R)|` and `|B(x,r)|` at the minimizer.
    pub min_intersection: usize,
    pub min_ball: usize,
    pub argmin: IntersectionTuple,
    /// Tuples with `r > 2 d(x,y)`.
    pub case1_count: usize,
    /// Tuples with `r <= 2 d(x,y)`.
    pub case2_count: usize,
    pub tuples: usize,
    pub exhaustive: bool,
}

#[derive(Clone, Copy)]
struct Partial {
    inter: usize,
    ball: usize,
    at: IntersectionTuple,
    case1: usize,
    case2: usize,
    tuples: usize,
}

impl Partial {
    fn empty() -> Self {
        Partial {
            inter: 1,
            ball: 1,
            at: IntersectionTuple { y: 0, big_r: 0, x: 0, r: 0 },
            case1: 0,
            case2: 0,
            tuples: 0,
        }
    }

    // Exact comparison of inter/ball; ties keep the earlier tuple.
    fn merge(self, other: Partial) -> Partial {
        let other_smaller = (other.inter as u128) * (self.ball as u128)
            < (self.inter as u128) * (other.ball as u128);
        let (best, _) = if other.tuples > 0 && (self.tuples == 0 || other_smaller) {
            (other, self)
        } else {
            (self, other)
        };
        Partial {
            case1: self.case1 + other.case1,
            case2: self.case2 + other.case2,
            tuples: self.tuples + other.tuples,
            ..best
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn scan_one_x(
    g: &Graph,
    bfs: &mut BfsScratch,
    in_y_ball: impl Fn(VertexId) -> bool,
    d_xy: usize,
    y: VertexId,
    big_r: usize,
    x: VertexId,
    r_top: usize,
) -> Partial {
    bfs.run(g, x, r_top);
    let mut ball = vec![0usize; r_top + 1];
    let mut inter = vec![0usize; r_top + 1];
    for &v in bfs.order() {
        let d = bfs.distance(v).unwrap();
        ball[d] += 1;
        if in_y_ball(v) {
            inter[d] += 1;
        }
    }
    let mut acc = Partial::empty();
    let (mut b, mut i) = (ball[0], inter[0]);
    for r in 1..=r_top {
        b += ball[r];
        i += inter[r];
        let here = Partial {
            inter: i,
            ball: b,
            at: IntersectionTuple { y, big_r, x, r },
            case1: usize::from(r > 2 * d_xy),
            case2: usize::from(r <= 2 * d_xy),
            tuples: 1,
        };
        acc = acc.merge(here);
    }
    acc
}

/// Minimum of `|B(x,r) ∩ B(y,R)| / |B(x,r)|` over the scan, with the two
/// proof cases `r > 2 d(x,y)` and `r <= 2 d(x,y)` counted separately.
/// Deterministic for a fixed scan (including its seed).
pub fn ball_intersection_min_ratio(
    g: &Graph,
    scan: &IntersectionScan,
) -> Result<IntersectionReport, SampleError> {
    let pairs: Vec<(VertexId, usize)> = scan
        .centers
        .iter()
        .flat_map(|&y| scan.radii.iter().filter(|&&r| r > 0).map(move |&r| (y, r)))
        .collect();
    if pairs.is_empty() || scan.r_cap == 0 {
        return Err(SampleError::EmptySample);
    }
    let n = g.vertex_count();
    let r_top = |big_r: usize| (2 * big_r).min(scan.r_cap);

    // Ball around each (y, R): membership by distance from y.
    let y_balls: Vec<Vec<VertexId>> = pairs
        .par_iter()
        .map(|&(y, big_r)| {
            let mut bfs = BfsScratch::new(n);
            bfs.run(g, y, big_r);
            bfs.order().to_vec()
        })
        .collect();
    let total: usize = pairs
        .iter()
        .zip(&y_balls)
        .map(|(&(_, big_r), ball)| ball.len() * r_top(big_r))
        .sum();
    let exhaustive = total <= scan.budget;

    let dist_from = |y: VertexId, ball: &[VertexId]| {
        let mut bfs = BfsScratch::new(n);
        bfs.run(g, y, usize::MAX);
        let mut d = vec![usize::MAX; n];
        for &v in ball {
            d[v] = bfs.distance(v).unwrap();
        }
        d
    };

    let partial = if exhaustive {
        pairs
            .par_iter()
            .zip(&y_balls)
            .map(|(&(y, big_r), ball)| {
                let dy = dist_from(y, ball);
                let mut bfs = BfsScratch::new(n);
                let mut sorted = ball.clone();
                sorted.sort_unstable();
                sorted
                    .iter()
                    .map(|&x| {
                        scan_one_x(g, &mut bfs, |v| dy[v] <= big_r, dy[x], y, big_r, x, r_top(big_r))
                    })
                    .fold(Partial::empty(), Partial::merge)
            })
            .collect::<Vec<_>>()
            .into_iter()
            .fold(Partial::empty(), Partial::merge)
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(scan.seed);
        let mut draws = Vec::new();
        let mut spent = 0;
        while spent < scan.budget {
            let k = rng.random_range(0..pairs.len());
            let x = y_balls[k][rng.random_range(0..y_balls[k].len())];
            spent += r_top(pairs[k].1);
            draws.push((k, x));
        }
        let dists: Vec<Vec<usize>> = pairs
            .par_iter()
            .zip(&y_balls)
            .map(|(&(y, _), ball)| dist_from(y, ball))
            .collect();
        draws
            .par_iter()
            .map_init(
                || BfsScratch::new(n),
                |bfs, &(k, x)| {
                    let (y, big_r) = pairs[k];
                    let dy = &dists[k];
                    scan_one_x(g, bfs, |v| dy[v] <= big_r, dy[x], y, big_r, x, r_top(big_r))
                },
            )
            .collect::<Vec<_>>()
            .into_iter()
            .fold(Partial::empty(), Partial::merge)
    };

    Ok(IntersectionReport {
        min_ratio: partial.inter as f64 / partial.ball as f64,
        min_intersection: partial.inter,
        min_ball: partial.ball,
        argmin: partial.at,
        case1_count: partial.case1,
        case2_count: partial.case2,
        tuples: partial.tuples,
        exhaustive,
    })
}
