//! Graph families: Vicsek graphs with their diagonal spine, plate graphs
//! over a ray, lattice balls, a small hand-drawn example and seeded random
//! glued graphs.

use std::collections::{BTreeMap, BinaryHeap, HashMap, HashSet};
use std::cmp::Reverse;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Graph, GraphError, Truncation, VertexId};
use crate::spinal::{glue, project_to_spine, Fiber, SpinalError, SpinalGraph};

/// Largest graph a generator will build.
pub const MAX_VERTICES: usize = 40_000_000;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeneratorError {
    #[error("requested graph has {requested} vertices, budget is {budget}")]
    SizeBudgetExceeded { requested: u128, budget: usize },
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error(transparent)]
    Spinal(#[from] SpinalError),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Generator name, parameters and seed, enough to rebuild a graph.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub generator: String,
    pub params: BTreeMap<String, serde_json::Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl Provenance {
    pub fn new(generator: &str) -> Self {
        Provenance { generator: generator.to_string(), params: BTreeMap::new(), seed: None }
    }

    pub fn param(mut self, key: &str, value: impl Into<serde_json::Value>) -> Self {
        self.params.insert(key.to_string(), value.into());
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }
}

fn check_budget(requested: u128) -> Result<usize, GeneratorError> {
    if requested > MAX_VERTICES as u128 {
        Err(GeneratorError::SizeBudgetExceeded { requested, budget: MAX_VERTICES })
    } else {
        Ok(requested as usize)
    }
}

/// `|V(𝒱ⁿₘ)| = 2ⁿ(2ⁿ+1)ᵐ + 1`.
pub fn vicsek_vertex_count(dim: u32, level: u32) -> u128 {
    let corners = 1u128 << dim;
    corners.saturating_mul((corners + 1).saturating_pow(level)).saturating_add(1)
}

/// The level-`m` Vicsek graph in `ℤⁿ`.
///
/// Coordinates are doubled so that every vertex is an integer point: the
/// level-0 cross is the center `0` joined to the `2ⁿ` corners `{±1}ⁿ`, and
/// level `m` is five (in 2D) copies of level `m-1` translated by `0` and
/// `2·3^(m-1)·ε`, glued at shared corners.
#[derive(Clone, Debug)]
pub struct VicsekGraph {
    pub dim: u32,
    pub level: u32,
    pub spinal: SpinalGraph,
    /// The center `o`; always vertex 0.
    pub center: VertexId,
    coords: Vec<i64>,
}

impl VicsekGraph {
    pub fn coord(&self, v: VertexId) -> &[i64] {
        let d = self.dim as usize;
        &self.coords[v * d..(v + 1) * d]
    }

    /// Vertex at the given doubled coordinates, if present.
    pub fn vertex_at(&self, point: &[i64]) -> Option<VertexId> {
        let d = self.dim as usize;
        (0..self.spinal.graph().vertex_count()).find(|&v| &self.coords[v * d..(v + 1) * d] == point)
    }

    /// Half-width of the bounding cube, `3ᵐ`; also the distance from `o`
    /// to each outer corner.
    pub fn extent(&self) -> usize {
        3usize.pow(self.level)
    }

    pub fn provenance(&self) -> Provenance {
        Provenance::new("vicsek").param("dim", self.dim).param("level", self.level)
    }
}

/// Builds `𝒱ⁿₘ` for `1 ≤ n ≤ 4`.
pub fn vicsek(dim: u32, level: u32) -> Result<VicsekGraph, GeneratorError> {
    if !(1..=4).contains(&dim) {
        return Err(GeneratorError::InvalidParameters(format!("Vicsek dimension {dim} outside 1..=4")));
    }
    let n_vertices = check_budget(vicsek_vertex_count(dim, level))?;
    let d = dim as usize;
    let extent = 3i64.pow(level);
    let width = 2 * extent + 1;
    let key = |p: &[i64]| p.iter().fold(0i64, |acc, &c| acc * width + (c + extent));

    // Sign vectors ε ∈ {±1}ⁿ.
    let signs: Vec<Vec<i64>> = (0..1usize << d)
        .map(|mask| (0..d).map(|i| if mask >> i & 1 == 1 { -1 } else { 1 }).collect())
        .collect();

    // Block centers: sums of one translation per level, level 0 first.
    let mut centers: Vec<Vec<i64>> = vec![vec![0; d]];
    for j in 0..level {
        let step = 2 * 3i64.pow(j);
        let mut next = Vec::with_capacity(centers.len() * (signs.len() + 1));
        next.extend(centers.iter().cloned());
        for eps in &signs {
            for c in &centers {
                next.push(c.iter().zip(eps).map(|(x, e)| x + step * e).collect());
            }
        }
        centers = next;
    }

    let mut id_of: HashMap<i64, VertexId> = HashMap::with_capacity(n_vertices);
    let mut coords = Vec::with_capacity(n_vertices * d);
    let mut edges = Vec::with_capacity(n_vertices - 1);
    let mut intern = |p: &[i64], coords: &mut Vec<i64>| -> VertexId {
        let next = id_of.len();
        *id_of.entry(key(p)).or_insert_with(|| {
            coords.extend_from_slice(p);
            next
        })
    };
    let mut corner = vec![0i64; d];
    for c in &centers {
        let cid = intern(c, &mut coords);
        for eps in &signs {
            for i in 0..d {
                corner[i] = c[i] + eps[i];
            }
            let v = intern(&corner, &mut coords);
            edges.push((cid, v));
        }
    }
    debug_assert_eq!(coords.len(), n_vertices * d);

    let graph = Graph::with_vertex_count(n_vertices, &edges)?;
    let spine: Vec<VertexId> = (0..n_vertices)
        .filter(|&v| {
            let p = &coords[v * d..(v + 1) * d];
            p.iter().all(|c| c.abs() == p[0].abs())
        })
        .collect();
    let pi = project_to_spine(&graph, &spine)?;
    let boundary: Vec<VertexId> = signs
        .iter()
        .map(|eps| {
            let p: Vec<i64> = eps.iter().map(|e| e * extent).collect();
            id_of[&key(&p)]
        })
        .collect();
    let spinal = SpinalGraph::new(graph, spine, pi)?.with_truncation(Truncation {
        boundary,
        analysis_radius: Some(extent as usize),
    });
    Ok(VicsekGraph { dim, level, spinal, center: 0, coords })
}

/// Ball of radius `r` about the origin of `ℤ^δ` in the ℓ¹ metric, with
/// nearest-neighbour edges. The root is the origin.
pub fn lattice_plate(delta: u32, r: usize) -> Result<Fiber, GeneratorError> {
    cube_plate(delta, r, |p| p.iter().map(|c| c.unsigned_abs() as usize).sum::<usize>() <= r, false)
}

/// Ball of radius `r` in `ℤ^δ` with king moves (ℓ∞ metric): the full cube
/// `[-r, r]^δ`. Same volume growth `r^δ` as the lattice plate.
pub fn king_plate(delta: u32, r: usize) -> Result<Fiber, GeneratorError> {
    cube_plate(delta, r, |_| true, true)
}

fn cube_plate(
    delta: u32,
    r: usize,
    inside: impl Fn(&[i64]) -> bool,
    king: bool,
) -> Result<Fiber, GeneratorError> {
    if delta == 0 {
        return Err(GeneratorError::InvalidParameters("plate dimension must be at least 1".into()));
    }
    let d = delta as usize;
    let width = 2 * r + 1;
    let cells = check_budget((width as u128).saturating_pow(delta))?;
    let mut index = vec![usize::MAX; cells];
    let mut points: Vec<Vec<i64>> = Vec::new();
    let mut p = vec![0i64; d];
    for (cell, slot) in index.iter_mut().enumerate() {
        let mut rest = cell;
        for i in (0..d).rev() {
            p[i] = (rest % width) as i64 - r as i64;
            rest /= width;
        }
        if inside(&p) {
            *slot = points.len();
            points.push(p.clone());
        }
    }
    let cell_of = |q: &[i64]| -> Option<usize> {
        let mut cell = 0usize;
        for &c in q {
            let shifted = c + r as i64;
            if shifted < 0 || shifted >= width as i64 {
                return None;
            }
            cell = cell * width + shifted as usize;
        }
        Some(cell)
    };
    let offsets: Vec<Vec<i64>> = if king {
        (0..3usize.pow(delta))
            .map(|m| {
                let mut rest = m;
                (0..d)
                    .map(|_| {
                        let c = (rest % 3) as i64 - 1;
                        rest /= 3;
                        c
                    })
                    .collect::<Vec<i64>>()
            })
            .filter(|o| o.iter().any(|&c| c != 0))
            .collect()
    } else {
        (0..d)
            .flat_map(|i| {
                [-1i64, 1].into_iter().map(move |s| {
                    let mut o = vec![0i64; d];
                    o[i] = s;
                    o
                })
            })
            .collect()
    };
    let mut edges = Vec::new();
    let mut q = vec![0i64; d];
    for (u, pt) in points.iter().enumerate() {
        for o in &offsets {
            for i in 0..d {
                q[i] = pt[i] + o[i];
            }
            if let Some(cell) = cell_of(&q) {
                let v = index[cell];
                if v != usize::MAX && u < v {
                    edges.push((u, v));
                }
            }
        }
    }
    let graph = Graph::with_vertex_count(points.len(), &edges)?;
    let root = index[cell_of(&vec![0; d]).unwrap()];
    Ok(Fiber { graph, root })
}

/// Which plate family supplies the fiber at each `n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum PlateChoice {
    /// `ℤ^δ` with ℓ¹ balls at every `n`.
    #[default]
    Lattice,
    /// `ℤ^δ` with king moves at every `n`.
    King,
    /// Lattice or king plate, chosen per `n` from the seed.
    Mixed,
}

/// A source of plate balls `B_P(o, r)` of volume growth `r^δ`.
pub trait PlateProvider: Sync {
    fn name(&self) -> &'static str;
    fn ball(&self, delta: u32, radius: usize) -> Result<Fiber, GeneratorError>;
}

pub struct LatticeProvider;

impl PlateProvider for LatticeProvider {
    fn name(&self) -> &'static str {
        "lattice"
    }
    fn ball(&self, delta: u32, radius: usize) -> Result<Fiber, GeneratorError> {
        lattice_plate(delta, radius)
    }
}

pub struct KingProvider;

impl PlateProvider for KingProvider {
    fn name(&self) -> &'static str {
        "king"
    }
    fn ball(&self, delta: u32, radius: usize) -> Result<Fiber, GeneratorError> {
        king_plate(delta, radius)
    }
}

/// Parameters of a plate graph: target dimension `D`, plate dimension
/// `δ > D`, ray length `N` and fiber radius `floor(n^α)` with
/// `α = (D-1)/δ`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PlateSpec {
    pub target_dim: f64,
    pub plate_dim: u32,
    pub length: usize,
    #[serde(default)]
    pub choice: PlateChoice,
    #[serde(default)]
    pub seed: u64,
}

impl PlateSpec {
    pub fn new(target_dim: f64, plate_dim: u32, length: usize) -> Self {
        PlateSpec { target_dim, plate_dim, length, choice: PlateChoice::Lattice, seed: 0 }
    }

    pub fn plate_alpha(&self) -> f64 {
        (self.target_dim - 1.0) / self.plate_dim as f64
    }

    fn check(&self) -> Result<(), GeneratorError> {
        let bad = |m: String| Err(GeneratorError::InvalidParameters(m));
        if !(self.target_dim > 1.0) || !self.target_dim.is_finite() {
            return bad(format!("target dimension D = {} must exceed 1", self.target_dim));
        }
        if (self.plate_dim as f64) <= self.target_dim {
            return bad(format!("plate dimension {} must exceed D = {}", self.plate_dim, self.target_dim));
        }
        if self.length < 2 {
            return bad(format!("ray length {} must be at least 2", self.length));
        }
        Ok(())
    }

    /// `floor(n^α)` for `n ≥ 1`, robust to `powf` rounding at exact powers.
    pub fn fiber_radius(&self, n: usize) -> usize {
        (((n as f64).powf(self.plate_alpha())) + 1e-9).floor() as usize
    }

    pub fn provenance(&self) -> Provenance {
        Provenance::new("plates")
            .param("D", self.target_dim)
            .param("delta", self.plate_dim)
            .param("length", self.length)
            .param("choice", serde_json::to_value(self.choice).unwrap())
            .with_seed(self.seed)
    }
}

#[derive(Clone, Debug)]
pub struct PlateGraph {
    pub spec: PlateSpec,
    /// Spine vertex `i` carries the fiber for `n = i + 1`.
    pub spinal: SpinalGraph,
    pub radii: Vec<usize>,
    pub providers: Vec<&'static str>,
}

impl PlateGraph {
    /// Spine vertex for `n ≥ 1`.
    pub fn spine_vertex(&self, n: usize) -> VertexId {
        n - 1
    }
}

/// The plate graph: the ray `1 - 2 - ... - N` with the ball of radius
/// `floor(n^α)` in a `δ`-dimensional plate glued at `n` by its center.
pub fn plates(spec: &PlateSpec) -> Result<PlateGraph, GeneratorError> {
    spec.check()?;
    let lattice = LatticeProvider;
    let king = KingProvider;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut cache: HashMap<(&'static str, usize), Fiber> = HashMap::new();
    let mut fibers = Vec::with_capacity(spec.length);
    let mut radii = Vec::with_capacity(spec.length);
    let mut providers = Vec::with_capacity(spec.length);
    let mut total: u128 = 0;
    for n in 1..=spec.length {
        let provider: &dyn PlateProvider = match spec.choice {
            PlateChoice::Lattice => &lattice,
            PlateChoice::King => &king,
            PlateChoice::Mixed => {
                if rng.random_bool(0.5) {
                    &lattice
                } else {
                    &king
                }
            }
        };
        let r = spec.fiber_radius(n);
        let fiber = match cache.get(&(provider.name(), r)) {
            Some(f) => f.clone(),
            None => {
                let f = provider.ball(spec.plate_dim, r)?;
                cache.insert((provider.name(), r), f.clone());
                f
            }
        };
        total += fiber.graph.vertex_count() as u128;
        check_budget(total)?;
        fibers.push(fiber);
        radii.push(r);
        providers.push(provider.name());
    }
    let skeleton = path_graph(spec.length);
    let spinal = glue(&skeleton, &fibers)?.with_truncation(Truncation {
        boundary: vec![spec.length - 1],
        analysis_radius: Some(spec.length / 2),
    });
    Ok(PlateGraph { spec: spec.clone(), spinal, radii, providers })
}

/// Path `0 - 1 - ... - (n-1)`.
pub fn path_graph(n: usize) -> Graph {
    let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
    Graph::with_vertex_count(n, &edges).expect("paths are connected")
}

/// Uniform random labeled tree on `n` vertices (Prüfer decoding).
fn random_tree(rng: &mut ChaCha8Rng, n: usize) -> Vec<(VertexId, VertexId)> {
    if n <= 1 {
        return Vec::new();
    }
    if n == 2 {
        return vec![(0, 1)];
    }
    let code: Vec<usize> = (0..n - 2).map(|_| rng.random_range(0..n)).collect();
    let mut degree = vec![1usize; n];
    for &c in &code {
        degree[c] += 1;
    }
    let mut leaves: BinaryHeap<Reverse<usize>> =
        (0..n).filter(|&v| degree[v] == 1).map(Reverse).collect();
    let mut edges = Vec::with_capacity(n - 1);
    for &c in &code {
        let Reverse(leaf) = leaves.pop().unwrap();
        edges.push((leaf.min(c), leaf.max(c)));
        degree[c] -= 1;
        if degree[c] == 1 {
            leaves.push(Reverse(c));
        }
    }
    let Reverse(a) = leaves.pop().unwrap();
    let Reverse(b) = leaves.pop().unwrap();
    edges.push((a.min(b), a.max(b)));
    edges
}

/// Random connected graph: a uniform spanning tree plus up to `n/2`
/// extra edges.
pub fn random_connected(rng: &mut ChaCha8Rng, n: usize) -> Graph {
    let mut edges = random_tree(rng, n);
    let mut present: HashSet<(usize, usize)> = edges.iter().copied().collect();
    let max_edges = n * n.saturating_sub(1) / 2;
    let extra = rng.random_range(0..=n / 2).min(max_edges - edges.len());
    let target = edges.len() + extra;
    while present.len() < target {
        let u = rng.random_range(0..n);
        let v = rng.random_range(0..n);
        if u != v {
            present.insert((u.min(v), u.max(v)));
        }
    }
    edges = present.into_iter().collect();
    edges.sort_unstable();
    Graph::with_vertex_count(n, &edges).expect("spanning tree keeps it connected")
}

/// Random skeleton and fibers for [`glue`].
pub fn random_parts(seed: u64, skeleton_size: usize, max_fiber_size: usize) -> (Graph, Vec<Fiber>) {
    assert!(skeleton_size >= 1 && max_fiber_size >= 1, "sizes must be positive");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let skeleton = random_connected(&mut rng, skeleton_size);
    let fibers = (0..skeleton_size)
        .map(|_| {
            let size = rng.random_range(1..=max_fiber_size);
            let graph = random_connected(&mut rng, size);
            let root = rng.random_range(0..size);
            Fiber { graph, root }
        })
        .collect();
    (skeleton, fibers)
}

/// Seeded random glued spinal graph.
pub fn random_glued(seed: u64, skeleton_size: usize, max_fiber_size: usize) -> SpinalGraph {
    let (skeleton, fibers) = random_parts(seed, skeleton_size, max_fiber_size);
    glue(&skeleton, &fibers).expect("random parts are valid glue input")
}

/// Provenance record for [`random_glued`].
pub fn random_provenance(seed: u64, skeleton_size: usize, max_fiber_size: usize) -> Provenance {
    Provenance::new("random")
        .param("skeleton_size", skeleton_size)
        .param("max_fiber_size", max_fiber_size)
        .with_seed(seed)
}

/// An edge `{u, v}` whose addition breaks the spinal property: `u` lies
/// off the spine and `v` in another fiber. `None` if every fiber is a
/// single vertex or the graph has only one fiber.
pub fn random_corrupting_edge(sg: &SpinalGraph, seed: u64) -> Option<(VertexId, VertexId)> {
    let g = sg.graph();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut candidates: Vec<(VertexId, VertexId)> = (0..g.vertex_count())
        .filter(|&u| !sg.is_spine(u))
        .flat_map(|u| (0..g.vertex_count()).map(move |v| (u, v)))
        .filter(|&(u, v)| sg.pi(u) != sg.pi(v) && !g.has_edge(u, v))
        .collect();
    candidates.shuffle(&mut rng);
    candidates.first().map(|&(u, v)| (u.min(v), u.max(v)))
}

/// A small hand-drawn spinal graph with planar positions: a spine with a
/// branch and a cycle, fibers hanging off six spine vertices, and two
/// marked vertices `x`, `y` at spinal distance 5.
#[derive(Clone, Debug)]
pub struct SampleGraph {
    pub spinal: SpinalGraph,
    pub positions: Vec<(f64, f64)>,
    pub x: VertexId,
    pub y: VertexId,
}

const SAMPLE_SPINE: [(f64, f64); 11] = [
    (0.0, 0.0),
    (1.0, 0.0),
    (2.0, 0.0),
    (3.0, 0.0),
    (3.0, -1.0),
    (3.0, -2.0),
    (4.0, 0.0),
    (5.0, 0.5),
    (5.0, -0.5),
    (6.0, 0.0),
    (7.0, 0.0),
];

const SAMPLE_SPINE_EDGES: [(usize, usize); 11] =
    [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (3, 6), (6, 7), (6, 8), (7, 9), (8, 9), (9, 10)];

/// Fibers as (spine vertex, vertex positions, edges by position).
type SampleFiber = (usize, &'static [(f64, f64)], &'static [((f64, f64), (f64, f64))]);

const SAMPLE_FIBERS: [SampleFiber; 6] = [
    (
        1,
        &[(1.0, 0.5), (0.8, 1.0), (1.4, 1.3), (1.2, 1.7)],
        &[
            ((1.0, 0.0), (1.0, 0.5)),
            ((1.0, 0.5), (0.8, 1.0)),
            ((1.0, 0.5), (1.4, 1.3)),
            ((0.8, 1.0), (1.2, 1.7)),
            ((1.4, 1.3), (1.2, 1.7)),
        ],
    ),
    (2, &[(1.8, 0.4), (2.1, 0.8)], &[((2.0, 0.0), (1.8, 0.4)), ((1.8, 0.4), (2.1, 0.8))]),
    (3, &[(3.1, 0.6), (3.0, 1.2)], &[((3.0, 0.0), (3.1, 0.6)), ((3.1, 0.6), (3.0, 1.2))]),
    (
        4,
        &[(2.4, -1.3), (1.8, -1.3), (2.0, -0.8), (1.1, -1.2)],
        &[
            ((3.0, -1.0), (2.4, -1.3)),
            ((2.4, -1.3), (1.8, -1.3)),
            ((2.4, -1.3), (2.0, -0.8)),
            ((1.8, -1.3), (1.1, -1.2)),
        ],
    ),
    (
        8,
        &[(4.8, -1.0), (4.5, -0.8), (4.2, -0.5), (4.2, -1.4)],
        &[
            ((5.0, -0.5), (4.8, -1.0)),
            ((5.0, -0.5), (4.5, -0.8)),
            ((4.5, -0.8), (4.2, -0.5)),
            ((4.2, -0.5), (4.2, -1.4)),
            ((4.2, -1.4), (4.5, -0.8)),
        ],
    ),
    (9, &[(6.0, -1.2)], &[((6.0, 0.0), (6.0, -1.2))]),
];

fn sample_positions() -> Vec<(f64, f64)> {
    let mut positions: Vec<(f64, f64)> = SAMPLE_SPINE.to_vec();
    for (_, verts, _) in SAMPLE_FIBERS {
        positions.extend_from_slice(verts);
    }
    positions
}

fn sample_id(positions: &[(f64, f64)], p: (f64, f64)) -> VertexId {
    positions.iter().position(|&q| q == p).expect("sample position is listed")
}

/// The hand-drawn sample graph.
pub fn sample_spinal_graph() -> SampleGraph {
    let positions = sample_positions();
    let mut edges: Vec<(usize, usize)> = SAMPLE_SPINE_EDGES.to_vec();
    let mut pi: Vec<VertexId> = (0..SAMPLE_SPINE.len()).collect();
    for (s, verts, fiber_edges) in SAMPLE_FIBERS {
        for &p in verts {
            debug_assert_eq!(pi.len(), sample_id(&positions, p));
            pi.push(s);
        }
        for &(a, b) in fiber_edges {
            edges.push((sample_id(&positions, a), sample_id(&positions, b)));
        }
    }
    let graph = Graph::from_edges(&edges).expect("sample graph is connected");
    let spinal = SpinalGraph::new(graph, (0..SAMPLE_SPINE.len()).collect(), pi)
        .expect("sample graph is spinal");
    let x = sample_id(&positions, (1.2, 1.7));
    let y = sample_id(&positions, (6.0, -1.2));
    SampleGraph { spinal, positions, x, y }
}

/// Two edges that would each break the spinal property of the sample
/// graph: one joining two fibers at their tips, one joining a spine
/// vertex to a vertex deep in another fiber.
pub fn sample_forbidden_edges() -> Vec<(VertexId, VertexId)> {
    let positions = sample_positions();
    [((2.1, 0.8), (3.0, 1.2)), ((3.0, -2.0), (4.2, -1.4))]
        .iter()
        .map(|&(a, b)| {
            let (u, v) = (sample_id(&positions, a), sample_id(&positions, b));
            (u.min(v), u.max(v))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lattice_l1_count(delta: u32, r: usize) -> usize {
        // Number of points of ℤ^δ with ℓ¹ norm ≤ r: Σ_k 2^k C(δ,k) C(r,k).
        let binom = |n: usize, k: usize| -> usize {
            if k > n {
                return 0;
            }
            (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
        };
        (0..=delta as usize).map(|k| (1 << k) * binom(delta as usize, k) * binom(r, k)).sum()
    }

    #[test]
    fn vicsek_level_zero() {
        let v = vicsek(2, 0).unwrap();
        let g = v.spinal.graph();
        assert_eq!((g.vertex_count(), g.edge_count()), (5, 4));
        assert_eq!(v.spinal.spine().len(), 5);
        assert_eq!(v.coord(0), &[0, 0]);
    }

    #[test]
    fn vicsek_counts_small() {
        assert_eq!(vicsek(2, 1).unwrap().spinal.graph().vertex_count(), 21);
        assert_eq!(vicsek(2, 2).unwrap().spinal.graph().vertex_count(), 101);
        assert_eq!(vicsek(3, 1).unwrap().spinal.graph().vertex_count(), 73);
        assert_eq!(vicsek(1, 2).unwrap().spinal.graph().vertex_count(), 19);
    }

    #[test]
    fn vicsek_diagonal_distance() {
        let v = vicsek(2, 1).unwrap();
        let far = v.vertex_at(&[3, 3]).unwrap();
        assert_eq!(v.spinal.graph().distance(v.center, far), 3);
    }

    #[test]
    fn vicsek_rejects_bad_dimension_and_huge_level() {
        assert!(matches!(vicsek(5, 1), Err(GeneratorError::InvalidParameters(_))));
        assert!(matches!(vicsek(4, 9), Err(GeneratorError::SizeBudgetExceeded { .. })));
    }

    #[test]
    fn lattice_plates() {
        let f = lattice_plate(1, 3).unwrap();
        assert_eq!(f.graph.vertex_count(), 7);
        assert_eq!(f.graph.edge_count(), 6);
        assert_eq!(lattice_plate(2, 2).unwrap().graph.vertex_count(), 13);
        assert_eq!(lattice_plate(3, 1).unwrap().graph.vertex_count(), 7);
        for delta in 1..=3 {
            for r in 0..=5 {
                let f = lattice_plate(delta, r).unwrap();
                assert_eq!(f.graph.vertex_count(), lattice_l1_count(delta, r));
                assert_eq!(f.graph.ball(f.root, r as f64).len(), f.graph.vertex_count());
            }
        }
    }

    #[test]
    fn king_plate_is_a_cube() {
        let f = king_plate(2, 2).unwrap();
        assert_eq!(f.graph.vertex_count(), 25);
        assert_eq!(f.graph.degree(f.root), 8);
        assert_eq!(f.graph.volume_table(f.root, 2).volumes, vec![1, 9, 25]);
    }

    #[test]
    fn plate_fiber_sizes() {
        let spec = PlateSpec::new(1.5, 2, 81);
        let pg = plates(&spec).unwrap();
        assert_eq!(pg.radii[0], 1);
        assert_eq!(pg.spinal.fiber(pg.spine_vertex(1)).len(), 5);
        assert_eq!(pg.radii[15], 2);
        assert_eq!(pg.spinal.fiber(pg.spine_vertex(16)).len(), 13);
        assert_eq!(pg.radii[80], 3);
        assert_eq!(pg.spinal.spinal_distance(pg.spine_vertex(3), pg.spine_vertex(10)), 7);
    }

    #[test]
    fn plate_spec_checks() {
        assert!(plates(&PlateSpec::new(1.0, 2, 10)).is_err());
        assert!(plates(&PlateSpec::new(2.5, 2, 10)).is_err());
        assert!(plates(&PlateSpec::new(1.5, 2, 1)).is_err());
    }

    #[test]
    fn mixed_plates_are_seeded() {
        let mut spec = PlateSpec::new(1.5, 2, 64);
        spec.choice = PlateChoice::Mixed;
        spec.seed = 7;
        let a = plates(&spec).unwrap();
        let b = plates(&spec).unwrap();
        assert_eq!(a.providers, b.providers);
        assert!(a.providers.contains(&"king") && a.providers.contains(&"lattice"));
    }

    #[test]
    fn random_glued_edge_cases() {
        let one = random_glued(3, 1, 6);
        assert_eq!(one.spine(), &[0]);
        let flat = random_glued(3, 8, 1);
        assert_eq!(flat.spine().len(), flat.graph().vertex_count());
        assert_eq!(random_glued(11, 6, 5).graph(), random_glued(11, 6, 5).graph());
    }

    #[test]
    fn prufer_trees_are_trees() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for n in 1..30 {
            let edges = random_tree(&mut rng, n);
            assert_eq!(edges.len(), n.saturating_sub(1));
            Graph::with_vertex_count(n, &edges).unwrap();
        }
    }

    #[test]
    fn sample_graph_shape() {
        let s = sample_spinal_graph();
        assert_eq!(s.spinal.graph().vertex_count(), 28);
        assert_eq!(s.spinal.spine().len(), 11);
        assert_eq!(s.spinal.spinal_distance(s.x, s.y), 5);
        let forbidden = sample_forbidden_edges();
        assert_eq!(forbidden.len(), 2);
        for &(u, v) in &forbidden {
            assert_ne!(s.spinal.pi(u), s.spinal.pi(v));
        }
    }
}
