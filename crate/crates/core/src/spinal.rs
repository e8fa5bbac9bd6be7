//! Spinal graphs: a connected graph `G`, a spine `Σ ⊂ V(G)` and a
//! projection `π: V(G) → Σ` fixing the spine, such that every path between
//! vertices with different projections passes from `π(a)` to `π(b)`.
//!
//! Validation uses the equivalent edge-level characterization: the only
//! edges joining different fibers `π⁻¹(x)` are edges between spine
//! vertices. The direct path-enumeration check is kept as
//! [`validate_bruteforce`] for small graphs.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{BfsScratch, Graph, GraphError, Truncation, VertexId};

const NOT_SPINE: usize = usize::MAX;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpinalError {
    #[error("not a spinal graph: {} violation(s), first: {}", .0.violations.len(), .0.violations.first().map(|v| v.to_string()).unwrap_or_default())]
    Invalid(ValidationReport),
    #[error("fiber at skeleton vertex {skeleton_vertex} is disconnected: {source}")]
    DisconnectedFiber { skeleton_vertex: usize, source: GraphError },
    #[error("distinguished vertex {root} is not a vertex of the fiber at skeleton vertex {skeleton_vertex} ({fiber_size} vertices)")]
    BadDistinguishedVertex { skeleton_vertex: usize, root: VertexId, fiber_size: usize },
    #[error("skeleton has {expected} vertices but {found} fibers were given")]
    FiberCountMismatch { expected: usize, found: usize },
    #[error("vertex {0} is not on the spine")]
    NotOnSpine(VertexId),
    #[error("vertex {vertex} reaches spine vertices {first} and {second} without crossing the spine")]
    AmbiguousProjection { vertex: VertexId, first: VertexId, second: VertexId },
    #[error("vertex {0} is not attached to the spine")]
    Unattached(VertexId),
    #[error("path enumeration exceeded its budget of {0} nodes")]
    BudgetExceeded(usize),
    #[error("test-function denominator must be positive")]
    ZeroDenominator,
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// One reason a `(G, Σ, π)` triple fails to be a spinal graph.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    ProjectionLength { expected: usize, found: usize },
    EmptySpine,
    SpineOutOfRange { vertex: VertexId },
    DuplicateSpineVertex { vertex: VertexId },
    ProjectionOutOfRange { vertex: VertexId, image: VertexId },
    ProjectionOffSpine { vertex: VertexId, image: VertexId },
    SpineNotFixed { vertex: VertexId, image: VertexId },
    CrossFiberEdge { u: VertexId, v: VertexId, pi_u: VertexId, pi_v: VertexId },
    DisconnectedFiber { spine_vertex: VertexId, unreached: VertexId },
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Violation::ProjectionLength { expected, found } => {
                write!(f, "projection has {found} entries, graph has {expected} vertices")
            }
            Violation::EmptySpine => write!(f, "spine is empty"),
            Violation::SpineOutOfRange { vertex } => write!(f, "spine vertex {vertex} out of range"),
            Violation::DuplicateSpineVertex { vertex } => write!(f, "spine vertex {vertex} listed twice"),
            Violation::ProjectionOutOfRange { vertex, image } => {
                write!(f, "pi({vertex}) = {image} is out of range")
            }
            Violation::ProjectionOffSpine { vertex, image } => {
                write!(f, "pi({vertex}) = {image} is not a spine vertex")
            }
            Violation::SpineNotFixed { vertex, image } => {
                write!(f, "spine vertex {vertex} has pi = {image}")
            }
            Violation::CrossFiberEdge { u, v, pi_u, pi_v } => write!(
                f,
                "edge {{{u}, {v}}} joins fibers of {pi_u} and {pi_v} off the spine"
            ),
            Violation::DisconnectedFiber { spine_vertex, unreached } => write!(
                f,
                "fiber of {spine_vertex} is disconnected ({unreached} unreachable inside it)"
            ),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks every spinal-graph invariant and lists each violation found.
/// Never panics on malformed input.
pub fn validate_structural(g: &Graph, spine: &[VertexId], pi: &[VertexId]) -> ValidationReport {
    let n = g.vertex_count();
    let mut violations = Vec::new();
    if pi.len() != n {
        violations.push(Violation::ProjectionLength { expected: n, found: pi.len() });
        return ValidationReport { violations };
    }
    if spine.is_empty() {
        violations.push(Violation::EmptySpine);
    }
    let mut on_spine = vec![false; n];
    for &s in spine {
        if s >= n {
            violations.push(Violation::SpineOutOfRange { vertex: s });
        } else if on_spine[s] {
            violations.push(Violation::DuplicateSpineVertex { vertex: s });
        } else {
            on_spine[s] = true;
        }
    }
    let mut shape_ok = true;
    for (v, &image) in pi.iter().enumerate() {
        if image >= n {
            violations.push(Violation::ProjectionOutOfRange { vertex: v, image });
            shape_ok = false;
        } else if !on_spine[image] {
            violations.push(Violation::ProjectionOffSpine { vertex: v, image });
            shape_ok = false;
        } else if on_spine[v] && image != v {
            violations.push(Violation::SpineNotFixed { vertex: v, image });
        }
    }
    if !shape_ok {
        return ValidationReport { violations };
    }
    for (u, v) in g.edges() {
        if pi[u] != pi[v] && !(on_spine[u] && on_spine[v]) {
            violations.push(Violation::CrossFiberEdge { u, v, pi_u: pi[u], pi_v: pi[v] });
        }
    }
    // Fiber connectivity: BFS from each spine vertex inside its fiber.
    let mut reached = vec![false; n];
    let mut stack = Vec::new();
    for &s in spine.iter().filter(|&&s| s < n && pi[s] == s) {
        if reached[s] {
            continue;
        }
        reached[s] = true;
        stack.push(s);
        while let Some(u) = stack.pop() {
            for &w in g.neighbors(u) {
                if !reached[w] && pi[w] == s {
                    reached[w] = true;
                    stack.push(w);
                }
            }
        }
    }
    let mut reported = vec![false; n];
    for v in 0..n {
        let s = pi[v];
        if !reached[v] && pi[s] == s && !reported[s] {
            reported[s] = true;
            violations.push(Violation::DisconnectedFiber { spine_vertex: s, unreached: v });
        }
    }
    ValidationReport { violations }
}

/// Path-enumeration check of the definition: `π` fixes the spine and
/// every simple path from `a` to `b` with `π(a) ≠ π(b)` visits `π(a)` and
/// later `π(b)`. Only practical for graphs with a dozen or so vertices.
///
/// `max_path_len` bounds path length in edges; `node_budget` bounds the
/// number of DFS extensions.
pub fn validate_bruteforce(
    g: &Graph,
    spine: &[VertexId],
    pi: &[VertexId],
    max_path_len: usize,
    node_budget: usize,
) -> Result<bool, SpinalError> {
    let n = g.vertex_count();
    if pi.len() != n || spine.is_empty() || spine.iter().any(|&s| s >= n) {
        return Ok(false);
    }
    let mut on_spine = vec![false; n];
    for &s in spine {
        on_spine[s] = true;
    }
    if spine.iter().any(|&s| pi[s] != s) || pi.iter().any(|&p| p >= n || !on_spine[p]) {
        return Ok(false);
    }
    let mut nodes = 0usize;
    let mut on_path = vec![false; n];
    let mut path = Vec::with_capacity(n);
    for a in 0..n {
        for b in a + 1..n {
            if pi[a] == pi[b] {
                continue;
            }
            path.clear();
            path.push(a);
            on_path[a] = true;
            let ok = all_paths_pass(
                g,
                b,
                (pi[a], pi[b]),
                max_path_len,
                &mut path,
                &mut on_path,
                &mut nodes,
                node_budget,
            );
            on_path[a] = false;
            match ok {
                Err(e) => return Err(e),
                Ok(false) => return Ok(false),
                Ok(true) => {}
            }
        }
    }
    Ok(true)
}

#[allow(clippy::too_many_arguments)]
fn all_paths_pass(
    g: &Graph,
    target: VertexId,
    (pa, pb): (VertexId, VertexId),
    max_len: usize,
    path: &mut Vec<VertexId>,
    on_path: &mut [bool],
    nodes: &mut usize,
    budget: usize,
) -> Result<bool, SpinalError> {
    let last = *path.last().unwrap();
    if last == target {
        let ia = path.iter().position(|&v| v == pa);
        let ib = path.iter().position(|&v| v == pb);
        return Ok(matches!((ia, ib), (Some(i), Some(j)) if i < j));
    }
    if path.len() > max_len {
        return Ok(true);
    }
    for &w in g.neighbors(last) {
        if on_path[w] {
            continue;
        }
        *nodes += 1;
        if *nodes > budget {
            return Err(SpinalError::BudgetExceeded(budget));
        }
        on_path[w] = true;
        path.push(w);
        let ok = all_paths_pass(g, target, (pa, pb), max_len, path, on_path, nodes, budget);
        path.pop();
        on_path[w] = false;
        if !ok? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Projection sending each vertex to the unique spine vertex it reaches
/// without crossing the spine elsewhere.
pub fn project_to_spine(g: &Graph, spine: &[VertexId]) -> Result<Vec<VertexId>, SpinalError> {
    let n = g.vertex_count();
    let mut pi = vec![usize::MAX; n];
    for &s in spine {
        if s >= n {
            return Err(GraphError::OutOfRange { id: s, vertex_count: n }.into());
        }
        pi[s] = s;
    }
    let mut stack = Vec::new();
    let mut component = Vec::new();
    for start in 0..n {
        if pi[start] != usize::MAX {
            continue;
        }
        // Component of G \ Σ containing `start`, and the spine it touches.
        let mut anchor: Option<VertexId> = None;
        component.clear();
        pi[start] = usize::MAX - 1;
        stack.push(start);
        while let Some(u) = stack.pop() {
            component.push(u);
            for &w in g.neighbors(u) {
                match pi[w] {
                    usize::MAX => {
                        pi[w] = usize::MAX - 1;
                        stack.push(w);
                    }
                    p if p == w => match anchor {
                        None => anchor = Some(w),
                        Some(a) if a != w => {
                            return Err(SpinalError::AmbiguousProjection {
                                vertex: u,
                                first: a,
                                second: w,
                            })
                        }
                        _ => {}
                    },
                    _ => {}
                }
            }
        }
        let a = anchor.ok_or(SpinalError::Unattached(start))?;
        for &v in &component {
            pi[v] = a;
        }
    }
    Ok(pi)
}

/// A finite connected graph with a distinguished vertex, to be glued to a
/// skeleton vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fiber {
    pub graph: Graph,
    pub root: VertexId,
}

/// Serializable form of a [`Fiber`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiberSpec {
    pub vertex_count: usize,
    pub edges: Vec<(VertexId, VertexId)>,
    pub root: VertexId,
}

impl FiberSpec {
    pub fn to_fiber(&self, skeleton_vertex: usize) -> Result<Fiber, SpinalError> {
        let graph = Graph::with_vertex_count(self.vertex_count, &self.edges)
            .map_err(|source| SpinalError::DisconnectedFiber { skeleton_vertex, source })?;
        Ok(Fiber { graph, root: self.root })
    }
}

impl From<&Fiber> for FiberSpec {
    fn from(f: &Fiber) -> Self {
        FiberSpec {
            vertex_count: f.graph.vertex_count(),
            edges: f.graph.edges().collect(),
            root: f.root,
        }
    }
}

/// Skeleton `Γ` (induced on the spine) plus one fiber per spine vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiberDecomposition {
    pub skeleton: Graph,
    /// Ambient id of each skeleton vertex.
    pub spine: Vec<VertexId>,
    /// Fiber of each skeleton vertex, numbered in BFS order from its root
    /// (so every root is local vertex 0).
    pub fibers: Vec<Fiber>,
    /// `embedding[i][local]` is the ambient id of a fiber vertex.
    pub embedding: Vec<Vec<VertexId>>,
}

/// Relabeled copy of a spinal graph: spine first in increasing original
/// id, then each fiber (by spine order) in BFS order from its spine vertex.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CanonicalForm {
    pub vertex_count: usize,
    pub edges: Vec<(VertexId, VertexId)>,
    pub spine: Vec<VertexId>,
    pub pi: Vec<VertexId>,
}

impl CanonicalForm {
    /// Labels taken as they are.
    pub fn of(sg: &SpinalGraph) -> Self {
        CanonicalForm {
            vertex_count: sg.graph.vertex_count(),
            edges: sg.graph.edges().collect(),
            spine: sg.spine.clone(),
            pi: sg.pi.clone(),
        }
    }
}

/// Values `max(0, n - [x, x0]) / n`, held as integer numerators.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TestFunction {
    pub center: VertexId,
    pub denominator: u64,
    pub numerators: Vec<u64>,
}

impl TestFunction {
    pub fn value(&self, x: VertexId) -> f64 {
        self.numerators[x] as f64 / self.denominator as f64
    }

    pub fn values(&self) -> Vec<f64> {
        let d = self.denominator as f64;
        self.numerators.iter().map(|&k| k as f64 / d).collect()
    }

    /// Vertices with a nonzero value, sorted.
    pub fn support(&self) -> Vec<VertexId> {
        (0..self.numerators.len()).filter(|&x| self.numerators[x] > 0).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeodesicViolation {
    pub a: VertexId,
    pub b: VertexId,
    pub ambient_distance: usize,
    pub fiber_distance: usize,
    /// A vertex outside the fiber on some minimal `a`–`b` path.
    pub escape: Option<VertexId>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiberGeodesicReport {
    pub pairs_checked: usize,
    /// Pairs skipped because their projections differ.
    pub pairs_skipped: usize,
    pub violations: Vec<GeodesicViolation>,
}

/// A validated spinal graph. Immutable.
#[derive(Clone, Debug)]
pub struct SpinalGraph {
    graph: Graph,
    spine: Vec<VertexId>,
    pi: Vec<VertexId>,
    spine_index: Vec<usize>,
    skeleton: Graph,
    fiber_offsets: Vec<usize>,
    fiber_members: Vec<VertexId>,
    truncation: Truncation,
}

impl SpinalGraph {
    /// Validates `(g, spine, pi)`; the spine may be given in any order.
    pub fn new(graph: Graph, spine: Vec<VertexId>, pi: Vec<VertexId>) -> Result<Self, SpinalError> {
        let report = validate_structural(&graph, &spine, &pi);
        if !report.is_valid() {
            return Err(SpinalError::Invalid(report));
        }
        Self::assemble(graph, spine, pi)
    }

    /// Builds the structure without the cross-fiber edge check, for
    /// studying graphs that violate it. The spine/projection shape must
    /// still be consistent and the skeleton connected.
    pub fn new_unvalidated(
        graph: Graph,
        spine: Vec<VertexId>,
        pi: Vec<VertexId>,
    ) -> Result<Self, SpinalError> {
        let report = validate_structural(&graph, &spine, &pi);
        let shape: Vec<_> = report
            .violations
            .into_iter()
            .filter(|v| {
                !matches!(v, Violation::CrossFiberEdge { .. } | Violation::DisconnectedFiber { .. })
            })
            .collect();
        if !shape.is_empty() {
            return Err(SpinalError::Invalid(ValidationReport { violations: shape }));
        }
        Self::assemble(graph, spine, pi)
    }

    fn assemble(graph: Graph, mut spine: Vec<VertexId>, pi: Vec<VertexId>) -> Result<Self, SpinalError> {
        spine.sort_unstable();
        let n = graph.vertex_count();
        let mut spine_index = vec![NOT_SPINE; n];
        for (i, &s) in spine.iter().enumerate() {
            spine_index[s] = i;
        }
        let skeleton = graph.induced_subgraph(&spine)?;
        let mut counts = vec![0usize; spine.len()];
        for &p in &pi {
            counts[spine_index[p]] += 1;
        }
        let mut fiber_offsets = vec![0];
        for c in &counts {
            fiber_offsets.push(fiber_offsets.last().unwrap() + c);
        }
        let mut cursor = fiber_offsets[..spine.len()].to_vec();
        let mut fiber_members = vec![0; n];
        for (i, &s) in spine.iter().enumerate() {
            fiber_members[cursor[i]] = s;
            cursor[i] += 1;
        }
        for v in 0..n {
            if spine_index[v] == NOT_SPINE {
                let i = spine_index[pi[v]];
                fiber_members[cursor[i]] = v;
                cursor[i] += 1;
            }
        }
        Ok(SpinalGraph {
            graph,
            spine,
            pi,
            spine_index,
            skeleton,
            fiber_offsets,
            fiber_members,
            truncation: Truncation::none(),
        })
    }

    /// Declares how this graph was cut from an infinite one.
    pub fn with_truncation(mut self, truncation: Truncation) -> Self {
        self.truncation = truncation;
        self
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    /// Spine vertices, sorted.
    pub fn spine(&self) -> &[VertexId] {
        &self.spine
    }

    pub fn projection(&self) -> &[VertexId] {
        &self.pi
    }

    pub fn pi(&self, x: VertexId) -> VertexId {
        self.pi[x]
    }

    pub fn is_spine(&self, x: VertexId) -> bool {
        self.spine_index[x] != NOT_SPINE
    }

    /// Position of a spine vertex in [`spine`](Self::spine), which is also
    /// its id in the [`skeleton`](Self::skeleton).
    pub fn spine_position(&self, x: VertexId) -> Option<usize> {
        match self.spine_index[x] {
            NOT_SPINE => None,
            i => Some(i),
        }
    }

    pub fn skeleton(&self) -> &Graph {
        &self.skeleton
    }

    pub fn truncation(&self) -> &Truncation {
        &self.truncation
    }

    /// `π⁻¹(s)` for a spine vertex `s`, spine vertex first.
    pub fn fiber(&self, s: VertexId) -> &[VertexId] {
        let i = self.spine_index[s];
        assert!(i != NOT_SPINE, "vertex {s} is not on the spine");
        &self.fiber_members[self.fiber_offsets[i]..self.fiber_offsets[i + 1]]
    }

    fn fiber_size_at(&self, i: usize) -> usize {
        self.fiber_offsets[i + 1] - self.fiber_offsets[i]
    }

    fn skeleton_id(&self, x: VertexId) -> usize {
        self.spine_index[self.pi[x]]
    }

    /// Spinal distance `[x, y] = d_Σ(π(x), π(y))`.
    pub fn spinal_distance(&self, x: VertexId, y: VertexId) -> usize {
        self.skeleton.distance(self.skeleton_id(x), self.skeleton_id(y))
    }

    /// Spine vertices with `d_Σ(π(x), s) <= r`, with their distances, in
    /// BFS order.
    pub fn spine_ball(&self, x: VertexId, r: usize) -> Vec<(VertexId, usize)> {
        let mut bfs = BfsScratch::new(self.skeleton.vertex_count());
        bfs.run(&self.skeleton, self.skeleton_id(x), r);
        bfs.order().iter().map(|&i| (self.spine[i], bfs.distance(i).unwrap())).collect()
    }

    /// `|B_Σ(π(x), r)|`.
    pub fn spine_ball_size(&self, x: VertexId, r: usize) -> usize {
        let mut bfs = BfsScratch::new(self.skeleton.vertex_count());
        bfs.run(&self.skeleton, self.skeleton_id(x), r);
        bfs.order().len()
    }

    /// Spinal set `D(x, r) = π⁻¹(B_Σ(π(x), r))`, sorted.
    pub fn spinal_set(&self, x: VertexId, r: usize) -> Vec<VertexId> {
        let mut out: Vec<VertexId> = self
            .spine_ball(x, r)
            .into_iter()
            .flat_map(|(s, _)| self.fiber(s).iter().copied())
            .collect();
        out.sort_unstable();
        out
    }

    /// `|D(x, r)|` for `r = 0..=r_max` from one skeleton BFS.
    pub fn spinal_volumes(&self, x: VertexId, r_max: usize) -> Vec<usize> {
        let mut bfs = BfsScratch::new(self.skeleton.vertex_count());
        bfs.run(&self.skeleton, self.skeleton_id(x), r_max);
        let mut out = vec![0usize; r_max + 1];
        for &i in bfs.order() {
            out[bfs.distance(i).unwrap()] += self.fiber_size_at(i);
        }
        for r in 1..=r_max {
            out[r] += out[r - 1];
        }
        out
    }

    /// `|B_Σ(π(x), r)|` for `r = 0..=r_max`.
    pub fn spine_volumes(&self, x: VertexId, r_max: usize) -> Vec<usize> {
        let mut bfs = BfsScratch::new(self.skeleton.vertex_count());
        bfs.run(&self.skeleton, self.skeleton_id(x), r_max);
        let mut out = vec![0usize; r_max + 1];
        for &i in bfs.order() {
            out[bfs.distance(i).unwrap()] += 1;
        }
        for r in 1..=r_max {
            out[r] += out[r - 1];
        }
        out
    }

    /// Largest `r` for which `D(x, r)` is unaffected by the truncation.
    pub fn safe_spinal_radius(&self, x: VertexId) -> usize {
        let cap = self.truncation.analysis_radius.unwrap_or(usize::MAX);
        if self.truncation.boundary.is_empty() {
            return cap;
        }
        let mut bfs = BfsScratch::new(self.skeleton.vertex_count());
        bfs.run(&self.skeleton, self.skeleton_id(x), usize::MAX);
        let exact = self
            .truncation
            .boundary
            .iter()
            .map(|&b| {
                let d = bfs.distance(self.skeleton_id(b)).unwrap_or(usize::MAX);
                // A cut inside a fiber spoils that fiber itself.
                if self.is_spine(b) {
                    d
                } else {
                    d.saturating_sub(1)
                }
            })
            .min()
            .unwrap();
        exact.min(cap)
    }

    /// Largest `r` for which graph balls `B(x, r)` are exact.
    pub fn safe_ball_radius(&self, x: VertexId) -> usize {
        self.truncation.safe_radius(&self.graph, x)
    }

    /// Fiber of spine position `i` in BFS order from its spine vertex,
    /// visiting neighbours in increasing id order.
    fn fiber_bfs_order(&self, i: usize) -> Vec<VertexId> {
        let s = self.spine[i];
        let mut order = vec![s];
        let mut seen = HashSet::from([s]);
        let mut head = 0;
        while head < order.len() {
            let u = order[head];
            head += 1;
            for &w in self.graph.neighbors(u) {
                if self.pi[w] == s && seen.insert(w) {
                    order.push(w);
                }
            }
        }
        order
    }

    /// Splits into skeleton and fibers; `z_x = x` for each spine vertex.
    pub fn decompose(&self) -> FiberDecomposition {
        let mut fibers = Vec::with_capacity(self.spine.len());
        let mut embedding = Vec::with_capacity(self.spine.len());
        for i in 0..self.spine.len() {
            let order = self.fiber_bfs_order(i);
            let graph = self.graph.induced_subgraph(&order).expect("fibers of a spinal graph are connected");
            fibers.push(Fiber { graph, root: 0 });
            embedding.push(order);
        }
        FiberDecomposition {
            skeleton: self.skeleton.clone(),
            spine: self.spine.clone(),
            fibers,
            embedding,
        }
    }

    /// Renumbers into canonical order (see [`CanonicalForm`]).
    pub fn canonical_form(&self) -> CanonicalForm {
        let n = self.graph.vertex_count();
        let mut new_id = vec![usize::MAX; n];
        for (i, &s) in self.spine.iter().enumerate() {
            new_id[s] = i;
        }
        let mut next = self.spine.len();
        for i in 0..self.spine.len() {
            for v in self.fiber_bfs_order(i).into_iter().skip(1) {
                new_id[v] = next;
                next += 1;
            }
        }
        let mut edges: Vec<_> = self
            .graph
            .edges()
            .map(|(u, v)| {
                let (a, b) = (new_id[u], new_id[v]);
                (a.min(b), a.max(b))
            })
            .collect();
        edges.sort_unstable();
        let mut pi = vec![0; n];
        for v in 0..n {
            pi[new_id[v]] = new_id[self.pi[v]];
        }
        CanonicalForm { vertex_count: n, edges, spine: (0..self.spine.len()).collect(), pi }
    }

    /// The test function `g_n(x) = max(0, n - [x, x0]) / n`.
    pub fn test_function(&self, x0: VertexId, n: u64) -> Result<TestFunction, SpinalError> {
        if !self.is_spine(x0) {
            return Err(SpinalError::NotOnSpine(x0));
        }
        if n == 0 {
            return Err(SpinalError::ZeroDenominator);
        }
        let mut numerators = vec![0u64; self.graph.vertex_count()];
        let reach = usize::try_from(n - 1).unwrap_or(usize::MAX);
        for (s, d) in self.spine_ball(x0, reach) {
            let value = n - d as u64;
            for &v in self.fiber(s) {
                numerators[v] = value;
            }
        }
        Ok(TestFunction { center: x0, denominator: n, numerators })
    }

    /// Checks that minimal paths between vertices of one fiber stay in the
    /// fiber: ambient and in-fiber distances agree from each source, and no
    /// vertex outside the fiber lies on a geodesic between the pair.
    pub fn check_fiber_geodesics(&self, pairs: &[(VertexId, VertexId)]) -> FiberGeodesicReport {
        let n = self.graph.vertex_count();
        let mut report = FiberGeodesicReport::default();
        let mut from_a = BfsScratch::new(n);
        let mut from_b = BfsScratch::new(n);
        let mut sorted: Vec<_> = pairs.to_vec();
        sorted.sort_unstable();
        let mut current: Option<(VertexId, Vec<usize>)> = None;
        for &(a, b) in &sorted {
            let s = self.pi[a];
            if self.pi[b] != s {
                report.pairs_skipped += 1;
                continue;
            }
            report.pairs_checked += 1;
            if current.as_ref().map(|c| c.0) != Some(a) {
                let in_fiber = self.fiber_distances(a);
                let ecc = self.fiber(s).iter().map(|&v| in_fiber[v]).max().unwrap();
                from_a.run(&self.graph, a, ecc);
                current = Some((a, in_fiber));
            }
            let in_fiber = &current.as_ref().unwrap().1;
            let d_fiber = in_fiber[b];
            let d_amb = from_a.distance(b).expect("within fiber eccentricity");
            let mut escape = None;
            if d_amb == d_fiber {
                from_b.run(&self.graph, b, d_amb);
                escape = from_a
                    .order()
                    .iter()
                    .copied()
                    .filter(|&v| self.pi[v] != s)
                    .find(|&v| match (from_a.distance(v), from_b.distance(v)) {
                        (Some(x), Some(y)) => x + y == d_amb,
                        _ => false,
                    });
            }
            if d_amb != d_fiber || escape.is_some() {
                report.violations.push(GeodesicViolation {
                    a,
                    b,
                    ambient_distance: d_amb,
                    fiber_distance: d_fiber,
                    escape,
                });
            }
        }
        report
    }

    /// Distances inside the fiber of `a` (usize::MAX elsewhere).
    fn fiber_distances(&self, a: VertexId) -> Vec<usize> {
        let s = self.pi[a];
        let mut dist = vec![usize::MAX; self.graph.vertex_count()];
        let mut queue = std::collections::VecDeque::new();
        dist[a] = 0;
        queue.push_back(a);
        while let Some(u) = queue.pop_front() {
            for &w in self.graph.neighbors(u) {
                if self.pi[w] == s && dist[w] == usize::MAX {
                    dist[w] = dist[u] + 1;
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    /// Every ordered pair `(a, b)`, `a < b`, inside one fiber, up to `limit`.
    pub fn fiber_pairs(&self, limit: usize) -> Vec<(VertexId, VertexId)> {
        let mut out = Vec::new();
        for &s in &self.spine {
            let f = self.fiber(s);
            for (i, &a) in f.iter().enumerate() {
                for &b in &f[i + 1..] {
                    if out.len() == limit {
                        return out;
                    }
                    out.push((a.min(b), a.max(b)));
                }
            }
        }
        out
    }
}

/// Glues each fiber to its skeleton vertex by identifying the root with
/// that vertex. Spine vertices get ids `0..|Γ|` in skeleton order, then
/// each fiber's other vertices follow in skeleton order, then local order.
pub fn glue(skeleton: &Graph, fibers: &[Fiber]) -> Result<SpinalGraph, SpinalError> {
    glue_with_embedding(skeleton, fibers).map(|(sg, _)| sg)
}

/// [`glue`], also returning `embedding[i][local]` = ambient id.
pub fn glue_with_embedding(
    skeleton: &Graph,
    fibers: &[Fiber],
) -> Result<(SpinalGraph, Vec<Vec<VertexId>>), SpinalError> {
    let k = skeleton.vertex_count();
    if fibers.len() != k {
        return Err(SpinalError::FiberCountMismatch { expected: k, found: fibers.len() });
    }
    for (i, f) in fibers.iter().enumerate() {
        if f.root >= f.graph.vertex_count() {
            return Err(SpinalError::BadDistinguishedVertex {
                skeleton_vertex: i,
                root: f.root,
                fiber_size: f.graph.vertex_count(),
            });
        }
    }
    let mut next = k;
    let mut embedding = Vec::with_capacity(k);
    for (i, f) in fibers.iter().enumerate() {
        let ids: Vec<VertexId> = (0..f.graph.vertex_count())
            .map(|local| {
                if local == f.root {
                    i
                } else {
                    next += 1;
                    next - 1
                }
            })
            .collect();
        embedding.push(ids);
    }
    let n = next;
    let mut edges: Vec<(VertexId, VertexId)> = skeleton.edges().collect();
    let mut pi = vec![0; n];
    for (i, f) in fibers.iter().enumerate() {
        let ids = &embedding[i];
        edges.extend(f.graph.edges().map(|(u, v)| (ids[u], ids[v])));
        for &v in ids {
            pi[v] = i;
        }
    }
    let graph = Graph::with_vertex_count(n, &edges)?;
    let sg = SpinalGraph::new(graph, (0..k).collect(), pi)?;
    Ok((sg, embedding))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path(n: usize) -> Graph {
        if n == 1 {
            return Graph::with_vertex_count(1, &[]).unwrap();
        }
        let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Graph::from_edges(&edges).unwrap()
    }

    fn triangle() -> Graph {
        Graph::from_edges(&[(0, 1), (1, 2), (0, 2)]).unwrap()
    }

    #[test]
    fn trivial_spine_is_valid() {
        let g = triangle();
        assert!(validate_structural(&g, &[0, 1, 2], &[0, 1, 2]).is_valid());
        assert_eq!(validate_bruteforce(&g, &[0, 1, 2], &[0, 1, 2], 10, 1 << 20), Ok(true));
    }

    #[test]
    fn single_fiber_is_vacuous() {
        let g = triangle();
        assert!(validate_structural(&g, &[0], &[0, 0, 0]).is_valid());
        assert_eq!(validate_bruteforce(&g, &[0], &[0, 0, 0], 10, 1 << 20), Ok(true));
    }

    #[test]
    fn four_cycle_with_off_spine_crossing_is_rejected() {
        let g = Graph::from_edges(&[(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        let pi = [0, 0, 2, 2];
        let report = validate_structural(&g, &[0, 2], &pi);
        assert!(report
            .violations
            .contains(&Violation::CrossFiberEdge { u: 1, v: 2, pi_u: 0, pi_v: 2 }));
        assert_eq!(validate_bruteforce(&g, &[0, 2], &pi, 10, 1 << 20), Ok(false));
    }

    #[test]
    fn malformed_input_is_reported_not_panicked() {
        let g = path(3);
        let r = validate_structural(&g, &[], &[0, 0]);
        assert_eq!(r.violations, vec![Violation::ProjectionLength { expected: 3, found: 2 }]);
        let r = validate_structural(&g, &[0, 7], &[0, 9, 1]);
        assert!(r.violations.contains(&Violation::SpineOutOfRange { vertex: 7 }));
        assert!(r.violations.contains(&Violation::ProjectionOutOfRange { vertex: 1, image: 9 }));
        assert!(r.violations.contains(&Violation::ProjectionOffSpine { vertex: 2, image: 1 }));
        let r = validate_structural(&g, &[0, 1], &[1, 1, 1]);
        assert!(r.violations.contains(&Violation::SpineNotFixed { vertex: 0, image: 1 }));
    }

    #[test]
    fn disconnected_fiber_is_reported() {
        // 1 - 0 - 2 with fiber of 1 = {1, 2}: 2 only reaches 1 through 0.
        let g = Graph::from_edges(&[(0, 1), (0, 2)]).unwrap();
        let r = validate_structural(&g, &[0, 1], &[0, 1, 1]);
        assert!(r.violations.contains(&Violation::DisconnectedFiber { spine_vertex: 1, unreached: 2 }));
    }

    #[test]
    fn glue_k2_of_points() {
        let k2 = path(2);
        let k1 = Fiber { graph: path(1), root: 0 };
        let sg = glue(&k2, &[k1.clone(), k1]).unwrap();
        assert_eq!(sg.graph().vertex_count(), 2);
        assert_eq!(sg.spine(), &[0, 1]);
    }

    #[test]
    fn glue_point_and_path() {
        let sg = glue(
            &path(2),
            &[Fiber { graph: path(1), root: 0 }, Fiber { graph: path(3), root: 2 }],
        )
        .unwrap();
        assert_eq!(sg.graph().vertex_count(), 4);
        assert_eq!(sg.graph().edge_count(), 3);
        assert_eq!(sg.spine(), &[0, 1]);
        assert_eq!(sg.fiber(1).len(), 3);
    }

    #[test]
    fn glue_triangles_on_a_path() {
        let t = Fiber { graph: triangle(), root: 1 };
        let sg = glue(&path(3), &[t.clone(), t.clone(), t]).unwrap();
        assert_eq!(sg.graph().vertex_count(), 9);
        assert_eq!(sg.graph().edge_count(), 11);
    }

    #[test]
    fn glue_errors() {
        let bad_root = glue(&path(2), &[Fiber { graph: path(1), root: 0 }, Fiber { graph: path(2), root: 5 }]);
        assert!(matches!(bad_root, Err(SpinalError::BadDistinguishedVertex { skeleton_vertex: 1, root: 5, .. })));
        let spec = FiberSpec { vertex_count: 3, edges: vec![(0, 1)], root: 0 };
        assert!(matches!(spec.to_fiber(4), Err(SpinalError::DisconnectedFiber { skeleton_vertex: 4, .. })));
        assert!(matches!(
            glue(&path(2), &[Fiber { graph: path(1), root: 0 }]),
            Err(SpinalError::FiberCountMismatch { expected: 2, found: 1 })
        ));
    }

    #[test]
    fn decompose_k2() {
        let sg = SpinalGraph::new(path(2), vec![0, 1], vec![0, 1]).unwrap();
        let d = sg.decompose();
        assert_eq!(d.skeleton, path(2));
        assert!(d.fibers.iter().all(|f| f.graph.vertex_count() == 1));
    }

    #[test]
    fn spinal_distance_and_sets() {
        // Skeleton path 0-1-2, fiber of 1 = {1, 3, 4} (path 1-3-4).
        let g = Graph::from_edges(&[(0, 1), (1, 2), (1, 3), (3, 4)]).unwrap();
        let sg = SpinalGraph::new(g, vec![0, 1, 2], vec![0, 1, 2, 1, 1]).unwrap();
        assert_eq!(sg.spinal_distance(3, 4), 0);
        assert_eq!(sg.spinal_distance(4, 0), 1);
        assert_eq!(sg.spinal_distance(0, 2), 2);
        assert_eq!(sg.spinal_set(4, 0), vec![1, 3, 4]);
        assert_eq!(sg.spinal_set(0, 1), vec![0, 1, 3, 4]);
        assert_eq!(sg.spinal_volumes(0, 3), vec![1, 4, 5, 5]);
        assert_eq!(sg.spine_volumes(0, 3), vec![1, 2, 3, 3]);
    }

    #[test]
    fn test_function_values() {
        let g = Graph::from_edges(&[(0, 1), (1, 2), (1, 3), (3, 4)]).unwrap();
        let sg = SpinalGraph::new(g, vec![0, 1, 2], vec![0, 1, 2, 1, 1]).unwrap();
        let t = sg.test_function(0, 3).unwrap();
        assert_eq!(t.numerators, vec![3, 2, 1, 2, 2]);
        assert!((t.value(4) - 2.0 / 3.0).abs() < 1e-15);
        let t1 = sg.test_function(1, 1).unwrap();
        assert_eq!(t1.support(), sg.spinal_set(1, 0));
        assert_eq!(sg.test_function(3, 2), Err(SpinalError::NotOnSpine(3)));
        assert_eq!(sg.test_function(0, 0), Err(SpinalError::ZeroDenominator));
    }

    #[test]
    fn projection_from_spine() {
        let g = Graph::from_edges(&[(0, 1), (1, 2), (1, 3), (3, 4)]).unwrap();
        assert_eq!(project_to_spine(&g, &[0, 1, 2]).unwrap(), vec![0, 1, 2, 1, 1]);
        // 3 touches both 0 and 2 through G \ Σ.
        let h = Graph::from_edges(&[(0, 1), (1, 2), (0, 3), (3, 2)]).unwrap();
        assert!(matches!(project_to_spine(&h, &[0, 1, 2]), Err(SpinalError::AmbiguousProjection { .. })));
    }

    #[test]
    fn geodesics_on_a_path_fiber() {
        let sg = glue(
            &path(2),
            &[Fiber { graph: path(1), root: 0 }, Fiber { graph: path(3), root: 0 }],
        )
        .unwrap();
        let pairs = sg.fiber_pairs(usize::MAX);
        assert_eq!(pairs.len(), 3);
        let rep = sg.check_fiber_geodesics(&pairs);
        assert_eq!(rep.pairs_checked, 3);
        assert!(rep.violations.is_empty());
    }

    #[test]
    fn shortcut_is_detected() {
        // Skeleton 0-1; fiber of 0 is the path 0-2-3-4; shortcut 4-1.
        let g = Graph::from_edges(&[(0, 1), (0, 2), (2, 3), (3, 4), (4, 1)]).unwrap();
        let pi = vec![0, 1, 0, 0, 0];
        assert!(SpinalGraph::new(g.clone(), vec![0, 1], pi.clone()).is_err());
        let sg = SpinalGraph::new_unvalidated(g, vec![0, 1], pi).unwrap();
        let rep = sg.check_fiber_geodesics(&sg.fiber_pairs(usize::MAX));
        assert!(rep.violations.iter().any(|v| (v.a, v.b) == (0, 4) && v.ambient_distance == 2));
    }
}
