//! Immutable undirected simple graphs with compact vertex ids.
//!
//! Adjacency is stored CSR-style: one offset array and one flat, per-vertex
//! sorted neighbor array. All graphs are connected; construction rejects
//! anything else.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub type VertexId = usize;

const UNSEEN: u32 = u32::MAX;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("graph has no vertices")]
    Empty,
    #[error("self-loop at vertex {0}")]
    SelfLoop(VertexId),
    #[error("duplicate edge {{{0}, {1}}}")]
    DuplicateEdge(VertexId, VertexId),
    #[error("graph is disconnected: vertex {unreached} is not reachable from vertex 0")]
    Disconnected { unreached: VertexId },
    #[error("vertex id {id} occurs in no edge (ids must be exactly 0..{vertex_count})")]
    IdGap { id: VertexId, vertex_count: usize },
    #[error("vertex id {id} out of range for a graph with {vertex_count} vertices")]
    OutOfRange { id: VertexId, vertex_count: usize },
}

/// Connected, undirected, simple graph on vertices `0..vertex_count`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    offsets: Vec<usize>,
    neighbors: Vec<VertexId>,
}

impl Graph {
    /// Builds a graph from an edge list; the vertex set is `0..=max id`.
    ///
    /// Every id below the maximum must occur in some edge.
    pub fn from_edges(edges: &[(VertexId, VertexId)]) -> Result<Self, GraphError> {
        let vertex_count = match edges.iter().map(|&(u, v)| u.max(v)).max() {
            Some(m) => m + 1,
            None => return Err(GraphError::Empty),
        };
        let mut seen = vec![false; vertex_count];
        for &(u, v) in edges {
            seen[u] = true;
            seen[v] = true;
        }
        if let Some(id) = seen.iter().position(|s| !s) {
            return Err(GraphError::IdGap { id, vertex_count });
        }
        Self::with_vertex_count(vertex_count, edges)
    }

    /// Builds a graph with an explicit vertex count, which allows the
    /// single-vertex graph.
    pub fn with_vertex_count(
        vertex_count: usize,
        edges: &[(VertexId, VertexId)],
    ) -> Result<Self, GraphError> {
        if vertex_count == 0 {
            return Err(GraphError::Empty);
        }
        let mut degree = vec![0usize; vertex_count];
        for &(u, v) in edges {
            for id in [u, v] {
                if id >= vertex_count {
                    return Err(GraphError::OutOfRange { id, vertex_count });
                }
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            degree[u] += 1;
            degree[v] += 1;
        }
        let mut offsets = Vec::with_capacity(vertex_count + 1);
        offsets.push(0);
        for d in &degree {
            offsets.push(offsets.last().unwrap() + d);
        }
        let mut cursor = offsets[..vertex_count].to_vec();
        let mut neighbors = vec![0; offsets[vertex_count]];
        for &(u, v) in edges {
            neighbors[cursor[u]] = v;
            cursor[u] += 1;
            neighbors[cursor[v]] = u;
            cursor[v] += 1;
        }
        for x in 0..vertex_count {
            let adj = &mut neighbors[offsets[x]..offsets[x + 1]];
            adj.sort_unstable();
            if let Some(w) = adj.windows(2).find(|w| w[0] == w[1]) {
                let y = w[0];
                return Err(GraphError::DuplicateEdge(x.min(y), x.max(y)));
            }
        }
        let graph = Graph { offsets, neighbors };
        graph.check_connected()?;
        Ok(graph)
    }

    fn check_connected(&self) -> Result<(), GraphError> {
        let dist = self.bfs_distances(0);
        match dist.iter().position(|d| d.is_none()) {
            Some(unreached) => Err(GraphError::Disconnected { unreached }),
            None => Ok(()),
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn edge_count(&self) -> usize {
        self.neighbors.len() / 2
    }

    #[inline]
    pub fn neighbors(&self, x: VertexId) -> &[VertexId] {
        &self.neighbors[self.offsets[x]..self.offsets[x + 1]]
    }

    /// Number of neighbours, `m(x)`.
    #[inline]
    pub fn degree(&self, x: VertexId) -> usize {
        self.offsets[x + 1] - self.offsets[x]
    }

    pub fn max_degree(&self) -> usize {
        (0..self.vertex_count()).map(|x| self.degree(x)).max().unwrap_or(0)
    }

    pub fn has_edge(&self, x: VertexId, y: VertexId) -> bool {
        self.neighbors(x).binary_search(&y).is_ok()
    }

    /// Edges as `(u, v)` with `u < v`, lexicographically sorted.
    pub fn edges(&self) -> impl Iterator<Item = (VertexId, VertexId)> + '_ {
        (0..self.vertex_count()).flat_map(move |u| {
            self.neighbors(u)
                .iter()
                .copied()
                .filter(move |&v| v > u)
                .map(move |v| (u, v))
        })
    }

    /// Returns a copy of the graph with one more edge.
    pub fn with_added_edge(&self, u: VertexId, v: VertexId) -> Result<Graph, GraphError> {
        let mut edges: Vec<_> = self.edges().collect();
        edges.push((u, v));
        Graph::with_vertex_count(self.vertex_count(), &edges)
    }

    /// Induced subgraph on `vertices` (in the given order), if it is
    /// connected. Local vertex `i` is `vertices[i]`.
    pub fn induced_subgraph(&self, vertices: &[VertexId]) -> Result<Graph, GraphError> {
        let mut local = vec![usize::MAX; self.vertex_count()];
        for (i, &v) in vertices.iter().enumerate() {
            local[v] = i;
        }
        let mut edges = Vec::new();
        for (i, &v) in vertices.iter().enumerate() {
            for &w in self.neighbors(v) {
                let j = local[w];
                if j != usize::MAX && i < j {
                    edges.push((i, j));
                }
            }
        }
        Graph::with_vertex_count(vertices.len(), &edges)
    }

    /// Full BFS distances from `source`.
    pub fn bfs_distances(&self, source: VertexId) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.vertex_count()];
        let mut queue = VecDeque::new();
        dist[source] = Some(0);
        queue.push_back(source);
        while let Some(u) = queue.pop_front() {
            let du = dist[u].unwrap();
            for &v in self.neighbors(u) {
                if dist[v].is_none() {
                    dist[v] = Some(du + 1);
                    queue.push_back(v);
                }
            }
        }
        dist
    }

    /// Combinatorial distance `d_G(x, y)`.
    pub fn distance(&self, x: VertexId, y: VertexId) -> usize {
        if x == y {
            return 0;
        }
        let mut bfs = BfsScratch::new(self.vertex_count());
        bfs.run_until(self, x, usize::MAX, |v| v == y);
        bfs.distance(y).expect("graph is connected")
    }

    /// `B_G(x, r)`, sorted. Radii are floored: distances are integral.
    pub fn ball(&self, x: VertexId, r: f64) -> Vec<VertexId> {
        let radius = floor_radius(r);
        let mut bfs = BfsScratch::new(self.vertex_count());
        bfs.run(self, x, radius);
        let mut out = bfs.order().to_vec();
        out.sort_unstable();
        out
    }

    /// `|B_G(x, r)|` for every `r` in `0..=r_max`, from one BFS.
    pub fn volume_table(&self, x: VertexId, r_max: usize) -> VolumeTable {
        let mut bfs = BfsScratch::new(self.vertex_count());
        bfs.run(self, x, r_max);
        let mut volumes = bfs.layer_sizes();
        for r in 1..volumes.len() {
            volumes[r] += volumes[r - 1];
        }
        let last = *volumes.last().unwrap();
        volumes.resize(r_max + 1, last);
        VolumeTable { center: x, volumes }
    }
}

/// Floors a real radius; negative or NaN radii give the empty-radius 0.
pub fn floor_radius(r: f64) -> usize {
    if r.is_nan() || r < 0.0 {
        0
    } else if r >= usize::MAX as f64 {
        usize::MAX
    } else {
        r.floor() as usize
    }
}

/// Reusable BFS state. Resetting costs only the previously visited set, so
/// many bounded sweeps on a large graph stay proportional to ball sizes.
#[derive(Debug, Clone)]
pub struct BfsScratch {
    dist: Vec<u32>,
    order: Vec<VertexId>,
}

impl BfsScratch {
    pub fn new(vertex_count: usize) -> Self {
        BfsScratch { dist: vec![UNSEEN; vertex_count], order: Vec::new() }
    }

    fn reset(&mut self) {
        for &v in &self.order {
            self.dist[v] = UNSEEN;
        }
        self.order.clear();
    }

    /// Visits `B(source, max_radius)`.
    pub fn run(&mut self, g: &Graph, source: VertexId, max_radius: usize) {
        self.run_until(g, source, max_radius, |_| false);
    }

    /// Like [`run`](Self::run) but stops once `stop` accepts a visited vertex.
    pub fn run_until(
        &mut self,
        g: &Graph,
        source: VertexId,
        max_radius: usize,
        mut stop: impl FnMut(VertexId) -> bool,
    ) {
        self.reset();
        let max_radius = max_radius.min(UNSEEN as usize - 1) as u32;
        self.dist[source] = 0;
        self.order.push(source);
        if stop(source) {
            return;
        }
        let mut head = 0;
        while head < self.order.len() {
            let u = self.order[head];
            head += 1;
            let du = self.dist[u];
            if du == max_radius {
                continue;
            }
            for &v in g.neighbors(u) {
                if self.dist[v] == UNSEEN {
                    self.dist[v] = du + 1;
                    self.order.push(v);
                    if stop(v) {
                        return;
                    }
                }
            }
        }
    }

    /// Visited vertices in nondecreasing distance order.
    pub fn order(&self) -> &[VertexId] {
        &self.order
    }

    pub fn distance(&self, v: VertexId) -> Option<usize> {
        match self.dist[v] {
            UNSEEN => None,
            d => Some(d as usize),
        }
    }

    /// Number of visited vertices at each distance.
    pub fn layer_sizes(&self) -> Vec<usize> {
        let depth = self.order.last().map_or(0, |&v| self.dist[v] as usize);
        let mut layers = vec![0; depth + 1];
        for &v in &self.order {
            layers[self.dist[v] as usize] += 1;
        }
        layers
    }
}

/// `|B(center, r)|` for `r = 0..=r_max`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VolumeTable {
    pub center: VertexId,
    pub volumes: Vec<usize>,
}

impl VolumeTable {
    pub fn volume(&self, r: usize) -> usize {
        self.volumes[r]
    }

    pub fn r_max(&self) -> usize {
        self.volumes.len() - 1
    }
}

/// Where a finite graph was cut out of an infinite one.
///
/// `boundary` holds the vertices whose degree differs from the infinite
/// graph (the attachment points of the removed part). All removed vertices
/// are reached only through them, so a ball `B(x, r)` is exact whenever
/// `r` does not exceed the distance from `x` to the boundary.
/// `analysis_radius` is an additional global cap declared by a generator.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Truncation {
    pub boundary: Vec<VertexId>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub analysis_radius: Option<usize>,
}

impl Truncation {
    /// A graph that is complete as given.
    pub fn none() -> Self {
        Truncation::default()
    }

    pub fn is_none(&self) -> bool {
        self.boundary.is_empty() && self.analysis_radius.is_none()
    }

    /// Distance from `x` to the nearest boundary vertex, or `usize::MAX`.
    pub fn boundary_distance(&self, g: &Graph, x: VertexId) -> usize {
        if self.boundary.is_empty() {
            return usize::MAX;
        }
        let mut is_boundary = vec![false; g.vertex_count()];
        for &b in &self.boundary {
            is_boundary[b] = true;
        }
        let mut bfs = BfsScratch::new(g.vertex_count());
        let mut hit = None;
        bfs.run_until(g, x, usize::MAX, |v| {
            if is_boundary[v] {
                hit = Some(v);
                true
            } else {
                false
            }
        });
        hit.and_then(|v| bfs.distance(v)).unwrap_or(usize::MAX)
    }

    /// Largest radius around `x` for which graph balls are exact and
    /// within the declared analysis radius.
    pub fn safe_radius(&self, g: &Graph, x: VertexId) -> usize {
        self.boundary_distance(g, x).min(self.analysis_radius.unwrap_or(usize::MAX))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path(n: usize) -> Graph {
        let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Graph::from_edges(&edges).unwrap()
    }

    #[test]
    fn k2_and_triangle() {
        let k2 = Graph::from_edges(&[(0, 1)]).unwrap();
        assert_eq!(k2.vertex_count(), 2);
        assert_eq!((k2.degree(0), k2.degree(1)), (1, 1));
        let tri = Graph::from_edges(&[(0, 1), (1, 2), (2, 0)]).unwrap();
        assert!((0..3).all(|x| tri.degree(x) == 2));
        assert_eq!(tri.edges().collect::<Vec<_>>(), vec![(0, 1), (0, 2), (1, 2)]);
    }

    #[test]
    fn construction_errors_name_the_offender() {
        assert_eq!(
            Graph::from_edges(&[(0, 1), (2, 3)]),
            Err(GraphError::Disconnected { unreached: 2 })
        );
        assert_eq!(Graph::from_edges(&[(0, 1), (1, 1)]), Err(GraphError::SelfLoop(1)));
        assert_eq!(
            Graph::from_edges(&[(0, 1), (1, 2), (2, 1)]),
            Err(GraphError::DuplicateEdge(1, 2))
        );
        assert_eq!(
            Graph::from_edges(&[(0, 1), (1, 3)]),
            Err(GraphError::IdGap { id: 2, vertex_count: 4 })
        );
        assert_eq!(Graph::from_edges(&[]), Err(GraphError::Empty));
        assert_eq!(
            Graph::with_vertex_count(2, &[(0, 2)]),
            Err(GraphError::OutOfRange { id: 2, vertex_count: 2 })
        );
        assert!(Graph::with_vertex_count(1, &[]).is_ok());
    }

    #[test]
    fn distances_on_a_path() {
        let g = path(3);
        assert_eq!(g.distance(0, 2), 2);
        assert_eq!(g.distance(1, 1), 0);
    }

    #[test]
    fn balls_on_a_long_path() {
        let g = path(101);
        assert_eq!(g.ball(50, 0.0), vec![50]);
        for r in 0..=50 {
            assert_eq!(g.ball(50, r as f64).len(), 2 * r + 1);
        }
        assert_eq!(g.ball(50, 2.9).len(), 5);
    }

    #[test]
    fn volume_tables() {
        let k2 = Graph::from_edges(&[(0, 1)]).unwrap();
        assert_eq!(k2.volume_table(0, 2).volumes, vec![1, 2, 2]);
        assert_eq!(path(7).volume_table(3, 3).volumes, vec![1, 3, 5, 7]);
    }

    #[test]
    fn truncation_distance() {
        let g = path(10);
        let t = Truncation { boundary: vec![9], analysis_radius: Some(4) };
        assert_eq!(t.boundary_distance(&g, 2), 7);
        assert_eq!(t.safe_radius(&g, 2), 4);
        assert_eq!(Truncation::none().safe_radius(&g, 2), usize::MAX);
    }
}
