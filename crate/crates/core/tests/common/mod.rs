//! Test oracles shared by the integration suites.
#![allow(dead_code)]

use std::collections::HashSet;

use spinal_lab::graph::{Graph, VertexId};

/// Vertex coordinates (doubled) of the level-`m` Vicsek graph in `ℤⁿ`,
/// built as the literal union of translated copies of level `m-1`.
pub fn vicsek_coordinate_set(dim: usize, level: u32) -> HashSet<Vec<i64>> {
    let mut set: HashSet<Vec<i64>> = HashSet::new();
    set.insert(vec![0; dim]);
    for mask in 0..1usize << dim {
        set.insert(corner(dim, mask, 1));
    }
    for j in 0..level {
        let step = 2 * 3i64.pow(j);
        let mut next = set.clone();
        for mask in 0..1usize << dim {
            let t = corner(dim, mask, step);
            for p in &set {
                next.insert(p.iter().zip(&t).map(|(a, b)| a + b).collect());
            }
        }
        set = next;
    }
    set
}

fn corner(dim: usize, mask: usize, scale: i64) -> Vec<i64> {
    (0..dim).map(|i| if mask >> i & 1 == 1 { -scale } else { scale }).collect()
}

/// Upper-triangle bit index of the pair `{u, v}`, `u < v < n`.
fn pair_bit(n: usize, u: usize, v: usize) -> usize {
    let (u, v) = (u.min(v), u.max(v));
    u * (2 * n - u - 1) / 2 + (v - u - 1)
}

/// A graph on `n ≤ 9` vertices as an upper-triangle edge bitmask.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SmallGraph {
    pub n: usize,
    pub bits: u64,
}

impl SmallGraph {
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.bits >> pair_bit(self.n, u, v) & 1 == 1
    }

    pub fn edges(&self) -> Vec<(VertexId, VertexId)> {
        let mut out = Vec::new();
        for u in 0..self.n {
            for v in u + 1..self.n {
                if self.has_edge(u, v) {
                    out.push((u, v));
                }
            }
        }
        out
    }

    pub fn to_graph(self) -> Graph {
        Graph::with_vertex_count(self.n, &self.edges()).expect("connected")
    }

    fn relabel(&self, perm: &[usize]) -> u64 {
        let mut bits = 0u64;
        for (u, v) in self.edges() {
            bits |= 1 << pair_bit(self.n, perm[u], perm[v]);
        }
        bits
    }

    /// Smallest bitmask over all relabelings.
    fn canonical(&self, perms: &[Vec<usize>]) -> u64 {
        perms.iter().map(|p| self.relabel(p)).min().unwrap()
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut p: Vec<usize> = (0..n).collect();
    heap_permute(n, &mut p, &mut out);
    out
}

fn heap_permute(k: usize, p: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if k <= 1 {
        out.push(p.clone());
        return;
    }
    for i in 0..k {
        heap_permute(k - 1, p, out);
        if k.is_multiple_of(2) {
            p.swap(i, k - 1);
        } else {
            p.swap(0, k - 1);
        }
    }
}

/// One representative of every isomorphism class of connected graphs on
/// `n` vertices, for `n ≤ 7`.
///
/// Every connected graph has a vertex whose removal leaves it connected,
/// so extending each class on `n - 1` vertices by a new vertex joined to a
/// nonempty subset reaches every class on `n`.
pub fn connected_graph_classes(n: usize) -> Vec<SmallGraph> {
    assert!((1..=7).contains(&n), "exhaustive enumeration is for n <= 7");
    let mut classes = vec![SmallGraph { n: 1, bits: 0 }];
    for size in 2..=n {
        let perms = permutations(size);
        let mut seen = HashSet::new();
        let mut next = Vec::new();
        for g in &classes {
            for subset in 1u64..(1 << (size - 1)) {
                let mut h = SmallGraph { n: size, bits: 0 };
                for (u, v) in g.edges() {
                    h.bits |= 1 << pair_bit(size, u, v);
                }
                for u in 0..size - 1 {
                    if subset >> u & 1 == 1 {
                        h.bits |= 1 << pair_bit(size, u, size - 1);
                    }
                }
                let c = h.canonical(&perms);
                if seen.insert(c) {
                    next.push(SmallGraph { n: size, bits: c });
                }
            }
        }
        classes = next;
    }
    classes
}

/// Every `(Σ, π)` with `1 ≤ |Σ| ≤ max_fibers` on `n` vertices, calling
/// `visit(spine, pi)`.
pub fn for_each_assignment(n: usize, max_fibers: usize, mut visit: impl FnMut(&[usize], &[usize])) {
    for mask in 1u32..(1 << n) {
        let k = mask.count_ones() as usize;
        if k > max_fibers {
            continue;
        }
        let spine: Vec<usize> = (0..n).filter(|&v| mask >> v & 1 == 1).collect();
        let others: Vec<usize> = (0..n).filter(|&v| mask >> v & 1 == 0).collect();
        let combos = k.pow(others.len() as u32);
        let mut pi: Vec<usize> = (0..n).collect();
        for code in 0..combos {
            let mut rest = code;
            for &v in &others {
                pi[v] = spine[rest % k];
                rest /= k;
            }
            visit(&spine, &pi);
        }
    }
}
