//! Descriptive statistics of a graph: degree spread, global clustering,
//! and diameter.
//!
//! The diameter is exact (all-pairs BFS) up to [`MAX_EXACT_DIAMETER_NODES`]
//! nodes; larger graphs get a double-sweep lower bound, flagged as such,
//! because `n` full BFS passes stop being a desk-scale computation.

use crate::graph::{Graph, NodeId};

/// Largest graph measured with exact all-pairs BFS by [`diameter`].
pub const MAX_EXACT_DIAMETER_NODES: usize = 2048;

/// A diameter measurement and whether it is exact.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Diameter {
    /// Longest shortest path found.
    pub value: u32,
    /// True for all-pairs BFS, false for the double-sweep lower bound.
    pub exact: bool,
}

/// Headline statistics of a graph.
#[derive(Debug, Clone, PartialEq)]
pub struct GraphSummary {
    /// Node count.
    pub n: usize,
    /// Edge count.
    pub m: usize,
    /// Smallest degree.
    pub min_degree: usize,
    /// Largest degree.
    pub max_degree: usize,
    /// `2m / n`.
    pub mean_degree: f64,
    /// Global clustering coefficient (transitivity).
    pub clustering: f64,
    /// Diameter measurement.
    pub diameter: Diameter,
}

/// Computes the headline statistics in one pass.
#[must_use]
pub fn summary(g: &Graph) -> GraphSummary {
    let degrees: Vec<usize> = (0..g.n() as NodeId).map(|v| g.degree(v)).collect();
    GraphSummary {
        n: g.n(),
        m: g.m(),
        min_degree: degrees.iter().copied().min().unwrap_or(0),
        max_degree: g.max_degree(),
        mean_degree: 2.0 * g.m() as f64 / g.n() as f64,
        clustering: clustering(g),
        diameter: diameter(g),
    }
}

/// Global clustering coefficient: three times the triangle count over
/// the number of connected node triples. Zero on triangle-free and
/// star-like graphs; zero by convention when no triple exists.
#[must_use]
pub fn clustering(g: &Graph) -> f64 {
    // each triangle contributes one common neighbor to each of its three
    // edges, so summing sorted-adjacency intersections over edges counts
    // 3 * triangles directly
    let mut closed: u64 = 0;
    for u in 0..g.n() as NodeId {
        for &v in g.neighbors(u) {
            if v > u {
                closed += sorted_intersection_size(g.neighbors(u), g.neighbors(v));
            }
        }
    }
    let triples: u64 = (0..g.n() as NodeId)
        .map(|v| {
            let d = g.degree(v) as u64;
            d * d.saturating_sub(1) / 2
        })
        .sum();
    if triples == 0 {
        return 0.0;
    }
    closed as f64 / triples as f64
}

fn sorted_intersection_size(a: &[NodeId], b: &[NodeId]) -> u64 {
    let (mut i, mut j, mut count) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                count += 1;
                i += 1;
                j += 1;
            }
        }
    }
    count
}

/// Diameter, exact when the graph is small enough for all-pairs BFS.
#[must_use]
pub fn diameter(g: &Graph) -> Diameter {
    if g.n() <= MAX_EXACT_DIAMETER_NODES {
        Diameter { value: diameter_exact(g), exact: true }
    } else {
        Diameter { value: diameter_lower_bound(g), exact: false }
    }
}

/// Exact diameter by BFS from every node.
#[must_use]
pub fn diameter_exact(g: &Graph) -> u32 {
    let mut dist = vec![0u32; g.n()];
    let mut queue = Vec::with_capacity(g.n());
    (0..g.n() as NodeId)
        .map(|source| bfs_eccentricity(g, source, &mut dist, &mut queue))
        .max()
        .unwrap_or(0)
}

/// Double-sweep lower bound: BFS to a farthest node, then BFS from it.
/// Exact on trees and usually tight in practice.
#[must_use]
pub fn diameter_lower_bound(g: &Graph) -> u32 {
    let mut dist = vec![0u32; g.n()];
    let mut queue = Vec::with_capacity(g.n());
    let mut best = 0;
    let mut source: NodeId = 0;
    // two sweeps reach a periphery; two more from the far end tighten it
    for _ in 0..4 {
        let ecc = bfs_eccentricity(g, source, &mut dist, &mut queue);
        if ecc <= best {
            break;
        }
        best = ecc;
        let farthest = (0..g.n()).max_by_key(|&v| dist[v]).unwrap_or(0);
        source = farthest as NodeId;
    }
    best
}

/// `(degree, node count)` pairs sorted by degree.
#[must_use]
pub fn degree_histogram(g: &Graph) -> Vec<(usize, usize)> {
    let mut counts = std::collections::BTreeMap::new();
    for v in 0..g.n() as NodeId {
        *counts.entry(g.degree(v)).or_insert(0usize) += 1;
    }
    counts.into_iter().collect()
}

/// BFS from `source`, filling `dist` and returning the eccentricity.
/// Scratch buffers are caller-owned so all-pairs sweeps do not allocate
/// per node.
fn bfs_eccentricity(g: &Graph, source: NodeId, dist: &mut [u32], queue: &mut Vec<NodeId>) -> u32 {
    dist.fill(u32::MAX);
    queue.clear();
    dist[source as usize] = 0;
    queue.push(source);
    let mut head = 0;
    let mut ecc = 0;
    while head < queue.len() {
        let u = queue[head];
        head += 1;
        let du = dist[u as usize];
        ecc = ecc.max(du);
        for &v in g.neighbors(u) {
            if dist[v as usize] == u32::MAX {
                dist[v as usize] = du + 1;
                queue.push(v);
            }
        }
    }
    ecc
}
