//! Undirected connected graphs in compressed sparse row form.
//!
//! [`Graph`] is immutable after construction and cheap to share across
//! threads. Neighbor lists are sorted, and every undirected edge carries a
//! stable edge id (its rank in the canonical `u < v` edge ordering) so
//! walks can track visited edges with a flat bitmap.
//!
//! Two construction paths with different strictness:
//!
//! * [`Graph::from_edges`] — for programmatic callers (generators, tests).
//!   Self-loops, parallel edges, and disconnection are errors.
//! * [`load_edge_list`] — for files from the wild. Comment lines, sparse
//!   ids, duplicates, and self-loops are tolerated; disconnected inputs are
//!   reduced to their largest connected component. Everything dropped is
//!   counted in the returned [`LoadReport`].

use std::collections::HashMap;
use std::io::{BufRead, Write};

use crate::error::{Error, Result};

/// Node identifier: dense index in `0..n`.
pub type NodeId = u32;

/// Immutable undirected connected graph.
#[derive(Debug, Clone)]
pub struct Graph {
    /// CSR offsets, length `n + 1`.
    offsets: Vec<usize>,
    /// Concatenated sorted neighbor lists, length `2m`.
    neighbors: Vec<NodeId>,
    /// Edge id of each adjacency slot, parallel to `neighbors`. The two
    /// directions of an undirected edge share one id in `0..m`.
    edge_ids: Vec<u32>,
    /// Undirected edge count.
    m: usize,
    /// Original external ids when the graph came from a remapped file.
    original_ids: Option<Vec<u64>>,
}

impl Graph {
    /// Builds a graph from a clean undirected edge list.
    ///
    /// Node ids must densely cover `0..n` where `n = max id + 1`. Edges may
    /// be listed in either orientation but each pair at most once.
    ///
    /// # Errors
    ///
    /// [`Error::EmptyGraph`] for an empty list, [`Error::SelfLoop`] /
    /// [`Error::ParallelEdge`] on dirty input, [`Error::Disconnected`] if
    /// any node is unreachable from node 0 (isolated ids included).
    pub fn from_edges(edges: impl IntoIterator<Item = (NodeId, NodeId)>) -> Result<Self> {
        let mut canon: Vec<(NodeId, NodeId)> = Vec::new();
        let mut max_id: NodeId = 0;
        for (u, v) in edges {
            if u == v {
                return Err(Error::SelfLoop { node: u });
            }
            let (a, b) = if u < v { (u, v) } else { (v, u) };
            max_id = max_id.max(b);
            canon.push((a, b));
        }
        if canon.is_empty() {
            return Err(Error::EmptyGraph);
        }
        canon.sort_unstable();
        if let Some(w) = canon.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::ParallelEdge { u: w[0].0, v: w[0].1 });
        }
        let graph = Self::assemble(max_id as usize + 1, &canon, None);
        let reachable = graph.reachable_from_zero();
        if reachable != graph.n() {
            return Err(Error::Disconnected { reachable, n: graph.n() });
        }
        Ok(graph)
    }

    /// CSR assembly from deduplicated canonical (`u < v`, sorted) edges.
    fn assemble(n: usize, canon: &[(NodeId, NodeId)], original_ids: Option<Vec<u64>>) -> Self {
        let m = canon.len();
        let mut degree = vec![0usize; n];
        for &(u, v) in canon {
            degree[u as usize] += 1;
            degree[v as usize] += 1;
        }
        let mut offsets = Vec::with_capacity(n + 1);
        let mut acc = 0usize;
        offsets.push(0);
        for d in &degree {
            acc += d;
            offsets.push(acc);
        }
        let mut cursor: Vec<usize> = offsets[..n].to_vec();
        let mut neighbors = vec![0 as NodeId; 2 * m];
        let mut edge_ids = vec![0u32; 2 * m];
        for (id, &(u, v)) in canon.iter().enumerate() {
            neighbors[cursor[u as usize]] = v;
            edge_ids[cursor[u as usize]] = id as u32;
            cursor[u as usize] += 1;
            neighbors[cursor[v as usize]] = u;
            edge_ids[cursor[v as usize]] = id as u32;
            cursor[v as usize] += 1;
        }
        // Canonical edge order is sorted by (u, v), which fills each
        // u-block in ascending v but interleaves the v-blocks; sort each
        // adjacency slice (pairing neighbor with edge id) to restore order.
        let mut graph = Graph { offsets, neighbors, edge_ids, m, original_ids };
        for v in 0..n {
            let lo = graph.offsets[v];
            let hi = graph.offsets[v + 1];
            let mut paired: Vec<(NodeId, u32)> = graph.neighbors[lo..hi]
                .iter()
                .copied()
                .zip(graph.edge_ids[lo..hi].iter().copied())
                .collect();
            paired.sort_unstable();
            for (slot, (nb, id)) in paired.into_iter().enumerate() {
                graph.neighbors[lo + slot] = nb;
                graph.edge_ids[lo + slot] = id;
            }
        }
        graph
    }

    /// Node count.
    #[must_use]
    pub fn n(&self) -> usize {
        self.offsets.len() - 1
    }

    /// Undirected edge count.
    #[must_use]
    pub fn m(&self) -> usize {
        self.m
    }

    /// Degree of `v`.
    #[inline]
    #[must_use]
    pub fn degree(&self, v: NodeId) -> usize {
        self.offsets[v as usize + 1] - self.offsets[v as usize]
    }

    /// Sorted neighbors of `v`.
    #[inline]
    #[must_use]
    pub fn neighbors(&self, v: NodeId) -> &[NodeId] {
        &self.neighbors[self.offsets[v as usize]..self.offsets[v as usize + 1]]
    }

    /// Edge ids parallel to [`Self::neighbors`].
    #[inline]
    #[must_use]
    pub fn edge_ids(&self, v: NodeId) -> &[u32] {
        &self.edge_ids[self.offsets[v as usize]..self.offsets[v as usize + 1]]
    }

    /// Edge id of the edge `v`–`w`, if present.
    #[must_use]
    pub fn edge_between(&self, v: NodeId, w: NodeId) -> Option<u32> {
        let slice = self.neighbors(v);
        let pos = slice.binary_search(&w).ok()?;
        Some(self.edge_ids(v)[pos])
    }

    /// Largest degree in the graph.
    #[must_use]
    pub fn max_degree(&self) -> usize {
        (0..self.n() as NodeId).map(|v| self.degree(v)).max().unwrap_or(0)
    }

    /// Original external id of `v` when loaded from a remapped file.
    #[must_use]
    pub fn original_id(&self, v: NodeId) -> Option<u64> {
        self.original_ids.as_ref().map(|ids| ids[v as usize])
    }

    /// Number of nodes reachable from node 0 by BFS.
    fn reachable_from_zero(&self) -> usize {
        let n = self.n();
        let mut seen = vec![false; n];
        let mut queue = std::collections::VecDeque::new();
        seen[0] = true;
        queue.push_back(0 as NodeId);
        let mut count = 1usize;
        while let Some(v) = queue.pop_front() {
            for &w in self.neighbors(v) {
                if !seen[w as usize] {
                    seen[w as usize] = true;
                    count += 1;
                    queue.push_back(w);
                }
            }
        }
        count
    }

    /// Re-checks every structural invariant.
    ///
    /// Intended for tests and for auditing graphs after deserialization:
    /// sorted adjacency, symmetry, no loops or parallels, consistent edge
    /// ids, degree sum `2m`, and connectivity.
    pub fn validate(&self) -> Result<()> {
        let n = self.n();
        if n == 0 {
            return Err(Error::EmptyGraph);
        }
        let mut slots = 0usize;
        for v in 0..n as NodeId {
            let nbs = self.neighbors(v);
            let ids = self.edge_ids(v);
            slots += nbs.len();
            for (k, &w) in nbs.iter().enumerate() {
                if w == v {
                    return Err(Error::SelfLoop { node: v });
                }
                if k > 0 && nbs[k - 1] >= w {
                    return Err(Error::ParallelEdge { u: v.min(w), v: v.max(w) });
                }
                // symmetry with matching edge id
                match self.edge_between(w, v) {
                    Some(id) if id == ids[k] => {}
                    _ => {
                        return Err(Error::ParallelEdge { u: v.min(w), v: v.max(w) });
                    }
                }
            }
        }
        if slots != 2 * self.m {
            return Err(Error::InvalidParameter {
                name: "degree sum",
                value: slots.to_string(),
                expected: "exactly 2m adjacency slots",
            });
        }
        let reachable = self.reachable_from_zero();
        if reachable != n {
            return Err(Error::Disconnected { reachable, n });
        }
        Ok(())
    }

    /// Writes the canonical edge list: one `u v` line per edge, `u < v`,
    /// sorted, over dense internal ids. [`load_edge_list`] reads this back
    /// into an identical graph.
    pub fn save_edge_list<W: Write>(&self, out: &mut W) -> std::io::Result<()> {
        let mut edges = Vec::with_capacity(self.m);
        for v in 0..self.n() as NodeId {
            for &w in self.neighbors(v) {
                if v < w {
                    edges.push((v, w));
                }
            }
        }
        edges.sort_unstable();
        for (u, v) in edges {
            writeln!(out, "{u} {v}")?;
        }
        Ok(())
    }
}

/// What [`load_edge_list`] had to discard to produce a clean connected
/// graph.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct LoadReport {
    /// Self-loop lines dropped.
    pub self_loops: usize,
    /// Repeated edges dropped (beyond the first occurrence).
    pub duplicate_edges: usize,
    /// Nodes outside the largest connected component.
    pub dropped_nodes: usize,
    /// Edges outside the largest connected component.
    pub dropped_edges: usize,
}

impl LoadReport {
    /// True when the input was already simple and connected.
    #[must_use]
    pub fn clean(&self) -> bool {
        *self == LoadReport::default()
    }
}

/// Reads a whitespace-separated edge list.
///
/// Accepts `#`-prefixed comment lines and blank lines. Node ids are
/// arbitrary non-negative integers; they are remapped to `0..n` in
/// ascending order of the original id. Self-loops and duplicate edges are
/// dropped. If the remaining graph is disconnected, only the largest
/// connected component survives (ties broken toward the component with the
/// smallest original id). All removals are tallied in the report.
///
/// # Errors
///
/// [`Error::Parse`] (with line number) on malformed lines;
/// [`Error::EmptyGraph`] when nothing usable remains.
pub fn load_edge_list<R: BufRead>(input: R) -> Result<(Graph, LoadReport)> {
    let mut report = LoadReport::default();
    let mut raw: Vec<(u64, u64)> = Vec::new();
    for (idx, line) in input.lines().enumerate() {
        let line = line?;
        let text = line.trim();
        if text.is_empty() || text.starts_with('#') {
            continue;
        }
        let mut fields = text.split_whitespace();
        let (a, b) = match (fields.next(), fields.next()) {
            (Some(a), Some(b)) => (a, b),
            _ => {
                return Err(Error::Parse {
                    line: idx + 1,
                    message: format!("expected two node ids, got {text:?}"),
                })
            }
        };
        if fields.next().is_some() {
            return Err(Error::Parse {
                line: idx + 1,
                message: format!("expected two node ids, got {text:?}"),
            });
        }
        let parse = |s: &str| -> Result<u64> {
            s.parse::<u64>().map_err(|_| Error::Parse {
                line: idx + 1,
                message: format!("invalid node id {s:?}"),
            })
        };
        let (u, v) = (parse(a)?, parse(b)?);
        if u == v {
            report.self_loops += 1;
            continue;
        }
        raw.push(if u < v { (u, v) } else { (v, u) });
    }
    if raw.is_empty() {
        return Err(Error::EmptyGraph);
    }

    raw.sort_unstable();
    let before = raw.len();
    raw.dedup();
    report.duplicate_edges = before - raw.len();

    // Dense remap in ascending original-id order.
    let mut ids: Vec<u64> = raw.iter().flat_map(|&(u, v)| [u, v]).collect();
    ids.sort_unstable();
    ids.dedup();
    let index: HashMap<u64, NodeId> =
        ids.iter().enumerate().map(|(i, &id)| (id, i as NodeId)).collect();
    let n = ids.len();
    let edges: Vec<(NodeId, NodeId)> =
        raw.iter().map(|&(u, v)| (index[&u], index[&v])).collect();

    // Largest connected component via union-find.
    let mut parent: Vec<u32> = (0..n as u32).collect();
    fn find(parent: &mut [u32], x: u32) -> u32 {
        let mut root = x;
        while parent[root as usize] != root {
            root = parent[root as usize];
        }
        let mut cur = x;
        while parent[cur as usize] != root {
            let next = parent[cur as usize];
            parent[cur as usize] = root;
            cur = next;
        }
        root
    }
    for &(u, v) in &edges {
        let (ru, rv) = (find(&mut parent, u), find(&mut parent, v));
        if ru != rv {
            parent[ru.max(rv) as usize] = ru.min(rv);
        }
    }
    let mut component_size = vec![0usize; n];
    for v in 0..n as u32 {
        component_size[find(&mut parent, v) as usize] += 1;
    }
    let giant_root = (0..n as u32)
        .filter(|&v| parent[v as usize] == v)
        .max_by_key(|&v| (component_size[v as usize], std::cmp::Reverse(v)))
        .expect("at least one component");

    let keep: Vec<bool> =
        (0..n as u32).map(|v| find(&mut parent, v) == giant_root).collect();
    let kept_nodes = keep.iter().filter(|&&k| k).count();
    report.dropped_nodes = n - kept_nodes;

    // Second remap restricted to the kept component, preserving id order.
    let mut dense = vec![NodeId::MAX; n];
    let mut kept_original = Vec::with_capacity(kept_nodes);
    let mut next: NodeId = 0;
    for v in 0..n {
        if keep[v] {
            dense[v] = next;
            kept_original.push(ids[v]);
            next += 1;
        }
    }
    let mut canon: Vec<(NodeId, NodeId)> = Vec::with_capacity(edges.len());
    for &(u, v) in &edges {
        if keep[u as usize] && keep[v as usize] {
            canon.push((dense[u as usize], dense[v as usize]));
        }
    }
    report.dropped_edges = edges.len() - canon.len();
    canon.sort_unstable();

    let original_ids =
        if kept_original.iter().enumerate().all(|(i, &id)| id == i as u64) {
            None
        } else {
            Some(kept_original)
        };
    Ok((Graph::assemble(kept_nodes, &canon, original_ids), report))
}
