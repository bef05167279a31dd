//! Walk execution: the mutable cursor of one walk and the per-strategy
//! step samplers.
//!
//! The `*_step` functions are pure samplers: they read a [`WalkState`] and
//! some randomness and return the next node, touching no state. [`step`]
//! dispatches on a [`StrategySpec`], applies the move, and maintains all
//! bookkeeping: step counter, visited nodes and edges, per-node visit
//! counts, and the degree-query tally used for inspection-cost reporting.
//!
//! Counting convention: the start node costs zero steps (`steps` counts
//! moves), and the start is visited once at initialization.

use rand::Rng;

use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId};
use crate::stopping::secretary_walk_step;
use crate::strategy::StrategySpec;

/// Mutable cursor of one walk over a shared immutable graph.
#[derive(Debug, Clone)]
pub struct WalkState {
    current: NodeId,
    visited: Vec<bool>,
    visited_count: usize,
    /// Indexed by edge id; only the edge-process strategy reads it, but
    /// every applied move marks its edge so the record is always complete.
    visited_edges: Vec<bool>,
    visit_counts: Vec<u64>,
    steps: u64,
    degree_queries: u64,
}

impl WalkState {
    /// Fresh walk at `start`: one visited node, zero steps.
    pub fn new(g: &Graph, start: NodeId) -> Result<Self> {
        if (start as usize) >= g.n() {
            return Err(Error::NodeOutOfRange { node: start, n: g.n() });
        }
        let mut visited = vec![false; g.n()];
        visited[start as usize] = true;
        let mut visit_counts = vec![0u64; g.n()];
        visit_counts[start as usize] = 1;
        Ok(Self {
            current: start,
            visited,
            visited_count: 1,
            visited_edges: vec![false; g.m()],
            visit_counts,
            steps: 0,
            degree_queries: 0,
        })
    }

    /// Node the walker stands on.
    #[inline]
    #[must_use]
    pub fn current(&self) -> NodeId {
        self.current
    }

    /// Moves taken so far.
    #[inline]
    #[must_use]
    pub fn steps(&self) -> u64 {
        self.steps
    }

    /// Number of distinct visited nodes (the start counts).
    #[inline]
    #[must_use]
    pub fn visited_count(&self) -> usize {
        self.visited_count
    }

    /// Whether `v` has been visited.
    #[inline]
    #[must_use]
    pub fn is_visited(&self, v: NodeId) -> bool {
        self.visited[v as usize]
    }

    /// Whether the undirected edge with this id has been traversed.
    #[inline]
    #[must_use]
    pub fn is_edge_visited(&self, edge_id: u32) -> bool {
        self.visited_edges[edge_id as usize]
    }

    /// Times `v` has been arrived at (plus one for the start node).
    #[inline]
    #[must_use]
    pub fn visit_count(&self, v: NodeId) -> u64 {
        self.visit_counts[v as usize]
    }

    /// Degree inspections spent so far (see [`step`] for the per-strategy
    /// tally).
    #[inline]
    #[must_use]
    pub fn degree_queries(&self) -> u64 {
        self.degree_queries
    }

    /// Marks `v` visited without moving the walker. Scenario setup for
    /// tests and probes; does not touch steps or visit counts beyond the
    /// minimum required by the `visit_counts[v] ≥ 1 ⇔ visited` invariant.
    pub fn force_visit(&mut self, v: NodeId) {
        if !self.visited[v as usize] {
            self.visited[v as usize] = true;
            self.visited_count += 1;
            self.visit_counts[v as usize] = 1;
        }
    }

    /// Marks an edge traversed without moving the walker (scenario setup).
    pub fn force_visit_edge(&mut self, edge_id: u32) {
        self.visited_edges[edge_id as usize] = true;
    }

    /// Applies a move to `next`, updating every counter.
    fn apply_move(&mut self, g: &Graph, next: NodeId, queries: u64) {
        if let Some(id) = g.edge_between(self.current, next) {
            self.visited_edges[id as usize] = true;
        }
        if !self.visited[next as usize] {
            self.visited[next as usize] = true;
            self.visited_count += 1;
        }
        self.visit_counts[next as usize] += 1;
        self.steps += 1;
        self.degree_queries += queries;
        self.current = next;
    }
}

// ---------------------------------------------------------------------------
// Pure per-strategy samplers
// ---------------------------------------------------------------------------

/// Uniform neighbor of the current node.
#[inline]
pub fn srw_step(g: &Graph, s: &WalkState, rng: &mut impl Rng) -> NodeId {
    let nbs = g.neighbors(s.current());
    nbs[rng.random_range(0..nbs.len())]
}

/// Far endpoint of a uniformly chosen unvisited incident edge; uniform
/// neighbor when every incident edge has been traversed.
pub fn ep_step(g: &Graph, s: &WalkState, rng: &mut impl Rng) -> NodeId {
    let cur = s.current();
    let ids = g.edge_ids(cur);
    let unvisited = ids.iter().filter(|&&id| !s.is_edge_visited(id)).count();
    if unvisited == 0 {
        return srw_step(g, s, rng);
    }
    let pick = rng.random_range(0..unvisited);
    let slot = ids
        .iter()
        .enumerate()
        .filter(|(_, &id)| !s.is_edge_visited(id))
        .nth(pick)
        .map(|(slot, _)| slot)
        .expect("pick < unvisited count");
    g.neighbors(cur)[slot]
}

/// Neighbor sampled with probability proportional to `1/sqrt(d_j)`.
pub fn ad_step(g: &Graph, s: &WalkState, rng: &mut impl Rng) -> NodeId {
    weighted_neighbor(g, s.current(), rng, |_, dj| 1.0 / (dj as f64).sqrt())
}

/// Neighbor sampled with probability proportional to `1/min(d_i, d_j)`.
pub fn mdw_step(g: &Graph, s: &WalkState, rng: &mut impl Rng) -> NodeId {
    weighted_neighbor(g, s.current(), rng, |di, dj| 1.0 / di.min(dj) as f64)
}

/// Draws `choices` neighbors uniformly with replacement and returns the
/// draw minimizing `(visits + 1)/degree`; ties break uniformly among the
/// minimizing draws (a twice-drawn node counts twice).
pub fn rwc_step(g: &Graph, s: &WalkState, choices: u32, rng: &mut impl Rng) -> NodeId {
    debug_assert!(choices >= 1);
    let nbs = g.neighbors(s.current());
    let mut best: Option<NodeId> = None;
    // score (c+1)/d compared exactly by cross-multiplication
    let (mut best_c1, mut best_d) = (0u128, 0u128);
    let mut ties = 0u64;
    for _ in 0..choices {
        let j = nbs[rng.random_range(0..nbs.len())];
        let c1 = s.visit_count(j) as u128 + 1;
        let d = g.degree(j) as u128;
        let ordering = match best {
            None => std::cmp::Ordering::Less,
            Some(_) => (c1 * best_d).cmp(&(best_c1 * d)),
        };
        match ordering {
            std::cmp::Ordering::Less => {
                best = Some(j);
                best_c1 = c1;
                best_d = d;
                ties = 1;
            }
            std::cmp::Ordering::Equal => {
                ties += 1;
                if rng.random_range(0..ties) == 0 {
                    best = Some(j);
                }
            }
            std::cmp::Ordering::Greater => {}
        }
    }
    best.expect("at least one draw")
}

/// Budgeted minimum-degree choice among unvisited neighbors; uniform
/// neighbor when all are visited. See [`md_decide`] for the decision
/// telemetry the budget probes consume.
pub fn md_step(g: &Graph, s: &WalkState, budget: u32, rng: &mut impl Rng) -> NodeId {
    md_decide(g, s, budget, rng).next
}

/// Decision record of one budgeted minimum-degree step.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MdDecision {
    /// The chosen next node.
    pub next: NodeId,
    /// Telemetry when unvisited neighbors existed (a "decision point").
    pub point: Option<MdDecisionPoint>,
}

/// Telemetry of one decision point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MdDecisionPoint {
    /// Number of unvisited neighbors `|L|`.
    pub l_size: u32,
    /// How many of them share the minimum degree.
    pub multiplicity: u32,
    /// Whether the inspected sample attained the true minimum degree of
    /// `L` (always true when `|L| ≤ B`: the whole of `L` is inspected).
    pub sampled_hit: bool,
}

/// One budgeted minimum-degree decision with telemetry.
///
/// Rule: let `L` be the unvisited neighbors of the current node. When `L`
/// is empty, fall back to a uniform neighbor. When `|L| ≤ B`, move to the
/// minimum-degree node of `L`. Otherwise sample `B` nodes from `L`
/// uniformly without replacement and move to the minimum-degree sampled
/// node. Degree ties break uniformly at random.
pub fn md_decide(g: &Graph, s: &WalkState, budget: u32, rng: &mut impl Rng) -> MdDecision {
    debug_assert!(budget >= 1);
    let unvisited: Vec<NodeId> = g
        .neighbors(s.current())
        .iter()
        .copied()
        .filter(|&v| !s.is_visited(v))
        .collect();
    if unvisited.is_empty() {
        return MdDecision { next: srw_step(g, s, rng), point: None };
    }
    let true_min = unvisited.iter().map(|&v| g.degree(v)).min().expect("nonempty");
    let multiplicity =
        unvisited.iter().filter(|&&v| g.degree(v) == true_min).count() as u32;
    let l_size = unvisited.len() as u32;

    let (next, sampled_min) = if l_size <= budget {
        (min_degree_uniform(g, &unvisited, rng), true_min)
    } else {
        let sample = rand::seq::index::sample(rng, unvisited.len(), budget as usize);
        let mut best: Option<NodeId> = None;
        let mut best_degree = usize::MAX;
        let mut ties = 0u64;
        for idx in sample {
            let v = unvisited[idx];
            let d = g.degree(v);
            match d.cmp(&best_degree) {
                std::cmp::Ordering::Less => {
                    best = Some(v);
                    best_degree = d;
                    ties = 1;
                }
                std::cmp::Ordering::Equal => {
                    ties += 1;
                    if rng.random_range(0..ties) == 0 {
                        best = Some(v);
                    }
                }
                std::cmp::Ordering::Greater => {}
            }
        }
        (best.expect("budget >= 1"), best_degree)
    };
    MdDecision {
        next,
        point: Some(MdDecisionPoint {
            l_size,
            multiplicity,
            sampled_hit: sampled_min == true_min,
        }),
    }
}

/// Applies one budgeted minimum-degree step, charging its degree
/// queries, and returns the decision record for budget analysis.
pub fn md_step_instrumented(
    g: &Graph,
    s: &mut WalkState,
    budget: u32,
    rng: &mut impl Rng,
) -> MdDecision {
    let decision = md_decide(g, s, budget, rng);
    let queries = decision.point.map_or(0, |p| u64::from(p.l_size.min(budget)));
    s.apply_move(g, decision.next, queries);
    decision
}

/// Minimum-degree node of a nonempty slice, ties uniform.
fn min_degree_uniform(g: &Graph, pool: &[NodeId], rng: &mut impl Rng) -> NodeId {
    let mut best = pool[0];
    let mut best_degree = g.degree(best);
    let mut ties = 1u64;
    for &v in &pool[1..] {
        let d = g.degree(v);
        match d.cmp(&best_degree) {
            std::cmp::Ordering::Less => {
                best = v;
                best_degree = d;
                ties = 1;
            }
            std::cmp::Ordering::Equal => {
                ties += 1;
                if rng.random_range(0..ties) == 0 {
                    best = v;
                }
            }
            std::cmp::Ordering::Greater => {}
        }
    }
    best
}

/// Two-pass weighted neighbor draw without allocation; `weight(d_i, d_j)`
/// must be strictly positive.
fn weighted_neighbor(
    g: &Graph,
    i: NodeId,
    rng: &mut impl Rng,
    weight: impl Fn(usize, usize) -> f64,
) -> NodeId {
    let nbs = g.neighbors(i);
    let di = g.degree(i);
    let total: f64 = nbs.iter().map(|&j| weight(di, g.degree(j))).sum();
    let threshold = rng.random::<f64>() * total;
    let mut acc = 0.0;
    for &j in nbs {
        acc += weight(di, g.degree(j));
        if acc > threshold {
            return j;
        }
    }
    nbs[nbs.len() - 1]
}

// ---------------------------------------------------------------------------
// Dispatch
// ---------------------------------------------------------------------------

/// Chooses the next node per `spec`, applies the move, and returns it.
///
/// Bookkeeping per move: `steps += 1`, the next node joins the visited
/// set, its visit count increments, and the traversed edge is marked.
/// Degree queries are charged per strategy: none for SRW/EP (no degrees
/// read), `d_i` for AD/MDW (whole row), `d` draws for RWC, `min(B, |L|)`
/// inspections for MD, and the actual inspection count for the secretary
/// walk.
pub fn step(g: &Graph, s: &mut WalkState, spec: &StrategySpec, rng: &mut impl Rng) -> NodeId {
    let (next, queries) = match spec {
        StrategySpec::Srw => (srw_step(g, s, rng), 0),
        StrategySpec::Ep => (ep_step(g, s, rng), 0),
        StrategySpec::Ad => (ad_step(g, s, rng), g.degree(s.current()) as u64),
        StrategySpec::Mdw => (mdw_step(g, s, rng), g.degree(s.current()) as u64),
        StrategySpec::Rwc { choices } => {
            (rwc_step(g, s, *choices, rng), u64::from(*choices))
        }
        StrategySpec::Md { budget } => {
            return md_step_instrumented(g, s, *budget, rng).next;
        }
        StrategySpec::Secretary { weight } => {
            let sel = secretary_walk_step(g, s, weight, rng);
            (sel.node, u64::from(sel.inspections))
        }
    };
    s.apply_move(g, next, queries);
    next
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::{complete, path, star};
    use crate::graph::Graph;
    use crate::rng::rng_from;

    // ---- bookkeeping ----

    #[test]
    fn fresh_state_counts_the_start() {
        let g = star(5).unwrap();
        let s = WalkState::new(&g, 0).unwrap();
        assert_eq!(s.current(), 0);
        assert_eq!(s.steps(), 0);
        assert_eq!(s.visited_count(), 1);
        assert_eq!(s.visit_count(0), 1);
        assert!(s.is_visited(0));
        assert!(!s.is_visited(1));
        assert!(WalkState::new(&g, 9).is_err());
    }

    #[test]
    fn steps_count_every_move() {
        let g = complete(4).unwrap();
        let mut s = WalkState::new(&g, 0).unwrap();
        let mut rng = rng_from(3);
        for expected in 1..=64u64 {
            step(&g, &mut s, &StrategySpec::Srw, &mut rng);
            assert_eq!(s.steps(), expected);
        }
        let total: u64 = (0..4u32).map(|v| s.visit_count(v)).sum();
        assert_eq!(total, 65); // start + one arrival per step
    }

    #[test]
    fn degree_one_node_forces_its_neighbor() {
        let g = star(5).unwrap();
        for spec in [
            StrategySpec::Srw,
            StrategySpec::Ep,
            StrategySpec::Ad,
            StrategySpec::Mdw,
            StrategySpec::rwc(3).unwrap(),
            StrategySpec::md(5).unwrap(),
        ] {
            let mut s = WalkState::new(&g, 2).unwrap();
            let mut rng = rng_from(11);
            let next = step(&g, &mut s, &spec, &mut rng);
            assert_eq!(next, 0, "{spec}");
            assert_eq!(s.current(), 0);
            assert_eq!(s.steps(), 1);
        }
    }

    #[test]
    fn md_walks_a_path_deterministically() {
        let g = path(3).unwrap();
        let spec = StrategySpec::md(5).unwrap();
        let mut s = WalkState::new(&g, 0).unwrap();
        let mut rng = rng_from(5);
        assert_eq!(step(&g, &mut s, &spec, &mut rng), 1);
        assert_eq!(step(&g, &mut s, &spec, &mut rng), 2);
        assert_eq!(s.visited_count(), 3);
        assert_eq!(s.steps(), 2);
    }

    #[test]
    fn identical_seeds_reproduce_trajectories() {
        let g = crate::generate::barabasi_albert(200, 2, 5).unwrap();
        for spec in [
            StrategySpec::Srw,
            StrategySpec::Ep,
            StrategySpec::Ad,
            StrategySpec::Mdw,
            StrategySpec::rwc(3).unwrap(),
            StrategySpec::md(5).unwrap(),
        ] {
            let mut a = WalkState::new(&g, 0).unwrap();
            let mut b = WalkState::new(&g, 0).unwrap();
            let mut rng_a = rng_from(77);
            let mut rng_b = rng_from(77);
            for _ in 0..500 {
                assert_eq!(
                    step(&g, &mut a, &spec, &mut rng_a),
                    step(&g, &mut b, &spec, &mut rng_b),
                    "{spec}"
                );
            }
        }
    }

    #[test]
    fn every_strategy_stays_on_edges() {
        let g = crate::generate::lollipop(4, 3).unwrap();
        for spec in [
            StrategySpec::Srw,
            StrategySpec::Ep,
            StrategySpec::Ad,
            StrategySpec::Mdw,
            StrategySpec::rwc(2).unwrap(),
            StrategySpec::md(2).unwrap(),
        ] {
            let mut s = WalkState::new(&g, 0).unwrap();
            let mut rng = rng_from(13);
            for _ in 0..200 {
                let from = s.current();
                let next = step(&g, &mut s, &spec, &mut rng);
                assert!(
                    g.neighbors(from).contains(&next),
                    "{spec} left the edge set"
                );
            }
        }
    }

    // ---- edge process ----

    #[test]
    fn ep_forced_onto_the_unique_unvisited_edge() {
        // triangle: after 0-1 and 1-2 are traversed, node 2 must take 2-0
        let g = Graph::from_edges([(0, 1), (1, 2), (2, 0)]).unwrap();
        let mut s = WalkState::new(&g, 2).unwrap();
        s.force_visit(0);
        s.force_visit(1);
        s.force_visit_edge(g.edge_between(0, 1).unwrap());
        s.force_visit_edge(g.edge_between(1, 2).unwrap());
        let mut rng = rng_from(1);
        for _ in 0..10 {
            assert_eq!(ep_step(&g, &s, &mut rng), 0);
        }
    }

    #[test]
    fn ep_falls_back_to_uniform_when_saturated() {
        let g = Graph::from_edges([(0, 1), (1, 2), (2, 0)]).unwrap();
        let mut s = WalkState::new(&g, 0).unwrap();
        for id in 0..3 {
            s.force_visit_edge(id);
        }
        let mut rng = rng_from(9);
        let mut seen = [false; 3];
        for _ in 0..64 {
            seen[ep_step(&g, &s, &mut rng) as usize] = true;
        }
        assert!(seen[1] && seen[2], "both neighbors reachable on fallback");
    }

    // ---- rwc ----

    #[test]
    fn rwc_degenerate_draw_returns_the_node() {
        // degree-1 current node: every draw is the same neighbor
        let g = path(3).unwrap();
        let s = WalkState::new(&g, 0).unwrap();
        let mut rng = rng_from(2);
        assert_eq!(rwc_step(&g, &s, 5, &mut rng), 1);
    }

    #[test]
    fn rwc_prefers_low_score_draws() {
        // star center: leaves all degree 1; fresh counts; first visit wins.
        // Build a two-leaf graph with distinct degrees instead: neighbors
        // of 0 are 1 (degree 2) and 2 (degree 5); zero counts give scores
        // 1/2 vs 1/5, so whenever both are drawn, node 2 wins.
        let mut edges = vec![(0u32, 1), (0, 2), (1, 3)];
        edges.extend([(2, 3), (2, 4), (2, 5), (2, 6)]);
        let g = Graph::from_edges(edges).unwrap();
        assert_eq!(g.degree(1), 2);
        assert_eq!(g.degree(2), 5);
        let s = WalkState::new(&g, 0).unwrap();
        let mut rng = rng_from(3);
        // with many draws the minimum is found with near certainty
        let mut chose_low = 0;
        for _ in 0..200 {
            if rwc_step(&g, &s, 8, &mut rng) == 2 {
                chose_low += 1;
            }
        }
        assert!(chose_low > 190, "low-score node chosen {chose_low}/200");
    }

    // ---- md ----

    #[test]
    fn md_exhaustive_inspection_takes_unique_minimum() {
        // neighbors of 0: degrees 1 (node 1) and 3 (node 2): B >= |L|
        let g = Graph::from_edges([(0, 1), (0, 2), (2, 3), (2, 4)]).unwrap();
        let s = WalkState::new(&g, 0).unwrap();
        let mut rng = rng_from(4);
        for _ in 0..50 {
            assert_eq!(md_step(&g, &s, 2, &mut rng), 1);
        }
    }

    #[test]
    fn md_two_sample_from_three_always_contains_a_minimum_pair_member() {
        // degrees {2, 2, 7}: every 2-subset contains a degree-2 node
        let mut edges = vec![(0u32, 1), (0, 2), (0, 3)];
        edges.extend([(1, 4), (2, 4)]);
        edges.extend([(3, 4), (3, 5), (3, 6), (3, 7), (3, 8), (3, 9)]);
        let g = Graph::from_edges(edges).unwrap();
        assert_eq!(g.degree(1), 2);
        assert_eq!(g.degree(2), 2);
        assert_eq!(g.degree(3), 7);
        let s = WalkState::new(&g, 0).unwrap();
        let mut rng = rng_from(6);
        for _ in 0..100 {
            let decision = md_decide(&g, &s, 2, &mut rng);
            assert!(decision.next == 1 || decision.next == 2);
            let point = decision.point.unwrap();
            assert_eq!(point.l_size, 3);
            assert_eq!(point.multiplicity, 2);
            assert!(point.sampled_hit);
        }
    }

    #[test]
    fn md_falls_back_to_uniform_when_all_visited() {
        let g = complete(4).unwrap();
        let mut s = WalkState::new(&g, 0).unwrap();
        for v in 1..4 {
            s.force_visit(v);
        }
        let mut rng = rng_from(7);
        let decision = md_decide(&g, &s, 3, &mut rng);
        assert!(decision.point.is_none());
        let mut seen = [false; 4];
        for _ in 0..64 {
            seen[md_step(&g, &s, 3, &mut rng) as usize] = true;
        }
        assert!(seen[1] && seen[2] && seen[3]);
    }

    // ---- query accounting ----

    #[test]
    fn degree_queries_follow_the_strategy() {
        let g = complete(4).unwrap();
        let mut rng = rng_from(8);

        let mut s = WalkState::new(&g, 0).unwrap();
        step(&g, &mut s, &StrategySpec::Srw, &mut rng);
        assert_eq!(s.degree_queries(), 0);

        let mut s = WalkState::new(&g, 0).unwrap();
        step(&g, &mut s, &StrategySpec::Ad, &mut rng);
        assert_eq!(s.degree_queries(), 3);

        let mut s = WalkState::new(&g, 0).unwrap();
        step(&g, &mut s, &StrategySpec::rwc(5).unwrap(), &mut rng);
        assert_eq!(s.degree_queries(), 5);

        // MD with B=2 on 3 unvisited neighbors inspects 2; after full
        // cover the fallback inspects none
        let mut s = WalkState::new(&g, 0).unwrap();
        step(&g, &mut s, &StrategySpec::md(2).unwrap(), &mut rng);
        assert_eq!(s.degree_queries(), 2);
        let mut s = WalkState::new(&g, 0).unwrap();
        for v in 1..4 {
            s.force_visit(v);
        }
        step(&g, &mut s, &StrategySpec::md(2).unwrap(), &mut rng);
        assert_eq!(s.degree_queries(), 0);
    }
}
