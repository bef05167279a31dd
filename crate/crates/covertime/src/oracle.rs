//! Exact expectations for memoryless walks on small graphs.
//!
//! Two oracles back the Monte-Carlo machinery:
//!
//! - [`hitting_time`]: expected steps from a source to a target node,
//!   from the linear system `(I - Q) h = 1` over the non-target states.
//! - [`oracle_pct`]: expected steps to visit a coverage target of
//!   distinct nodes, from the expanded chain on (current node, visited
//!   set) pairs. State count grows as `n * 2^n`, so this is capped at
//!   [`MAX_PCT_NODES`] nodes; it exists to pin down ground truth that
//!   estimator tests freeze against.
//!
//! Both apply only to strategies with a node-level transition matrix
//! (see [`StrategySpec::is_memoryless`]) and reject the rest with
//! [`Error::HistoryDependent`].

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::estimator::coverage_target;
use crate::graph::{Graph, NodeId};
use crate::strategy::{transition_row, StrategySpec};

/// Largest graph accepted by [`oracle_pct`]: the expanded chain has
/// `n * 2^n` states, and per-subset solves stay cheap only this far.
pub const MAX_PCT_NODES: usize = 12;

/// Largest graph accepted by [`hitting_time`]: one dense LU solve of an
/// `(n-1) x (n-1)` system.
pub const MAX_HITTING_NODES: usize = 2000;

/// Expected steps for `spec` to first reach `target` from `source`.
///
/// Solves `(I - Q) h = 1` where `Q` is the transition matrix restricted
/// to the non-target nodes. Returns `0` when `source == target`.
///
/// # Errors
///
/// [`Error::HistoryDependent`] for non-memoryless strategies,
/// [`Error::OracleTooLarge`] above [`MAX_HITTING_NODES`] nodes, and
/// [`Error::NodeOutOfRange`] for bad endpoints.
pub fn hitting_time(
    g: &Graph,
    spec: &StrategySpec,
    source: NodeId,
    target: NodeId,
) -> Result<f64> {
    let n = g.n();
    require_memoryless(spec)?;
    if n > MAX_HITTING_NODES {
        return Err(Error::OracleTooLarge { n, limit: MAX_HITTING_NODES });
    }
    for node in [source, target] {
        if (node as usize) >= n {
            return Err(Error::NodeOutOfRange { node, n });
        }
    }
    if source == target {
        return Ok(0.0);
    }

    // dense index over the non-target nodes
    let index = |v: NodeId| -> usize {
        let v = v as usize;
        if v < target as usize {
            v
        } else {
            v - 1
        }
    };
    let dim = n - 1;
    let mut a = DMatrix::<f64>::identity(dim, dim);
    for v in 0..n as NodeId {
        if v == target {
            continue;
        }
        let row = transition_row(g, spec, v)?;
        for (&j, &p) in g.neighbors(v).iter().zip(&row) {
            if j != target {
                a[(index(v), index(j))] -= p;
            }
        }
    }
    let rhs = DVector::from_element(dim, 1.0);
    let h = a
        .lu()
        .solve(&rhs)
        .ok_or(Error::SingularSystem { context: "hitting-time system" })?;
    Ok(h[index(source)])
}

/// Expected steps for `spec` to visit `floor(tau * n)` distinct nodes
/// starting from `start` (the start node counts as visited at no cost).
///
/// Exact value from the expanded chain on (current node, visited set):
/// subsets are processed in decreasing size, and for each subset the
/// expectations of its member states solve a dense linear system whose
/// absorbing terms are the already-known larger subsets.
///
/// # Errors
///
/// [`Error::HistoryDependent`] for non-memoryless strategies,
/// [`Error::OracleTooLarge`] above [`MAX_PCT_NODES`] nodes,
/// [`Error::InvalidParameter`] for `tau` outside `(0, 1]`, and
/// [`Error::NodeOutOfRange`] for a bad start.
pub fn oracle_pct(g: &Graph, spec: &StrategySpec, tau: f64, start: NodeId) -> Result<f64> {
    let n = g.n();
    require_memoryless(spec)?;
    if n > MAX_PCT_NODES {
        return Err(Error::OracleTooLarge { n, limit: MAX_PCT_NODES });
    }
    if (start as usize) >= n {
        return Err(Error::NodeOutOfRange { node: start, n });
    }
    let target = coverage_target(n, tau)?;
    if target <= 1 {
        return Ok(0.0);
    }

    // transition rows once, parallel to g.neighbors(v)
    let rows: Vec<Vec<f64>> =
        (0..n as NodeId).map(|v| transition_row(g, spec, v)).collect::<Result<_>>()?;

    // expectation[mask * n + i]: expected remaining steps at node i with
    // visited set mask; zero once |mask| >= target
    let mut expectation = vec![0.0f64; (1usize << n) * n];
    let mut members = Vec::with_capacity(n);
    for size in (1..target).rev() {
        for mask in 0..(1u32 << n) {
            if mask.count_ones() as usize != size {
                continue;
            }
            members.clear();
            members.extend((0..n).filter(|&v| mask & (1 << v) != 0));
            let local =
                |v: usize| members.iter().position(|&m| m == v).expect("member of mask");

            let mut a = DMatrix::<f64>::identity(size, size);
            let mut rhs = DVector::from_element(size, 1.0);
            for (r, &i) in members.iter().enumerate() {
                for (&j, &p) in g.neighbors(i as NodeId).iter().zip(&rows[i]) {
                    let j = j as usize;
                    if mask & (1 << j) != 0 {
                        a[(r, local(j))] -= p;
                    } else {
                        let grown = (mask | (1 << j)) as usize;
                        rhs[r] += p * expectation[grown * n + j];
                    }
                }
            }
            let solved = a
                .lu()
                .solve(&rhs)
                .ok_or(Error::SingularSystem { context: "visited-set expansion" })?;
            for (r, &i) in members.iter().enumerate() {
                expectation[mask as usize * n + i] = solved[r];
            }
        }
    }
    Ok(expectation[(1usize << start) * n + start as usize])
}

fn require_memoryless(spec: &StrategySpec) -> Result<()> {
    if spec.is_memoryless() {
        Ok(())
    } else {
        Err(Error::HistoryDependent { strategy: spec.to_string() })
    }
}
