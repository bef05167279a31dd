//! Secretary-style optimal stopping for neighbor inspection.
//!
//! A walker standing at a node can inspect neighbors one at a time, in a
//! uniformly random arrival order, paying more the longer it looks. The
//! protocol with cutoff `r`:
//!
//! 1. observe the first `r − 1` neighbors without selecting;
//! 2. from position `r` on, select the first neighbor whose degree is
//!    strictly below every degree seen so far;
//! 3. if none qualifies, select the last neighbor.
//!
//! With distinct degrees, the probability that step 2 fires exactly at
//! position `k` is `(r − 1)/(k (k − 1))` — validated exhaustively by
//! [`enumerate_protocol`]. Selections are rewarded only when the selected
//! neighbor is the true minimum, which given a fire at `k` has probability
//! `k/N`; weighting by `w(k)` gives the expected reward
//!
//! ```text
//! E(R) = (c (r − 1)/N) · Σ_{k=r}^{N} 1/(k − 1)      (constant w)
//! E(R) = ((r − 1)/N) · α^r (1 − α^(N−r))/(1 − α)    (exponential w)
//! ```
//!
//! [`optimal_cutoff`] maximizes E(R) over `r` by exact discrete scan; for
//! the exponential weight a Newton iteration on the smooth relaxation is
//! reported alongside.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId};
use crate::walk::WalkState;

// ---------------------------------------------------------------------------
// Reward models
// ---------------------------------------------------------------------------

/// Inspection-cost weight `w(k)` as a function of the stop position `k`.
#[derive(Debug, Clone, PartialEq)]
pub enum Weight {
    /// `w(k) = c` with `c > 0`.
    Constant(f64),
    /// `w(k) = (k − 1) · exp(−k/θ)` with `θ > 0`; decays with rate
    /// `α = exp(−1/θ)`.
    Exponential {
        /// Decay time scale.
        theta: f64,
    },
}

impl Weight {
    /// Constant weight, `c > 0`.
    pub fn constant(c: f64) -> Result<Self> {
        if c.is_finite() && c > 0.0 {
            Ok(Self::Constant(c))
        } else {
            Err(Error::InvalidParameter {
                name: "c",
                value: c.to_string(),
                expected: "a finite real > 0",
            })
        }
    }

    /// Exponential weight with time scale `θ > 0`.
    pub fn exponential(theta: f64) -> Result<Self> {
        if theta.is_finite() && theta > 0.0 {
            Ok(Self::Exponential { theta })
        } else {
            Err(Error::InvalidParameter {
                name: "theta",
                value: theta.to_string(),
                expected: "a finite real > 0",
            })
        }
    }

    /// Decay factor `α = exp(−1/θ)` for the exponential weight.
    #[must_use]
    pub fn alpha(&self) -> Option<f64> {
        match *self {
            Self::Constant(_) => None,
            Self::Exponential { theta } => Some((-1.0 / theta).exp()),
        }
    }
}

/// A weight plus the number of inspectable neighbors `N ≥ 2`.
#[derive(Debug, Clone, PartialEq)]
pub struct RewardModel {
    /// Inspection weight.
    pub weight: Weight,
    /// Number of neighbors available for inspection.
    pub n: u32,
}

impl RewardModel {
    /// Builds a model; `n ≥ 2` is required (with a single neighbor there
    /// is nothing to stop over).
    pub fn new(weight: Weight, n: u32) -> Result<Self> {
        if n >= 2 {
            Ok(Self { weight, n })
        } else {
            Err(Error::InvalidParameter {
                name: "n",
                value: n.to_string(),
                expected: "n >= 2",
            })
        }
    }
}

// ---------------------------------------------------------------------------
// Exact quantities
// ---------------------------------------------------------------------------

/// Probability that the protocol with cutoff `r` fires (selects at step 2)
/// exactly at position `k`, assuming distinct degrees:
/// `(r − 1)/(k (k − 1))`.
///
/// Requires `2 ≤ r ≤ k ≤ n`.
pub fn success_probability(r: u32, k: u32, n: u32) -> Result<f64> {
    if !(2 <= r && r <= k && k <= n) {
        return Err(Error::InvalidParameter {
            name: "r,k,n",
            value: format!("{r},{k},{n}"),
            expected: "2 <= r <= k <= n",
        });
    }
    Ok((r as f64 - 1.0) / (k as f64 * (k as f64 - 1.0)))
}

/// Expected reward of cutoff `r` under the model, `2 ≤ r ≤ N`.
///
/// Constant weight: `(c (r−1)/N) · Σ_{k=r}^{N} 1/(k−1)`. Exponential
/// weight: the geometric closed form `((r−1)/N) · α^r (1 − α^(N−r))/(1−α)`
/// (zero at `r = N`, where the modeled sum is empty).
pub fn expected_reward(model: &RewardModel, r: u32) -> Result<f64> {
    check_cutoff(model, r)?;
    let n = model.n as f64;
    Ok(match model.weight {
        Weight::Constant(c) => {
            let tail: f64 = (r..=model.n).map(|k| 1.0 / (k as f64 - 1.0)).sum();
            c * (r as f64 - 1.0) / n * tail
        }
        Weight::Exponential { .. } => {
            let alpha = self_alpha(model);
            (r as f64 - 1.0) / n * alpha.powi(r as i32)
                * (1.0 - alpha.powi((model.n - r) as i32))
                / (1.0 - alpha)
        }
    })
}

/// Term-by-term reference evaluation of [`expected_reward`].
///
/// Sums `((r−1)/N) · w(k)/(k−1)` directly: over `k = r..=N` for the
/// constant weight and over the geometric range `k = r..N` for the
/// exponential weight. Used by validation suites to pin the closed forms.
pub fn expected_reward_summation(model: &RewardModel, r: u32) -> Result<f64> {
    check_cutoff(model, r)?;
    let n = model.n as f64;
    Ok(match model.weight {
        Weight::Constant(c) => {
            let mut acc = 0.0;
            for k in r..=model.n {
                acc += c / (k as f64 - 1.0);
            }
            (r as f64 - 1.0) / n * acc
        }
        Weight::Exponential { .. } => {
            let alpha = self_alpha(model);
            let mut acc = 0.0;
            for k in r..model.n {
                acc += alpha.powi(k as i32);
            }
            (r as f64 - 1.0) / n * acc
        }
    })
}

fn check_cutoff(model: &RewardModel, r: u32) -> Result<()> {
    if !(2 <= r && r <= model.n) {
        return Err(Error::InvalidParameter {
            name: "r",
            value: r.to_string(),
            expected: "2 <= r <= N",
        });
    }
    Ok(())
}

fn self_alpha(model: &RewardModel) -> f64 {
    model.weight.alpha().expect("exponential weight")
}

/// Result of [`optimal_cutoff`].
#[derive(Debug, Clone, PartialEq)]
pub struct CutoffResult {
    /// Exact discrete argmax of the expected reward over `r ∈ [2, N]`
    /// (smallest maximizer on ties).
    pub r_star: u32,
    /// Expected reward at `r_star`.
    pub reward: f64,
    /// Continuous Newton solution, exponential weight only.
    pub newton: Option<NewtonReport>,
}

/// Outcome of the Newton iteration on the smooth cutoff relaxation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NewtonReport {
    /// Final iterate (a real-valued cutoff).
    pub root: f64,
    /// Whether the step size dropped below tolerance within the budget.
    /// When false the discrete scan result stands alone.
    pub converged: bool,
    /// Iterations actually used.
    pub iterations: u32,
}

/// Maximizes the expected reward over integer cutoffs `r ∈ [2, N]`.
///
/// The scan is exact. For the exponential weight a Newton iteration on
/// `g(r) = (r−1)(α^r − α^N)` — the closed form up to a positive constant —
/// runs alongside and is reported; non-convergence within 100 iterations
/// is flagged via [`NewtonReport::converged`] and does not affect the
/// discrete result.
#[must_use]
pub fn optimal_cutoff(model: &RewardModel) -> CutoffResult {
    let (mut best_r, mut best) = (model.n, f64::NEG_INFINITY);
    match model.weight {
        Weight::Constant(c) => {
            // Backward accumulation of the harmonic tail Σ_{k=r}^{N} 1/(k−1)
            // keeps the full scan linear in N.
            let mut tail = 0.0;
            for r in (2..=model.n).rev() {
                tail += 1.0 / (r as f64 - 1.0);
                let reward = c * (r as f64 - 1.0) / model.n as f64 * tail;
                if reward >= best {
                    best = reward;
                    best_r = r;
                }
            }
        }
        Weight::Exponential { .. } => {
            for r in (2..=model.n).rev() {
                let reward = expected_reward(model, r).expect("r in range");
                if reward >= best {
                    best = reward;
                    best_r = r;
                }
            }
        }
    }
    let newton = matches!(model.weight, Weight::Exponential { .. })
        .then(|| newton_cutoff(self_alpha(model), model.n, best_r as f64));
    CutoffResult { r_star: best_r, reward: best, newton }
}

/// Newton iteration for the stationary point of
/// `g(r) = (r−1)(α^r − α^N)` on `[2, N]`, refining `initial` (the
/// discrete argmax, which sits within one unit of the continuous one).
///
/// Convergence requires a stalled step at an interior point with negative
/// curvature (a genuine local maximum). A stall against the `[2, N]`
/// clamp counts as failure: the maximum sits on the boundary, where the
/// discrete scan result stands alone.
fn newton_cutoff(alpha: f64, n: u32, initial: f64) -> NewtonReport {
    let ln_a = alpha.ln();
    let a_n = alpha.powi(n as i32);
    let hi = n as f64;
    let mut r = initial.clamp(2.0, hi);
    for iteration in 1..=100 {
        let a_r = alpha.powf(r);
        let g1 = (a_r - a_n) + (r - 1.0) * a_r * ln_a;
        let g2 = 2.0 * a_r * ln_a + (r - 1.0) * a_r * ln_a * ln_a;
        if g2 == 0.0 || !g2.is_finite() {
            return NewtonReport { root: r, converged: false, iterations: iteration };
        }
        let next = (r - g1 / g2).clamp(2.0, hi);
        let delta = (next - r).abs();
        r = next;
        if delta < 1e-10 {
            let interior = r > 2.0 + 1e-9 && r < hi - 1e-9;
            return NewtonReport {
                root: r,
                converged: interior && g2 < 0.0,
                iterations: iteration,
            };
        }
    }
    NewtonReport { root: r, converged: false, iterations: 100 }
}

// ---------------------------------------------------------------------------
// Protocol execution
// ---------------------------------------------------------------------------

/// Outcome of running the protocol over one arrival order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct ProtocolOutcome {
    /// Index into the arrival order of the selected item.
    selected: usize,
    /// Inspections consumed (= the position, 1-based, where the run ended).
    inspections: u32,
    /// True when step 2 fired; false on the rule-3 fall-through.
    fired: bool,
}

/// Runs the cutoff protocol over `values` in arrival order (lower wins).
/// Requires `values.len() ≥ 2` and `2 ≤ r ≤ values.len()`.
fn run_protocol(values: &[usize], r: u32) -> ProtocolOutcome {
    debug_assert!(values.len() >= 2);
    debug_assert!(2 <= r && (r as usize) <= values.len());
    let mut min_seen = usize::MAX;
    for v in &values[..r as usize - 1] {
        min_seen = min_seen.min(*v);
    }
    for (idx, &v) in values.iter().enumerate().skip(r as usize - 1) {
        if v < min_seen {
            return ProtocolOutcome {
                selected: idx,
                inspections: idx as u32 + 1,
                fired: true,
            };
        }
        min_seen = min_seen.min(v);
    }
    ProtocolOutcome {
        selected: values.len() - 1,
        inspections: values.len() as u32,
        fired: false,
    }
}

/// A selected neighbor plus the number of inspections spent reaching it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Selection {
    /// The selected neighbor.
    pub node: NodeId,
    /// Neighbors inspected, including the selected one.
    pub inspections: u32,
}

/// Applies the stopping rule to the neighbors of `i`, presented in a
/// uniformly random order, with the cutoff chosen by [`optimal_cutoff`]
/// for `N = d_i` under `weight`.
///
/// A degree-1 node returns its unique neighbor after one inspection.
pub fn secretary_select(
    g: &Graph,
    i: NodeId,
    weight: &Weight,
    rng: &mut impl Rng,
) -> Selection {
    let mut arrival: Vec<NodeId> = g.neighbors(i).to_vec();
    if arrival.len() == 1 {
        return Selection { node: arrival[0], inspections: 1 };
    }
    arrival.shuffle(rng);
    select_among(g, &arrival, weight)
}

/// One walk step with sequential inspection: applies the stopping rule to
/// the unvisited neighbors of the current node, falling back to a uniform
/// neighbor when all are visited. Returns the chosen node and the
/// inspections spent (0 on fallback).
pub fn secretary_walk_step(
    g: &Graph,
    s: &WalkState,
    weight: &Weight,
    rng: &mut impl Rng,
) -> Selection {
    let mut pool: Vec<NodeId> = g
        .neighbors(s.current())
        .iter()
        .copied()
        .filter(|&v| !s.is_visited(v))
        .collect();
    match pool.len() {
        0 => {
            let nbs = g.neighbors(s.current());
            let node = nbs[rng.random_range(0..nbs.len())];
            Selection { node, inspections: 0 }
        }
        1 => Selection { node: pool[0], inspections: 1 },
        _ => {
            pool.shuffle(rng);
            select_among(g, &pool, weight)
        }
    }
}

/// Protocol over an already-shuffled candidate list of length ≥ 2.
fn select_among(g: &Graph, arrival: &[NodeId], weight: &Weight) -> Selection {
    let model = RewardModel::new(weight.clone(), arrival.len() as u32)
        .expect("candidate count >= 2");
    let cutoff = optimal_cutoff(&model).r_star;
    let degrees: Vec<usize> = arrival.iter().map(|&v| g.degree(v)).collect();
    let outcome = run_protocol(&degrees, cutoff);
    Selection { node: arrival[outcome.selected], inspections: outcome.inspections }
}

// ---------------------------------------------------------------------------
// Exhaustive reference
// ---------------------------------------------------------------------------

/// Exhaustive census of the protocol over all `n!` arrival orders of `n`
/// distinct values.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProtocolCensus {
    /// Total orders enumerated (`n!`).
    pub orders: u64,
    /// `fired_at[k − r]` counts orders where step 2 fired at position `k`,
    /// for `k = r..=n`.
    pub fired_at: Vec<u64>,
    /// Orders that fell through to rule 3.
    pub fallthrough: u64,
    /// Orders whose selected item was the true minimum.
    pub true_min_selected: u64,
}

/// Runs the protocol over every permutation of `n` distinct ranks and
/// tallies outcomes exactly. Integer counts over `n!` orders make the
/// comparison against `(r−1)/(k(k−1))` exact in rational arithmetic.
///
/// Requires `2 ≤ r ≤ n ≤ 10` (10! ≈ 3.6 M orders).
pub fn enumerate_protocol(n: u32, r: u32) -> Result<ProtocolCensus> {
    if !(2 <= r && r <= n && n <= 10) {
        return Err(Error::InvalidParameter {
            name: "n,r",
            value: format!("{n},{r}"),
            expected: "2 <= r <= n <= 10",
        });
    }
    let size = n as usize;
    let mut ranks: Vec<usize> = (1..=size).collect();
    let mut census = ProtocolCensus {
        orders: 0,
        fired_at: vec![0; size - r as usize + 1],
        fallthrough: 0,
        true_min_selected: 0,
    };
    let mut tally = |order: &[usize]| {
        let outcome = run_protocol(order, r);
        census.orders += 1;
        if outcome.fired {
            census.fired_at[outcome.inspections as usize - r as usize] += 1;
        } else {
            census.fallthrough += 1;
        }
        if order[outcome.selected] == 1 {
            census.true_min_selected += 1;
        }
    };
    // Heap's algorithm, iterative form.
    let mut stack = vec![0usize; size];
    tally(&ranks);
    let mut i = 1;
    while i < size {
        if stack[i] < i {
            if i % 2 == 0 {
                ranks.swap(0, i);
            } else {
                ranks.swap(stack[i], i);
            }
            tally(&ranks);
            stack[i] += 1;
            i = 1;
        } else {
            stack[i] = 0;
            i += 1;
        }
    }
    Ok(census)
}
