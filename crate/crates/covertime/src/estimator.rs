//! Monte-Carlo estimation of partial cover time.
//!
//! A trial walks from a fixed start until it has visited a target number
//! of distinct nodes, recording the step count at which each requested
//! coverage fraction was first reached. Trials hitting the step cap
//! (default [`step_cap`], twice `m * n`, a classical bound on the
//! expected cover time) are counted as truncated and excluded from the
//! reported means; an estimate whose trials all truncated is an error.
//! Note the bound is on expectations, so individual trials exceed it
//! routinely: comparisons against exact values should raise the cap
//! explicitly, otherwise the exclusions bias the mean low.
//!
//! # Determinism
//!
//! Trial `t` from start `s` draws its generator as
//! `rng_for(seed, s, t)`, so results do not depend on scheduling. All
//! aggregation is integer arithmetic (`u128` sums of `u64` step counts),
//! which is associative, so estimates are identical byte for byte across
//! thread counts.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId};
use crate::rng::rng_for;
use crate::strategy::StrategySpec;
use crate::walk::{step, WalkState};

/// Reserved lane for start-node sampling in seed derivation; per-start
/// trial lanes are node ids, which never reach this value.
const START_SAMPLING_LANE: u64 = u64::MAX;

/// Number of distinct visited nodes that counts as covering fraction
/// `tau`: `floor(tau * n)`, with `tau` restricted to `(0, 1]`.
pub fn coverage_target(n: usize, tau: f64) -> Result<usize> {
    if !(tau > 0.0 && tau <= 1.0) {
        return Err(Error::InvalidParameter {
            name: "tau",
            value: format!("{tau}"),
            expected: "a coverage fraction in (0, 1]",
        });
    }
    // the epsilon absorbs representation error in products like 0.7 * n
    let target = (tau * n as f64 + 1e-9).floor() as usize;
    Ok(target.min(n))
}

/// Default trial step cap: `2 * m * n`, a classical upper bound on the
/// expected cover time of a connected graph.
#[must_use]
pub fn step_cap(g: &Graph) -> u64 {
    2 * g.m() as u64 * g.n() as u64
}

/// Evenly spaced coverage fractions from `min` to `max` inclusive.
///
/// Values are snapped to nine decimal places so accumulated float error
/// in `min + k * step` cannot leak into output files (`0.1 + 2 * 0.1`
/// must print as `0.3`).
pub fn tau_grid(min: f64, max: f64, step: f64) -> Result<Vec<f64>> {
    if !(min > 0.0 && min <= max && max <= 1.0) {
        return Err(Error::InvalidParameter {
            name: "tau range",
            value: format!("[{min}, {max}]"),
            expected: "0 < min <= max <= 1",
        });
    }
    // step <= 0 and NaN both land here
    if step.partial_cmp(&0.0) != Some(std::cmp::Ordering::Greater) {
        return Err(Error::InvalidParameter {
            name: "tau step",
            value: format!("{step}"),
            expected: "a positive step",
        });
    }
    let count = ((max - min) / step + 1e-9).floor() as usize + 1;
    Ok((0..count).map(|k| snap(min + k as f64 * step)).collect())
}

fn snap(v: f64) -> f64 {
    (v * 1e9).round() / 1e9
}

/// Which start nodes an experiment runs from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StartPolicy {
    /// Every node.
    All,
    /// A uniform sample of this many distinct nodes (all of them when the
    /// graph is smaller).
    Sample(usize),
    /// Exactly these nodes.
    Fixed(Vec<NodeId>),
}

/// Materializes a start policy into a concrete node list.
///
/// Sampling draws without replacement from a generator reserved for this
/// purpose (`rng_for(seed, u64::MAX, 0)`) and returns the nodes in
/// ascending order, so the list is a pure function of graph, policy, and
/// seed.
pub fn resolve_starts(g: &Graph, policy: &StartPolicy, seed: u64) -> Result<Vec<NodeId>> {
    match policy {
        StartPolicy::All => Ok((0..g.n() as NodeId).collect()),
        StartPolicy::Fixed(nodes) => {
            for &v in nodes {
                if (v as usize) >= g.n() {
                    return Err(Error::NodeOutOfRange { node: v, n: g.n() });
                }
            }
            Ok(nodes.clone())
        }
        StartPolicy::Sample(k) => {
            if *k == 0 {
                return Err(Error::InvalidParameter {
                    name: "starts",
                    value: "0".to_owned(),
                    expected: "at least one start node",
                });
            }
            if *k >= g.n() {
                return Ok((0..g.n() as NodeId).collect());
            }
            let mut rng = rng_for(seed, START_SAMPLING_LANE, 0);
            let mut picked: Vec<NodeId> = rand::seq::index::sample(&mut rng, g.n(), *k)
                .iter()
                .map(|v| v as NodeId)
                .collect();
            picked.sort_unstable();
            Ok(picked)
        }
    }
}

/// One estimated point of a partial-cover-time curve.
///
/// `rho`, `c_tau`, `stddev`, and `max_steps` describe the completed
/// trials only; truncated trials are counted and excluded, which biases
/// the mean low whenever `truncated > 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct CurvePoint {
    /// Requested coverage fraction.
    pub tau: f64,
    /// Distinct-node target `floor(tau * n)`.
    pub target: usize,
    /// Mean steps to reach the target, over completed trials.
    pub rho: f64,
    /// `rho / n`, the normalized partial cover time.
    pub c_tau: f64,
    /// Sample standard deviation of the completed trials' step counts.
    pub stddev: f64,
    /// Trials attempted for this point.
    pub trials: u64,
    /// Trials that hit the step cap before reaching the target and were
    /// excluded from the mean.
    pub truncated: u64,
    /// Largest completed-trial step count.
    pub max_steps: u64,
}

impl CurvePoint {
    /// Trials that reached the target and contribute to the mean.
    #[must_use]
    pub fn completed(&self) -> u64 {
        self.trials - self.truncated
    }

    /// Standard error of [`CurvePoint::rho`].
    #[must_use]
    pub fn standard_error(&self) -> f64 {
        if self.completed() < 2 {
            return f64::INFINITY;
        }
        self.stddev / (self.completed() as f64).sqrt()
    }
}

/// Curve estimates for several starts plus their pooled aggregate.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiStartEstimate {
    /// Start nodes, in the order supplied.
    pub starts: Vec<NodeId>,
    /// One curve per start, parallel to `starts`.
    pub per_start: Vec<Vec<CurvePoint>>,
    /// All trials of all starts pooled into one curve.
    pub pooled: Vec<CurvePoint>,
}

impl MultiStartEstimate {
    /// Start with the largest mean at the given tau index (the worst
    /// case over starts); ties keep the earliest start.
    #[must_use]
    pub fn worst_start(&self, tau_index: usize) -> (NodeId, &CurvePoint) {
        let (si, point) = self
            .per_start
            .iter()
            .enumerate()
            .map(|(si, points)| (si, &points[tau_index]))
            .max_by(|a, b| {
                a.1.rho.partial_cmp(&b.1.rho).expect("finite means").then(
                    // prefer the earlier start on exact ties
                    b.0.cmp(&a.0),
                )
            })
            .expect("at least one start");
        (self.starts[si], point)
    }
}

// ---------------------------------------------------------------------------
// Estimation
// ---------------------------------------------------------------------------

/// Estimates the partial-cover-time curve of `spec` from one start.
///
/// `taus` must be non-decreasing fractions in `(0, 1]`; `cap` defaults
/// to [`step_cap`]. Trial `t` uses the generator `rng_for(seed, start,
/// t)`.
///
/// # Errors
///
/// [`Error::InvalidParameter`] for bad fractions or zero trials,
/// [`Error::NodeOutOfRange`] for a bad start, and
/// [`Error::AllTrialsTruncated`] when no trial reached some target.
pub fn estimate_curve(
    g: &Graph,
    spec: &StrategySpec,
    start: NodeId,
    taus: &[f64],
    trials: u64,
    cap: Option<u64>,
    seed: u64,
) -> Result<Vec<CurvePoint>> {
    let plan = Plan::new(g, taus, trials, cap)?;
    let accs = accumulate(g, spec, start, &plan, trials, seed)?;
    plan.points(g, &accs, trials)
}

/// Estimates curves for several starts and pools them.
///
/// Each start gets `trials_per_start` trials; the pooled curve
/// aggregates every trial of every start. Seeding is identical to
/// running [`estimate_curve`] once per start with the same seed.
pub fn estimate_multi_start(
    g: &Graph,
    spec: &StrategySpec,
    starts: &[NodeId],
    taus: &[f64],
    trials_per_start: u64,
    cap: Option<u64>,
    seed: u64,
) -> Result<MultiStartEstimate> {
    if starts.is_empty() {
        return Err(Error::InvalidParameter {
            name: "starts",
            value: "[]".to_owned(),
            expected: "at least one start node",
        });
    }
    let plan = Plan::new(g, taus, trials_per_start, cap)?;
    let mut per_start = Vec::with_capacity(starts.len());
    let mut pooled_accs = vec![PointAcc::default(); plan.targets.len()];
    for &start in starts {
        let accs = accumulate(g, spec, start, &plan, trials_per_start, seed)?;
        for (pooled, acc) in pooled_accs.iter_mut().zip(&accs) {
            pooled.merge(acc);
        }
        per_start.push(plan.points(g, &accs, trials_per_start)?);
    }
    let total = trials_per_start * starts.len() as u64;
    let pooled = plan.points(g, &pooled_accs, total)?;
    Ok(MultiStartEstimate { starts: starts.to_vec(), per_start, pooled })
}

/// Worst estimated partial cover time over a sample of starts.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PctMax {
    /// Start with the largest mean.
    pub start: NodeId,
    /// Its mean steps to the coverage target.
    pub rho: f64,
}

/// Estimates the maximum over `starts` of the mean steps to cover
/// fraction `tau` (the partial-cover-time maximand, on a start sample).
pub fn estimate_pct_max(
    g: &Graph,
    spec: &StrategySpec,
    tau: f64,
    starts: &[NodeId],
    trials_per_start: u64,
    cap: Option<u64>,
    seed: u64,
) -> Result<PctMax> {
    let est = estimate_multi_start(g, spec, starts, &[tau], trials_per_start, cap, seed)?;
    let (start, point) = est.worst_start(0);
    Ok(PctMax { start, rho: point.rho })
}

// ---------------------------------------------------------------------------
// Classical-bound report
// ---------------------------------------------------------------------------

/// How a cover-time estimate sits against the classical expectation
/// bounds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundsVerdict {
    /// Inside both markers.
    Consistent,
    /// Outside a marker; worth a look, not a failure (the bounds hold
    /// for expectations, estimates fluctuate).
    Investigate,
    /// Truncated trials were excluded, so the estimate is biased and the
    /// comparison proves nothing.
    Inconclusive,
}

/// A full-cover estimate compared against the classical markers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundsReport {
    /// Upper marker `2 * m * n` on the expected cover time.
    pub upper: f64,
    /// Heuristic lower marker `0.9 * n * ln n`.
    pub lower: f64,
    /// Whether the estimate lies below the upper marker.
    pub below_upper: bool,
    /// Whether the estimate lies above the lower marker.
    pub above_lower: bool,
    /// Overall reading.
    pub verdict: BoundsVerdict,
}

/// Compares a full-cover estimate against the classical expectation
/// markers: below `2mn` and above `0.9 n ln n`.
#[must_use]
pub fn check_bounds(g: &Graph, point: &CurvePoint) -> BoundsReport {
    let upper = 2.0 * g.m() as f64 * g.n() as f64;
    let lower = 0.9 * g.n() as f64 * (g.n() as f64).ln();
    let below_upper = point.rho < upper;
    let above_lower = point.rho > lower;
    let verdict = if point.truncated > 0 {
        BoundsVerdict::Inconclusive
    } else if below_upper && above_lower {
        BoundsVerdict::Consistent
    } else {
        BoundsVerdict::Investigate
    };
    BoundsReport { upper, lower, below_upper, above_lower, verdict }
}

/// Validated tau grid and trial bookkeeping shared by the estimators.
struct Plan {
    taus: Vec<f64>,
    targets: Vec<usize>,
    cap: u64,
}

impl Plan {
    fn new(g: &Graph, taus: &[f64], trials: u64, cap: Option<u64>) -> Result<Self> {
        if taus.is_empty() {
            return Err(Error::InvalidParameter {
                name: "taus",
                value: "[]".to_owned(),
                expected: "at least one coverage fraction",
            });
        }
        if taus.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::InvalidParameter {
                name: "taus",
                value: format!("{taus:?}"),
                expected: "non-decreasing coverage fractions",
            });
        }
        if trials == 0 {
            return Err(Error::InvalidParameter {
                name: "trials",
                value: "0".to_owned(),
                expected: "at least one trial",
            });
        }
        let targets =
            taus.iter().map(|&tau| coverage_target(g.n(), tau)).collect::<Result<Vec<_>>>()?;
        Ok(Self { taus: taus.to_vec(), targets, cap: cap.unwrap_or_else(|| step_cap(g)) })
    }

    fn points(&self, g: &Graph, accs: &[PointAcc], trials: u64) -> Result<Vec<CurvePoint>> {
        accs.iter()
            .zip(self.taus.iter().zip(&self.targets))
            .map(|(acc, (&tau, &target))| {
                let completed = trials - acc.truncated;
                if completed == 0 {
                    return Err(Error::AllTrialsTruncated { tau, trials: trials as usize });
                }
                let rho = u128_to_f64(acc.sum) / completed as f64;
                Ok(CurvePoint {
                    tau,
                    target,
                    rho,
                    c_tau: rho / g.n() as f64,
                    stddev: acc.stddev(completed),
                    trials,
                    truncated: acc.truncated,
                    max_steps: acc.max_steps,
                })
            })
            .collect()
    }
}

/// Integer accumulator for one curve point; merging is associative, so
/// parallel reduction order cannot change the result.
#[derive(Debug, Clone, Default)]
struct PointAcc {
    sum: u128,
    sum_sq: u128,
    max_steps: u64,
    truncated: u64,
}

impl PointAcc {
    fn record(&mut self, steps: u64, truncated: bool) {
        if truncated {
            self.truncated += 1;
            return;
        }
        self.sum += u128::from(steps);
        self.sum_sq += u128::from(steps) * u128::from(steps);
        self.max_steps = self.max_steps.max(steps);
    }

    fn merge(&mut self, other: &Self) {
        self.sum += other.sum;
        self.sum_sq += other.sum_sq;
        self.max_steps = self.max_steps.max(other.max_steps);
        self.truncated += other.truncated;
    }

    fn stddev(&self, completed: u64) -> f64 {
        if completed < 2 {
            return 0.0;
        }
        let t = completed as f64;
        let mean = u128_to_f64(self.sum) / t;
        let variance = (u128_to_f64(self.sum_sq) / t - mean * mean) * t / (t - 1.0);
        variance.max(0.0).sqrt()
    }
}

fn u128_to_f64(v: u128) -> f64 {
    v as f64
}

fn accumulate(
    g: &Graph,
    spec: &StrategySpec,
    start: NodeId,
    plan: &Plan,
    trials: u64,
    seed: u64,
) -> Result<Vec<PointAcc>> {
    if (start as usize) >= g.n() {
        return Err(Error::NodeOutOfRange { node: start, n: g.n() });
    }
    let accs = (0..trials)
        .into_par_iter()
        .fold(
            || vec![PointAcc::default(); plan.targets.len()],
            |mut accs, trial| {
                let mut rng = rng_for(seed, u64::from(start), trial);
                let (steps_at, truncated_from) =
                    run_trial(g, spec, start, &plan.targets, plan.cap, &mut rng);
                for (k, (acc, &steps)) in accs.iter_mut().zip(&steps_at).enumerate() {
                    acc.record(steps, k >= truncated_from);
                }
                accs
            },
        )
        .reduce(
            || vec![PointAcc::default(); plan.targets.len()],
            |mut left, right| {
                for (l, r) in left.iter_mut().zip(&right) {
                    l.merge(r);
                }
                left
            },
        );
    Ok(accs)
}

/// Runs one walk, returning the step count at which each target was
/// reached and the index of the first target still unmet when the cap
/// hit (`targets.len()` when none); entries at and past that index are
/// meaningless and must be treated as truncated.
fn run_trial(
    g: &Graph,
    spec: &StrategySpec,
    start: NodeId,
    targets: &[usize],
    cap: u64,
    rng: &mut impl rand::Rng,
) -> (Vec<u64>, usize) {
    let mut s = WalkState::new(g, start).expect("start validated by caller");
    let mut steps_at = vec![0u64; targets.len()];
    let mut idx = 0;
    while idx < targets.len() && s.visited_count() >= targets[idx] {
        idx += 1; // satisfied at the start, zero steps
    }
    while idx < targets.len() {
        if s.steps() >= cap {
            return (steps_at, idx);
        }
        step(g, &mut s, spec, rng);
        while idx < targets.len() && s.visited_count() >= targets[idx] {
            steps_at[idx] = s.steps();
            idx += 1;
        }
    }
    (steps_at, targets.len())
}
