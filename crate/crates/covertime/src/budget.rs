//! Success probability of budgeted minimum-degree sampling.
//!
//! At a decision point the walker sees `l` unvisited neighbors of which
//! `multiplicity` share the minimum degree, and inspects a uniform
//! without-replacement sample of `budget` of them. The probability that
//! the sample contains a minimum-degree node has the closed form
//!
//! ```text
//! p = 1 - C(l - multiplicity, budget) / C(l, budget)
//! ```
//!
//! [`closed_form_p`] evaluates this exactly where integer arithmetic
//! allows; [`probe`] drives real walks, groups their decision points into
//! `(l, multiplicity)` strata, and reports the empirical hit rate next to
//! the closed form so the two can be compared.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::estimator::step_cap;
use crate::graph::{Graph, NodeId};
use crate::rng::rng_for;
use crate::walk::{md_step_instrumented, WalkState};

/// Probability that a uniform without-replacement sample of `budget`
/// nodes from a pool of `l` containing `multiplicity` minimum-degree
/// nodes includes at least one of them.
///
/// Exact for moderate arguments (the binomial ratio is reduced stepwise
/// in integers); falls back to log-space evaluation when the reduced
/// ratio would overflow.
///
/// # Errors
///
/// [`Error::InvalidParameter`] unless `1 <= multiplicity <= l` and
/// `budget >= 1`.
pub fn closed_form_p(l: u64, budget: u64, multiplicity: u64) -> Result<f64> {
    if l == 0 || multiplicity == 0 || multiplicity > l {
        return Err(Error::InvalidParameter {
            name: "multiplicity",
            value: format!("{multiplicity} of {l}"),
            expected: "between 1 and the pool size",
        });
    }
    if budget == 0 {
        return Err(Error::InvalidParameter {
            name: "budget",
            value: "0".to_owned(),
            expected: "at least one inspection",
        });
    }
    // the sample must contain a minimum-degree node once the others
    // cannot fill it
    if budget > l - multiplicity {
        return Ok(1.0);
    }
    let mut num: u128 = 1;
    let mut den: u128 = 1;
    for i in 0..budget {
        let top = u128::from(l - multiplicity - i);
        let bot = u128::from(l - i);
        if num > u128::MAX / top || den > u128::MAX / bot {
            return Ok(log_space_p(l, budget, multiplicity));
        }
        num *= top;
        den *= bot;
        let common = gcd(num, den);
        num /= common;
        den /= common;
    }
    Ok(1.0 - num as f64 / den as f64)
}

fn log_space_p(l: u64, budget: u64, multiplicity: u64) -> f64 {
    let mut log_miss = 0.0f64;
    for i in 0..budget {
        log_miss += ((l - multiplicity - i) as f64).ln() - ((l - i) as f64).ln();
    }
    1.0 - log_miss.exp()
}

fn gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Empirical and closed-form hit rates of one `(l, multiplicity)`
/// stratum of decision points.
#[derive(Debug, Clone, PartialEq)]
pub struct StratumReport {
    /// Unvisited-neighbor pool size at the decision point.
    pub l_size: u32,
    /// Minimum-degree nodes in the pool.
    pub multiplicity: u32,
    /// Decision points observed in this stratum.
    pub samples: u64,
    /// How many of them sampled a minimum-degree node.
    pub hits: u64,
    /// Closed-form success probability for this stratum.
    pub closed_form: f64,
}

impl StratumReport {
    /// Observed hit rate.
    #[must_use]
    pub fn empirical(&self) -> f64 {
        self.hits as f64 / self.samples as f64
    }

    /// Absolute difference between observed and closed-form rates.
    #[must_use]
    pub fn gap(&self) -> f64 {
        (self.empirical() - self.closed_form).abs()
    }
}

/// Walks the budgeted minimum-degree strategy to full cover from each
/// start, `trials_per_start` times, and aggregates every decision point
/// into `(l, multiplicity)` strata sorted ascending.
///
/// Trial `t` from start `s` uses `rng_for(seed, s, t)`, the same
/// derivation as the curve estimators.
///
/// # Errors
///
/// [`Error::InvalidParameter`] for a zero budget, zero trials, or no
/// starts; [`Error::NodeOutOfRange`] for a bad start.
pub fn probe(
    g: &Graph,
    budget: u32,
    starts: &[NodeId],
    trials_per_start: u64,
    seed: u64,
) -> Result<Vec<StratumReport>> {
    if budget == 0 {
        return Err(Error::InvalidParameter {
            name: "budget",
            value: "0".to_owned(),
            expected: "at least one inspection",
        });
    }
    if starts.is_empty() {
        return Err(Error::InvalidParameter {
            name: "starts",
            value: "[]".to_owned(),
            expected: "at least one start node",
        });
    }
    if trials_per_start == 0 {
        return Err(Error::InvalidParameter {
            name: "trials",
            value: "0".to_owned(),
            expected: "at least one trial",
        });
    }
    let cap = step_cap(g);
    let mut strata: BTreeMap<(u32, u32), (u64, u64)> = BTreeMap::new();
    for &start in starts {
        if (start as usize) >= g.n() {
            return Err(Error::NodeOutOfRange { node: start, n: g.n() });
        }
        for trial in 0..trials_per_start {
            let mut rng = rng_for(seed, u64::from(start), trial);
            let mut s = WalkState::new(g, start)?;
            while s.visited_count() < g.n() && s.steps() < cap {
                let decision = md_step_instrumented(g, &mut s, budget, &mut rng);
                if let Some(point) = decision.point {
                    let entry = strata
                        .entry((point.l_size, point.multiplicity))
                        .or_insert((0, 0));
                    entry.0 += 1;
                    entry.1 += u64::from(point.sampled_hit);
                }
            }
        }
    }
    strata
        .into_iter()
        .map(|((l_size, multiplicity), (samples, hits))| {
            Ok(StratumReport {
                l_size,
                multiplicity,
                samples,
                hits,
                closed_form: closed_form_p(
                    u64::from(l_size),
                    u64::from(budget),
                    u64::from(multiplicity),
                )?,
            })
        })
        .collect()
}
