//! Walk strategy selection and the node-level transition rows of the
//! memoryless strategies.
//!
//! A [`StrategySpec`] names one of the walk rules and carries its
//! parameters. The three memoryless rules (SRW, AD, MDW) are fully
//! described by a per-node transition row over the neighbors, exposed here
//! for the exact oracles and reused by the samplers in [`crate::walk`].
//! The remaining rules condition on walk history (visited nodes or edges)
//! and only exist as samplers.

use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId};
use crate::stopping::Weight;

/// Configuration of one walk strategy.
///
/// The CLI/CSV string forms are stable: `srw`, `ep`, `ad`, `mdw`,
/// `rwc:d=3`, `md:B=5`, and the extension `secretary:c=1` /
/// `secretary:theta=5`.
#[derive(Debug, Clone, PartialEq)]
pub enum StrategySpec {
    /// Simple random walk: uniform over neighbors.
    Srw,
    /// Edge process: uniform over unvisited incident edges, SRW fallback.
    Ep,
    /// Degree-biased walk: step to neighbor `j` with probability
    /// proportional to `1/sqrt(d_j)`.
    Ad,
    /// Minimum-degree weighting: probability proportional to
    /// `1/min(d_i, d_j)`.
    Mdw,
    /// Random walk with choice: draw `choices` neighbors with replacement,
    /// move to the one minimizing `(visits + 1)/degree`.
    Rwc {
        /// Number of neighbor draws per step (`d ≥ 1`).
        choices: u32,
    },
    /// Budgeted minimum-degree walk: among unvisited neighbors, inspect at
    /// most `budget` of them and move to the minimum-degree one; SRW
    /// fallback when every neighbor is visited.
    Md {
        /// Sample budget per decision (`B ≥ 1`).
        budget: u32,
    },
    /// Extension (not part of the baseline set): sequential
    /// secretary-style inspection of unvisited neighbors with an optimal
    /// stopping cutoff under the given reward weight; SRW fallback.
    Secretary {
        /// Reward weight that determines the stopping cutoff.
        weight: Weight,
    },
}

impl StrategySpec {
    /// Parses the stable string form.
    pub fn parse(text: &str) -> Result<Self> {
        let invalid = |expected: &'static str| Error::InvalidParameter {
            name: "strategy",
            value: text.to_string(),
            expected,
        };
        match text {
            "srw" => return Ok(Self::Srw),
            "ep" => return Ok(Self::Ep),
            "ad" => return Ok(Self::Ad),
            "mdw" => return Ok(Self::Mdw),
            _ => {}
        }
        if let Some(rest) = text.strip_prefix("rwc:d=") {
            let choices: u32 = rest.parse().map_err(|_| invalid("rwc:d=<int >= 1>"))?;
            return Self::rwc(choices);
        }
        if let Some(rest) = text.strip_prefix("md:B=") {
            let budget: u32 = rest.parse().map_err(|_| invalid("md:B=<int >= 1>"))?;
            return Self::md(budget);
        }
        if let Some(rest) = text.strip_prefix("secretary:") {
            if let Some(c) = rest.strip_prefix("c=") {
                let c: f64 = c.parse().map_err(|_| invalid("secretary:c=<real > 0>"))?;
                return Ok(Self::Secretary { weight: Weight::constant(c)? });
            }
            if let Some(theta) = rest.strip_prefix("theta=") {
                let theta: f64 =
                    theta.parse().map_err(|_| invalid("secretary:theta=<real > 0>"))?;
                return Ok(Self::Secretary { weight: Weight::exponential(theta)? });
            }
        }
        Err(invalid("srw | ep | ad | mdw | rwc:d=<n> | md:B=<n> | secretary:{c,theta}=<x>"))
    }

    /// RWC with `choices ≥ 1` draws per step.
    pub fn rwc(choices: u32) -> Result<Self> {
        if choices >= 1 {
            Ok(Self::Rwc { choices })
        } else {
            Err(Error::InvalidParameter {
                name: "choices",
                value: choices.to_string(),
                expected: "d >= 1",
            })
        }
    }

    /// MD with `budget ≥ 1` inspections per decision.
    pub fn md(budget: u32) -> Result<Self> {
        if budget >= 1 {
            Ok(Self::Md { budget })
        } else {
            Err(Error::InvalidParameter {
                name: "budget",
                value: budget.to_string(),
                expected: "B >= 1",
            })
        }
    }

    /// True when the next-step distribution depends only on the current
    /// node, making the walk a finite Markov chain on nodes.
    #[must_use]
    pub fn is_memoryless(&self) -> bool {
        matches!(self, Self::Srw | Self::Ad | Self::Mdw)
    }

    /// True for strategies beyond the baseline comparison set.
    #[must_use]
    pub fn is_extension(&self) -> bool {
        matches!(self, Self::Secretary { .. })
    }
}

impl std::fmt::Display for StrategySpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::Srw => write!(f, "srw"),
            Self::Ep => write!(f, "ep"),
            Self::Ad => write!(f, "ad"),
            Self::Mdw => write!(f, "mdw"),
            Self::Rwc { choices } => write!(f, "rwc:d={choices}"),
            Self::Md { budget } => write!(f, "md:B={budget}"),
            Self::Secretary { weight } => match weight {
                Weight::Constant(c) => write!(f, "secretary:c={c}"),
                Weight::Exponential { theta } => write!(f, "secretary:theta={theta}"),
            },
        }
    }
}

/// Uniform transition row of the simple random walk at `i`.
#[must_use]
pub fn srw_transition_row(g: &Graph, i: NodeId) -> Vec<f64> {
    let d = g.degree(i);
    vec![1.0 / d as f64; d]
}

/// Transition row at `i` with probabilities proportional to
/// `1/sqrt(d_j)` over the neighbors `j`.
#[must_use]
pub fn ad_transition_row(g: &Graph, i: NodeId) -> Vec<f64> {
    let weights: Vec<f64> =
        g.neighbors(i).iter().map(|&j| 1.0 / (g.degree(j) as f64).sqrt()).collect();
    normalize(weights)
}

/// Transition row at `i` with probabilities proportional to
/// `1/min(d_i, d_j)` over the neighbors `j`.
#[must_use]
pub fn mdw_transition_row(g: &Graph, i: NodeId) -> Vec<f64> {
    let di = g.degree(i);
    let weights: Vec<f64> =
        g.neighbors(i).iter().map(|&j| 1.0 / di.min(g.degree(j)) as f64).collect();
    normalize(weights)
}

/// Transition row of a memoryless strategy, parallel to `g.neighbors(i)`.
///
/// # Errors
///
/// [`Error::HistoryDependent`] for EP, RWC, MD, and the secretary walk.
pub fn transition_row(g: &Graph, spec: &StrategySpec, i: NodeId) -> Result<Vec<f64>> {
    match spec {
        StrategySpec::Srw => Ok(srw_transition_row(g, i)),
        StrategySpec::Ad => Ok(ad_transition_row(g, i)),
        StrategySpec::Mdw => Ok(mdw_transition_row(g, i)),
        other => Err(Error::HistoryDependent { strategy: other.to_string() }),
    }
}

fn normalize(mut weights: Vec<f64>) -> Vec<f64> {
    let total: f64 = weights.iter().sum();
    for w in &mut weights {
        *w /= total;
    }
    weights
}
