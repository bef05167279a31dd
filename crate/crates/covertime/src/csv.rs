//! CSV renderings of estimation and analysis results.
//!
//! Headers are part of the output contract consumed by downstream
//! tooling; change them and every parser breaks. Floats print through
//! Rust's shortest round-trip formatting, so equal inputs always render
//! to identical bytes.

use crate::budget::StratumReport;
use crate::estimator::CurvePoint;
use crate::graph::Graph;
use crate::stats::GraphSummary;
use crate::strategy::StrategySpec;

/// Header of partial-cover-time curve files.
pub const CURVE_HEADER: &str = "strategy,tau,rho,c_tau,stddev,trials,n,m,truncated";

/// Header of budget success-probability files.
pub const BUDGET_HEADER: &str = "graph,B,p,decision_points";

/// Header of graph statistics files.
pub const STATS_HEADER: &str = "n,m,clustering,diameter,diameter_exact";

/// Header of stopping-rule reward curves.
pub const STOPPING_HEADER: &str = "r,expected_reward";

/// Renders estimated curves, one row per strategy and coverage fraction.
#[must_use]
pub fn curve_csv(g: &Graph, curves: &[(StrategySpec, Vec<CurvePoint>)]) -> String {
    let mut out = String::from(CURVE_HEADER);
    out.push('\n');
    for (spec, points) in curves {
        for p in points {
            out.push_str(&format!(
                "{spec},{},{},{},{},{},{},{},{}\n",
                p.tau,
                p.rho,
                p.c_tau,
                p.stddev,
                p.trials,
                g.n(),
                g.m(),
                p.truncated
            ));
        }
    }
    out
}

/// Renders one aggregate row per probed budget: each row's `p` pools
/// every decision point of every stratum observed at that budget.
#[must_use]
pub fn budget_csv(graph_label: &str, grid: &[(u32, Vec<StratumReport>)]) -> String {
    let mut out = String::from(BUDGET_HEADER);
    out.push('\n');
    for (budget, reports) in grid {
        let samples: u64 = reports.iter().map(|r| r.samples).sum();
        let hits: u64 = reports.iter().map(|r| r.hits).sum();
        let p = if samples == 0 { 0.0 } else { hits as f64 / samples as f64 };
        out.push_str(&format!(
            "{},{budget},{p},{samples}\n",
            quote_field(graph_label)
        ));
    }
    out
}

/// Quotes a field when it would break the row (generator labels carry
/// commas, e.g. `mesh3d:2,3,4`).
fn quote_field(field: &str) -> String {
    if field.contains([',', '"', '\n']) {
        format!("\"{}\"", field.replace('"', "\"\""))
    } else {
        field.to_owned()
    }
}

/// Renders a one-row statistics file.
#[must_use]
pub fn stats_csv(s: &GraphSummary) -> String {
    format!(
        "{STATS_HEADER}\n{},{},{},{},{}\n",
        s.n, s.m, s.clustering, s.diameter.value, s.diameter.exact
    )
}

/// Renders a stopping-rule reward curve from `(cutoff, reward)` rows.
#[must_use]
pub fn stopping_csv(rows: &[(u32, f64)]) -> String {
    let mut out = String::from(STOPPING_HEADER);
    out.push('\n');
    for (r, reward) in rows {
        out.push_str(&format!("{r},{reward}\n"));
    }
    out
}
