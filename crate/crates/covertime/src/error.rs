//! Crate-wide error type.
//!
//! Every fallible operation in this crate returns [`Result`]. Variants are
//! grouped by origin: input parsing, graph construction, parameter
//! validation, and the exact-oracle preconditions.

use thiserror::Error;

/// Errors produced by graph construction, estimation, and analysis.
#[derive(Debug, Error)]
pub enum Error {
    /// An edge-list line could not be parsed.
    #[error("edge list line {line}: {message}")]
    Parse {
        /// 1-based line number in the input stream.
        line: usize,
        /// What went wrong on that line.
        message: String,
    },

    /// The input contained no usable edges.
    #[error("graph has no nodes")]
    EmptyGraph,

    /// Strict construction rejected a disconnected edge set.
    ///
    /// `load_edge_list` never reports this: it keeps the largest component
    /// instead. Direct constructors (`Graph::from_edges`, generators) treat
    /// disconnection as a caller bug.
    #[error("graph is not connected: {reachable} of {n} nodes reachable from node 0")]
    Disconnected {
        /// Nodes reachable from node 0.
        reachable: usize,
        /// Total node count.
        n: usize,
    },

    /// A self-loop was passed to a strict constructor.
    #[error("self-loop at node {node}")]
    SelfLoop {
        /// Offending node.
        node: u32,
    },

    /// A duplicate edge was passed to a strict constructor.
    #[error("parallel edge {u}-{v}")]
    ParallelEdge {
        /// Smaller endpoint.
        u: u32,
        /// Larger endpoint.
        v: u32,
    },

    /// An out-of-range or malformed parameter.
    #[error("parameter {name} = {value}: expected {expected}")]
    InvalidParameter {
        /// Parameter name as the caller knows it.
        name: &'static str,
        /// Value actually supplied, rendered for the message.
        value: String,
        /// Constraint that was violated.
        expected: &'static str,
    },

    /// A node id outside `0..n` was supplied.
    #[error("node {node} out of range for graph with {n} nodes")]
    NodeOutOfRange {
        /// Offending id.
        node: u32,
        /// Node count of the graph.
        n: usize,
    },

    /// An exact oracle was asked about a walk with memory.
    ///
    /// Walks that condition on visited nodes or edges (EP, RWC, MD,
    /// secretary) have no node-level transition matrix, so the linear-solve
    /// oracles cannot apply.
    #[error("{strategy} is history-dependent: no node-level transition matrix exists")]
    HistoryDependent {
        /// Display form of the rejected strategy.
        strategy: String,
    },

    /// The graph exceeds the configured oracle size limit.
    #[error("graph has {n} nodes, oracle limit is {limit}")]
    OracleTooLarge {
        /// Node count of the graph.
        n: usize,
        /// Configured limit.
        limit: usize,
    },

    /// A linear system arising from the transition matrix had no solution.
    #[error("singular linear system while solving {context}")]
    SingularSystem {
        /// Which solve failed.
        context: &'static str,
    },

    /// Every trial hit the step cap before reaching a requested threshold,
    /// leaving no data to average.
    #[error("all {trials} trials hit the step cap before covering tau = {tau}")]
    AllTrialsTruncated {
        /// The coverage fraction that was never reached.
        tau: f64,
        /// Number of trials attempted.
        trials: usize,
    },

    /// Underlying I/O failure.
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
