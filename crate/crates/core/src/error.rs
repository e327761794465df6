use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A graph must have at least one arm.
    #[error("arm count must be positive")]
    EmptyGraph,

    /// An arm label fell outside `1..=n`.
    #[error("arm label {label} outside 1..={n}")]
    InvalidVertexLabel { label: usize, n: usize },

    /// The edge relation contains a directed cycle; one offending cycle is
    /// reported in examination order.
    #[error("precedence cycle detected: {}", format_cycle(cycle))]
    CycleDetected { cycle: Vec<usize> },

    /// Exhaustive enumeration was requested above the size guard.
    #[error("instance too large for exhaustive search: n = {n} exceeds limit {limit}")]
    InstanceTooLarge { n: usize, limit: usize },

    /// A parameter vector does not match the arm count in play.
    #[error("dimension mismatch: expected {expected} entries, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    /// A parameter entry violates non-negativity (or a length invariant).
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),

    /// An operation requiring true (simplex) parameters received estimates.
    #[error("operation requires true parameters (weights on the simplex, positive costs)")]
    NonTrueParameters,

    /// Smith's rule applies to edgeless graphs only.
    #[error("Smith's rule requires an edgeless graph")]
    NotEdgeless,

    /// No exact scheduling strategy covers this graph at this size.
    #[error(
        "no scheduling strategy available: graph has edges and n = {n} exceeds the exhaustive limit {limit}"
    )]
    StrategyUnavailable { n: usize, limit: usize },

    /// Observation vectors disagree with the selected search shape.
    #[error("observation length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    /// The round guard tripped (zero-cost loop protection).
    #[error("round guard tripped after {limit} rounds without exhausting the budget")]
    MaxRoundsExceeded { limit: u64 },

    /// A DAG text file failed to parse.
    #[error("dag file parse error at line {line}: {msg}")]
    DagFileParse { line: usize, msg: String },
}

fn format_cycle(cycle: &[usize]) -> String {
    let mut s = String::new();
    for (i, v) in cycle.iter().enumerate() {
        if i > 0 {
            s.push_str(" -> ");
        }
        s.push_str(&v.to_string());
    }
    if let Some(first) = cycle.first() {
        s.push_str(&format!(" -> {first}"));
    }
    s
}
