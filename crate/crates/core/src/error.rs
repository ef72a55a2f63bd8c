use alloc::string::String;

use crate::instance::ArcSet;

/// Violations of the [`Instance`](crate::Instance) invariants.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum InstanceError {
    #[error("negative weight on arc {arc}")]
    NegativeWeight { arc: usize },
    #[error("unknown vertex '{name}'")]
    UnknownVertex { name: String },
    #[error("duplicate vertex '{name}'")]
    DuplicateVertex { name: String },
    #[error("self-loop on arc {arc}")]
    SelfLoop { arc: usize },
    #[error("source and sink are the same vertex")]
    SourceIsSink,
    #[error("ell must be at least 1")]
    ZeroEll,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SolveError {
    /// The instance admits no feasible solution. `witness` is a fault
    /// scenario (possibly empty) that defeats the whole arc set.
    #[error("instance is infeasible (witness scenario {:?})", witness.ids())]
    Infeasible { witness: ArcSet },
    /// A flow of the requested value does not exist; `cut` is a minimum cut
    /// whose capacity is below the target.
    #[error("flow of value {target} is infeasible (max flow {max_flow})")]
    FlowInfeasible { target: u64, max_flow: u64, cut: ArcSet },
    #[error("{what} budget exceeded (limit {limit})")]
    BudgetExceeded { what: &'static str, limit: usize },
    #[error("graph contains a directed cycle")]
    Cyclic,
    #[error("not series-parallel: {0}")]
    NotSeriesParallel(String),
    #[error("malformed series-parallel tree: {0}")]
    MalformedTree(String),
    #[error("algorithm/mode mismatch: {0}")]
    ModeMismatch(String),
    #[error("solver requires a directed instance")]
    Undirected,
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

/// Caps on the exponential parts of the solvers and oracles. Exceeding a cap
/// aborts with [`SolveError::BudgetExceeded`] instead of degrading silently.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    /// Configurations materialised by the DAG algorithm.
    pub configurations: usize,
    /// Nodes of the augmentation auxiliary graph.
    pub aux_nodes: usize,
    /// Arcs an exhaustive oracle may branch on.
    pub oracle_arcs: usize,
    /// Fault scenarios an enumeration verifier may visit.
    pub scenarios: usize,
    /// Terminal pairs accepted by the Steiner network solver.
    pub dsn_pairs: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            configurations: 200_000,
            aux_nodes: 20_000,
            oracle_arcs: 24,
            scenarios: 2_000_000,
            dsn_pairs: 3,
        }
    }
}

impl Budget {
    /// Scales every cap by `factor` (used by the CLI `--budget` flag).
    pub fn scaled(factor: usize) -> Self {
        let factor = factor.max(1);
        let d = Budget::default();
        Budget {
            configurations: d.configurations.saturating_mul(factor),
            aux_nodes: d.aux_nodes.saturating_mul(factor),
            oracle_arcs: d.oracle_arcs + factor.ilog2() as usize,
            scenarios: d.scenarios.saturating_mul(factor),
            dsn_pairs: d.dsn_pairs,
        }
    }
}
