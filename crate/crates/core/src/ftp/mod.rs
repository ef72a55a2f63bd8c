//! Exact FTP solvers: `k = 1` on general digraphs, any `k` on DAGs, and any
//! `k` on series-parallel graphs.

mod bipath;
mod dag;
mod series_parallel;

pub use bipath::{solve_1ftp, BipathMetric, Segment};
pub use dag::{compute_link_cost, solve_kftp_dag, solve_kftp_dag_with, Configuration};
pub use series_parallel::{oriented_instance, solve_ftp_series_parallel, sp_recognize, SpNode, SpTree};

use crate::error::SolveError;
use crate::feasibility::ftp_feasible_cut_k;
use crate::instance::{ArcSet, Instance, Mode};

/// Infeasibility error carrying the cut witness of the whole arc set.
pub(crate) fn infeasible(inst: &Instance, k: usize) -> SolveError {
    let witness = ftp_feasible_cut_k(inst, &inst.all_arcs(), k).witness.unwrap_or_default();
    SolveError::Infeasible { witness }
}

/// Requires a directed FTP instance and returns its `k`.
pub(crate) fn expect_ftp(inst: &Instance) -> Result<usize, SolveError> {
    if !inst.directed() {
        return Err(SolveError::Undirected);
    }
    match inst.mode() {
        Mode::Ftp { k } => Ok(k),
        Mode::Ftf { .. } => Err(SolveError::ModeMismatch("expected an FTP instance".into())),
    }
}

/// Drops arcs (most expensive first, then highest id) while the set stays
/// feasible for `k`.
pub(crate) fn minimalize(inst: &Instance, set: &ArcSet, k: usize) -> ArcSet {
    let mut ids = set.ids().to_vec();
    let mut order = ids.clone();
    order.sort_by(|&a, &b| inst.weight(b).cmp(&inst.weight(a)).then(b.cmp(&a)));
    for id in order {
        let trial: alloc::vec::Vec<_> = ids.iter().copied().filter(|&x| x != id).collect();
        let trial_set = ArcSet::from_ids(inst, trial.iter().copied());
        if ftp_feasible_cut_k(inst, &trial_set, k).feasible {
            ids = trial;
        }
    }
    ArcSet::from_ids(inst, ids)
}
