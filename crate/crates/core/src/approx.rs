//! Flow-based approximation algorithms for general directed FTP.

use crate::error::SolveError;
use crate::flow::{min_cost_flow, min_cost_flow_between, Capacity, CapacityProfile};
use crate::ftp::{expect_ftp, infeasible, BipathMetric};
use crate::instance::{ArcSet, Instance};

/// Support of a min-cost `(k+1)`-flow with capacity 1 on vulnerable and
/// `k+1` on safe arcs. Cost is at most `(k+1) * OPT`.
pub fn approx_ftp_kplus1(inst: &Instance) -> Result<ArcSet, SolveError> {
    let k = expect_ftp(inst)?;
    let units = k as u64 + 1;
    let caps = CapacityProfile::split(inst, Capacity::Finite(1), Capacity::Finite(units));
    match min_cost_flow(inst, &caps, units) {
        Ok(f) => Ok(f.support),
        Err(SolveError::FlowInfeasible { .. }) => Err(infeasible(inst, k)),
        Err(e) => Err(e),
    }
}

/// Shortest path over `min(l1, l2)` where `l1` is the safe-only distance
/// and `l2` the support weight of a min-cost `(k+1)`-flow with capacity 1
/// on vulnerable and `k` on safe arcs. Cost is at most `k * OPT`.
pub fn approx_ftp_k(inst: &Instance) -> Result<ArcSet, SolveError> {
    let k = expect_ftp(inst)?;
    if k == 0 {
        return Err(SolveError::InvalidParameter("the k-approximation needs k >= 1".into()));
    }
    let caps = CapacityProfile::split(inst, Capacity::Finite(1), Capacity::Finite(k as u64));
    let metric = BipathMetric::build(inst, |u, v| {
        min_cost_flow_between(inst, &caps, u, v, k as u64 + 1).ok().map(|f| f.support)
    });
    metric.route(inst, inst.source(), inst.sink()).ok_or_else(|| infeasible(inst, k))
}
