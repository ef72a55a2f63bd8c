use alloc::vec;
use alloc::vec::Vec;

use num_traits::Zero;

use crate::error::SolveError;
use crate::flow::{min_cost_flow_between, CapacityProfile};
use crate::graph::{trace_path, Adjacency};
use crate::instance::{ArcSet, Instance, VertexId, Weight};

/// A realizable `u`-`v` connection and its price.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Segment {
    pub cost: Weight,
    pub arcs: ArcSet,
}

/// All-pairs lengths `l1` (safe-only shortest path) and `l2` (a flow-based
/// certificate), with the arc sets realizing them.
#[derive(Debug, Clone)]
pub struct BipathMetric {
    n: usize,
    l1: Vec<Option<Segment>>,
    l2: Vec<Option<Segment>>,
}

impl BipathMetric {
    /// `l2(u, v)` is whatever `segment` returns for the pair, priced by the
    /// weight of its arcs.
    pub fn build(inst: &Instance, mut segment: impl FnMut(VertexId, VertexId) -> Option<ArcSet>) -> Self {
        let n = inst.vertex_count();
        let adj = Adjacency::new(inst);
        let mut l1 = vec![None; n * n];
        let mut l2 = vec![None; n * n];
        for u in 0..n {
            let (dist, pred) = adj.shortest_paths(u, |id| !inst.is_vulnerable(id), |id| inst.weight(id));
            let reach = adj.reachable(u, |_| true);
            for v in 0..n {
                if u == v {
                    continue;
                }
                if let Some(cost) = dist[v] {
                    let path = trace_path(inst, &pred, u, v).expect("reached vertex has a path");
                    l1[u * n + v] = Some(Segment { cost, arcs: ArcSet::from_ids(inst, path) });
                }
                if reach[v] {
                    l2[u * n + v] = segment(u, v).map(|arcs| Segment { cost: arcs.cost(), arcs });
                }
            }
        }
        BipathMetric { n, l1, l2 }
    }

    /// The 1-FTP metric: `l2` is the cheapest pair of arc-disjoint paths.
    pub fn for_1ftp(inst: &Instance) -> Self {
        let unit = CapacityProfile::unit(inst);
        Self::build(inst, |u, v| min_cost_flow_between(inst, &unit, u, v, 2).ok().map(|f| f.support))
    }

    pub fn l1(&self, u: VertexId, v: VertexId) -> Option<&Segment> {
        self.l1[u * self.n + v].as_ref()
    }

    pub fn l2(&self, u: VertexId, v: VertexId) -> Option<&Segment> {
        self.l2[u * self.n + v].as_ref()
    }

    /// `min(l1, l2)`; ties prefer `l1`.
    pub fn best(&self, u: VertexId, v: VertexId) -> Option<&Segment> {
        match (self.l1(u, v), self.l2(u, v)) {
            (Some(a), Some(b)) => Some(if b.cost < a.cost { b } else { a }),
            (a, b) => a.or(b),
        }
    }

    /// Shortest `from`-`to` path in the complete metric digraph, returning
    /// the union of its segments.
    pub fn route(&self, inst: &Instance, from: VertexId, to: VertexId) -> Option<ArcSet> {
        let n = self.n;
        let mut dist: Vec<Option<Weight>> = vec![None; n];
        let mut pred: Vec<Option<VertexId>> = vec![None; n];
        let mut done = vec![false; n];
        dist[from] = Some(Weight::zero());
        loop {
            let Some(u) = (0..n).filter(|&v| !done[v] && dist[v].is_some()).min_by_key(|&v| dist[v]) else {
                break;
            };
            done[u] = true;
            if u == to {
                break;
            }
            let du = dist[u].unwrap();
            for v in 0..n {
                if done[v] || v == u {
                    continue;
                }
                if let Some(seg) = self.best(u, v) {
                    let nd = du + seg.cost;
                    if dist[v].map_or(true, |old| nd < old) {
                        dist[v] = Some(nd);
                        pred[v] = Some(u);
                    }
                }
            }
        }
        dist[to]?;
        let mut ids = Vec::new();
        let mut v = to;
        while v != from {
            let u = pred[v]?;
            ids.extend_from_slice(self.best(u, v)?.arcs.ids());
            v = u;
        }
        Some(ArcSet::from_ids(inst, ids))
    }
}

/// Exact 1-FTP: a shortest path over the metric `min(l1, l2)` where `l2` is
/// the cheapest pair of arc-disjoint paths.
///
/// ```
/// use ftnet_core::{ftp::solve_1ftp, InstanceBuilder, Mode, Weight};
/// let inst = InstanceBuilder::new(Mode::Ftp { k: 1 })
///     .arc("s", "t", 1, true)
///     .arc("s", "t", 1, true)
///     .arc("s", "t", 1, true)
///     .build()
///     .unwrap();
/// assert_eq!(solve_1ftp(&inst).unwrap().cost(), Weight::from_integer(2));
/// ```
pub fn solve_1ftp(inst: &Instance) -> Result<ArcSet, SolveError> {
    let k = super::expect_ftp(inst)?;
    if k != 1 {
        return Err(SolveError::ModeMismatch(alloc::format!("1-FTP solver needs k = 1, got k = {k}")));
    }
    BipathMetric::for_1ftp(inst)
        .route(inst, inst.source(), inst.sink())
        .ok_or_else(|| super::infeasible(inst, 1))
}
