use alloc::vec::Vec;

use crate::error::SolveError;
use crate::flow::{min_cost_flow, CapacityProfile};
use crate::graph::strongly_connected_components;
use crate::instance::{ArcId, ArcSet, Instance, VertexId};

/// `ell` arc-disjoint `s`-`t` paths covering a base solution `X0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathSystem {
    /// Arc sequence of each path.
    pub paths: Vec<Vec<ArcId>>,
    /// `vertices[i][p]` is the vertex at position `p` of path `i`
    /// (position 0 is `s`).
    pub vertices: Vec<Vec<VertexId>>,
    /// Arcs of `X0` on no path; they are offered again at cost 0.
    pub stray: Vec<ArcId>,
    /// The base set as given.
    pub base: ArcSet,
}

impl PathSystem {
    /// Decomposes `x0` into `ell` arc-disjoint paths with a unit-capacity
    /// min-cost flow inside `x0` (lowest arc id on ties).
    pub fn from_arcs(inst: &Instance, x0: &ArcSet, ell: usize) -> Result<Self, SolveError> {
        let caps = CapacityProfile::unit_on(inst, x0);
        let flow = match min_cost_flow(inst, &caps, ell as u64) {
            Ok(f) => f,
            Err(SolveError::FlowInfeasible { .. }) => {
                return Err(SolveError::InvalidParameter(alloc::format!(
                    "base set does not contain {ell} arc-disjoint s-t paths"
                )))
            }
            Err(e) => return Err(e),
        };
        let paths: Vec<Vec<ArcId>> = flow.decomposition.into_iter().map(|p| p.arcs).collect();
        let vertices = paths
            .iter()
            .map(|p| {
                let mut vs = alloc::vec![inst.source()];
                vs.extend(p.iter().map(|&id| inst.arc(id).head));
                vs
            })
            .collect();
        let on_path = ArcSet::from_ids(inst, paths.iter().flatten().copied());
        let stray = x0.difference(&on_path, inst).ids().to_vec();
        Ok(PathSystem { paths, vertices, stray, base: x0.clone() })
    }

    pub fn ell(&self) -> usize {
        self.paths.len()
    }

    /// Arc count of path `i`.
    pub fn len(&self, i: usize) -> usize {
        self.paths[i].len()
    }

    pub fn is_empty(&self) -> bool {
        self.paths.is_empty()
    }

    /// Whether `arc` lies on some path.
    pub fn on_path(&self, arc: ArcId) -> bool {
        self.paths.iter().any(|p| p.contains(&arc))
    }
}

/// Residual test: with path arcs reversed and `y` plus stray arcs forward,
/// every vulnerable path arc must have both endpoints in one strongly
/// connected component.
pub fn residual_feasibility_check(inst: &Instance, ps: &PathSystem, y: &ArcSet) -> bool {
    let mut edges: Vec<(usize, usize)> = Vec::new();
    for &id in ps.paths.iter().flatten() {
        let a = inst.arc(id);
        edges.push((a.head, a.tail));
    }
    for &id in y.ids().iter().chain(&ps.stray) {
        if !ps.on_path(id) {
            let a = inst.arc(id);
            edges.push((a.tail, a.head));
        }
    }
    let comp = strongly_connected_components(inst.vertex_count(), &edges);
    ps.paths.iter().flatten().all(|&id| {
        let a = inst.arc(id);
        !a.vulnerable || comp[a.tail] == comp[a.head]
    })
}
