use alloc::collections::{BTreeMap, BTreeSet, BinaryHeap};
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Reverse;

use num_traits::Zero;

use super::PathSystem;
use crate::dsn::{dsn_solve, DsnArc, DsnInstance};
use crate::error::{Budget, SolveError};
use crate::graph::strongly_connected_components;
use crate::instance::{ArcId, ArcSet, Instance, Weight};

/// One position per path.
pub type AuxNode = Vec<usize>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LinkKind {
    /// Advances along safe arcs only, free.
    A1,
    /// Covers vulnerable stretches with a Steiner network.
    A2,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AuxLink {
    pub from: AuxNode,
    pub to: AuxNode,
    pub kind: LinkKind,
    pub weight: Weight,
    /// Original arcs bought for an A2 link.
    pub payload: Vec<ArcId>,
}

/// When an A2 link's Steiner solution is accepted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LinkRule {
    /// Any feasible solution: each `(x_i, y_i)` path closes a cycle with
    /// the reversed stretch.
    Pairwise,
    /// Additionally all endpoints of vulnerable stretches share one
    /// strongly connected component.
    #[default]
    SingleComponent,
}

/// Lazily evaluated auxiliary graph over position tuples.
pub struct AuxGraph<'a> {
    inst: &'a Instance,
    ps: &'a PathSystem,
    budget: Budget,
    rule: LinkRule,
    /// Arcs available to Steiner instances: everything off the paths, with
    /// stray base arcs at cost 0.
    free_arcs: Vec<(ArcId, Weight)>,
    memo: BTreeMap<(Vec<(usize, usize)>, Vec<ArcId>), Option<(Weight, Vec<ArcId>)>>,
    pub dsn_calls: usize,
}

/// Builds the (lazy) auxiliary graph for `ps`.
pub fn build_aux_graph<'a>(inst: &'a Instance, ps: &'a PathSystem, budget: &Budget, rule: LinkRule) -> AuxGraph<'a> {
    let stray: BTreeSet<ArcId> = ps.stray.iter().copied().collect();
    let free_arcs = (0..inst.arcs().len())
        .filter(|&id| !ps.on_path(id))
        .map(|id| (id, if stray.contains(&id) { Weight::zero() } else { inst.weight(id) }))
        .collect();
    AuxGraph { inst, ps, budget: *budget, rule, free_arcs, memo: BTreeMap::new(), dsn_calls: 0 }
}

impl AuxGraph<'_> {
    pub fn start(&self) -> AuxNode {
        vec![0; self.ps.ell()]
    }

    pub fn goal(&self) -> AuxNode {
        (0..self.ps.ell()).map(|i| self.ps.len(i)).collect()
    }

    fn stretch_vulnerable(&self, i: usize, from: usize, to: usize) -> bool {
        self.ps.paths[i][from..to].iter().any(|&id| self.inst.is_vulnerable(id))
    }

    /// All links leaving `x`: A1 links to immediate successor tuples and A2
    /// links to every larger tuple with a vulnerable stretch.
    pub fn successors(&mut self, x: &AuxNode) -> Result<Vec<AuxLink>, SolveError> {
        let ell = self.ps.ell();
        let mut links = Vec::new();

        let movable: Vec<usize> =
            (0..ell).filter(|&i| x[i] < self.ps.len(i) && !self.stretch_vulnerable(i, x[i], x[i] + 1)).collect();
        for mask in 1u32..(1 << movable.len()) {
            let mut y = x.clone();
            for (b, &i) in movable.iter().enumerate() {
                if mask >> b & 1 == 1 {
                    y[i] += 1;
                }
            }
            links.push(AuxLink { from: x.clone(), to: y, kind: LinkKind::A1, weight: Weight::zero(), payload: Vec::new() });
        }

        let mut y = x.clone();
        loop {
            // odometer over y >= x
            let mut i = 0;
            while i < ell {
                if y[i] < self.ps.len(i) {
                    y[i] += 1;
                    break;
                }
                y[i] = x[i];
                i += 1;
            }
            if i == ell {
                break;
            }
            if !(0..ell).any(|i| self.stretch_vulnerable(i, x[i], y[i])) {
                continue;
            }
            if let Some((weight, payload)) = self.evaluate(x, &y)? {
                links.push(AuxLink { from: x.clone(), to: y.clone(), kind: LinkKind::A2, weight, payload });
            }
        }
        Ok(links)
    }

    /// Steiner instance for the link `x -> y`: free arcs forward plus the
    /// reversed stretches at cost 0, one pair per moved coordinate.
    fn evaluate(&mut self, x: &AuxNode, y: &AuxNode) -> Result<Option<(Weight, Vec<ArcId>)>, SolveError> {
        let ps = self.ps;
        let inst = self.inst;
        let mut pairs = Vec::new();
        let mut reversed = Vec::new();
        for i in 0..ps.ell() {
            if x[i] != y[i] {
                pairs.push((ps.vertices[i][x[i]], ps.vertices[i][y[i]]));
                reversed.extend_from_slice(&ps.paths[i][x[i]..y[i]]);
            }
        }
        let mut key_rev = reversed.clone();
        key_rev.sort_unstable();
        let key = (pairs.clone(), key_rev);
        if let Some(hit) = self.memo.get(&key) {
            return Ok(hit.clone());
        }

        let mut arcs: Vec<DsnArc> = self
            .free_arcs
            .iter()
            .map(|&(id, cost)| DsnArc { tail: inst.arc(id).tail, head: inst.arc(id).head, cost })
            .collect();
        let forward_count = arcs.len();
        for &id in &reversed {
            let a = inst.arc(id);
            arcs.push(DsnArc { tail: a.head, head: a.tail, cost: Weight::zero() });
        }
        let d = DsnInstance { vertex_count: inst.vertex_count(), arcs, pairs: pairs.clone() };
        self.dsn_calls += 1;
        let result = match dsn_solve(&d, &self.budget) {
            Ok(sol) => {
                let accept = match self.rule {
                    LinkRule::Pairwise => true,
                    LinkRule::SingleComponent => {
                        let edges: Vec<(usize, usize)> = sol
                            .arcs
                            .iter()
                            .map(|&e| (d.arcs[e].tail, d.arcs[e].head))
                            .chain((forward_count..d.arcs.len()).map(|e| (d.arcs[e].tail, d.arcs[e].head)))
                            .collect();
                        let comp = strongly_connected_components(inst.vertex_count(), &edges);
                        let mut ends = (0..ps.ell())
                            .filter(|&i| self.stretch_vulnerable(i, x[i], y[i]))
                            .flat_map(|i| [ps.vertices[i][x[i]], ps.vertices[i][y[i]]]);
                        let first = ends.next().map(|v| comp[v]);
                        ends.all(|v| Some(comp[v]) == first)
                    }
                };
                let payload: Vec<ArcId> =
                    sol.arcs.iter().filter(|&&e| e < forward_count).map(|&e| self.free_arcs[e].0).collect();
                accept.then_some((sol.cost, payload))
            }
            Err(SolveError::Infeasible { .. }) => None,
            Err(e) => return Err(e),
        };
        self.memo.insert(key, result.clone());
        Ok(result)
    }
}

/// Cheapest `Y` outside `X0` making `X0 ∪ Y` survive any single vulnerable
/// failure with `ell` disjoint paths, by a shortest path through the
/// auxiliary graph.
pub fn solve_augmentation(
    inst: &Instance,
    ps: &PathSystem,
    budget: &Budget,
    rule: LinkRule,
) -> Result<ArcSet, SolveError> {
    if !inst.directed() {
        return Err(SolveError::Undirected);
    }
    let mut graph = build_aux_graph(inst, ps, budget, rule);
    let start = graph.start();
    let goal = graph.goal();

    let mut dist: BTreeMap<AuxNode, Weight> = BTreeMap::new();
    let mut pred: BTreeMap<AuxNode, (AuxNode, Vec<ArcId>)> = BTreeMap::new();
    let mut done: BTreeSet<AuxNode> = BTreeSet::new();
    let mut heap = BinaryHeap::new();
    dist.insert(start.clone(), Weight::zero());
    heap.push(Reverse((Weight::zero(), start.clone())));
    while let Some(Reverse((d, x))) = heap.pop() {
        if !done.insert(x.clone()) {
            continue;
        }
        if x == goal {
            break;
        }
        for link in graph.successors(&x)? {
            if done.contains(&link.to) {
                continue;
            }
            let nd = d + link.weight;
            if dist.get(&link.to).map_or(true, |&old| nd < old) {
                if !dist.contains_key(&link.to) && dist.len() >= budget.aux_nodes {
                    return Err(SolveError::BudgetExceeded { what: "auxiliary node", limit: budget.aux_nodes });
                }
                dist.insert(link.to.clone(), nd);
                pred.insert(link.to.clone(), (x.clone(), link.payload));
                heap.push(Reverse((nd, link.to)));
            }
        }
    }
    if !done.contains(&goal) {
        return Err(SolveError::Infeasible { witness: ArcSet::empty() });
    }
    let mut ids = Vec::new();
    let mut at = goal;
    while at != start {
        let (prev, payload) = pred.remove(&at).expect("reached node has a predecessor");
        ids.extend(payload);
        at = prev;
    }
    Ok(ArcSet::from_ids(inst, ids).difference(&ps.base, inst))
}
