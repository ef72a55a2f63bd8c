//! Integral max-flow and min-cost flow on instance arcs.
//!
//! Capacities are per arc and may be [`Capacity::Unbounded`]. Unbounded arcs
//! are replaced per call by an exact finite surrogate (the total finite
//! capacity plus one for max-flow, the target value for min-cost flow), so
//! the arithmetic stays in `u64` without changing any optimum.

use alloc::collections::BinaryHeap;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Reverse;

use num_traits::Zero;

use crate::error::SolveError;
use crate::graph::Adjacency;
use crate::instance::{Arc, ArcId, ArcSet, Instance, VertexId, Weight};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Capacity {
    Finite(u64),
    Unbounded,
}

impl Capacity {
    fn is_zero(self) -> bool {
        self == Capacity::Finite(0)
    }
}

/// One capacity per instance arc.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CapacityProfile(Vec<Capacity>);

impl CapacityProfile {
    pub fn new(caps: Vec<Capacity>) -> Self {
        CapacityProfile(caps)
    }

    pub fn from_fn(inst: &Instance, f: impl Fn(ArcId, &Arc) -> Capacity) -> Self {
        CapacityProfile(inst.arcs().iter().enumerate().map(|(id, a)| f(id, a)).collect())
    }

    /// Capacity 1 on every arc.
    pub fn unit(inst: &Instance) -> Self {
        Self::from_fn(inst, |_, _| Capacity::Finite(1))
    }

    /// Capacity 1 on the arcs of `set`, 0 elsewhere.
    pub fn unit_on(inst: &Instance, set: &ArcSet) -> Self {
        let mask = inst.mask(set);
        Self::from_fn(inst, |id, _| Capacity::Finite(mask[id] as u64))
    }

    /// `vulnerable` / `safe` capacities on the arcs of `set`, 0 elsewhere.
    pub fn split_on(inst: &Instance, set: &ArcSet, vulnerable: Capacity, safe: Capacity) -> Self {
        let mask = inst.mask(set);
        Self::from_fn(inst, |id, a| match (mask[id], a.vulnerable) {
            (false, _) => Capacity::Finite(0),
            (true, true) => vulnerable,
            (true, false) => safe,
        })
    }

    /// `vulnerable` / `safe` capacities on every arc.
    pub fn split(inst: &Instance, vulnerable: Capacity, safe: Capacity) -> Self {
        Self::from_fn(inst, |_, a| if a.vulnerable { vulnerable } else { safe })
    }

    pub fn get(&self, id: ArcId) -> Capacity {
        self.0[id]
    }

    fn finite_total(&self) -> u64 {
        self.0
            .iter()
            .map(|c| match c {
                Capacity::Finite(v) => *v,
                Capacity::Unbounded => 0,
            })
            .fold(0u64, u64::saturating_add)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum FlowValue {
    Finite(u64),
    Unbounded,
}

impl FlowValue {
    pub fn at_least(self, bound: u64) -> bool {
        match self {
            FlowValue::Finite(v) => v >= bound,
            FlowValue::Unbounded => true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MaxFlow {
    pub value: FlowValue,
    /// Arcs (with positive capacity) leaving the residual-reachable side.
    pub min_cut: ArcSet,
    pub source_side: Vec<bool>,
}

/// An `s`-`t` path carrying `amount` units.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlowPath {
    pub arcs: Vec<ArcId>,
    pub amount: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlowResult {
    pub from: VertexId,
    pub to: VertexId,
    pub flow: Vec<u64>,
    pub value: u64,
    pub cost: Weight,
    pub support: ArcSet,
    pub decomposition: Vec<FlowPath>,
}

struct Edge {
    to: usize,
    cap: u64,
    rev: usize,
    cost: Weight,
}

/// Residual network over instance arcs.
struct Residual {
    adj: Vec<Vec<Edge>>,
    /// (vertex, edge index) of each arc's forward edge.
    forward: Vec<Option<(usize, usize)>>,
}

impl Residual {
    fn build(inst: &Instance, caps: &CapacityProfile, unbounded: u64) -> Self {
        let n = inst.vertex_count();
        let mut adj: Vec<Vec<Edge>> = (0..n).map(|_| Vec::new()).collect();
        let mut forward = vec![None; inst.arcs().len()];
        for (id, a) in inst.arcs().iter().enumerate() {
            let cap = match caps.get(id) {
                Capacity::Finite(c) => c,
                Capacity::Unbounded => unbounded,
            };
            if cap == 0 {
                continue;
            }
            let back_cap = if inst.directed() { 0 } else { cap };
            let fi = adj[a.tail].len();
            let bi = adj[a.head].len();
            adj[a.tail].push(Edge { to: a.head, cap, rev: bi, cost: a.weight });
            adj[a.head].push(Edge { to: a.tail, cap: back_cap, rev: fi, cost: -a.weight });
            forward[id] = Some((a.tail, fi));
        }
        Residual { adj, forward }
    }

    fn push(&mut self, v: usize, e: usize, amount: u64) {
        let (to, rev) = (self.adj[v][e].to, self.adj[v][e].rev);
        self.adj[v][e].cap -= amount;
        self.adj[to][rev].cap += amount;
    }

    fn reachable(&self, from: usize) -> Vec<bool> {
        let mut seen = vec![false; self.adj.len()];
        let mut stack = vec![from];
        seen[from] = true;
        while let Some(v) = stack.pop() {
            for e in &self.adj[v] {
                if e.cap > 0 && !seen[e.to] {
                    seen[e.to] = true;
                    stack.push(e.to);
                }
            }
        }
        seen
    }

    /// Dinic blocking-flow max flow, capped at `limit`.
    fn max_flow(&mut self, s: usize, t: usize, limit: u64) -> u64 {
        let n = self.adj.len();
        let mut total = 0u64;
        while total < limit {
            let mut level = vec![usize::MAX; n];
            level[s] = 0;
            let mut queue = alloc::collections::VecDeque::from([s]);
            while let Some(v) = queue.pop_front() {
                for e in &self.adj[v] {
                    if e.cap > 0 && level[e.to] == usize::MAX {
                        level[e.to] = level[v] + 1;
                        queue.push_back(e.to);
                    }
                }
            }
            if level[t] == usize::MAX {
                break;
            }
            let mut iter = vec![0usize; n];
            loop {
                let pushed = self.augment(s, t, limit - total, &level, &mut iter);
                if pushed == 0 {
                    break;
                }
                total += pushed;
                if total >= limit {
                    break;
                }
            }
        }
        total
    }

    fn augment(&mut self, s: usize, t: usize, limit: u64, level: &[usize], iter: &mut [usize]) -> u64 {
        // iterative DFS along level graph
        let mut path: Vec<(usize, usize)> = Vec::new();
        let mut v = s;
        loop {
            if v == t {
                let amount = path
                    .iter()
                    .map(|&(u, e)| self.adj[u][e].cap)
                    .min()
                    .unwrap_or(0)
                    .min(limit);
                for &(u, e) in &path {
                    self.push(u, e, amount);
                }
                return amount;
            }
            let mut advanced = false;
            while iter[v] < self.adj[v].len() {
                let e = &self.adj[v][iter[v]];
                if e.cap > 0 && level[e.to] == level[v] + 1 {
                    path.push((v, iter[v]));
                    v = e.to;
                    advanced = true;
                    break;
                }
                iter[v] += 1;
            }
            if !advanced {
                match path.pop() {
                    Some((u, _)) => {
                        iter[u] += 1;
                        v = u;
                    }
                    None => return 0,
                }
            }
        }
    }

    fn cut(&self, inst: &Instance, caps: &CapacityProfile, side: &[bool]) -> ArcSet {
        cut_arcs(inst, caps, side)
    }
}

fn cut_arcs(inst: &Instance, caps: &CapacityProfile, side: &[bool]) -> ArcSet {
    ArcSet::from_ids(
        inst,
        inst.arcs().iter().enumerate().filter_map(|(id, a)| {
            let crosses = if inst.directed() {
                side[a.tail] && !side[a.head]
            } else {
                side[a.tail] != side[a.head]
            };
            (crosses && !caps.get(id).is_zero()).then_some(id)
        }),
    )
}

/// Maximum `from`-`to` flow and a minimum cut.
///
/// The value is [`FlowValue::Unbounded`] exactly when some path uses only
/// unbounded arcs; the reported cut is then empty.
pub fn max_flow(
    inst: &Instance,
    caps: &CapacityProfile,
    from: VertexId,
    to: VertexId,
) -> Result<MaxFlow, SolveError> {
    if from == to {
        return Err(SolveError::InvalidParameter("max flow endpoints coincide".into()));
    }
    let adj = Adjacency::new(inst);
    let unbounded_side = adj.reachable(from, |id| caps.get(id) == Capacity::Unbounded);
    if unbounded_side[to] {
        return Ok(MaxFlow { value: FlowValue::Unbounded, min_cut: ArcSet::empty(), source_side: unbounded_side });
    }
    let surrogate = caps.finite_total().saturating_add(1);
    let mut net = Residual::build(inst, caps, surrogate);
    let value = net.max_flow(from, to, u64::MAX);
    let side = net.reachable(from);
    let min_cut = net.cut(inst, caps, &side);
    Ok(MaxFlow { value: FlowValue::Finite(value), min_cut, source_side: side })
}

/// Minimum-cost `s`-`t` flow of exactly `target` units.
pub fn min_cost_flow(inst: &Instance, caps: &CapacityProfile, target: u64) -> Result<FlowResult, SolveError> {
    min_cost_flow_between(inst, caps, inst.source(), inst.sink(), target)
}

/// Minimum-cost `from`-`to` flow of exactly `target` units by successive
/// shortest paths with vertex potentials.
pub fn min_cost_flow_between(
    inst: &Instance,
    caps: &CapacityProfile,
    from: VertexId,
    to: VertexId,
    target: u64,
) -> Result<FlowResult, SolveError> {
    if !inst.directed() {
        return Err(SolveError::Undirected);
    }
    if from == to {
        return Err(SolveError::InvalidParameter("flow endpoints coincide".into()));
    }
    let n = inst.vertex_count();
    let mut net = Residual::build(inst, caps, target.max(1));
    let mut potential = vec![Weight::zero(); n];
    let mut value = 0u64;
    while value < target {
        let (dist, pred) = shortest_residual_paths(&net, &potential, from);
        if dist[to].is_none() {
            let side = net.reachable(from);
            return Err(SolveError::FlowInfeasible { target, max_flow: value, cut: cut_arcs(inst, caps, &side) });
        }
        let far = dist.iter().flatten().max().copied().unwrap_or_else(Weight::zero);
        for v in 0..n {
            potential[v] += dist[v].unwrap_or(far);
        }
        let mut path = Vec::new();
        let mut v = to;
        while v != from {
            let (u, e) = pred[v].unwrap();
            path.push((u, e));
            v = u;
        }
        let amount = path.iter().map(|&(u, e)| net.adj[u][e].cap).min().unwrap().min(target - value);
        for &(u, e) in &path {
            net.push(u, e, amount);
        }
        value += amount;
    }
    let mut flow = vec![0u64; inst.arcs().len()];
    for (id, fwd) in net.forward.iter().enumerate() {
        if let Some((v, e)) = *fwd {
            let edge = &net.adj[v][e];
            flow[id] = net.adj[edge.to][edge.rev].cap;
        }
    }
    cancel_cycles(inst, &mut flow);
    Ok(flow_result(inst, flow, from, to))
}

/// Packages an arc-flow vector (assumed valid) into a [`FlowResult`].
pub fn flow_result(inst: &Instance, flow: Vec<u64>, from: VertexId, to: VertexId) -> FlowResult {
    let value = inst
        .arcs()
        .iter()
        .zip(&flow)
        .map(|(a, &f)| {
            let out = if a.tail == from { f as i128 } else { 0 };
            let inn = if a.head == from { f as i128 } else { 0 };
            out - inn
        })
        .sum::<i128>()
        .max(0) as u64;
    let cost = inst.arcs().iter().zip(&flow).map(|(a, &f)| a.weight * Weight::from_integer(f as i64)).sum();
    let support = ArcSet::from_ids(inst, flow.iter().enumerate().filter(|(_, &f)| f > 0).map(|(i, _)| i));
    let decomposition = path_decompose(inst, &flow, from, to);
    FlowResult { from, to, flow, value, cost, support, decomposition }
}

type Pred = Vec<Option<(usize, usize)>>;

fn shortest_residual_paths(net: &Residual, potential: &[Weight], from: usize) -> (Vec<Option<Weight>>, Pred) {
    let n = net.adj.len();
    let mut dist: Vec<Option<Weight>> = vec![None; n];
    let mut pred: Pred = vec![None; n];
    let mut done = vec![false; n];
    let mut heap = BinaryHeap::new();
    dist[from] = Some(Weight::zero());
    heap.push(Reverse((Weight::zero(), from)));
    while let Some(Reverse((d, v))) = heap.pop() {
        if done[v] {
            continue;
        }
        done[v] = true;
        // edges are stored in arc-id order, so strict improvement keeps the
        // lowest arc id on ties
        for (ei, e) in net.adj[v].iter().enumerate() {
            if e.cap == 0 || done[e.to] {
                continue;
            }
            let reduced = e.cost + potential[v] - potential[e.to];
            debug_assert!(reduced >= Weight::zero(), "negative reduced cost");
            let nd = d + reduced;
            if dist[e.to].map_or(true, |old| nd < old) {
                dist[e.to] = Some(nd);
                pred[e.to] = Some((v, ei));
                heap.push(Reverse((nd, e.to)));
            }
        }
    }
    (dist, pred)
}

/// Removes flow circulating on directed cycles. Weights are non-negative,
/// so the cost never increases.
pub fn cancel_cycles(inst: &Instance, flow: &mut [u64]) {
    let n = inst.vertex_count();
    loop {
        let mut out: Vec<Vec<ArcId>> = vec![Vec::new(); n];
        for (id, a) in inst.arcs().iter().enumerate() {
            if flow[id] > 0 {
                out[a.tail].push(id);
            }
        }
        let Some(cycle) = find_cycle(inst, &out) else { return };
        let amount = cycle.iter().map(|&id| flow[id]).min().unwrap();
        for id in cycle {
            flow[id] -= amount;
        }
    }
}

fn find_cycle(inst: &Instance, out: &[Vec<ArcId>]) -> Option<Vec<ArcId>> {
    let n = out.len();
    // 0 = unseen, 1 = on stack, 2 = finished
    let mut state = vec![0u8; n];
    for root in 0..n {
        if state[root] != 0 {
            continue;
        }
        let mut stack: Vec<(usize, usize, Option<ArcId>)> = vec![(root, 0, None)];
        state[root] = 1;
        while let Some(top) = stack.last_mut() {
            let v = top.0;
            if top.1 < out[v].len() {
                let id = out[v][top.1];
                top.1 += 1;
                let w = inst.arc(id).head;
                match state[w] {
                    0 => {
                        state[w] = 1;
                        stack.push((w, 0, Some(id)));
                    }
                    1 => {
                        let mut cycle = vec![id];
                        for &(u, _, via) in stack.iter().rev() {
                            if u == w {
                                break;
                            }
                            cycle.push(via.unwrap());
                        }
                        return Some(cycle);
                    }
                    _ => {}
                }
            } else {
                state[v] = 2;
                stack.pop();
            }
        }
    }
    None
}

/// Decomposes an arc flow into `from`-`to` paths, cancelling cycles first.
pub fn path_decompose(inst: &Instance, flow: &[u64], from: VertexId, to: VertexId) -> Vec<FlowPath> {
    let mut rest = flow.to_vec();
    cancel_cycles(inst, &mut rest);
    let n = inst.vertex_count();
    let mut out: Vec<Vec<ArcId>> = vec![Vec::new(); n];
    for (id, a) in inst.arcs().iter().enumerate() {
        out[a.tail].push(id);
    }
    let mut paths = Vec::new();
    loop {
        let mut arcs = Vec::new();
        let mut v = from;
        while v != to {
            let Some(&id) = out[v].iter().find(|&&id| rest[id] > 0) else { break };
            arcs.push(id);
            v = inst.arc(id).head;
        }
        if v != to || arcs.is_empty() {
            break;
        }
        let amount = arcs.iter().map(|&id| rest[id]).min().unwrap();
        for &id in &arcs {
            rest[id] -= amount;
        }
        paths.push(FlowPath { arcs, amount });
    }
    paths
}
