use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::Zero;

use crate::error::{Budget, SolveError};
use crate::instance::{ArcId, ArcSet, Instance, VertexId, Weight};
use crate::transform::dag_to_layered;

/// A demand vector over one layer: `demand` lists `(vertex, units)` with
/// positive units, sorted by vertex.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Configuration {
    pub layer: usize,
    pub demand: Vec<(VertexId, usize)>,
}

impl Configuration {
    /// Sorts, merges repeated vertices and drops zero entries.
    pub fn new(layer: usize, demand: impl IntoIterator<Item = (VertexId, usize)>) -> Self {
        let mut map = BTreeMap::new();
        for (v, d) in demand {
            *map.entry(v).or_insert(0) += d;
        }
        Configuration { layer, demand: map.into_iter().filter(|&(_, d)| d > 0).collect() }
    }

    pub fn total(&self) -> usize {
        self.demand.iter().map(|&(_, d)| d).sum()
    }

    pub fn support(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.demand.iter().map(|&(v, _)| v)
    }
}

/// Parallel arcs between one ordered vertex pair.
#[derive(Debug, Default)]
struct PairArcs {
    safe: Option<(Weight, ArcId)>,
    /// Ordered by (weight, id).
    vulnerable: Vec<(Weight, ArcId)>,
}

impl PairArcs {
    /// Cheapest arcs carrying `units` with vulnerable arcs capped at one
    /// unit each: one safe arc, or `units` distinct vulnerable arcs.
    fn price(&self, units: usize) -> Option<(Weight, Vec<ArcId>)> {
        let vuln = (self.vulnerable.len() >= units).then(|| {
            let used = &self.vulnerable[..units];
            (used.iter().map(|&(w, _)| w).sum::<Weight>(), used.iter().map(|&(_, id)| id).collect::<Vec<_>>())
        });
        let safe = self.safe.map(|(w, id)| (w, vec![id]));
        match (safe, vuln) {
            (Some(s), Some(v)) => Some(if v.0 < s.0 { v } else { s }),
            (s, v) => s.or(v),
        }
    }
}

struct PairTable(BTreeMap<(VertexId, VertexId), PairArcs>);

impl PairTable {
    fn new(inst: &Instance) -> Self {
        let mut map: BTreeMap<(VertexId, VertexId), PairArcs> = BTreeMap::new();
        for (id, a) in inst.arcs().iter().enumerate() {
            let entry = map.entry((a.tail, a.head)).or_default();
            if a.vulnerable {
                entry.vulnerable.push((a.weight, id));
            } else if entry.safe.map_or(true, |(w, _)| a.weight < w) {
                entry.safe = Some((a.weight, id));
            }
        }
        for p in map.values_mut() {
            p.vulnerable.sort();
        }
        PairTable(map)
    }

    fn heads_of(&self, u: VertexId) -> impl Iterator<Item = VertexId> + '_ {
        self.0.range((u, 0)..=(u, usize::MAX)).map(|(&(_, v), _)| v)
    }
}

/// Enumerates integral transportation plans from `rows` into `cols`
/// (`col_cap` bounds column totals when given) and reports each plan's
/// column sums, price and arcs.
struct PlanSearch<'a> {
    rows: &'a [(VertexId, usize)],
    cols: &'a [VertexId],
    col_cap: Option<&'a [usize]>,
    pairs: &'a PairTable,
    col_sum: Vec<usize>,
    arcs: Vec<ArcId>,
}

impl PlanSearch<'_> {
    fn run(&mut self, visit: &mut impl FnMut(&[usize], Weight, &[ArcId])) {
        if self.rows.is_empty() {
            return;
        }
        let rem = self.rows[0].1;
        self.step(0, 0, rem, Weight::zero(), visit);
    }

    fn step(&mut self, row: usize, col: usize, rem: usize, cost: Weight, visit: &mut impl FnMut(&[usize], Weight, &[ArcId])) {
        if rem == 0 {
            if row + 1 == self.rows.len() {
                if self.col_cap.map_or(true, |cap| cap == self.col_sum.as_slice()) {
                    visit(&self.col_sum, cost, &self.arcs);
                }
            } else {
                let next = self.rows[row + 1].1;
                self.step(row + 1, 0, next, cost, visit);
            }
            return;
        }
        if col == self.cols.len() {
            return;
        }
        // leave this column out
        self.step(row, col + 1, rem, cost, visit);
        let Some(pair) = self.pairs.0.get(&(self.rows[row].0, self.cols[col])) else { return };
        let room = self.col_cap.map_or(rem, |cap| cap[col] - self.col_sum[col]).min(rem);
        for units in 1..=room {
            let Some((price, ids)) = pair.price(units) else { break };
            let mark = self.arcs.len();
            self.arcs.extend_from_slice(&ids);
            self.col_sum[col] += units;
            self.step(row, col + 1, rem - units, cost + price, visit);
            self.col_sum[col] -= units;
            self.arcs.truncate(mark);
        }
    }
}

/// Cheapest arc set between the supports of `d1` and `d2` that admits a
/// transportation plan with supplies `d1` and demands `d2`, vulnerable arcs
/// carrying at most one unit. `None` when no such set exists.
///
/// Any feasible set must, for each pair carrying `f` units, contain a safe
/// arc or `f` vulnerable arcs, so minimizing over plans is exact.
pub fn compute_link_cost(inst: &Instance, d1: &Configuration, d2: &Configuration) -> Option<(Weight, ArcSet)> {
    if d1.total() != d2.total() {
        return None;
    }
    let pairs = PairTable::new(inst);
    let cols: Vec<VertexId> = d2.support().collect();
    let cap: Vec<usize> = d2.demand.iter().map(|&(_, d)| d).collect();
    let mut best: Option<(Weight, Vec<ArcId>)> = None;
    let mut search = PlanSearch {
        rows: &d1.demand,
        cols: &cols,
        col_cap: Some(&cap),
        pairs: &pairs,
        col_sum: vec![0; cols.len()],
        arcs: Vec::new(),
    };
    search.run(&mut |_, cost, arcs| {
        if best.as_ref().map_or(true, |(b, _)| cost < *b) {
            best = Some((cost, arcs.to_vec()));
        }
    });
    best.map(|(cost, arcs)| (cost, ArcSet::from_ids(inst, arcs)))
}

pub fn solve_kftp_dag(inst: &Instance) -> Result<ArcSet, SolveError> {
    solve_kftp_dag_with(inst, &Budget::default())
}

/// Exact k-FTP on an acyclic instance: shortest path through per-layer
/// configurations of the layered instance, followed by minimalization.
pub fn solve_kftp_dag_with(inst: &Instance, budget: &Budget) -> Result<ArcSet, SolveError> {
    let k = super::expect_ftp(inst)?;
    let layered = dag_to_layered(inst)?;
    let li = &layered.instance;
    let pairs = PairTable::new(li);
    let units = k + 1;

    struct Node {
        cost: Weight,
        pred: Option<usize>,
        arcs: Vec<ArcId>,
    }
    let mut nodes: Vec<Node> = vec![Node { cost: Weight::zero(), pred: None, arcs: Vec::new() }];
    let mut frontier: BTreeMap<Vec<(VertexId, usize)>, usize> = BTreeMap::new();
    frontier.insert(vec![(li.source(), units)], 0);

    for _ in 1..layered.layer_count() {
        let mut next: BTreeMap<Vec<(VertexId, usize)>, usize> = BTreeMap::new();
        for (demand, &node) in &frontier {
            let mut cols: Vec<VertexId> = demand.iter().flat_map(|&(u, _)| pairs.heads_of(u)).collect();
            cols.sort_unstable();
            cols.dedup();
            let base = nodes[node].cost;
            let mut search = PlanSearch {
                rows: demand,
                cols: &cols,
                col_cap: None,
                pairs: &pairs,
                col_sum: vec![0; cols.len()],
                arcs: Vec::new(),
            };
            let mut overflow = false;
            search.run(&mut |sums, cost, arcs| {
                let d2: Vec<(VertexId, usize)> =
                    cols.iter().zip(sums).filter(|(_, &s)| s > 0).map(|(&v, &s)| (v, s)).collect();
                let total = base + cost;
                match next.get(&d2) {
                    Some(&idx) => {
                        if total < nodes[idx].cost {
                            nodes[idx] = Node { cost: total, pred: Some(node), arcs: arcs.to_vec() };
                        }
                    }
                    None => {
                        if nodes.len() >= budget.configurations {
                            overflow = true;
                            return;
                        }
                        nodes.push(Node { cost: total, pred: Some(node), arcs: arcs.to_vec() });
                        next.insert(d2, nodes.len() - 1);
                    }
                }
            });
            if overflow {
                return Err(SolveError::BudgetExceeded { what: "configuration", limit: budget.configurations });
            }
        }
        frontier = next;
    }

    let goal = frontier.get(&vec![(li.sink(), units)]).copied().ok_or_else(|| super::infeasible(inst, k))?;
    let mut ids = Vec::new();
    let mut at = Some(goal);
    while let Some(i) = at {
        ids.extend_from_slice(&nodes[i].arcs);
        at = nodes[i].pred;
    }
    let union = ArcSet::from_ids(li, ids);
    let layered_sol = super::minimalize(li, &union, k);
    let mapped = layered.map_back(inst, &layered_sol);
    Ok(super::minimalize(inst, &mapped, k))
}
