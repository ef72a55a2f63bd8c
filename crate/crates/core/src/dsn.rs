//! Exact directed Steiner network for a few terminal pairs.
//!
//! [`dsn_solve`] is a branch-and-bound over arc inclusion with a
//! shortest-path lower bound; [`dsn_oracle`] is a plain include/exclude
//! search used to validate it.

use alloc::collections::BinaryHeap;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Reverse;

use num_traits::Zero;

use crate::error::{Budget, SolveError};
use crate::graph::bfs_path;
use crate::instance::{ArcSet, Weight};

/// Priced arcs the oracle may branch on.
pub const DSN_ORACLE_ARCS: usize = 18;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DsnArc {
    pub tail: usize,
    pub head: usize,
    pub cost: Weight,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DsnInstance {
    pub vertex_count: usize,
    pub arcs: Vec<DsnArc>,
    pub pairs: Vec<(usize, usize)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DsnSolution {
    pub cost: Weight,
    /// Sorted arc indices: the bought arcs plus free arcs used on a path.
    pub arcs: Vec<usize>,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Choice {
    Open,
    In,
    Out,
}

fn check(d: &DsnInstance, budget: &Budget) -> Result<(), SolveError> {
    if d.pairs.is_empty() {
        return Err(SolveError::InvalidParameter("no terminal pairs".into()));
    }
    if d.pairs.len() > budget.dsn_pairs {
        return Err(SolveError::BudgetExceeded { what: "terminal pair", limit: budget.dsn_pairs });
    }
    let n = d.vertex_count;
    if d.pairs.iter().any(|&(a, b)| a >= n || b >= n) || d.arcs.iter().any(|a| a.tail >= n || a.head >= n) {
        return Err(SolveError::InvalidParameter("terminal or arc endpoint out of range".into()));
    }
    if d.arcs.iter().any(|a| a.cost < Weight::zero()) {
        return Err(SolveError::InvalidParameter("negative arc cost".into()));
    }
    Ok(())
}

fn edges(d: &DsnInstance) -> Vec<(usize, usize)> {
    d.arcs.iter().map(|a| (a.tail, a.head)).collect()
}

fn all_connected(d: &DsnInstance, edges: &[(usize, usize)], usable: impl Fn(usize) -> bool) -> bool {
    d.pairs.iter().all(|&(a, b)| bfs_path(d.vertex_count, edges, &usable, a, b).is_some())
}

fn infeasible() -> SolveError {
    SolveError::Infeasible { witness: ArcSet::empty() }
}

/// Adds the free arcs lying on one path per pair inside `bought ∪ free`.
fn payload(d: &DsnInstance, edges: &[(usize, usize)], bought: &[bool]) -> DsnSolution {
    let usable = |i: usize| bought[i] || d.arcs[i].cost.is_zero();
    let mut take = bought.to_vec();
    for &(a, b) in &d.pairs {
        for e in bfs_path(d.vertex_count, edges, usable, a, b).expect("solution connects every pair") {
            take[e] = true;
        }
    }
    let arcs: Vec<usize> = (0..take.len()).filter(|&i| take[i]).collect();
    let cost = (0..bought.len()).filter(|&i| bought[i]).map(|i| d.arcs[i].cost).sum();
    DsnSolution { cost, arcs }
}

struct Search<'a> {
    d: &'a DsnInstance,
    out: Vec<Vec<usize>>,
    choice: Vec<Choice>,
    best: Weight,
    best_set: Vec<bool>,
}

impl Search<'_> {
    /// Shortest distance and arcs of a path for `(a, b)` where bought and
    /// free arcs cost 0 and excluded arcs are missing.
    fn distance(&self, a: usize, b: usize) -> Option<(Weight, Vec<usize>)> {
        let n = self.d.vertex_count;
        let mut dist: Vec<Option<Weight>> = vec![None; n];
        let mut pred: Vec<Option<usize>> = vec![None; n];
        let mut done = vec![false; n];
        let mut heap = BinaryHeap::new();
        dist[a] = Some(Weight::zero());
        heap.push(Reverse((Weight::zero(), a)));
        while let Some(Reverse((dv, v))) = heap.pop() {
            if done[v] {
                continue;
            }
            done[v] = true;
            if v == b {
                break;
            }
            for &e in &self.out[v] {
                let arc = &self.d.arcs[e];
                let c = match self.choice[e] {
                    Choice::Out => continue,
                    Choice::In => Weight::zero(),
                    Choice::Open => arc.cost,
                };
                let nd = dv + c;
                if !done[arc.head] && dist[arc.head].map_or(true, |old| nd < old) {
                    dist[arc.head] = Some(nd);
                    pred[arc.head] = Some(e);
                    heap.push(Reverse((nd, arc.head)));
                }
            }
        }
        let total = dist[b]?;
        let mut path = Vec::new();
        let mut v = b;
        while v != a {
            let e = pred[v]?;
            path.push(e);
            v = self.d.arcs[e].tail;
        }
        path.reverse();
        Some((total, path))
    }

    fn branch(&mut self, spent: Weight) {
        let mut worst: Option<(Weight, Vec<usize>)> = None;
        for &(a, b) in &self.d.pairs {
            let Some((dist, path)) = self.distance(a, b) else { return };
            if worst.as_ref().map_or(true, |(w, _)| dist > *w) {
                worst = Some((dist, path));
            }
        }
        let (bound, path) = worst.expect("at least one pair");
        if spent + bound >= self.best {
            return;
        }
        if bound.is_zero() {
            self.best = spent;
            self.best_set = self.choice.iter().map(|&c| c == Choice::In).collect();
            return;
        }
        let e = path.into_iter().find(|&e| self.choice[e] == Choice::Open).expect("positive distance uses an open arc");
        self.choice[e] = Choice::In;
        self.branch(spent + self.d.arcs[e].cost);
        self.choice[e] = Choice::Out;
        self.branch(spent);
        self.choice[e] = Choice::Open;
    }
}

/// Minimum-cost arc set containing a path for every terminal pair.
pub fn dsn_solve(d: &DsnInstance, budget: &Budget) -> Result<DsnSolution, SolveError> {
    check(d, budget)?;
    let edges = edges(d);
    if !all_connected(d, &edges, |_| true) {
        return Err(infeasible());
    }
    let mut out = vec![Vec::new(); d.vertex_count];
    for (i, a) in d.arcs.iter().enumerate() {
        out[a.tail].push(i);
    }
    let choice: Vec<Choice> = d.arcs.iter().map(|a| if a.cost.is_zero() { Choice::In } else { Choice::Open }).collect();
    let mut search = Search { d, out, choice, best: Weight::zero(), best_set: Vec::new() };

    // incumbent: union of individual shortest paths
    let mut union = vec![false; d.arcs.len()];
    for &(a, b) in &d.pairs {
        let (_, path) = search.distance(a, b).expect("pair is connected");
        for e in path {
            if !d.arcs[e].cost.is_zero() {
                union[e] = true;
            }
        }
    }
    search.best = (0..union.len()).filter(|&i| union[i]).map(|i| d.arcs[i].cost).sum();
    search.best_set = union;
    search.branch(Weight::zero());
    Ok(payload(d, &edges, &search.best_set))
}

/// Exhaustive include/exclude search over the priced arcs, feasibility by
/// plain reachability. At most [`DSN_ORACLE_ARCS`] priced arcs.
pub fn dsn_oracle(d: &DsnInstance, budget: &Budget) -> Result<DsnSolution, SolveError> {
    check(d, budget)?;
    let priced: Vec<usize> = (0..d.arcs.len()).filter(|&i| !d.arcs[i].cost.is_zero()).collect();
    if priced.len() > DSN_ORACLE_ARCS {
        return Err(SolveError::BudgetExceeded { what: "oracle arc", limit: DSN_ORACLE_ARCS });
    }
    let edges = edges(d);
    if !all_connected(d, &edges, |_| true) {
        return Err(infeasible());
    }

    struct Oracle<'a> {
        d: &'a DsnInstance,
        edges: Vec<(usize, usize)>,
        priced: Vec<usize>,
        state: Vec<Choice>,
        best: Option<(Weight, Vec<bool>)>,
    }
    impl Oracle<'_> {
        fn run(&mut self, next: usize, spent: Weight) {
            if self.best.as_ref().is_some_and(|(b, _)| spent >= *b) {
                return;
            }
            let d = self.d;
            let state = &self.state;
            let bought = |i: usize| d.arcs[i].cost.is_zero() || state[i] == Choice::In;
            if all_connected(d, &self.edges, bought) {
                let set = (0..d.arcs.len()).map(|i| state[i] == Choice::In).collect();
                self.best = Some((spent, set));
                return;
            }
            if next == self.priced.len() {
                return;
            }
            let open = |i: usize| state[i] != Choice::Out;
            if !all_connected(d, &self.edges, open) {
                return;
            }
            let e = self.priced[next];
            self.state[e] = Choice::In;
            self.run(next + 1, spent + d.arcs[e].cost);
            self.state[e] = Choice::Out;
            self.run(next + 1, spent);
            self.state[e] = Choice::Open;
        }
    }
    let mut o = Oracle { d, edges, priced, state: vec![Choice::Open; d.arcs.len()], best: None };
    o.run(0, Weight::zero());
    let (_, set) = o.best.ok_or_else(infeasible)?;
    Ok(payload(d, &o.edges, &set))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn arc(tail: usize, head: usize, cost: i64) -> DsnArc {
        DsnArc { tail, head, cost: Weight::from_integer(cost) }
    }

    #[test]
    fn one_pair_is_a_shortest_path() {
        let d = DsnInstance { vertex_count: 3, arcs: vec![arc(0, 1, 1), arc(1, 2, 1), arc(0, 2, 3)], pairs: vec![(0, 2)] };
        let b = Budget::default();
        let sol = dsn_solve(&d, &b).unwrap();
        assert_eq!(sol.cost, Weight::from_integer(2));
        assert_eq!(sol.arcs, vec![0, 1]);
        assert_eq!(dsn_oracle(&d, &b).unwrap().cost, sol.cost);
    }

    #[test]
    fn shared_middle_arc() {
        // s1=0 s2=1 m=2 m'=3 t1=4 t2=5
        let d = DsnInstance {
            vertex_count: 6,
            arcs: vec![arc(0, 2, 1), arc(1, 2, 1), arc(2, 3, 1), arc(3, 4, 1), arc(3, 5, 1), arc(0, 4, 10), arc(1, 5, 10)],
            pairs: vec![(0, 4), (1, 5)],
        };
        let b = Budget::default();
        assert_eq!(dsn_solve(&d, &b).unwrap().cost, Weight::from_integer(5));
        assert_eq!(dsn_oracle(&d, &b).unwrap().cost, Weight::from_integer(5));
    }

    #[test]
    fn disconnected_pair_is_infeasible() {
        let d = DsnInstance { vertex_count: 3, arcs: vec![arc(0, 1, 1)], pairs: vec![(0, 2)] };
        let b = Budget::default();
        assert!(matches!(dsn_solve(&d, &b), Err(SolveError::Infeasible { .. })));
        assert!(matches!(dsn_oracle(&d, &b), Err(SolveError::Infeasible { .. })));
    }

    #[test]
    fn free_arcs_are_reported_but_not_charged() {
        let d = DsnInstance { vertex_count: 3, arcs: vec![arc(0, 1, 0), arc(1, 2, 4), arc(0, 2, 9)], pairs: vec![(0, 2)] };
        let sol = dsn_solve(&d, &Budget::default()).unwrap();
        assert_eq!(sol.cost, Weight::from_integer(4));
        assert_eq!(sol.arcs, vec![0, 1]);
    }

    #[test]
    fn too_many_pairs() {
        let d = DsnInstance { vertex_count: 2, arcs: vec![arc(0, 1, 1)], pairs: vec![(0, 1); 4] };
        assert!(matches!(dsn_solve(&d, &Budget::default()), Err(SolveError::BudgetExceeded { .. })));
    }
}
