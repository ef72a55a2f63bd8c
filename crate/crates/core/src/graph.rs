//! Small graph utilities shared by the solvers.

use alloc::collections::{BinaryHeap, VecDeque};
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Reverse;

use num_traits::Zero;

use crate::instance::{ArcId, Instance, VertexId, Weight};

/// Outgoing incidence lists; undirected arcs appear at both endpoints.
pub(crate) struct Adjacency {
    out: Vec<Vec<(ArcId, VertexId)>>,
}

impl Adjacency {
    pub(crate) fn new(inst: &Instance) -> Self {
        let mut out = vec![Vec::new(); inst.vertex_count()];
        for (id, a) in inst.arcs().iter().enumerate() {
            out[a.tail].push((id, a.head));
            if !inst.directed() {
                out[a.head].push((id, a.tail));
            }
        }
        Adjacency { out }
    }

    /// Vertices reachable from `from` through arcs accepted by `allowed`.
    pub(crate) fn reachable(&self, from: VertexId, allowed: impl Fn(ArcId) -> bool) -> Vec<bool> {
        let mut seen = vec![false; self.out.len()];
        let mut stack = vec![from];
        seen[from] = true;
        while let Some(v) = stack.pop() {
            for &(id, w) in &self.out[v] {
                if !seen[w] && allowed(id) {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen
    }

    /// Dijkstra over allowed arcs with `cost(arc)`; returns distances and the
    /// arc used to reach each vertex. Ties keep the first (lowest-id) arc.
    pub(crate) fn shortest_paths(
        &self,
        from: VertexId,
        allowed: impl Fn(ArcId) -> bool,
        cost: impl Fn(ArcId) -> Weight,
    ) -> (Vec<Option<Weight>>, Vec<Option<ArcId>>) {
        let n = self.out.len();
        let mut dist: Vec<Option<Weight>> = vec![None; n];
        let mut pred = vec![None; n];
        let mut done = vec![false; n];
        let mut heap = BinaryHeap::new();
        dist[from] = Some(Weight::zero());
        heap.push(Reverse((Weight::zero(), from)));
        while let Some(Reverse((d, v))) = heap.pop() {
            if done[v] {
                continue;
            }
            done[v] = true;
            for &(id, w) in &self.out[v] {
                if done[w] || !allowed(id) {
                    continue;
                }
                let nd = d + cost(id);
                if dist[w].map_or(true, |old| nd < old) {
                    dist[w] = Some(nd);
                    pred[w] = Some(id);
                    heap.push(Reverse((nd, w)));
                }
            }
        }
        (dist, pred)
    }
}

/// Walks predecessor arcs back from `to`; `None` when `to` was not reached.
pub(crate) fn trace_path(
    inst: &Instance,
    pred: &[Option<ArcId>],
    from: VertexId,
    to: VertexId,
) -> Option<Vec<ArcId>> {
    let mut path = Vec::new();
    let mut v = to;
    while v != from {
        let id = pred[v]?;
        path.push(id);
        let a = inst.arc(id);
        v = if a.head == v { a.tail } else { a.head };
    }
    path.reverse();
    Some(path)
}

/// Topological order (Kahn, smallest vertex first), or `None` on a cycle.
pub(crate) fn topological_order(inst: &Instance) -> Option<Vec<VertexId>> {
    let n = inst.vertex_count();
    let mut indeg = vec![0usize; n];
    let mut out = vec![Vec::new(); n];
    for a in inst.arcs() {
        indeg[a.head] += 1;
        out[a.tail].push(a.head);
    }
    let mut ready: BinaryHeap<Reverse<VertexId>> =
        (0..n).filter(|&v| indeg[v] == 0).map(Reverse).collect();
    let mut order = Vec::with_capacity(n);
    while let Some(Reverse(v)) = ready.pop() {
        order.push(v);
        for &w in &out[v] {
            indeg[w] -= 1;
            if indeg[w] == 0 {
                ready.push(Reverse(w));
            }
        }
    }
    (order.len() == n).then_some(order)
}

/// Strongly connected component labels (iterative Tarjan).
pub(crate) fn strongly_connected_components(n: usize, edges: &[(usize, usize)]) -> Vec<usize> {
    let mut out = vec![Vec::new(); n];
    for &(u, v) in edges {
        out[u].push(v);
    }
    const UNSEEN: usize = usize::MAX;
    let mut index = vec![UNSEEN; n];
    let mut low = vec![0; n];
    let mut on_stack = vec![false; n];
    let mut comp = vec![UNSEEN; n];
    let mut stack = Vec::new();
    let mut next_index = 0;
    let mut next_comp = 0;
    for root in 0..n {
        if index[root] != UNSEEN {
            continue;
        }
        let mut call: Vec<(usize, usize)> = vec![(root, 0)];
        index[root] = next_index;
        low[root] = next_index;
        next_index += 1;
        stack.push(root);
        on_stack[root] = true;
        while let Some(top) = call.last_mut() {
            let v = top.0;
            if top.1 < out[v].len() {
                let w = out[v][top.1];
                top.1 += 1;
                if index[w] == UNSEEN {
                    index[w] = next_index;
                    low[w] = next_index;
                    next_index += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
            } else {
                call.pop();
                if let Some(&(parent, _)) = call.last() {
                    low[parent] = low[parent].min(low[v]);
                }
                if low[v] == index[v] {
                    loop {
                        let w = stack.pop().unwrap();
                        on_stack[w] = false;
                        comp[w] = next_comp;
                        if w == v {
                            break;
                        }
                    }
                    next_comp += 1;
                }
            }
        }
    }
    comp
}

/// Breadth-first path over an explicit edge list; returns edge indices.
pub(crate) fn bfs_path(
    n: usize,
    edges: &[(usize, usize)],
    allowed: impl Fn(usize) -> bool,
    from: usize,
    to: usize,
) -> Option<Vec<usize>> {
    let mut out = vec![Vec::new(); n];
    for (i, &(u, _)) in edges.iter().enumerate() {
        if allowed(i) {
            out[u].push(i);
        }
    }
    let mut pred: Vec<Option<usize>> = vec![None; n];
    let mut seen = vec![false; n];
    let mut queue = VecDeque::from([from]);
    seen[from] = true;
    while let Some(v) = queue.pop_front() {
        if v == to {
            break;
        }
        for &e in &out[v] {
            let w = edges[e].1;
            if !seen[w] {
                seen[w] = true;
                pred[w] = Some(e);
                queue.push_back(w);
            }
        }
    }
    if !seen[to] {
        return None;
    }
    let mut path = Vec::new();
    let mut v = to;
    while v != from {
        let e = pred[v]?;
        path.push(e);
        v = edges[e].0;
    }
    path.reverse();
    Some(path)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scc_labels_cycle_and_tail() {
        let comp = strongly_connected_components(4, &[(0, 1), (1, 2), (2, 0), (2, 3)]);
        assert_eq!(comp[0], comp[1]);
        assert_eq!(comp[1], comp[2]);
        assert_ne!(comp[2], comp[3]);
    }

    #[test]
    fn bfs_path_finds_route() {
        let edges = [(0, 1), (1, 2), (0, 2)];
        assert_eq!(bfs_path(3, &edges, |_| true, 0, 2), Some(vec![2]));
        assert_eq!(bfs_path(3, &edges, |e| e != 2, 0, 2), Some(vec![0, 1]));
        assert_eq!(bfs_path(3, &edges, |e| e == 0, 0, 2), None);
    }
}
