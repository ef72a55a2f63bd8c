use alloc::boxed::Box;
use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::error::SolveError;
use crate::instance::{Arc, ArcId, ArcSet, Instance, VertexId, Weight};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SpNode {
    Leaf(ArcId),
    /// `left` ends where `right` starts.
    Series(Box<SpTree>, Box<SpTree>),
    Parallel(Box<SpTree>, Box<SpTree>),
}

/// Series-parallel decomposition with the terminals of every node. A leaf's
/// terminals give the direction in which its arc is used.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpTree {
    pub source: VertexId,
    pub sink: VertexId,
    pub node: SpNode,
}

impl SpTree {
    pub fn leaf(inst: &Instance, arc: ArcId) -> Self {
        let a = inst.arc(arc);
        SpTree { source: a.tail, sink: a.head, node: SpNode::Leaf(arc) }
    }

    pub fn series(left: SpTree, right: SpTree) -> Result<Self, SolveError> {
        if left.sink != right.source {
            return Err(SolveError::MalformedTree("series children do not meet".into()));
        }
        Ok(SpTree { source: left.source, sink: right.sink, node: SpNode::Series(Box::new(left), Box::new(right)) })
    }

    pub fn parallel(left: SpTree, right: SpTree) -> Result<Self, SolveError> {
        if (left.source, left.sink) != (right.source, right.sink) {
            return Err(SolveError::MalformedTree("parallel children have different terminals".into()));
        }
        Ok(SpTree { source: left.source, sink: left.sink, node: SpNode::Parallel(Box::new(left), Box::new(right)) })
    }

    /// The same decomposition traversed from sink to source.
    pub fn reversed(self) -> Self {
        let node = match self.node {
            SpNode::Leaf(id) => SpNode::Leaf(id),
            SpNode::Series(a, b) => SpNode::Series(Box::new(b.reversed()), Box::new(a.reversed())),
            SpNode::Parallel(a, b) => SpNode::Parallel(Box::new(a.reversed()), Box::new(b.reversed())),
        };
        SpTree { source: self.sink, sink: self.source, node }
    }

    /// Leaf arcs in left-to-right order.
    pub fn leaves(&self) -> Vec<ArcId> {
        let mut out = Vec::new();
        self.collect_leaves(&mut out);
        out
    }

    fn collect_leaves(&self, out: &mut Vec<ArcId>) {
        match &self.node {
            SpNode::Leaf(id) => out.push(*id),
            SpNode::Series(a, b) | SpNode::Parallel(a, b) => {
                a.collect_leaves(out);
                b.collect_leaves(out);
            }
        }
    }

    /// Leaf arcs with the orientation the tree uses them in.
    fn oriented_leaves(&self, out: &mut Vec<(ArcId, VertexId, VertexId)>) {
        match &self.node {
            SpNode::Leaf(id) => out.push((*id, self.source, self.sink)),
            SpNode::Series(a, b) | SpNode::Parallel(a, b) => {
                a.oriented_leaves(out);
                b.oriented_leaves(out);
            }
        }
    }

    /// Checks terminals, leaf distinctness and leaf orientation against
    /// `inst`, and that the root joins `s` to `t`.
    pub fn validate(&self, inst: &Instance) -> Result<(), SolveError> {
        self.validate_node(inst)?;
        if (self.source, self.sink) != (inst.source(), inst.sink()) {
            return Err(SolveError::MalformedTree("root terminals are not (s, t)".into()));
        }
        self.check_distinct()
    }

    fn check_distinct(&self) -> Result<(), SolveError> {
        let leaves = self.leaves();
        let distinct: BTreeSet<ArcId> = leaves.iter().copied().collect();
        if distinct.len() != leaves.len() {
            return Err(SolveError::MalformedTree("an arc appears in two leaves".into()));
        }
        Ok(())
    }

    fn validate_node(&self, inst: &Instance) -> Result<(), SolveError> {
        match &self.node {
            SpNode::Leaf(id) => {
                let Some(a) = inst.arcs().get(*id) else {
                    return Err(SolveError::MalformedTree(format!("unknown arc e{id}")));
                };
                let forward = (a.tail, a.head) == (self.source, self.sink);
                let backward = (a.head, a.tail) == (self.source, self.sink);
                if !(forward || (backward && !inst.directed())) {
                    return Err(SolveError::MalformedTree(format!("leaf e{id} has wrong terminals")));
                }
            }
            SpNode::Series(a, b) => {
                if a.source != self.source || a.sink != b.source || b.sink != self.sink {
                    return Err(SolveError::MalformedTree("series terminals mismatch".into()));
                }
                a.validate_node(inst)?;
                b.validate_node(inst)?;
            }
            SpNode::Parallel(a, b) => {
                for c in [a, b] {
                    if (c.source, c.sink) != (self.source, self.sink) {
                        return Err(SolveError::MalformedTree("parallel terminals mismatch".into()));
                    }
                    c.validate_node(inst)?;
                }
            }
        }
        Ok(())
    }

    /// Parses `e<id>`, `S(x,y)` and `P(x,y)`. Leaves are read in their
    /// arc's tail-to-head direction. The root terminals are not checked, so
    /// subtrees parse too; see [`SpTree::validate`].
    pub fn parse(inst: &Instance, text: &str) -> Result<Self, SolveError> {
        let mut p = TreeParser { text: text.as_bytes(), pos: 0, inst };
        let tree = p.expr()?;
        p.skip_ws();
        if p.pos != p.text.len() {
            return Err(SolveError::MalformedTree(format!("trailing input at offset {}", p.pos)));
        }
        tree.check_distinct()?;
        Ok(tree)
    }
}

impl fmt::Display for SpTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.node {
            SpNode::Leaf(id) => write!(f, "e{id}"),
            SpNode::Series(a, b) => write!(f, "S({a},{b})"),
            SpNode::Parallel(a, b) => write!(f, "P({a},{b})"),
        }
    }
}

struct TreeParser<'a> {
    text: &'a [u8],
    pos: usize,
    inst: &'a Instance,
}

impl TreeParser<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.text.len() && self.text[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn err(&self, what: &str) -> SolveError {
        SolveError::MalformedTree(format!("{what} at offset {}", self.pos))
    }

    fn eat(&mut self, c: u8) -> Result<(), SolveError> {
        self.skip_ws();
        if self.text.get(self.pos) == Some(&c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(&format!("expected '{}'", c as char)))
        }
    }

    fn expr(&mut self) -> Result<SpTree, SolveError> {
        self.skip_ws();
        match self.text.get(self.pos) {
            Some(b'e') => {
                self.pos += 1;
                let start = self.pos;
                while self.pos < self.text.len() && self.text[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                let digits = core::str::from_utf8(&self.text[start..self.pos]).unwrap();
                let id: ArcId = digits.parse().map_err(|_| self.err("expected arc id"))?;
                if id >= self.inst.arcs().len() {
                    return Err(SolveError::MalformedTree(format!("unknown arc e{id}")));
                }
                Ok(SpTree::leaf(self.inst, id))
            }
            Some(&c @ (b'S' | b'P')) => {
                self.pos += 1;
                self.eat(b'(')?;
                let a = self.expr()?;
                self.eat(b',')?;
                let b = self.expr()?;
                self.eat(b')')?;
                if c == b'S' {
                    SpTree::series(a, b)
                } else {
                    SpTree::parallel(a, b)
                }
            }
            _ => Err(self.err("expected 'e', 'S' or 'P'")),
        }
    }
}

/// Directed copy of `inst` where every arc covered by `tree` points the way
/// the tree traverses it. Arc ids are unchanged.
pub fn oriented_instance(inst: &Instance, tree: &SpTree) -> Instance {
    let mut arcs: Vec<Arc> = inst.arcs().to_vec();
    let mut leaves = Vec::new();
    tree.oriented_leaves(&mut leaves);
    for (id, tail, head) in leaves {
        arcs[id].tail = tail;
        arcs[id].head = head;
    }
    Instance::new(inst.name(), true, inst.mode(), inst.vertices().to_vec(), arcs, inst.source(), inst.sink())
        .expect("re-orientation preserves validity")
}

/// Optimal solutions for every parameter `0..=k` on the graph of `tree`;
/// `None` marks an infeasible parameter.
pub fn solve_ftp_series_parallel(inst: &Instance, tree: &SpTree, k: usize) -> Result<Vec<Option<ArcSet>>, SolveError> {
    tree.validate(inst)?;
    let table = solve_node(inst, tree, k);
    Ok(table.into_iter().map(|s| s.map(|ids| ArcSet::from_ids(inst, ids))).collect())
}

type Table = Vec<Option<Vec<ArcId>>>;

fn cost_of(inst: &Instance, ids: &[ArcId]) -> Weight {
    ids.iter().map(|&id| inst.weight(id)).sum()
}

fn solve_node(inst: &Instance, tree: &SpTree, k: usize) -> Table {
    match &tree.node {
        SpNode::Leaf(id) => {
            if inst.is_vulnerable(*id) {
                let mut t = vec![None; k + 1];
                t[0] = Some(vec![*id]);
                t
            } else {
                vec![Some(vec![*id]); k + 1]
            }
        }
        SpNode::Series(a, b) => {
            let (ta, tb) = (solve_node(inst, a, k), solve_node(inst, b, k));
            ta.into_iter()
                .zip(tb)
                .map(|(x, y)| match (x, y) {
                    (Some(mut x), Some(y)) => {
                        x.extend(y);
                        Some(x)
                    }
                    _ => None,
                })
                .collect()
        }
        SpNode::Parallel(a, b) => {
            let (ta, tb) = (solve_node(inst, a, k), solve_node(inst, b, k));
            let top = |t: &Table| t.iter().rposition(|s| s.is_some()).map_or(-1, |i| i as isize);
            let (m1, m2) = (top(&ta), top(&tb));
            // index -1 stands for the empty set
            let get = |t: &Table, j: isize| -> Option<Vec<ArcId>> {
                if j < 0 {
                    Some(Vec::new())
                } else {
                    t[j as usize].clone()
                }
            };
            (0..=k as isize)
                .map(|i| {
                    if i > m1 + m2 + 1 {
                        return None;
                    }
                    let mut best: Option<(Weight, Vec<ArcId>)> = None;
                    for j in -1..=i {
                        if j > m1 || i - j - 1 > m2 {
                            continue;
                        }
                        let (Some(x), Some(y)) = (get(&ta, j), get(&tb, i - j - 1)) else { continue };
                        let c = cost_of(inst, &x) + cost_of(inst, &y);
                        if best.as_ref().map_or(true, |(b, _)| c < *b) {
                            let mut u = x;
                            u.extend(y);
                            best = Some((c, u));
                        }
                    }
                    best.map(|(_, u)| u)
                })
                .collect()
        }
    }
}

/// Decomposes the underlying undirected multigraph by repeated parallel and
/// series reductions. Directed instances must agree with the orientation
/// the decomposition induces.
pub fn sp_recognize(inst: &Instance) -> Result<SpTree, SolveError> {
    let (s, t) = (inst.source(), inst.sink());
    let not_sp = |why: &str| SolveError::NotSeriesParallel(String::from(why));
    if inst.arcs().is_empty() {
        return Err(not_sp("no arcs"));
    }
    let mut edges: Vec<Option<SpTree>> = (0..inst.arcs().len()).map(|id| Some(SpTree::leaf(inst, id))).collect();
    loop {
        let mut changed = false;
        // parallel reductions
        let mut by_ends: alloc::collections::BTreeMap<(VertexId, VertexId), usize> = Default::default();
        for i in 0..edges.len() {
            let Some(e) = &edges[i] else { continue };
            let key = (e.source.min(e.sink), e.source.max(e.sink));
            match by_ends.get(&key) {
                Some(&j) => {
                    let first = edges[j].take().unwrap();
                    let mut second = edges[i].take().unwrap();
                    if second.source != first.source {
                        second = second.reversed();
                    }
                    edges[j] = Some(SpTree::parallel(first, second).expect("terminals aligned"));
                    changed = true;
                }
                None => {
                    by_ends.insert(key, i);
                }
            }
        }
        // series reductions
        let mut incident: Vec<Vec<usize>> = vec![Vec::new(); inst.vertex_count()];
        for (i, e) in edges.iter().enumerate() {
            if let Some(e) = e {
                incident[e.source].push(i);
                incident[e.sink].push(i);
            }
        }
        for v in 0..inst.vertex_count() {
            if v == s || v == t {
                continue;
            }
            let mut live: Vec<usize> = incident[v]
                .iter()
                .copied()
                .filter(|&i| edges[i].as_ref().is_some_and(|e| e.source == v || e.sink == v))
                .collect();
            live.sort_unstable();
            live.dedup();
            match live.len() {
                1 => return Err(not_sp("dangling vertex")),
                2 => {
                    let (i, j) = (live[0], live[1]);
                    let mut a = edges[i].take().unwrap();
                    let mut b = edges[j].take().unwrap();
                    if a.sink != v {
                        a = a.reversed();
                    }
                    if b.source != v {
                        b = b.reversed();
                    }
                    if a.source == b.sink {
                        // a cycle through v alone; put it back for the parallel pass
                        edges[i] = Some(a);
                        edges[j] = Some(b);
                        continue;
                    }
                    let ib = b.sink;
                    edges[i] = Some(SpTree::series(a, b).expect("meet at v"));
                    incident[ib].push(i);
                    changed = true;
                }
                _ => {}
            }
        }
        if !changed {
            break;
        }
    }
    let live: Vec<SpTree> = edges.into_iter().flatten().collect();
    if live.len() != 1 {
        return Err(not_sp("irreducible"));
    }
    let mut tree = live.into_iter().next().unwrap();
    if (tree.source.min(tree.sink), tree.source.max(tree.sink)) != (s.min(t), s.max(t)) {
        return Err(not_sp("remaining edge does not join s and t"));
    }
    if tree.source != s {
        tree = tree.reversed();
    }
    if inst.directed() {
        tree.validate(inst).map_err(|_| not_sp("arc orientation conflicts with the decomposition"))?;
    }
    Ok(tree)
}
