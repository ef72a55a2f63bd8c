//! Seeded instance generators.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::SolveError;
use crate::ftp::SpTree;
use crate::instance::{Arc, Instance, Mode, Weight};

/// Knobs shared by the random families.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ArcParams {
    /// Percentage of vulnerable arcs, 0..=100.
    pub vulnerable_pct: u32,
    /// Inclusive integer weight range.
    pub min_weight: i64,
    pub max_weight: i64,
}

impl Default for ArcParams {
    fn default() -> Self {
        ArcParams { vulnerable_pct: 50, min_weight: 1, max_weight: 9 }
    }
}

/// A rooted directed Steiner tree instance with `m` terminals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DstInstance {
    pub vertex_count: usize,
    pub arcs: Vec<(usize, usize, Weight)>,
    pub root: usize,
    pub terminals: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GenSpec {
    /// `p` parallel vulnerable unit arcs `s -> t`.
    Parallel { p: usize, k: usize },
    /// `n` vertices and `arcs` arcs around an embedded `s`-`t` path.
    Random { n: usize, arcs: usize, params: ArcParams, mode: Mode, directed: bool, seed: u64 },
    /// Arcs only go from lower to higher layers.
    RandomDag { n: usize, layers: usize, arcs: usize, params: ArcParams, mode: Mode, seed: u64 },
    /// Random series/parallel compositions, at most `max_arcs` leaves.
    RandomSp { depth: usize, max_arcs: usize, params: ArcParams, mode: Mode, seed: u64 },
    /// FTP instance encoding a Steiner tree problem.
    DstReduction { dst: DstInstance },
}

#[derive(Debug, Clone)]
pub struct Generated {
    pub instance: Instance,
    /// Key/value facts known by construction.
    pub annotations: Vec<(String, String)>,
    /// Decomposition tree for the series-parallel family.
    pub tree: Option<SpTree>,
}

fn bad(msg: &str) -> SolveError {
    SolveError::InvalidParameter(msg.to_string())
}

fn weight(rng: &mut ChaCha8Rng, p: &ArcParams) -> Weight {
    Weight::from_integer(rng.gen_range(p.min_weight..=p.max_weight))
}

fn random_arc(rng: &mut ChaCha8Rng, p: &ArcParams, tail: usize, head: usize) -> Arc {
    Arc { tail, head, weight: weight(rng, p), vulnerable: rng.gen_range(0..100) < p.vulnerable_pct }
}

fn check_params(p: &ArcParams) -> Result<(), SolveError> {
    if p.min_weight < 0 || p.min_weight > p.max_weight {
        return Err(bad("weight range must be non-negative and non-empty"));
    }
    if p.vulnerable_pct > 100 {
        return Err(bad("vulnerable percentage exceeds 100"));
    }
    Ok(())
}

/// Vertex names `s`, `t`, `v2`, `v3`, ...
fn names(n: usize) -> Vec<String> {
    (0..n)
        .map(|i| match i {
            0 => "s".to_string(),
            1 => "t".to_string(),
            _ => format!("v{i}"),
        })
        .collect()
}

pub fn generate(spec: &GenSpec) -> Result<Generated, SolveError> {
    match spec {
        GenSpec::Parallel { p, k } => parallel(*p, *k),
        GenSpec::Random { n, arcs, params, mode, directed, seed } => random(*n, *arcs, params, *mode, *directed, *seed),
        GenSpec::RandomDag { n, layers, arcs, params, mode, seed } => random_dag(*n, *layers, *arcs, params, *mode, *seed),
        GenSpec::RandomSp { depth, max_arcs, params, mode, seed } => random_sp(*depth, *max_arcs, params, *mode, *seed),
        GenSpec::DstReduction { dst } => dst_reduction(dst),
    }
}

fn parallel(p: usize, k: usize) -> Result<Generated, SolveError> {
    if p <= k {
        return Err(bad("p must exceed k"));
    }
    let arcs = (0..p).map(|_| Arc { tail: 0, head: 1, weight: Weight::from_integer(1), vulnerable: true }).collect();
    let instance = Instance::new(format!("parallel-{p}-{k}"), true, Mode::Ftp { k }, names(2), arcs, 0, 1)
        .map_err(|e| bad(&e.to_string()))?;
    let fractional = Weight::new(p as i64, (p - k) as i64);
    Ok(Generated {
        instance,
        annotations: alloc::vec![
            ("integral_opt".to_string(), (k + 1).to_string()),
            ("fractional_opt".to_string(), fractional.to_string()),
        ],
        tree: None,
    })
}

fn random(n: usize, count: usize, p: &ArcParams, mode: Mode, directed: bool, seed: u64) -> Result<Generated, SolveError> {
    check_params(p)?;
    if n < 2 {
        return Err(bad("need at least 2 vertices"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut inner: Vec<usize> = (2..n).collect();
    inner.shuffle(&mut rng);
    let hops = rng.gen_range(0..=inner.len());
    let mut route = alloc::vec![0];
    route.extend_from_slice(&inner[..hops]);
    route.push(1);
    let mut arcs: Vec<Arc> = route.windows(2).map(|w| random_arc(&mut rng, p, w[0], w[1])).collect();
    while arcs.len() < count {
        let tail = rng.gen_range(0..n);
        let head = rng.gen_range(0..n);
        if tail != head {
            arcs.push(random_arc(&mut rng, p, tail, head));
        }
    }
    let name = format!("random-n{n}-m{count}-s{seed}");
    let instance = Instance::new(name, directed, mode, names(n), arcs, 0, 1).map_err(|e| bad(&e.to_string()))?;
    Ok(Generated { instance, annotations: Vec::new(), tree: None })
}

fn random_dag(n: usize, layers: usize, count: usize, p: &ArcParams, mode: Mode, seed: u64) -> Result<Generated, SolveError> {
    check_params(p)?;
    if n < 2 || layers == 0 {
        return Err(bad("need at least 2 vertices and 1 layer"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    // s sits on layer 0, t on layers + 1
    let mut layer = alloc::vec![0usize; n];
    layer[1] = layers + 1;
    for l in layer.iter_mut().skip(2) {
        *l = rng.gen_range(1..=layers);
    }
    let mut route: Vec<usize> = (2..n).filter(|_| rng.gen_bool(0.5)).collect();
    route.sort_by_key(|&v| layer[v]);
    route.dedup_by_key(|v| layer[*v]);
    route.insert(0, 0);
    route.push(1);
    let mut arcs: Vec<Arc> = route.windows(2).map(|w| random_arc(&mut rng, p, w[0], w[1])).collect();
    let mut attempts = 0;
    while arcs.len() < count && attempts < 100 * count.max(1) {
        attempts += 1;
        let a = rng.gen_range(0..n);
        let b = rng.gen_range(0..n);
        if layer[a] < layer[b] {
            arcs.push(random_arc(&mut rng, p, a, b));
        } else if layer[b] < layer[a] {
            arcs.push(random_arc(&mut rng, p, b, a));
        }
    }
    let name = format!("dag-n{n}-l{layers}-m{count}-s{seed}");
    let instance = Instance::new(name, true, mode, names(n), arcs, 0, 1).map_err(|e| bad(&e.to_string()))?;
    Ok(Generated { instance, annotations: Vec::new(), tree: None })
}

struct SpBuilder<'a> {
    rng: ChaCha8Rng,
    params: &'a ArcParams,
    arcs: Vec<Arc>,
    vertices: usize,
    room: usize,
}

impl SpBuilder<'_> {
    /// Returns the tree shape joining `u` to `v`; leaves are arc ids to be
    /// resolved once the instance exists.
    fn build(&mut self, u: usize, v: usize, depth: usize) -> Shape {
        let stop = depth == 0 || self.room < 2 || self.rng.gen_range(0..100) < 25;
        if stop {
            self.room = self.room.saturating_sub(1);
            let arc = random_arc(&mut self.rng, self.params, u, v);
            self.arcs.push(arc);
            return Shape::Leaf(self.arcs.len() - 1);
        }
        // reserve one leaf for the second child
        self.room -= 1;
        if self.rng.gen_bool(0.5) {
            let w = self.vertices;
            self.vertices += 1;
            let a = self.build(u, w, depth - 1);
            self.room += 1;
            let b = self.build(w, v, depth - 1);
            Shape::Series(alloc::boxed::Box::new(a), alloc::boxed::Box::new(b))
        } else {
            let a = self.build(u, v, depth - 1);
            self.room += 1;
            let b = self.build(u, v, depth - 1);
            Shape::Parallel(alloc::boxed::Box::new(a), alloc::boxed::Box::new(b))
        }
    }
}

enum Shape {
    Leaf(usize),
    Series(alloc::boxed::Box<Shape>, alloc::boxed::Box<Shape>),
    Parallel(alloc::boxed::Box<Shape>, alloc::boxed::Box<Shape>),
}

fn to_tree(inst: &Instance, shape: &Shape) -> SpTree {
    match shape {
        Shape::Leaf(id) => SpTree::leaf(inst, *id),
        Shape::Series(a, b) => SpTree::series(to_tree(inst, a), to_tree(inst, b)).expect("built in series"),
        Shape::Parallel(a, b) => SpTree::parallel(to_tree(inst, a), to_tree(inst, b)).expect("built in parallel"),
    }
}

fn random_sp(depth: usize, max_arcs: usize, p: &ArcParams, mode: Mode, seed: u64) -> Result<Generated, SolveError> {
    check_params(p)?;
    if max_arcs == 0 {
        return Err(bad("max_arcs must be positive"));
    }
    let mut b = SpBuilder { rng: ChaCha8Rng::seed_from_u64(seed), params: p, arcs: Vec::new(), vertices: 2, room: max_arcs };
    let shape = b.build(0, 1, depth);
    let name = format!("sp-d{depth}-m{max_arcs}-s{seed}");
    let instance = Instance::new(name, true, mode, names(b.vertices), b.arcs, 0, 1).map_err(|e| bad(&e.to_string()))?;
    let tree = to_tree(&instance, &shape);
    Ok(Generated { instance, annotations: Vec::new(), tree: Some(tree) })
}

/// Random rooted Steiner tree instance; every terminal is reachable from
/// the root.
pub fn random_dst(n: usize, extra_arcs: usize, m: usize, max_weight: i64, seed: u64) -> DstInstance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = n.max(m + 1);
    let mut arcs = Vec::new();
    // random arborescence from vertex 0
    for v in 1..n {
        let parent = rng.gen_range(0..v);
        arcs.push((parent, v, Weight::from_integer(rng.gen_range(1..=max_weight))));
    }
    for _ in 0..extra_arcs {
        let a = rng.gen_range(0..n);
        let b = rng.gen_range(0..n);
        if a != b {
            arcs.push((a, b, Weight::from_integer(rng.gen_range(1..=max_weight))));
        }
    }
    let mut others: Vec<usize> = (1..n).collect();
    others.shuffle(&mut rng);
    let mut terminals = others[..m].to_vec();
    terminals.sort_unstable();
    DstInstance { vertex_count: n, arcs, root: 0, terminals }
}

/// Original arcs stay safe; each terminal gets a zero-cost vulnerable arc
/// to a new sink, and `k = m - 1`.
fn dst_reduction(dst: &DstInstance) -> Result<Generated, SolveError> {
    let m = dst.terminals.len();
    if m == 0 {
        return Err(bad("need at least one terminal"));
    }
    let n = dst.vertex_count;
    let sink = n;
    let mut vertices: Vec<String> = (0..n).map(|i| format!("d{i}")).collect();
    vertices.push("t".to_string());
    let mut arcs: Vec<Arc> =
        dst.arcs.iter().map(|&(tail, head, weight)| Arc { tail, head, weight, vulnerable: false }).collect();
    for &u in &dst.terminals {
        arcs.push(Arc { tail: u, head: sink, weight: Weight::from_integer(0), vulnerable: true });
    }
    let instance = Instance::new(format!("dst-m{m}"), true, Mode::Ftp { k: m - 1 }, vertices, arcs, dst.root, sink)
        .map_err(|e| bad(&e.to_string()))?;
    Ok(Generated { instance, annotations: alloc::vec![("terminals".to_string(), m.to_string())], tree: None })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parallel_annotations() {
        let g = generate(&GenSpec::Parallel { p: 5, k: 1 }).unwrap();
        assert_eq!(g.instance.arcs().len(), 5);
        assert_eq!(g.annotations[0], ("integral_opt".to_string(), "2".to_string()));
        assert_eq!(g.annotations[1], ("fractional_opt".to_string(), "5/4".to_string()));
        let g = generate(&GenSpec::Parallel { p: 3, k: 0 }).unwrap();
        assert_eq!(g.annotations[0].1, "1");
        assert_eq!(g.annotations[1].1, "1");
        assert_eq!(generate(&GenSpec::Parallel { p: 1, k: 1 }).unwrap_err(), bad("p must exceed k"));
    }

    #[test]
    fn generators_are_pure_in_the_seed() {
        let spec = GenSpec::Random {
            n: 8,
            arcs: 12,
            params: ArcParams::default(),
            mode: Mode::Ftp { k: 1 },
            directed: true,
            seed: 7,
        };
        assert_eq!(generate(&spec).unwrap().instance, generate(&spec).unwrap().instance);
    }

    #[test]
    fn sp_trees_validate() {
        for seed in 0..20 {
            let spec = GenSpec::RandomSp { depth: 6, max_arcs: 12, params: ArcParams::default(), mode: Mode::Ftp { k: 2 }, seed };
            let g = generate(&spec).unwrap();
            assert!(g.instance.arcs().len() <= 12);
            g.tree.unwrap().validate(&g.instance).unwrap();
        }
    }

    #[test]
    fn dag_is_acyclic() {
        for seed in 0..20 {
            let spec =
                GenSpec::RandomDag { n: 8, layers: 4, arcs: 12, params: ArcParams::default(), mode: Mode::Ftp { k: 1 }, seed };
            let g = generate(&spec).unwrap();
            assert!(crate::graph::topological_order(&g.instance).is_some());
        }
    }
}
