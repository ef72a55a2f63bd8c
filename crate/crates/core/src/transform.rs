//! Graph rewrites applied before solving: undirected-to-directed and
//! DAG-to-layered.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::Zero;

use crate::error::SolveError;
use crate::graph::{topological_order, Adjacency};
use crate::instance::{Arc, ArcId, ArcSet, Instance, Mode, VertexId, Weight};

/// Replaces every undirected edge by two antiparallel arcs with its weight
/// and vulnerability. `pairs[e]` holds the two arc ids made from edge `e`.
pub fn to_directed(inst: &Instance) -> Result<(Instance, Vec<(ArcId, ArcId)>), SolveError> {
    if inst.directed() {
        return Err(SolveError::InvalidParameter("instance is already directed".into()));
    }
    let mut arcs = Vec::with_capacity(2 * inst.arcs().len());
    let mut pairs = Vec::with_capacity(inst.arcs().len());
    for a in inst.arcs() {
        pairs.push((arcs.len(), arcs.len() + 1));
        arcs.push(a.clone());
        arcs.push(Arc { tail: a.head, head: a.tail, ..a.clone() });
    }
    let directed = Instance::new(
        inst.name(),
        true,
        inst.mode(),
        inst.vertices().to_vec(),
        arcs,
        inst.source(),
        inst.sink(),
    )
    .expect("orientation preserves validity");
    Ok((directed, pairs))
}

/// Maps a directed solution back to the undirected edges it uses.
pub fn edges_of(undirected: &Instance, pairs: &[(ArcId, ArcId)], set: &ArcSet) -> ArcSet {
    ArcSet::from_ids(
        undirected,
        pairs
            .iter()
            .enumerate()
            .filter(|(_, &(a, b))| set.contains(a) || set.contains(b))
            .map(|(e, _)| e),
    )
}

/// A DAG whose arcs all join consecutive layers.
#[derive(Debug, Clone)]
pub struct LayeredInstance {
    pub instance: Instance,
    /// `layers[i]` lists the vertices of layer `i + 1`; the first is `{s}`,
    /// the last `{t}`.
    pub layers: Vec<Vec<VertexId>>,
    /// 1-based layer of each layered vertex.
    pub layer_of: Vec<usize>,
    /// Original arc of each layered arc.
    pub origin: Vec<ArcId>,
}

impl LayeredInstance {
    pub fn layer_count(&self) -> usize {
        self.layers.len()
    }

    /// An original arc is taken iff any of its sub-arcs is.
    pub fn map_back(&self, original: &Instance, set: &ArcSet) -> ArcSet {
        ArcSet::from_ids(original, set.ids().iter().map(|&id| self.origin[id]))
    }
}

/// Layers an acyclic FTP instance by longest distance from `s`, dropping
/// vertices on no `s`-`t` path and subdividing arcs that skip layers.
///
/// The first sub-arc keeps the weight, the rest cost 0, and every sub-arc
/// inherits the vulnerability flag.
pub fn dag_to_layered(inst: &Instance) -> Result<LayeredInstance, SolveError> {
    if !inst.directed() {
        return Err(SolveError::Undirected);
    }
    if !matches!(inst.mode(), Mode::Ftp { .. }) {
        return Err(SolveError::ModeMismatch("layering needs an FTP instance".into()));
    }
    let order = topological_order(inst).ok_or(SolveError::Cyclic)?;
    let n = inst.vertex_count();
    let (s, t) = (inst.source(), inst.sink());

    let from_s = Adjacency::new(inst).reachable(s, |_| true);
    let reversed: Vec<Arc> = inst.arcs().iter().map(|a| Arc { tail: a.head, head: a.tail, ..a.clone() }).collect();
    let rev_inst = Instance::new("", true, inst.mode(), inst.vertices().to_vec(), reversed, t, s)
        .expect("reversal preserves validity");
    let to_t = Adjacency::new(&rev_inst).reachable(t, |_| true);
    let relevant: Vec<bool> = (0..n).map(|v| from_s[v] && to_t[v]).collect();
    let keep = |a: &Arc| relevant[a.tail] && relevant[a.head];

    let mut layer = vec![0usize; n];
    if relevant[s] && relevant[t] {
        layer[s] = 1;
        let mut incoming: Vec<Vec<VertexId>> = vec![Vec::new(); n];
        for a in inst.arcs().iter().filter(|a| keep(a)) {
            incoming[a.head].push(a.tail);
        }
        for &v in &order {
            if relevant[v] && v != s {
                layer[v] = incoming[v].iter().map(|&u| layer[u]).max().unwrap_or(0) + 1;
            }
        }
    } else {
        // no s-t path: two empty layers
        layer[s] = 1;
        layer[t] = 2;
    }

    let mut names: Vec<String> = Vec::new();
    let mut layer_of: Vec<usize> = Vec::new();
    let mut new_id = vec![usize::MAX; n];
    for v in 0..n {
        if layer[v] > 0 {
            new_id[v] = names.len();
            names.push(inst.vertices()[v].clone());
            layer_of.push(layer[v]);
        }
    }
    let mut taken: BTreeSet<String> = names.iter().cloned().collect();
    let mut arcs = Vec::new();
    let mut origin = Vec::new();
    for (id, a) in inst.arcs().iter().enumerate() {
        if !keep(a) || layer[a.tail] == 0 {
            continue;
        }
        let span = layer[a.head] - layer[a.tail];
        let mut prev = new_id[a.tail];
        for j in 1..=span {
            let next = if j == span {
                new_id[a.head]
            } else {
                let mut name = format!("{}~e{}.{}", inst.vertices()[a.tail], id, j);
                while taken.contains(&name) {
                    name.push('~');
                }
                taken.insert(name.clone());
                names.push(name);
                layer_of.push(layer[a.tail] + j);
                names.len() - 1
            };
            let weight = if j == 1 { a.weight } else { Weight::zero() };
            arcs.push(Arc { tail: prev, head: next, weight, vulnerable: a.vulnerable });
            origin.push(id);
            prev = next;
        }
    }
    let r = layer_of.iter().copied().max().unwrap_or(2);
    let mut layers = vec![Vec::new(); r];
    for (v, &l) in layer_of.iter().enumerate() {
        layers[l - 1].push(v);
    }
    let instance = Instance::new(inst.name(), true, inst.mode(), names, arcs, new_id[s], new_id[t])
        .expect("layering preserves validity");
    Ok(LayeredInstance { instance, layers, layer_of, origin })
}
