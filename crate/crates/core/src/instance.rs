use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use num_traits::Zero;

use crate::error::InstanceError;

/// Exact non-negative arc cost.
pub type Weight = num_rational::Ratio<i64>;
pub type VertexId = usize;
/// Arc identity is its position in [`Instance::arcs`]; parallel arcs are
/// distinct.
pub type ArcId = usize;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Arc {
    pub tail: VertexId,
    pub head: VertexId,
    pub weight: Weight,
    pub vulnerable: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    /// Survive any `k` vulnerable-arc failures with one path.
    Ftp { k: usize },
    /// Keep `ell` arc-disjoint paths after any single failure.
    Ftf { ell: usize },
}

/// A validated problem instance. Immutable once built.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    name: String,
    directed: bool,
    mode: Mode,
    vertices: Vec<String>,
    arcs: Vec<Arc>,
    source: VertexId,
    sink: VertexId,
}

impl Instance {
    pub fn new(
        name: impl Into<String>,
        directed: bool,
        mode: Mode,
        vertices: Vec<String>,
        arcs: Vec<Arc>,
        source: VertexId,
        sink: VertexId,
    ) -> Result<Self, InstanceError> {
        let mut seen = BTreeMap::new();
        for (i, v) in vertices.iter().enumerate() {
            if seen.insert(v.as_str(), i).is_some() {
                return Err(InstanceError::DuplicateVertex { name: v.clone() });
            }
        }
        let n = vertices.len();
        for (id, a) in arcs.iter().enumerate() {
            if a.tail >= n || a.head >= n {
                return Err(InstanceError::UnknownVertex {
                    name: alloc::format!("#{}", a.tail.max(a.head)),
                });
            }
            if a.tail == a.head {
                return Err(InstanceError::SelfLoop { arc: id });
            }
            if a.weight < Weight::zero() {
                return Err(InstanceError::NegativeWeight { arc: id });
            }
        }
        if source >= n || sink >= n {
            return Err(InstanceError::UnknownVertex {
                name: alloc::format!("#{}", source.max(sink)),
            });
        }
        if source == sink {
            return Err(InstanceError::SourceIsSink);
        }
        if let Mode::Ftf { ell: 0 } = mode {
            return Err(InstanceError::ZeroEll);
        }
        Ok(Instance { name: name.into(), directed, mode, vertices, arcs, source, sink })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn directed(&self) -> bool {
        self.directed
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    /// FTP robustness parameter, if this is an FTP instance.
    pub fn k(&self) -> Option<usize> {
        match self.mode {
            Mode::Ftp { k } => Some(k),
            Mode::Ftf { .. } => None,
        }
    }

    pub fn ell(&self) -> Option<usize> {
        match self.mode {
            Mode::Ftf { ell } => Some(ell),
            Mode::Ftp { .. } => None,
        }
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertex_id(&self, name: &str) -> Option<VertexId> {
        self.vertices.iter().position(|v| v == name)
    }

    pub fn arcs(&self) -> &[Arc] {
        &self.arcs
    }

    pub fn arc(&self, id: ArcId) -> &Arc {
        &self.arcs[id]
    }

    pub fn source(&self) -> VertexId {
        self.source
    }

    pub fn sink(&self) -> VertexId {
        self.sink
    }

    pub fn weight(&self, id: ArcId) -> Weight {
        self.arcs[id].weight
    }

    pub fn is_vulnerable(&self, id: ArcId) -> bool {
        self.arcs[id].vulnerable
    }

    /// Every arc id, as a set.
    pub fn all_arcs(&self) -> ArcSet {
        ArcSet::from_ids(self, 0..self.arcs.len())
    }

    /// Same graph with a different robustness mode.
    pub fn with_mode(&self, mode: Mode) -> Result<Self, InstanceError> {
        Instance::new(
            self.name.clone(),
            self.directed,
            mode,
            self.vertices.clone(),
            self.arcs.clone(),
            self.source,
            self.sink,
        )
    }

    /// Same instance with a different name (file-format plumbing).
    pub fn renamed(&self, name: impl Into<String>) -> Self {
        let mut inst = self.clone();
        inst.name = name.into();
        inst
    }

    /// Membership mask for an arc set over this instance.
    pub fn mask(&self, set: &ArcSet) -> Vec<bool> {
        let mut mask = alloc::vec![false; self.arcs.len()];
        for &id in set.ids() {
            mask[id] = true;
        }
        mask
    }
}

/// A set of arc ids with its cached total weight.
#[derive(Debug, Clone, PartialEq, Eq, Default, Hash)]
pub struct ArcSet {
    ids: Vec<ArcId>,
    cost: Weight,
}

impl ArcSet {
    pub fn empty() -> Self {
        ArcSet { ids: Vec::new(), cost: Weight::zero() }
    }

    /// Builds the set from arbitrary ids; duplicates collapse.
    ///
    /// Panics on an id outside `inst`.
    pub fn from_ids(inst: &Instance, ids: impl IntoIterator<Item = ArcId>) -> Self {
        let mut ids: Vec<ArcId> = ids.into_iter().collect();
        ids.sort_unstable();
        ids.dedup();
        let cost = ids.iter().map(|&id| inst.weight(id)).sum();
        ArcSet { ids, cost }
    }

    /// Builds the set from a membership mask.
    pub fn from_mask(inst: &Instance, mask: &[bool]) -> Self {
        Self::from_ids(inst, mask.iter().enumerate().filter(|(_, &m)| m).map(|(i, _)| i))
    }

    pub fn ids(&self) -> &[ArcId] {
        &self.ids
    }

    pub fn cost(&self) -> Weight {
        self.cost
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn contains(&self, id: ArcId) -> bool {
        self.ids.binary_search(&id).is_ok()
    }

    pub fn union(&self, other: &ArcSet, inst: &Instance) -> ArcSet {
        ArcSet::from_ids(inst, self.ids.iter().chain(other.ids.iter()).copied())
    }

    pub fn difference(&self, other: &ArcSet, inst: &Instance) -> ArcSet {
        ArcSet::from_ids(inst, self.ids.iter().copied().filter(|&id| !other.contains(id)))
    }

    pub fn is_subset(&self, other: &ArcSet) -> bool {
        self.ids.iter().all(|&id| other.contains(id))
    }
}

/// Convenience constructor naming vertices on first use.
///
/// ```
/// use ftnet_core::{InstanceBuilder, Mode};
/// let inst = InstanceBuilder::new(Mode::Ftp { k: 1 })
///     .arc("s", "a", 1, true)
///     .arc("a", "t", 1, false)
///     .build()
///     .unwrap();
/// assert_eq!(inst.arcs().len(), 2);
/// ```
#[derive(Debug, Clone)]
pub struct InstanceBuilder {
    name: String,
    directed: bool,
    mode: Mode,
    vertices: Vec<String>,
    arcs: Vec<Arc>,
    source: String,
    sink: String,
}

impl InstanceBuilder {
    pub fn new(mode: Mode) -> Self {
        InstanceBuilder {
            name: String::new(),
            directed: true,
            mode,
            vertices: alloc::vec!["s".to_string(), "t".to_string()],
            arcs: Vec::new(),
            source: "s".to_string(),
            sink: "t".to_string(),
        }
    }

    pub fn name(mut self, name: &str) -> Self {
        self.name = name.to_string();
        self
    }

    pub fn undirected(mut self) -> Self {
        self.directed = false;
        self
    }

    pub fn terminals(mut self, source: &str, sink: &str) -> Self {
        self.source = source.to_string();
        self.sink = sink.to_string();
        self.vertex(source);
        self.vertex(sink);
        self
    }

    fn vertex(&mut self, name: &str) -> VertexId {
        match self.vertices.iter().position(|v| v == name) {
            Some(i) => i,
            None => {
                self.vertices.push(name.to_string());
                self.vertices.len() - 1
            }
        }
    }

    pub fn add_vertex(mut self, name: &str) -> Self {
        self.vertex(name);
        self
    }

    pub fn arc(self, tail: &str, head: &str, weight: i64, vulnerable: bool) -> Self {
        self.arc_weight(tail, head, Weight::from_integer(weight), vulnerable)
    }

    pub fn arc_weight(mut self, tail: &str, head: &str, weight: Weight, vulnerable: bool) -> Self {
        let tail = self.vertex(tail);
        let head = self.vertex(head);
        self.arcs.push(Arc { tail, head, weight, vulnerable });
        self
    }

    pub fn build(self) -> Result<Instance, InstanceError> {
        let source = self.vertices.iter().position(|v| *v == self.source).unwrap();
        let sink = self.vertices.iter().position(|v| *v == self.sink).unwrap();
        Instance::new(self.name, self.directed, self.mode, self.vertices, self.arcs, source, sink)
    }
}
