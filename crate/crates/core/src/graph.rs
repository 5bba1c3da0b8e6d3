//! Edge-labelled directed multigraphs and the structural predicates the
//! products and decompositions are built on.
//!
//! Graph values are immutable once built. Vertices are string identifiers
//! kept in lexicographic order; arcs are keyed by their unique identifier.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt;

use num_rational::Ratio;
use serde::Serialize;

use crate::error::{Error, Result};

/// Arc weight `t(a)`. Carried and compared, never interpreted.
pub type Weight = Ratio<u64>;

pub type VertexSet = BTreeSet<String>;

/// The `(action, weight)` pair attached to every arc.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LabelPair {
    action: String,
    weight: Weight,
}

impl LabelPair {
    pub fn new(action: impl Into<String>, weight: Weight) -> Result<Self> {
        let action = action.into();
        if action.is_empty() {
            return Err(Error::MalformedGraph("label action must be non-empty".into()));
        }
        Ok(Self { action, weight })
    }

    /// Label with weight 1.
    pub fn unit(action: impl Into<String>) -> Result<Self> {
        Self::new(action, Weight::from_integer(1))
    }

    /// The label every generator uses: `("s", 1)`.
    pub fn sync() -> Self {
        Self {
            action: "s".into(),
            weight: Weight::from_integer(1),
        }
    }

    pub fn action(&self) -> &str {
        &self.action
    }

    pub fn weight(&self) -> Weight {
        self.weight
    }
}

impl fmt::Display for LabelPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.action, self.weight)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Arc {
    pub id: String,
    pub tail: String,
    pub head: String,
    pub label: LabelPair,
}

impl Arc {
    pub fn new(
        id: impl Into<String>,
        tail: impl Into<String>,
        head: impl Into<String>,
        label: LabelPair,
    ) -> Self {
        Self {
            id: id.into(),
            tail: tail.into(),
            head: head.into(),
            label,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LabeledDigraph {
    vertices: VertexSet,
    arcs: BTreeMap<String, Arc>,
}

impl LabeledDigraph {
    /// Builds a graph, rejecting duplicate arc ids and dangling endpoints.
    pub fn new<V, S>(vertices: V, arcs: impl IntoIterator<Item = Arc>) -> Result<Self>
    where
        V: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let vertices: VertexSet = vertices.into_iter().map(Into::into).collect();
        let mut map = BTreeMap::new();
        for arc in arcs {
            for end in [&arc.tail, &arc.head] {
                if !vertices.contains(end) {
                    return Err(Error::MalformedGraph(format!(
                        "arc `{}` references missing vertex `{}`",
                        arc.id, end
                    )));
                }
            }
            if map.contains_key(&arc.id) {
                return Err(Error::MalformedGraph(format!("duplicate arc id `{}`", arc.id)));
            }
            map.insert(arc.id.clone(), arc);
        }
        Ok(Self {
            vertices,
            arcs: map,
        })
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn vertices(&self) -> &VertexSet {
        &self.vertices
    }

    /// Arcs in lexicographic order of their ids.
    pub fn arcs(&self) -> impl Iterator<Item = &Arc> + '_ {
        self.arcs.values()
    }

    pub fn arc(&self, id: &str) -> Option<&Arc> {
        self.arcs.get(id)
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn arc_count(&self) -> usize {
        self.arcs.len()
    }

    pub fn contains_vertex(&self, v: &str) -> bool {
        self.vertices.contains(v)
    }

    /// All label pairs occurring on arcs.
    pub fn labelset(&self) -> BTreeSet<LabelPair> {
        self.arcs.values().map(|a| a.label.clone()).collect()
    }

    pub fn in_degree(&self, v: &str) -> usize {
        self.arcs.values().filter(|a| a.head == v).count()
    }

    pub fn out_degree(&self, v: &str) -> usize {
        self.arcs.values().filter(|a| a.tail == v).count()
    }

    /// Every arc flipped; ids and labels kept.
    pub fn reversed(&self) -> Self {
        let arcs = self
            .arcs
            .values()
            .map(|a| Arc::new(a.id.clone(), a.head.clone(), a.tail.clone(), a.label.clone()));
        Self::new(self.vertices.iter().cloned(), arcs).expect("reversal keeps endpoints")
    }

    /// Renames vertices through `mapping`, which must be a bijection on the
    /// vertex set. Arc ids are kept.
    pub fn relabel(&self, mapping: &BTreeMap<String, String>) -> Result<Self> {
        let image: VertexSet = self
            .vertices
            .iter()
            .map(|v| {
                mapping
                    .get(v)
                    .cloned()
                    .ok_or_else(|| Error::UnknownVertex(v.clone()))
            })
            .collect::<Result<_>>()?;
        if image.len() != self.vertices.len() {
            return Err(Error::MalformedGraph("relabelling is not injective".into()));
        }
        let arcs = self.arcs.values().map(|a| {
            Arc::new(
                a.id.clone(),
                mapping[&a.tail].clone(),
                mapping[&a.head].clone(),
                a.label.clone(),
            )
        });
        Self::new(image, arcs)
    }

    /// Multiset of `(tail, head, label)` triples.
    pub fn arc_multiset(&self) -> BTreeMap<(String, String, LabelPair), usize> {
        let mut counts = BTreeMap::new();
        for a in self.arcs.values() {
            *counts
                .entry((a.tail.clone(), a.head.clone(), a.label.clone()))
                .or_insert(0) += 1;
        }
        counts
    }

    pub(crate) fn ensure_known<'a>(&self, vs: impl IntoIterator<Item = &'a String>) -> Result<()> {
        for v in vs {
            if !self.vertices.contains(v) {
                return Err(Error::UnknownVertex(v.clone()));
            }
        }
        Ok(())
    }
}

/// Dense index over a graph for the traversal-heavy algorithms.
pub(crate) struct Adjacency<'g> {
    pub names: Vec<&'g str>,
    /// `(neighbour, arc)` pairs.
    pub out: Vec<Vec<(usize, &'g Arc)>>,
    pub inc: Vec<Vec<(usize, &'g Arc)>>,
}

impl<'g> Adjacency<'g> {
    pub fn new(g: &'g LabeledDigraph) -> Self {
        let names: Vec<&str> = g.vertices.iter().map(String::as_str).collect();
        let index: HashMap<&str, usize> = names.iter().enumerate().map(|(i, v)| (*v, i)).collect();
        let mut out = vec![Vec::new(); names.len()];
        let mut inc = vec![Vec::new(); names.len()];
        for a in g.arcs.values() {
            let t = index[a.tail.as_str()];
            let h = index[a.head.as_str()];
            out[t].push((h, a));
            inc[h].push((t, a));
        }
        Self {
            names,
            out,
            inc,
        }
    }

    /// Kahn order, or `None` when a cycle (or self-loop) exists.
    pub fn topological_order(&self) -> Option<Vec<usize>> {
        let mut indeg: Vec<usize> = self.inc.iter().map(Vec::len).collect();
        let mut queue: VecDeque<usize> = (0..indeg.len()).filter(|&v| indeg[v] == 0).collect();
        let mut order = Vec::with_capacity(indeg.len());
        while let Some(v) = queue.pop_front() {
            order.push(v);
            for &(w, _) in &self.out[v] {
                indeg[w] -= 1;
                if indeg[w] == 0 {
                    queue.push_back(w);
                }
            }
        }
        (order.len() == indeg.len()).then_some(order)
    }

    pub fn levels(&self) -> Option<Vec<usize>> {
        let order = self.topological_order()?;
        let mut level = vec![0usize; order.len()];
        for v in order {
            for &(w, _) in &self.out[v] {
                level[w] = level[w].max(level[v] + 1);
            }
        }
        Some(level)
    }

    pub fn component_count(&self) -> usize {
        let n = self.names.len();
        let mut seen = vec![false; n];
        let mut count = 0;
        for start in 0..n {
            if seen[start] {
                continue;
            }
            count += 1;
            seen[start] = true;
            let mut stack = vec![start];
            while let Some(v) = stack.pop() {
                for &(w, _) in self.out[v].iter().chain(&self.inc[v]) {
                    if !seen[w] {
                        seen[w] = true;
                        stack.push(w);
                    }
                }
            }
        }
        count
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub acyclic: bool,
    pub weakly_connected: bool,
    pub component_count: usize,
    pub uniform_labels: bool,
    pub issues: Vec<String>,
}

pub fn validate(g: &LabeledDigraph) -> ValidationReport {
    let adj = Adjacency::new(g);
    let mut issues = Vec::new();
    for a in g.arcs() {
        if a.tail == a.head {
            issues.push(format!("self-loop `{}` on vertex `{}`", a.id, a.tail));
        }
    }
    let acyclic = adj.topological_order().is_some();
    if !acyclic {
        issues.push("graph contains a directed cycle".into());
    }
    let component_count = adj.component_count();
    if g.vertex_count() == 0 {
        issues.push("graph has no vertices".into());
    } else if component_count > 1 {
        issues.push(format!("graph has {component_count} weakly connected components"));
    }
    let labels = g.labelset();
    let uniform_labels = labels.len() <= 1;
    if !uniform_labels {
        issues.push(format!("{} distinct label pairs", labels.len()));
    }
    ValidationReport {
        acyclic,
        weakly_connected: component_count == 1,
        component_count,
        uniform_labels,
        issues,
    }
}

/// Length of a longest directed path ending at each vertex.
pub fn levels(g: &LabeledDigraph) -> Result<BTreeMap<String, usize>> {
    let adj = Adjacency::new(g);
    let level = adj.levels().ok_or(Error::CyclicInput)?;
    Ok(adj
        .names
        .iter()
        .zip(level)
        .map(|(v, l)| (v.to_string(), l))
        .collect())
}

/// The arcs of `[X, Y]`, split by direction. Ids are sorted.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct Cut {
    pub forward: Vec<String>,
    pub backward: Vec<String>,
}

impl Cut {
    pub fn len(&self) -> usize {
        self.forward.len() + self.backward.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

fn ensure_disjoint(x: &VertexSet, y: &VertexSet) -> Result<()> {
    if let Some(v) = x.intersection(y).next() {
        return Err(Error::OverlappingSets(format!("`{v}` is in both sets")));
    }
    Ok(())
}

pub fn cut_arcs(g: &LabeledDigraph, x: &VertexSet, y: &VertexSet) -> Result<Cut> {
    g.ensure_known(x.iter().chain(y))?;
    ensure_disjoint(x, y)?;
    let mut cut = Cut::default();
    for a in g.arcs() {
        if x.contains(&a.tail) && y.contains(&a.head) {
            cut.forward.push(a.id.clone());
        } else if y.contains(&a.tail) && x.contains(&a.head) {
            cut.backward.push(a.id.clone());
        }
    }
    Ok(cut)
}

/// Every `u ∈ x`, `v ∈ y` pair is joined by at least one arc, in either
/// direction.
pub fn is_complete_bipartite(g: &LabeledDigraph, x: &VertexSet, y: &VertexSet) -> Result<bool> {
    g.ensure_known(x.iter().chain(y))?;
    ensure_disjoint(x, y)?;
    let mut joined: BTreeSet<(&str, &str)> = BTreeSet::new();
    for a in g.arcs() {
        if x.contains(&a.tail) && y.contains(&a.head) {
            joined.insert((&a.tail, &a.head));
        } else if y.contains(&a.tail) && x.contains(&a.head) {
            joined.insert((&a.head, &a.tail));
        }
    }
    Ok(joined.len() == x.len() * y.len())
}

pub fn induced_subgraph(g: &LabeledDigraph, vs: &VertexSet) -> Result<LabeledDigraph> {
    g.ensure_known(vs)?;
    let arcs = g
        .arcs()
        .filter(|a| vs.contains(&a.tail) && vs.contains(&a.head))
        .cloned();
    LabeledDigraph::new(vs.iter().cloned(), arcs)
}

pub fn arc_induced_subgraph(g: &LabeledDigraph, arc_ids: &BTreeSet<String>) -> Result<LabeledDigraph> {
    let mut arcs = Vec::with_capacity(arc_ids.len());
    let mut vertices = VertexSet::new();
    for id in arc_ids {
        let a = g.arc(id).ok_or_else(|| Error::UnknownArc(id.clone()))?;
        vertices.insert(a.tail.clone());
        vertices.insert(a.head.clone());
        arcs.push(a.clone());
    }
    LabeledDigraph::new(vertices, arcs)
}

/// Ordered partition `X₁ ∪ … ∪ Xₙ` of a vertex set, `n ≥ 2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LayerPartition {
    layers: Vec<VertexSet>,
}

impl LayerPartition {
    pub fn new(layers: Vec<VertexSet>) -> Result<Self> {
        if layers.len() < 2 {
            return Err(Error::InvalidPartition(format!(
                "need at least 2 layers, got {}",
                layers.len()
            )));
        }
        let mut seen = VertexSet::new();
        for (i, layer) in layers.iter().enumerate() {
            if layer.is_empty() {
                return Err(Error::InvalidPartition(format!("layer {} is empty", i + 1)));
            }
            for v in layer {
                if !seen.insert(v.clone()) {
                    return Err(Error::OverlappingSets(format!("`{v}` appears in two layers")));
                }
            }
        }
        Ok(Self { layers })
    }

    pub fn layers(&self) -> &[VertexSet] {
        &self.layers
    }

    pub fn len(&self) -> usize {
        self.layers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.layers.is_empty()
    }

    /// Fails unless the layers cover exactly the vertices of `g`.
    pub fn bind(&self, g: &LabeledDigraph) -> Result<()> {
        let union: VertexSet = self.layers.iter().flatten().cloned().collect();
        if &union != g.vertices() {
            let extra = union.difference(g.vertices()).next();
            let missing = g.vertices().difference(&union).next();
            let msg = match (extra, missing) {
                (Some(v), _) => format!("`{v}` is not a vertex of the graph"),
                (_, Some(v)) => format!("vertex `{v}` is not in any layer"),
                _ => unreachable!(),
            };
            return Err(Error::PartitionMismatch(msg));
        }
        Ok(())
    }

    /// Layer index (0-based) of every vertex.
    pub fn layer_index(&self) -> HashMap<&str, usize> {
        self.layers
            .iter()
            .enumerate()
            .flat_map(|(i, l)| l.iter().map(move |v| (v.as_str(), i)))
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Orientation {
    /// Every consecutive-layer arc goes from `Xᵢ` to `Xᵢ₊₁`.
    Forward,
    Backward,
    Mixed,
    /// No arcs between consecutive layers.
    Unoriented,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct CutCount {
    pub forward: usize,
    pub backward: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LayeringReport {
    pub consecutive_only: bool,
    pub orientation: Orientation,
    /// `cut_counts[i]` counts the arcs of `[Xᵢ₊₁, Xᵢ₊₂]` (0-based `i`).
    pub cut_counts: Vec<CutCount>,
    /// Arcs inside a layer or skipping a layer.
    pub non_consecutive: Vec<String>,
}

pub fn check_layering(g: &LabeledDigraph, p: &LayerPartition) -> Result<LayeringReport> {
    p.bind(g)?;
    let layer = p.layer_index();
    let mut cut_counts = vec![CutCount::default(); p.len() - 1];
    let mut non_consecutive = Vec::new();
    for a in g.arcs() {
        let (t, h) = (layer[a.tail.as_str()], layer[a.head.as_str()]);
        if h == t + 1 {
            cut_counts[t].forward += 1;
        } else if t == h + 1 {
            cut_counts[h].backward += 1;
        } else {
            non_consecutive.push(a.id.clone());
        }
    }
    let forward: usize = cut_counts.iter().map(|c| c.forward).sum();
    let backward: usize = cut_counts.iter().map(|c| c.backward).sum();
    let orientation = match (forward > 0, backward > 0) {
        (true, false) => Orientation::Forward,
        (false, true) => Orientation::Backward,
        (true, true) => Orientation::Mixed,
        (false, false) => Orientation::Unoriented,
    };
    Ok(LayeringReport {
        consecutive_only: non_consecutive.is_empty(),
        orientation,
        cut_counts,
        non_consecutive,
    })
}
