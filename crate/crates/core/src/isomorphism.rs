//! Label-preserving isomorphism of arc-labelled multigraphs.
//!
//! The search refines vertex colours (degrees plus incident labels, then
//! Weisfeiler-Lehman rounds over the disjoint union of both graphs) and
//! backtracks only inside colour classes.

use std::collections::{BTreeMap, HashMap};

use itertools::Itertools;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{LabelPair, LabeledDigraph};

/// Vertex bijection `V(g1) → V(g2)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IsoWitness {
    pub mapping: BTreeMap<String, String>,
}

impl IsoWitness {
    /// Checks that the mapping is a bijection carrying the arc multiset of
    /// `g1` onto that of `g2`.
    pub fn validate(&self, g1: &LabeledDigraph, g2: &LabeledDigraph) -> bool {
        if g1.vertex_count() != g2.vertex_count() || self.mapping.len() != g1.vertex_count() {
            return false;
        }
        if self.mapping.values().any(|v| !g2.contains_vertex(v)) {
            return false;
        }
        match g1.relabel(&self.mapping) {
            Ok(image) => image.vertices() == g2.vertices() && image.arc_multiset() == g2.arc_multiset(),
            Err(_) => false,
        }
    }
}

/// `(neighbour, label id) → multiplicity`.
type Incidence = HashMap<(usize, usize), usize>;

struct Indexed {
    names: Vec<String>,
    out: Vec<Incidence>,
    inc: Vec<Incidence>,
}

impl Indexed {
    fn new(g: &LabeledDigraph, labels: &BTreeMap<LabelPair, usize>) -> Self {
        let names: Vec<String> = g.vertices().iter().cloned().collect();
        let index: HashMap<&str, usize> = names.iter().enumerate().map(|(i, v)| (v.as_str(), i)).collect();
        let mut out = vec![Incidence::new(); names.len()];
        let mut inc = vec![Incidence::new(); names.len()];
        for a in g.arcs() {
            let (t, h, l) = (index[a.tail.as_str()], index[a.head.as_str()], labels[&a.label]);
            *out[t].entry((h, l)).or_insert(0) += 1;
            *inc[h].entry((t, l)).or_insert(0) += 1;
        }
        Self { names, out, inc }
    }

    fn len(&self) -> usize {
        self.names.len()
    }
}

/// Colour refinement on the disjoint union `a ⊎ b`. Colours are comparable
/// across the two graphs.
fn refine(a: &Indexed, b: &Indexed) -> (Vec<usize>, Vec<usize>) {
    /// `(label, count)` pairs on the out and in side.
    type LabelCounts = Vec<(usize, usize)>;

    fn initial(g: &Indexed, v: usize) -> (LabelCounts, LabelCounts) {
        let side = |m: &Incidence| {
            let mut by_label: BTreeMap<usize, usize> = BTreeMap::new();
            for (&(_, l), &k) in m {
                *by_label.entry(l).or_insert(0) += k;
            }
            by_label.into_iter().collect::<Vec<_>>()
        };
        (side(&g.out[v]), side(&g.inc[v]))
    }

    fn compress<K: Ord + Clone>(keys: Vec<K>) -> (Vec<usize>, usize) {
        let ids: BTreeMap<K, usize> = keys
            .iter()
            .cloned()
            .sorted()
            .dedup()
            .enumerate()
            .map(|(i, k)| (k, i))
            .collect();
        let n = ids.len();
        (keys.iter().map(|k| ids[k]).collect(), n)
    }

    let keys: Vec<_> = (0..a.len())
        .map(|v| initial(a, v))
        .chain((0..b.len()).map(|v| initial(b, v)))
        .collect();
    let (mut colour, mut classes) = compress(keys);

    loop {
        let signature = |g: &Indexed, offset: usize, v: usize, colour: &[usize]| {
            let nb = |m: &Incidence| {
                m.iter()
                    .map(|(&(w, l), &k)| (colour[offset + w], l, k))
                    .sorted()
                    .collect::<Vec<_>>()
            };
            (colour[offset + v], nb(&g.out[v]), nb(&g.inc[v]))
        };
        let keys: Vec<_> = (0..a.len())
            .map(|v| signature(a, 0, v, &colour))
            .chain((0..b.len()).map(|v| signature(b, a.len(), v, &colour)))
            .collect();
        let (next, next_classes) = compress(keys);
        colour = next;
        if next_classes == classes {
            break;
        }
        classes = next_classes;
    }
    let right = colour.split_off(a.len());
    (colour, right)
}

struct Search<'a> {
    a: &'a Indexed,
    b: &'a Indexed,
    ca: Vec<usize>,
    cb: Vec<usize>,
    order: Vec<usize>,
    map: Vec<Option<usize>>,
    inverse: Vec<Option<usize>>,
}

impl Search<'_> {
    /// Arcs between `u` and already mapped vertices agree with their images.
    fn consistent(&self, u: usize, x: usize) -> bool {
        let side = |ma: &Incidence, mb: &Incidence| {
            let forward = ma.iter().all(|(&(w, l), &k)| match self.map[w] {
                Some(y) => mb.get(&(y, l)) == Some(&k),
                None => true,
            });
            let backward = mb
                .iter()
                .all(|(&(y, l), _)| self.inverse[y].is_none_or(|w| ma.contains_key(&(w, l))));
            forward && backward
        };
        side(&self.a.out[u], &self.b.out[x]) && side(&self.a.inc[u], &self.b.inc[x])
    }

    fn run(&mut self, depth: usize) -> bool {
        let Some(&u) = self.order.get(depth) else {
            return true;
        };
        for x in 0..self.b.len() {
            if self.inverse[x].is_some() || self.cb[x] != self.ca[u] {
                continue;
            }
            self.map[u] = Some(x);
            self.inverse[x] = Some(u);
            if self.consistent(u, x) && self.run(depth + 1) {
                return true;
            }
            self.map[u] = None;
            self.inverse[x] = None;
        }
        false
    }
}

/// Visit order: smallest colour classes first, then breadth-first so each
/// new vertex is adjacent to mapped ones where possible.
fn search_order(g: &Indexed, colour: &[usize]) -> Vec<usize> {
    let mut class_size: HashMap<usize, usize> = HashMap::new();
    for &c in colour {
        *class_size.entry(c).or_insert(0) += 1;
    }
    let mut placed = vec![false; g.len()];
    let mut order = Vec::with_capacity(g.len());
    let seeds: Vec<usize> = (0..g.len()).sorted_by_key(|&v| (class_size[&colour[v]], v)).collect();
    for s in seeds {
        if placed[s] {
            continue;
        }
        placed[s] = true;
        let mut frontier = vec![s];
        while let Some(v) = frontier.pop() {
            order.push(v);
            let mut next: Vec<usize> = g.out[v]
                .keys()
                .chain(g.inc[v].keys())
                .map(|&(w, _)| w)
                .filter(|&w| !placed[w])
                .sorted_by_key(|&w| std::cmp::Reverse((class_size[&colour[w]], w)))
                .dedup()
                .collect();
            for &w in &next {
                placed[w] = true;
            }
            frontier.append(&mut next);
        }
    }
    order
}

pub fn find_isomorphism(g1: &LabeledDigraph, g2: &LabeledDigraph) -> Option<IsoWitness> {
    if g1.vertex_count() != g2.vertex_count()
        || g1.arc_count() != g2.arc_count()
        || g1.labelset() != g2.labelset()
    {
        return None;
    }
    let labels: BTreeMap<LabelPair, usize> = g1.labelset().into_iter().enumerate().map(|(i, l)| (l, i)).collect();
    let (a, b) = (Indexed::new(g1, &labels), Indexed::new(g2, &labels));
    let (ca, cb) = refine(&a, &b);
    if ca.iter().sorted().ne(cb.iter().sorted()) {
        return None;
    }
    let order = search_order(&a, &ca);
    let mut search = Search {
        a: &a,
        b: &b,
        ca,
        cb,
        order,
        map: vec![None; a.len()],
        inverse: vec![None; b.len()],
    };
    if !search.run(0) {
        return None;
    }
    let mapping = search
        .map
        .iter()
        .enumerate()
        .map(|(u, x)| (a.names[u].clone(), b.names[x.expect("complete mapping")].clone()))
        .collect();
    Some(IsoWitness { mapping })
}

pub fn is_isomorphic(g1: &LabeledDigraph, g2: &LabeledDigraph) -> bool {
    find_isomorphism(g1, g2).is_some()
}

pub const BRUTE_FORCE_LIMIT: usize = 8;

/// Tries every bijection. Reference oracle for small graphs.
pub fn brute_force_isomorphism(g1: &LabeledDigraph, g2: &LabeledDigraph) -> Result<Option<IsoWitness>> {
    let n = g1.vertex_count().max(g2.vertex_count());
    if n > BRUTE_FORCE_LIMIT {
        return Err(Error::TooLarge(n));
    }
    if g1.vertex_count() != g2.vertex_count() {
        return Ok(None);
    }
    let target = g2.arc_multiset();
    for perm in g2.vertices().iter().permutations(g2.vertex_count()) {
        let mapping: BTreeMap<String, String> = g1.vertices().iter().cloned().zip(perm.into_iter().cloned()).collect();
        if g1.relabel(&mapping)?.arc_multiset() == target {
            return Ok(Some(IsoWitness { mapping }));
        }
    }
    Ok(None)
}
