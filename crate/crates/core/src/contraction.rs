//! Set contraction `G/X`.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::graph::{Arc, LabelPair, LabeledDigraph, VertexSet};

/// A vertex set together with the name of the vertex that replaces it.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NamedSet {
    pub name: String,
    pub members: VertexSet,
}

impl NamedSet {
    pub fn new<I, S>(name: impl Into<String>, members: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let name = name.into();
        let members: VertexSet = members.into_iter().map(Into::into).collect();
        if members.is_empty() {
            return Err(Error::InvalidNamedSet(format!("`{name}` has no members")));
        }
        Ok(Self { name, members })
    }
}

fn merged_arc_id(tail: &str, head: &str, label: &LabelPair) -> String {
    format!("{tail}->{head}#{label}")
}

/// Replaces `s.members` by the single vertex `s.name`. Arcs with one end in
/// the set are redirected; redirected arcs agreeing on
/// `(tail, head, label)` are merged into one arc.
pub fn contract_set(g: &LabeledDigraph, s: &NamedSet) -> Result<LabeledDigraph> {
    g.ensure_known(&s.members)?;
    if g.contains_vertex(&s.name) && !s.members.contains(&s.name) {
        return Err(Error::InvalidNamedSet(format!(
            "`{}` is already a vertex outside the set",
            s.name
        )));
    }

    let mut kept = Vec::new();
    let mut redirected: BTreeMap<(String, String, LabelPair), ()> = BTreeMap::new();
    for a in g.arcs() {
        let (t_in, h_in) = (s.members.contains(&a.tail), s.members.contains(&a.head));
        match (t_in, h_in) {
            (true, true) => {
                return Err(Error::InternalArc {
                    arc: a.id.clone(),
                    set: s.name.clone(),
                })
            }
            (false, false) => kept.push(a.clone()),
            (true, false) => {
                redirected.insert((s.name.clone(), a.head.clone(), a.label.clone()), ());
            }
            (false, true) => {
                redirected.insert((a.tail.clone(), s.name.clone(), a.label.clone()), ());
            }
        }
    }

    let mut ids: BTreeSet<String> = kept.iter().map(|a| a.id.clone()).collect();
    for (tail, head, label) in redirected.into_keys() {
        let mut id = merged_arc_id(&tail, &head, &label);
        while ids.contains(&id) {
            id.push('\'');
        }
        ids.insert(id.clone());
        kept.push(Arc::new(id, tail, head, label));
    }

    let vertices = g
        .vertices()
        .iter()
        .filter(|v| !s.members.contains(*v))
        .cloned()
        .chain(std::iter::once(s.name.clone()));
    LabeledDigraph::new(vertices, kept)
}

/// Left fold of [`contract_set`] over pairwise disjoint sets.
pub fn contract_family(g: &LabeledDigraph, family: &[NamedSet]) -> Result<LabeledDigraph> {
    let mut seen = VertexSet::new();
    let mut names = BTreeSet::new();
    for s in family {
        for v in &s.members {
            if !seen.insert(v.clone()) {
                return Err(Error::OverlappingSets(format!(
                    "`{v}` belongs to more than one contracted set"
                )));
            }
        }
        if !names.insert(s.name.as_str()) {
            return Err(Error::InvalidNamedSet(format!("name `{}` used twice", s.name)));
        }
    }
    // A later set's name must not collide with an earlier set's new vertex,
    // nor with a vertex that an earlier set already removed.
    family.iter().try_fold(g.clone(), |acc, s| {
        if !acc.contains_vertex(&s.name) && g.contains_vertex(&s.name) && !s.members.contains(&s.name) {
            return Err(Error::InvalidNamedSet(format!(
                "`{}` names a vertex consumed by another set",
                s.name
            )));
        }
        contract_set(&acc, s)
    })
}
