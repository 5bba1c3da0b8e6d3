//! Cartesian, intermediate and vertex-removing synchronised products.
//!
//! Product vertices are rendered as `(left,right)` with `\`, `,`, `(` and `)`
//! escaped in the components, so the rendering is injective and can be
//! parsed back.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::graph::{Adjacency, Arc, LabelPair, LabeledDigraph};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ProductVertex {
    pub left: String,
    pub right: String,
}

fn escape(s: &str, out: &mut String) {
    for c in s.chars() {
        if matches!(c, '\\' | ',' | '(' | ')') {
            out.push('\\');
        }
        out.push(c);
    }
}

impl ProductVertex {
    pub fn new(left: impl Into<String>, right: impl Into<String>) -> Self {
        Self {
            left: left.into(),
            right: right.into(),
        }
    }

    pub fn render(&self) -> String {
        render_pair(&self.left, &self.right)
    }

    /// Inverse of [`ProductVertex::render`].
    pub fn parse(s: &str) -> Option<Self> {
        let inner = s.strip_prefix('(')?.strip_suffix(')')?;
        let mut left = String::new();
        let mut right = String::new();
        let mut in_right = false;
        let mut chars = inner.chars();
        while let Some(c) = chars.next() {
            let target = if in_right { &mut right } else { &mut left };
            match c {
                '\\' => target.push(chars.next()?),
                ',' if !in_right => in_right = true,
                ',' | '(' | ')' => return None,
                _ => target.push(c),
            }
        }
        in_right.then_some(Self { left, right })
    }
}

impl fmt::Display for ProductVertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl Serialize for ProductVertex {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.render())
    }
}

pub(crate) fn render_pair(left: &str, right: &str) -> String {
    let mut out = String::with_capacity(left.len() + right.len() + 3);
    out.push('(');
    escape(left, &mut out);
    out.push(',');
    escape(right, &mut out);
    out.push(')');
    out
}

/// Labels split by whether they synchronise between two factors.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SyncClassification {
    pub shared: BTreeSet<LabelPair>,
    pub left_only: BTreeSet<LabelPair>,
    pub right_only: BTreeSet<LabelPair>,
}

pub fn synchronising_labels(g1: &LabeledDigraph, g2: &LabeledDigraph) -> SyncClassification {
    let l1 = g1.labelset();
    let l2 = g2.labelset();
    SyncClassification {
        shared: l1.intersection(&l2).cloned().collect(),
        left_only: l1.difference(&l2).cloned().collect(),
        right_only: l2.difference(&l1).cloned().collect(),
    }
}

fn product_vertices(g1: &LabeledDigraph, g2: &LabeledDigraph) -> Vec<String> {
    g1.vertices()
        .iter()
        .flat_map(|u| g2.vertices().iter().map(move |v| render_pair(u, v)))
        .collect()
}

/// Arcs of one factor copied across every vertex of the other, restricted
/// to labels accepted by `keep`.
fn coordinate_arcs(
    g1: &LabeledDigraph,
    g2: &LabeledDigraph,
    keep: impl Fn(&LabelPair) -> bool,
) -> Vec<Arc> {
    let mut arcs = Vec::new();
    for a in g1.arcs().filter(|a| keep(&a.label)) {
        for v in g2.vertices() {
            arcs.push(Arc::new(
                format!("1:{}", render_pair(&a.id, v)),
                render_pair(&a.tail, v),
                render_pair(&a.head, v),
                a.label.clone(),
            ));
        }
    }
    for b in g2.arcs().filter(|b| keep(&b.label)) {
        for u in g1.vertices() {
            arcs.push(Arc::new(
                format!("2:{}", render_pair(u, &b.id)),
                render_pair(u, &b.tail),
                render_pair(u, &b.head),
                b.label.clone(),
            ));
        }
    }
    arcs
}

fn ensure_non_empty(g1: &LabeledDigraph, g2: &LabeledDigraph) -> Result<()> {
    if g1.vertex_count() == 0 || g2.vertex_count() == 0 {
        return Err(Error::EmptyFactor);
    }
    Ok(())
}

pub fn cartesian(g1: &LabeledDigraph, g2: &LabeledDigraph) -> Result<LabeledDigraph> {
    ensure_non_empty(g1, g2)?;
    LabeledDigraph::new(product_vertices(g1, g2), coordinate_arcs(g1, g2, |_| true))
}

/// Cartesian product where every pair of equally labelled arcs becomes one
/// diagonal arc and the remaining synchronising copies are dropped.
pub fn intermediate(g1: &LabeledDigraph, g2: &LabeledDigraph) -> Result<LabeledDigraph> {
    ensure_non_empty(g1, g2)?;
    let shared = synchronising_labels(g1, g2).shared;
    let mut arcs = coordinate_arcs(g1, g2, |l| !shared.contains(l));
    for a in g1.arcs().filter(|a| shared.contains(&a.label)) {
        for b in g2.arcs().filter(|b| b.label == a.label) {
            arcs.push(Arc::new(
                format!("d:{}", render_pair(&a.id, &b.id)),
                render_pair(&a.tail, &b.tail),
                render_pair(&a.head, &b.head),
                a.label.clone(),
            ));
        }
    }
    LabeledDigraph::new(product_vertices(g1, g2), arcs)
}

/// Result of the removal phase of the VRSP.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VrspOutcome {
    pub graph: LabeledDigraph,
    /// Rendered product vertices in the order they were removed.
    pub removed: Vec<String>,
}

pub fn vrsp(g1: &LabeledDigraph, g2: &LabeledDigraph) -> Result<LabeledDigraph> {
    Ok(vrsp_with_order(g1, g2, |_| 0)?.graph)
}

pub fn vrsp_detailed(g1: &LabeledDigraph, g2: &LabeledDigraph) -> Result<VrspOutcome> {
    vrsp_with_order(g1, g2, |_| 0)
}

/// VRSP with a caller-chosen removal schedule. `choose` receives the
/// currently removable vertices in lexicographic order and returns the
/// index of the one to remove next.
pub fn vrsp_with_order<F>(g1: &LabeledDigraph, g2: &LabeledDigraph, mut choose: F) -> Result<VrspOutcome>
where
    F: FnMut(&[&str]) -> usize,
{
    for g in [g1, g2] {
        if Adjacency::new(g).topological_order().is_none() {
            return Err(Error::CyclicInput);
        }
    }
    let cart = cartesian(g1, g2)?;
    let cart_levels = crate::graph::levels(&cart)?;
    let inter = intermediate(g1, g2)?;
    let adj = Adjacency::new(&inter);
    let n = adj.names.len();

    // Both products share the vertex set, so the sorted names line up.
    let positive: Vec<bool> = adj.names.iter().map(|v| cart_levels[*v] > 0).collect();
    let mut indeg: Vec<usize> = adj.inc.iter().map(Vec::len).collect();
    let mut alive = vec![true; n];
    let mut ready: BTreeSet<usize> = (0..n).filter(|&v| indeg[v] == 0 && positive[v]).collect();
    let mut removed = Vec::new();

    while !ready.is_empty() {
        let candidates: Vec<usize> = ready.iter().copied().collect();
        let names: Vec<&str> = candidates.iter().map(|&v| adj.names[v]).collect();
        let pick = choose(&names).min(candidates.len() - 1);
        let v = candidates[pick];
        ready.remove(&v);
        alive[v] = false;
        removed.push(adj.names[v].to_string());
        for &(w, _) in &adj.out[v] {
            indeg[w] -= 1;
            if indeg[w] == 0 && positive[w] && alive[w] {
                ready.insert(w);
            }
        }
    }

    let survivors: BTreeSet<String> = (0..n)
        .filter(|&v| alive[v])
        .map(|v| adj.names[v].to_string())
        .collect();
    let graph = crate::graph::induced_subgraph(&inter, &survivors)?;
    Ok(VrspOutcome { graph, removed })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::isomorphism::find_isomorphism;

    fn path(a: &str, b: &str, label: &str) -> LabeledDigraph {
        LabeledDigraph::new([a, b], [Arc::new(format!("{a}{b}"), a, b, LabelPair::unit(label).unwrap())])
            .unwrap()
    }

    fn k1() -> LabeledDigraph {
        LabeledDigraph::new(["o"], []).unwrap()
    }

    #[test]
    fn render_parse_roundtrip_with_escapes() {
        for (l, r) in [("a", "b"), ("(x,y)", "z\\"), ("", ","), ("(a\\,b)", ")")] {
            let pv = ProductVertex::new(l, r);
            assert_eq!(ProductVertex::parse(&pv.render()), Some(pv));
        }
        assert_ne!(render_pair("a,b", "c"), render_pair("a", "b,c"));
        assert_eq!(ProductVertex::parse("(a,b,c)"), None);
        assert_eq!(ProductVertex::parse("ab"), None);
    }

    #[test]
    fn sync_classification() {
        let s = synchronising_labels(&path("a", "b", "s"), &path("c", "d", "s"));
        assert_eq!(s.shared.len(), 1);
        assert!(s.left_only.is_empty() && s.right_only.is_empty());
        let s = synchronising_labels(&path("a", "b", "a"), &path("c", "d", "b"));
        assert!(s.shared.is_empty());
        assert_eq!((s.left_only.len(), s.right_only.len()), (1, 1));
    }

    #[test]
    fn cartesian_of_two_paths() {
        let c = cartesian(&path("a", "b", "s"), &path("c", "d", "s")).unwrap();
        assert_eq!((c.vertex_count(), c.arc_count()), (4, 4));
    }

    #[test]
    fn cartesian_unit_law() {
        let g = path("a", "b", "s");
        let c = cartesian(&g, &k1()).unwrap();
        assert!(find_isomorphism(&c, &g).is_some());
    }

    #[test]
    fn empty_factor_rejected() {
        let e = LabeledDigraph::empty();
        assert_eq!(cartesian(&e, &k1()), Err(Error::EmptyFactor));
        assert_eq!(intermediate(&k1(), &e), Err(Error::EmptyFactor));
    }

    #[test]
    fn intermediate_single_diagonal() {
        let i = intermediate(&path("a", "b", "s"), &path("c", "d", "s")).unwrap();
        assert_eq!(i.vertex_count(), 4);
        let arcs: Vec<_> = i.arcs().collect();
        assert_eq!(arcs.len(), 1);
        assert_eq!(arcs[0].tail, "(a,c)");
        assert_eq!(arcs[0].head, "(b,d)");
    }

    #[test]
    fn intermediate_without_shared_labels_is_cartesian() {
        let (g1, g2) = (path("a", "b", "x"), path("c", "d", "y"));
        assert_eq!(intermediate(&g1, &g2).unwrap(), cartesian(&g1, &g2).unwrap());
        assert_eq!(vrsp(&g1, &g2).unwrap(), cartesian(&g1, &g2).unwrap());
    }

    #[test]
    fn vrsp_unit_law() {
        let g = path("a", "b", "s");
        let v = vrsp(&g, &k1()).unwrap();
        assert!(find_isomorphism(&v, &g).is_some());
    }

    #[test]
    fn vrsp_of_two_synchronising_paths() {
        // (a,c)->(b,d) survives; (a,d) and (b,c) are isolated and removed.
        let out = vrsp_detailed(&path("a", "b", "s"), &path("c", "d", "s")).unwrap();
        assert_eq!(out.graph.vertex_count(), 2);
        assert_eq!(out.removed, vec!["(a,d)".to_string(), "(b,c)".to_string()]);
    }

    #[test]
    fn vrsp_rejects_cyclic_factor() {
        let cyc = LabeledDigraph::new(
            ["a", "b"],
            [
                Arc::new("1", "a", "b", LabelPair::sync()),
                Arc::new("2", "b", "a", LabelPair::sync()),
            ],
        )
        .unwrap();
        assert_eq!(vrsp(&cyc, &k1()), Err(Error::CyclicInput));
    }
}
