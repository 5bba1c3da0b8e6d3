//! JSON graph documents, phi witness files and DOT export.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::io::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::{Number, Value};

use crate::error::{Error, Result};
use crate::graph::{Arc, LabelPair, LabeledDigraph, LayerPartition, VertexSet, Weight};
use crate::products::ProductVertex;

pub const FORMAT_VERSION: &str = "1";

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct VertexRecord {
    id: String,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ArcRecord {
    id: String,
    tail: String,
    head: String,
    label: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    weight: Option<Value>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GraphDocument {
    format_version: String,
    vertices: Vec<VertexRecord>,
    arcs: Vec<ArcRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    layers: Option<Vec<Vec<String>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    families: Option<BTreeMap<String, Vec<String>>>,
}

/// A parsed graph document.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParsedGraph {
    pub graph: LabeledDigraph,
    pub partition: Option<LayerPartition>,
    pub families: BTreeMap<String, VertexSet>,
}

fn json_error(e: serde_json::Error) -> Error {
    use serde_json::error::Category;
    match e.classify() {
        Category::Data => Error::Schema(e.to_string()),
        _ => Error::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        },
    }
}

/// Exact value of a decimal literal such as `2`, `0.25` or `1.5e3`.
fn parse_decimal(s: &str) -> Option<Weight> {
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().ok()?),
        None => (s, 0),
    };
    let (int, frac) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    if int.is_empty() && frac.is_empty() || !(int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit())) {
        return None;
    }
    let digits: u64 = format!("{int}{frac}").parse().ok()?;
    let exp = exp.checked_sub(i32::try_from(frac.len()).ok()?)?;
    let scale = 10u64.checked_pow(exp.unsigned_abs())?;
    Some(if exp >= 0 {
        Weight::from_integer(digits.checked_mul(scale)?)
    } else {
        Weight::new(digits, scale)
    })
}

fn parse_weight(v: &Value) -> Option<Weight> {
    match v {
        Value::Number(n) => parse_decimal(&n.to_string()),
        Value::String(s) => match s.split_once('/') {
            Some((p, q)) => {
                let (p, q): (u64, u64) = (p.trim().parse().ok()?, q.trim().parse().ok()?);
                (q != 0).then(|| Weight::new(p, q))
            }
            None => parse_decimal(s.trim()),
        },
        _ => None,
    }
}

/// Integers and weights that survive a trip through `f64` are written as
/// JSON numbers, everything else as a `"p/q"` string.
fn weight_value(w: Weight) -> Value {
    if w.is_integer() {
        return Value::Number(Number::from(w.to_integer()));
    }
    let f = *w.numer() as f64 / *w.denom() as f64;
    match Number::from_f64(f) {
        Some(n) if parse_decimal(&n.to_string()) == Some(w) => Value::Number(n),
        _ => Value::String(format!("{}/{}", w.numer(), w.denom())),
    }
}

pub fn parse_graph(text: &str) -> Result<ParsedGraph> {
    let doc: GraphDocument = serde_json::from_str(text).map_err(json_error)?;
    if doc.format_version != FORMAT_VERSION {
        return Err(Error::Schema(format!(
            "unsupported format_version `{}` (expected `{FORMAT_VERSION}`)",
            doc.format_version
        )));
    }
    let mut vertices = VertexSet::new();
    for v in &doc.vertices {
        if !vertices.insert(v.id.clone()) {
            return Err(Error::Schema(format!("duplicate vertex id `{}`", v.id)));
        }
    }
    let arcs = doc
        .arcs
        .into_iter()
        .map(|a| {
            let weight = match &a.weight {
                None => Weight::from_integer(1),
                Some(w) => parse_weight(w)
                    .ok_or_else(|| Error::Schema(format!("arc `{}` has invalid weight {w}", a.id)))?,
            };
            let label = LabelPair::new(a.label, weight).map_err(|e| Error::Schema(format!("arc `{}`: {e}", a.id)))?;
            Ok(Arc::new(a.id, a.tail, a.head, label))
        })
        .collect::<Result<Vec<_>>>()?;
    let graph = LabeledDigraph::new(vertices, arcs).map_err(|e| Error::Schema(e.to_string()))?;

    let partition = doc
        .layers
        .map(|ls| {
            let p = LayerPartition::new(ls.into_iter().map(|l| l.into_iter().collect()).collect())?;
            p.bind(&graph)?;
            Ok::<_, Error>(p)
        })
        .transpose()
        .map_err(|e| Error::Schema(format!("layers: {e}")))?;

    let mut families = BTreeMap::new();
    for (name, members) in doc.families.unwrap_or_default() {
        let set: VertexSet = members.into_iter().collect();
        if let Some(v) = set.iter().find(|v| !graph.contains_vertex(v)) {
            return Err(Error::Schema(format!("family `{name}` names unknown vertex `{v}`")));
        }
        if set.is_empty() {
            return Err(Error::Schema(format!("family `{name}` is empty")));
        }
        families.insert(name, set);
    }
    Ok(ParsedGraph {
        graph,
        partition,
        families,
    })
}

/// Pretty JSON with vertices and arcs in lexicographic order, followed by a
/// newline.
pub fn serialize_graph(
    g: &LabeledDigraph,
    partition: Option<&LayerPartition>,
    families: Option<&BTreeMap<String, VertexSet>>,
) -> String {
    let doc = GraphDocument {
        format_version: FORMAT_VERSION.into(),
        vertices: g.vertices().iter().map(|v| VertexRecord { id: v.clone() }).collect(),
        arcs: g
            .arcs()
            .map(|a| ArcRecord {
                id: a.id.clone(),
                tail: a.tail.clone(),
                head: a.head.clone(),
                label: a.label.action().to_string(),
                weight: Some(weight_value(a.label.weight())),
            })
            .collect(),
        layers: partition.map(|p| p.layers().iter().map(|l| l.iter().cloned().collect()).collect()),
        families: families
            .filter(|f| !f.is_empty())
            .map(|f| f.iter().map(|(k, v)| (k.clone(), v.iter().cloned().collect())).collect()),
    };
    let mut out = serde_json::to_string_pretty(&doc).expect("graph documents always serialize");
    out.push('\n');
    out
}

pub fn serialize_phi(phi: &BTreeMap<String, ProductVertex>) -> String {
    let doc: BTreeMap<&str, [&str; 2]> = phi
        .iter()
        .map(|(k, v)| (k.as_str(), [v.left.as_str(), v.right.as_str()]))
        .collect();
    let mut out = serde_json::to_string_pretty(&doc).expect("phi always serializes");
    out.push('\n');
    out
}

pub fn parse_phi(text: &str) -> Result<BTreeMap<String, ProductVertex>> {
    let doc: BTreeMap<String, (String, String)> = serde_json::from_str(text).map_err(json_error)?;
    Ok(doc
        .into_iter()
        .map(|(k, (l, r))| (k, ProductVertex::new(l, r)))
        .collect())
}

fn dot_id(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        if matches!(c, '"' | '\\') {
            out.push('\\');
        }
        out.push(c);
    }
    out.push('"');
    out
}

/// One `digraph`; layers become `rank=same` clusters.
pub fn export_dot(g: &LabeledDigraph, partition: Option<&LayerPartition>) -> String {
    let mut out = String::from("digraph G {\n");
    let mut placed = BTreeSet::new();
    if let Some(p) = partition {
        for (k, layer) in p.layers().iter().enumerate() {
            let _ = writeln!(out, "  subgraph cluster_{} {{", k + 1);
            out.push_str("    rank=same;\n");
            for v in layer {
                let _ = writeln!(out, "    {};", dot_id(v));
                placed.insert(v);
            }
            out.push_str("  }\n");
        }
    }
    for v in g.vertices().iter().filter(|v| !placed.contains(v)) {
        let _ = writeln!(out, "  {};", dot_id(v));
    }
    for a in g.arcs() {
        let _ = writeln!(
            out,
            "  {} -> {} [label={}];",
            dot_id(&a.tail),
            dot_id(&a.head),
            dot_id(&a.label.to_string())
        );
    }
    out.push_str("}\n");
    out
}

/// Writes via a temporary file in the target directory and renames it into
/// place.
pub fn write_atomic(path: &Path, contents: &str) -> std::io::Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(contents.as_bytes())?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}
