//! Builders for the figure instances, complete layered graphs and seeded
//! random valid instances.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::contraction::NamedSet;
use crate::error::{Error, Result};
use crate::graph::{Arc, LabelPair, LabeledDigraph, LayerPartition, Orientation, VertexSet};

/// Shape of a complete layered instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LayeredSpec {
    pub sizes: Vec<usize>,
    /// `|χ|` for each middle layer, in layer order (`sizes.len() - 2` entries).
    pub chi_sizes: Vec<usize>,
    pub label: LabelPair,
    /// `Forward` or `Backward`.
    pub orientation: Orientation,
}

impl LayeredSpec {
    pub fn forward(sizes: Vec<usize>, chi_sizes: Vec<usize>) -> Self {
        Self {
            sizes,
            chi_sizes,
            label: LabelPair::sync(),
            orientation: Orientation::Forward,
        }
    }

    pub fn backward(sizes: Vec<usize>, chi_sizes: Vec<usize>) -> Self {
        Self {
            orientation: Orientation::Backward,
            ..Self::forward(sizes, chi_sizes)
        }
    }

    fn check(&self) -> Result<()> {
        let n = self.sizes.len();
        if n < 2 {
            return Err(Error::InvalidPartition(format!("need at least 2 layers, got {n}")));
        }
        if self.sizes.contains(&0) {
            return Err(Error::InvalidPartition("layer sizes must be positive".into()));
        }
        if self.chi_sizes.len() != n - 2 {
            return Err(Error::InvalidPartition(format!(
                "{} chi sizes for {} middle layers",
                self.chi_sizes.len(),
                n - 2
            )));
        }
        for (m, &c) in self.chi_sizes.iter().enumerate() {
            if c == 0 || c > self.sizes[m + 1] {
                return Err(Error::InvalidPartition(format!(
                    "chi size {c} out of range for layer {} of size {}",
                    m + 2,
                    self.sizes[m + 1]
                )));
            }
        }
        if !matches!(self.orientation, Orientation::Forward | Orientation::Backward) {
            return Err(Error::InvalidPartition("orientation must be forward or backward".into()));
        }
        Ok(())
    }
}

fn layer_prefix(k: usize) -> String {
    const PREFIXES: [&str; 6] = ["u", "v", "w", "x", "y", "z"];
    PREFIXES.get(k).map_or_else(|| format!("l{}_", k + 1), |p| p.to_string())
}

fn arc(tail: &str, head: &str, label: &LabelPair) -> Arc {
    Arc::new(format!("{tail}->{head}"), tail, head, label.clone())
}

/// Complete layered graph. Layer `k` has vertices `u1…`, `v1…`, `w1…` and so
/// on. In chain order (`X₁ → Xₙ` forward, `Xₙ → X₁` backward) the first
/// cut is complete and each middle layer sends arcs from its
/// lexicographically first `χ` vertices to every vertex of the next layer.
pub fn gen_layered(spec: &LayeredSpec) -> Result<(LabeledDigraph, LayerPartition)> {
    spec.check()?;
    let n = spec.sizes.len();
    let layers: Vec<VertexSet> = spec
        .sizes
        .iter()
        .enumerate()
        .map(|(k, &s)| (1..=s).map(|i| format!("{}{i}", layer_prefix(k))).collect())
        .collect();
    let order: Vec<usize> = match spec.orientation {
        Orientation::Backward => (0..n).rev().collect(),
        _ => (0..n).collect(),
    };
    let mut arcs = Vec::new();
    for (pos, w) in order.windows(2).enumerate() {
        let (from, to) = (w[0], w[1]);
        let tails = if pos == 0 {
            layers[from].len()
        } else {
            spec.chi_sizes[from - 1]
        };
        for t in layers[from].iter().take(tails) {
            for h in &layers[to] {
                arcs.push(arc(t, h, &spec.label));
            }
        }
    }
    let g = LabeledDigraph::new(layers.iter().flatten().cloned(), arcs)?;
    Ok((g, LayerPartition::new(layers)?))
}

/// `B(X, Y)` with `X = {u1…um}`, `Y = {v1…vn}` and every arc `uᵢ → vⱼ`.
pub fn gen_complete_bipartite(m: usize, n: usize) -> Result<LabeledDigraph> {
    Ok(gen_layered(&LayeredSpec::forward(vec![m, n], vec![]))?.0)
}

/// A figure instance with its row (single prime) and column (double prime)
/// families.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FigureInstance {
    pub graph: LabeledDigraph,
    pub partition: LayerPartition,
    pub row_family: Vec<NamedSet>,
    pub col_family: Vec<NamedSet>,
}

fn family(sets: &[(&str, &[&str])]) -> Vec<NamedSet> {
    sets.iter()
        .map(|(name, members)| NamedSet::new(*name, members.iter().copied()).expect("figure sets are non-empty"))
        .collect()
}

fn layers(ls: &[&[&str]]) -> LayerPartition {
    LayerPartition::new(ls.iter().map(|l| l.iter().map(|v| v.to_string()).collect()).collect())
        .expect("figure layers are valid")
}

fn figure_graph(vs: &[&[&str]], arcs: &[(&str, &str)]) -> LabeledDigraph {
    let s = LabelPair::sync();
    LabeledDigraph::new(
        vs.iter().flat_map(|l| l.iter().copied()),
        arcs.iter().map(|(t, h)| arc(t, h, &s)),
    )
    .expect("figure graphs are well formed")
}

fn complete_arcs<'a>(tails: &[&'a str], heads: &[&'a str]) -> Vec<(&'a str, &'a str)> {
    tails
        .iter()
        .flat_map(|t| heads.iter().map(move |h| (*t, *h)))
        .collect()
}

pub fn gen_figure(k: u32) -> Result<FigureInstance> {
    let fig = match k {
        1 => {
            let x: &[&str] = &["u1", "u2", "u3"];
            let y: &[&str] = &["v1", "v2", "v3", "v4"];
            FigureInstance {
                graph: figure_graph(&[x, y], &complete_arcs(x, y)),
                partition: layers(&[x, y]),
                row_family: family(&[
                    ("x'1", &["u1"]),
                    ("x'2", &["u2"]),
                    ("x'3", &["u3"]),
                    ("y'1", &["v1", "v2"]),
                    ("y'2", &["v3", "v4"]),
                ]),
                col_family: family(&[
                    ("x''1", &["u1", "u2", "u3"]),
                    ("y''1", &["v1", "v3"]),
                    ("y''2", &["v2", "v4"]),
                ]),
            }
        }
        2 => {
            let (x, y, z): (&[&str], &[&str], &[&str]) = (&["u1"], &["u2", "u3", "u4"], &["u5", "u6"]);
            let mut arcs = complete_arcs(x, y);
            arcs.extend(complete_arcs(&["u2", "u3"], z));
            FigureInstance {
                graph: figure_graph(&[x, y, z], &arcs),
                partition: layers(&[x, y, z]),
                row_family: family(&[
                    ("x'1", &["u1"]),
                    ("y'1", &["u2"]),
                    ("y'2", &["u3"]),
                    ("y'3", &["u4"]),
                    ("z'1", &["u5", "u6"]),
                ]),
                col_family: family(&[
                    ("x''1", &["u1"]),
                    ("y''1", &["u2", "u3", "u4"]),
                    ("z''1", &["u5"]),
                    ("z''2", &["u6"]),
                ]),
            }
        }
        3 => {
            let (x, y, z): (&[&str], &[&str], &[&str]) =
                (&["u1"], &["u2", "u3", "u4", "u5", "u6", "u7"], &["u8"]);
            let mut arcs = complete_arcs(x, &["u4", "u5", "u6", "u7"]);
            arcs.extend(complete_arcs(&["u2", "u3", "u4", "u5"], z));
            FigureInstance {
                graph: figure_graph(&[x, y, z], &arcs),
                partition: layers(&[x, y, z]),
                row_family: family(&[
                    ("x'1", &["u1"]),
                    ("y'1", &["u2", "u4", "u6"]),
                    ("y'2", &["u3", "u5", "u7"]),
                    ("z'1", &["u8"]),
                ]),
                col_family: family(&[
                    ("x''1", &["u1"]),
                    ("y''1", &["u2", "u3"]),
                    ("y''2", &["u4", "u5"]),
                    ("y''3", &["u6", "u7"]),
                    ("z''1", &["u8"]),
                ]),
            }
        }
        4 => {
            let (x, y, z): (&[&str], &[&str], &[&str]) =
                (&["u11", "u12"], &["u21", "u22", "u31", "u32"], &["u44"]);
            let mut arcs = complete_arcs(&["u12"], y);
            arcs.extend(complete_arcs(&["u31", "u32", "u11"], z));
            FigureInstance {
                graph: figure_graph(&[x, y, z], &arcs),
                partition: layers(&[x, y, z]),
                row_family: family(&[
                    ("x'1", &["u11", "u12"]),
                    ("y'1", &["u21", "u31"]),
                    ("y'2", &["u22", "u32"]),
                    ("z'1", &["u44"]),
                ]),
                col_family: family(&[
                    ("x''1", &["u11"]),
                    ("x''2", &["u12"]),
                    ("y''1", &["u21", "u22"]),
                    ("y''2", &["u31", "u32"]),
                    ("z''1", &["u44"]),
                ]),
            }
        }
        _ => return Err(Error::FigureOutOfRange(k)),
    };
    Ok(fig)
}

/// Samples a [`LayeredSpec`] with `n` layers of at most `max_part`
/// vertices each. Equal seeds give identical specs.
pub fn random_spec(seed: u64, n: usize, max_part: usize) -> Result<LayeredSpec> {
    if n < 2 || max_part == 0 {
        return Err(Error::InvalidPartition(format!(
            "need n >= 2 and max_part >= 1, got n = {n}, max_part = {max_part}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sizes: Vec<usize> = (0..n).map(|_| rng.gen_range(1..=max_part)).collect();
    let chi_sizes = sizes[1..n - 1].iter().map(|&s| rng.gen_range(1..=s)).collect();
    let orientation = if rng.gen_bool(0.5) {
        Orientation::Forward
    } else {
        Orientation::Backward
    };
    Ok(LayeredSpec {
        sizes,
        chi_sizes,
        label: LabelPair::sync(),
        orientation,
    })
}

pub fn gen_random_valid(seed: u64, n: usize, max_part: usize) -> Result<(LabeledDigraph, LayerPartition)> {
    gen_layered(&random_spec(seed, n, max_part)?)
}
