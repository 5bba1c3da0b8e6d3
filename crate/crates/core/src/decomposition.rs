//! Grid-based decomposition of layered graphs into two VRSP factors, the
//! precondition checker, and end-to-end verification.
//!
//! Every layer is laid out as a `rows × cols` grid. Contracting each row
//! gives the row factor, contracting each column gives the column factor,
//! and a vertex in cell `(r, c)` of layer `k` maps to the product vertex
//! `(row r of k, column c of k)`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_integer::Integer;
use serde::Serialize;

use crate::contraction::{contract_family, NamedSet};
use crate::error::{Error, Result};
use crate::graph::{
    check_layering, induced_subgraph, is_complete_bipartite, validate, LabeledDigraph, LayerPartition,
    Orientation, VertexSet,
};
use crate::isomorphism::is_isomorphic;
use crate::products::{intermediate, vrsp_detailed, ProductVertex};

/// Row/column layout of one layer. Indices passed to [`GridIndexing::cell`]
/// are 1-based.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GridIndexing {
    pub rows: usize,
    pub cols: usize,
    /// Leading columns holding the priority subset.
    pub priority_cols: usize,
    /// Row-major cells.
    pub cells: Vec<Vec<String>>,
}

impl GridIndexing {
    pub fn cell(&self, row: usize, col: usize) -> &str {
        &self.cells[row - 1][col - 1]
    }

    pub fn row(&self, row: usize) -> &[String] {
        &self.cells[row - 1]
    }

    pub fn column(&self, col: usize) -> impl Iterator<Item = &String> + '_ {
        self.cells.iter().map(move |r| &r[col - 1])
    }

    pub fn layer(&self) -> VertexSet {
        self.cells.iter().flatten().cloned().collect()
    }
}

/// Lays out `layer` as a `rows × cols` grid. Priority vertices fill the
/// leading columns row-major, the rest fill the remaining cells row-major,
/// each group in lexicographic order.
pub fn grid_assign(
    layer: &VertexSet,
    rows: usize,
    cols: usize,
    priority: Option<&VertexSet>,
) -> Result<GridIndexing> {
    if rows == 0 || cols == 0 || rows * cols != layer.len() {
        return Err(Error::ShapeMismatch(format!(
            "{rows}x{cols} grid cannot hold {} vertices",
            layer.len()
        )));
    }
    let empty = VertexSet::new();
    let priority = priority.unwrap_or(&empty);
    if let Some(v) = priority.difference(layer).next() {
        return Err(Error::UnknownVertex(v.clone()));
    }
    if !priority.len().is_multiple_of(rows) {
        return Err(Error::PriorityNotDivisible {
            priority: priority.len(),
            rows,
        });
    }
    let pc = priority.len() / rows;
    let mut first = priority.iter();
    let mut rest = layer.difference(priority);
    let cells = (0..rows)
        .map(|_| {
            (0..cols)
                .map(|c| {
                    let next = if c < pc { first.next() } else { rest.next() };
                    next.expect("grid sized to layer").clone()
                })
                .collect()
        })
        .collect();
    Ok(GridIndexing {
        rows,
        cols,
        priority_cols: pc,
        cells,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct LayerShape {
    pub rows: usize,
    pub cols: usize,
    pub priority_cols: usize,
}

impl fmt::Display for LayerShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}x{}", self.rows, self.cols)?;
        if self.priority_cols > 0 {
            write!(f, "/{}", self.priority_cols)?;
        }
        Ok(())
    }
}

/// One shape per layer, in layer order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LayerFactorization {
    pub shapes: Vec<LayerShape>,
}

/// Balanced shape: rows is the largest divisor of `size` not above its
/// square root. With `chi`, rows is `gcd(size, chi)` and the priority
/// subset takes `chi / rows` leading columns.
pub fn default_factorization(size: usize, chi: Option<usize>) -> LayerShape {
    assert!(size >= 1, "layer size must be positive");
    let rows = match chi {
        Some(k) => size.gcd(&k),
        None => (1..=size).take_while(|d| d * d <= size).filter(|d| size.is_multiple_of(*d)).last().unwrap_or(1),
    };
    LayerShape {
        rows,
        cols: size / rows,
        priority_cols: chi.map_or(0, |k| k / rows),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ViolationCode {
    NotWeaklyConnected,
    LabelsNotUniform,
    NonConsecutiveArc,
    MixedOrientation,
    ParallelArcs,
    FirstCutNotComplete,
    ArcInducedCutNotComplete,
    UselessFactorizationWarning,
}

impl ViolationCode {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::NotWeaklyConnected => "not-weakly-connected",
            Self::LabelsNotUniform => "labels-not-uniform",
            Self::NonConsecutiveArc => "non-consecutive-arc",
            Self::MixedOrientation => "mixed-orientation",
            Self::ParallelArcs => "parallel-arcs",
            Self::FirstCutNotComplete => "first-cut-not-complete",
            Self::ArcInducedCutNotComplete => "arc-induced-cut-not-complete",
            Self::UselessFactorizationWarning => "useless-factorization-warning",
        }
    }

    pub fn severity(self) -> Severity {
        match self {
            Self::UselessFactorizationWarning => Severity::Warning,
            _ => Severity::Error,
        }
    }
}

impl fmt::Display for ViolationCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Severity {
    Error,
    Warning,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub code: ViolationCode,
    pub severity: Severity,
    pub detail: String,
}

impl Violation {
    fn new(code: ViolationCode, detail: impl Into<String>) -> Self {
        Self {
            code,
            severity: code.severity(),
            detail: detail.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PreconditionReport {
    pub ok: bool,
    pub orientation: Orientation,
    /// Per layer, the vertices with arcs into the next layer of the chain.
    /// The first and last layer of the chain report the whole layer.
    pub chi: Vec<VertexSet>,
    /// `gcd(|X_k|, |χ_k|)` per layer.
    pub gcds: Vec<usize>,
    /// Admissible shapes per layer.
    pub options: Vec<Vec<LayerShape>>,
    pub violations: Vec<Violation>,
}

impl PreconditionReport {
    pub fn error_codes(&self) -> Vec<String> {
        self.violations
            .iter()
            .filter(|v| v.severity == Severity::Error)
            .map(|v| v.code.to_string())
            .collect()
    }

    pub fn has(&self, code: ViolationCode) -> bool {
        self.violations.iter().any(|v| v.code == code)
    }

    /// Builds a factorization from `(rows, cols)` per layer, filling in the
    /// priority columns and rejecting shapes that are not admissible.
    pub fn factorization(&self, dims: &[(usize, usize)]) -> Result<LayerFactorization> {
        if dims.len() != self.chi.len() {
            return Err(Error::FactorizationMismatch(format!(
                "{} shapes for {} layers",
                dims.len(),
                self.chi.len()
            )));
        }
        let shapes = dims
            .iter()
            .enumerate()
            .map(|(k, &(rows, cols))| {
                self.options[k]
                    .iter()
                    .find(|s| s.rows == rows && s.cols == cols)
                    .copied()
                    .ok_or_else(|| {
                        Error::FactorizationMismatch(format!(
                            "{rows}x{cols} is not admissible for layer {} (size {}, chi {})",
                            k + 1,
                            self.layer_size(k),
                            self.chi[k].len()
                        ))
                    })
            })
            .collect::<Result<_>>()?;
        Ok(LayerFactorization { shapes })
    }

    /// Balanced default shape on every layer.
    pub fn default_factorization(&self, p: &LayerPartition) -> LayerFactorization {
        let dims: Vec<(usize, usize)> = p
            .layers()
            .iter()
            .zip(&self.chi)
            .map(|(layer, chi)| {
                let chi = (chi.len() < layer.len()).then_some(chi.len());
                let s = default_factorization(layer.len(), chi);
                (s.rows, s.cols)
            })
            .collect();
        self.factorization(&dims).expect("default shapes are admissible")
    }

    fn layer_size(&self, k: usize) -> usize {
        self.options[k].first().map_or(0, |s| s.rows * s.cols)
    }
}

/// Layer indices in chain order: forward layerings run `X₁ → Xₙ`,
/// backward ones are read as the mirror `Xₙ → X₁`.
fn chain(n: usize, orientation: Orientation) -> Vec<usize> {
    match orientation {
        Orientation::Backward => (0..n).rev().collect(),
        _ => (0..n).collect(),
    }
}

fn shapes_for(size: usize, chi: usize, priority: bool) -> Vec<LayerShape> {
    let bound = if priority { size.gcd(&chi) } else { size };
    (1..=bound)
        .filter(|r| bound.is_multiple_of(*r) && size.is_multiple_of(*r))
        .map(|rows| LayerShape {
            rows,
            cols: size / rows,
            priority_cols: if priority { chi / rows } else { 0 },
        })
        .collect()
}

pub fn check_preconditions(g: &LabeledDigraph, p: &LayerPartition) -> Result<PreconditionReport> {
    use ViolationCode::*;

    let layering = check_layering(g, p)?;
    let basic = validate(g);
    let mut violations = Vec::new();

    if !basic.weakly_connected {
        violations.push(Violation::new(
            NotWeaklyConnected,
            format!("{} weakly connected components", basic.component_count),
        ));
    }
    if !basic.uniform_labels {
        violations.push(Violation::new(
            LabelsNotUniform,
            format!("{} distinct label pairs", g.labelset().len()),
        ));
    }
    for id in &layering.non_consecutive {
        let a = g.arc(id).expect("reported arc exists");
        violations.push(Violation::new(
            NonConsecutiveArc,
            format!("arc `{id}` ({} -> {}) does not join consecutive layers", a.tail, a.head),
        ));
    }
    if layering.orientation == Orientation::Mixed {
        violations.push(Violation::new(
            MixedOrientation,
            "consecutive cuts contain both forward and backward arcs",
        ));
    }
    for ((tail, head, _), k) in g.arc_multiset() {
        if k > 1 {
            violations.push(Violation::new(ParallelArcs, format!("{k} parallel arcs {tail} -> {head}")));
        }
    }

    let n = p.len();
    let layers = p.layers();
    let order = chain(n, layering.orientation);
    let mut chi = layers.to_vec();
    for w in order.windows(2) {
        let (from, to) = (w[0], w[1]);
        chi[from] = layers[from]
            .iter()
            .filter(|v| g.arcs().any(|a| &a.tail == *v && layers[to].contains(&a.head)))
            .cloned()
            .collect();
    }
    let (first, second) = (order[0], order[1]);
    if layering.orientation != Orientation::Mixed {
        if !is_complete_bipartite(g, &layers[first], &layers[second])? {
            violations.push(Violation::new(
                FirstCutNotComplete,
                format!("layers {} and {} are not completely joined", first + 1, second + 1),
            ));
        }
        for w in order.windows(2).skip(1) {
            let (from, to) = (w[0], w[1]);
            let tails_only = g
                .arcs()
                .all(|a| !(layers[to].contains(&a.tail) && layers[from].contains(&a.head)));
            if !tails_only || !is_complete_bipartite(g, &chi[from], &layers[to])? {
                violations.push(Violation::new(
                    ArcInducedCutNotComplete,
                    format!(
                        "arcs from layer {} to layer {} do not form a complete bipartite graph on ({} tails, {} heads)",
                        from + 1,
                        to + 1,
                        chi[from].len(),
                        layers[to].len()
                    ),
                ));
            }
        }
    }
    // The chain ends carry no priority subset.
    chi[first] = layers[first].clone();
    let last = order[n - 1];
    chi[last] = layers[last].clone();

    let middle: BTreeSet<usize> = order[1..n - 1].iter().copied().collect();
    let gcds: Vec<usize> = (0..n).map(|k| layers[k].len().gcd(&chi[k].len())).collect();
    let options: Vec<Vec<LayerShape>> = (0..n)
        .map(|k| shapes_for(layers[k].len(), chi[k].len(), middle.contains(&k)))
        .collect();

    let has_both = options.iter().any(|o| o.iter().any(|s| s.rows > 1 && s.cols > 1));
    let tall: Vec<usize> = (0..n).filter(|&k| options[k].iter().any(|s| s.rows > 1)).collect();
    let wide: Vec<usize> = (0..n).filter(|&k| options[k].iter().any(|s| s.cols > 1)).collect();
    let mixed_layers = tall.iter().any(|i| wide.iter().any(|j| i != j));
    if !has_both && !mixed_layers {
        violations.push(Violation::new(
            UselessFactorizationWarning,
            "every admissible factorization leaves one factor as large as the input",
        ));
    }

    let ok = violations.iter().all(|v| v.severity == Severity::Warning);
    Ok(PreconditionReport {
        ok,
        orientation: layering.orientation,
        chi,
        gcds,
        options,
        violations,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decomposition {
    /// Rows contracted.
    pub factor_row: LabeledDigraph,
    /// Columns contracted.
    pub factor_col: LabeledDigraph,
    /// Empty when built from explicit families.
    pub grids: Vec<GridIndexing>,
    pub row_family: Vec<NamedSet>,
    pub col_family: Vec<NamedSet>,
    pub phi: BTreeMap<String, ProductVertex>,
}

fn owner_map(g: &LabeledDigraph, family: &[NamedSet], side: &str) -> Result<BTreeMap<String, String>> {
    let mut owner = BTreeMap::new();
    for s in family {
        for v in &s.members {
            if owner.insert(v.clone(), s.name.clone()).is_some() {
                return Err(Error::OverlappingSets(format!("`{v}` is in two {side} sets")));
            }
        }
    }
    if let Some(v) = g.vertices().iter().find(|v| !owner.contains_key(*v)) {
        return Err(Error::InvalidPartition(format!("`{v}` is in no {side} set")));
    }
    g.ensure_known(owner.keys())?;
    Ok(owner)
}

/// Builds the factors from explicit row and column families. No
/// precondition is checked; [`verify_decomposition`] decides whether the
/// result is a decomposition.
pub fn decompose_with_families(
    g: &LabeledDigraph,
    row_family: Vec<NamedSet>,
    col_family: Vec<NamedSet>,
) -> Result<Decomposition> {
    let rows = owner_map(g, &row_family, "row")?;
    let cols = owner_map(g, &col_family, "column")?;
    let factor_row = contract_family(g, &row_family)?;
    let factor_col = contract_family(g, &col_family)?;
    let phi: BTreeMap<String, ProductVertex> = g
        .vertices()
        .iter()
        .map(|v| (v.clone(), ProductVertex::new(rows[v].clone(), cols[v].clone())))
        .collect();
    let image: BTreeSet<&ProductVertex> = phi.values().collect();
    if image.len() != phi.len() {
        return Err(Error::InvalidPartition(
            "two vertices share both their row and column set".into(),
        ));
    }
    Ok(Decomposition {
        factor_row,
        factor_col,
        grids: Vec::new(),
        row_family,
        col_family,
        phi,
    })
}

pub fn row_name(layer: usize, row: usize) -> String {
    format!("x{layer}'{row}")
}

pub fn col_name(layer: usize, col: usize) -> String {
    format!("x{layer}''{col}")
}

pub fn decompose_npartite(
    g: &LabeledDigraph,
    p: &LayerPartition,
    f: &LayerFactorization,
) -> Result<Decomposition> {
    let report = check_preconditions(g, p)?;
    if !report.ok {
        return Err(Error::PreconditionViolation(report.error_codes()));
    }
    if f.shapes.len() != p.len() {
        return Err(Error::FactorizationMismatch(format!(
            "{} shapes for {} layers",
            f.shapes.len(),
            p.len()
        )));
    }
    let mut grids = Vec::with_capacity(p.len());
    let mut row_family = Vec::new();
    let mut col_family = Vec::new();
    for (k, (layer, shape)) in p.layers().iter().zip(&f.shapes).enumerate() {
        if !report.options[k].contains(shape) {
            return Err(Error::FactorizationMismatch(format!(
                "{shape} is not admissible for layer {} (size {}, chi {})",
                k + 1,
                layer.len(),
                report.chi[k].len()
            )));
        }
        let priority = (shape.priority_cols > 0).then_some(&report.chi[k]);
        let grid = grid_assign(layer, shape.rows, shape.cols, priority)?;
        for r in 1..=grid.rows {
            row_family.push(NamedSet::new(row_name(k + 1, r), grid.row(r).iter().cloned())?);
        }
        for c in 1..=grid.cols {
            col_family.push(NamedSet::new(col_name(k + 1, c), grid.column(c).cloned())?);
        }
        grids.push(grid);
    }
    let mut d = decompose_with_families(g, row_family, col_family)?;
    d.grids = grids;
    Ok(d)
}

/// Two-layer case with `x` as a `c1 × c2` grid and `y` as `c3 × c4`.
pub fn decompose_bipartite(
    g: &LabeledDigraph,
    x: &VertexSet,
    y: &VertexSet,
    (c1, c2, c3, c4): (usize, usize, usize, usize),
) -> Result<Decomposition> {
    let p = LayerPartition::new(vec![x.clone(), y.clone()])?;
    let report = check_preconditions(g, &p)?;
    if !report.ok {
        return Err(Error::PreconditionViolation(report.error_codes()));
    }
    let f = report.factorization(&[(c1, c2), (c3, c4)])?;
    decompose_npartite(g, &p, &f)
}

/// Decomposes with the balanced default shape on every layer.
pub fn decompose_auto(g: &LabeledDigraph, p: &LayerPartition) -> Result<Decomposition> {
    let report = check_preconditions(g, p)?;
    if !report.ok {
        return Err(Error::PreconditionViolation(report.error_codes()));
    }
    decompose_npartite(g, p, &report.default_factorization(p))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub zeta: BTreeSet<ProductVertex>,
    /// The ζ-induced subgraph of the intermediate product equals the input
    /// under `phi`, arc multiplicities included.
    pub zeta_embedding_ok: bool,
    pub vrsp_iso_ok: bool,
    pub removed_vertices: BTreeSet<ProductVertex>,
    /// Removed vertices that are incident to at least one arc of the
    /// intermediate product.
    pub removed_with_arcs: BTreeSet<ProductVertex>,
    /// `removed_vertices ∩ zeta`.
    pub removed_zeta: BTreeSet<ProductVertex>,
    pub verdict: Verdict,
    pub notes: Vec<String>,
}

fn parse_all<'a>(names: impl IntoIterator<Item = &'a String>) -> BTreeSet<ProductVertex> {
    names
        .into_iter()
        .map(|s| ProductVertex::parse(s).expect("product vertex names are rendered pairs"))
        .collect()
}

/// Checks a decomposition of `g` given its factors and `phi`.
pub fn verify(
    g: &LabeledDigraph,
    factor_row: &LabeledDigraph,
    factor_col: &LabeledDigraph,
    phi: &BTreeMap<String, ProductVertex>,
) -> VerificationReport {
    let mut notes = Vec::new();
    let zeta: BTreeSet<ProductVertex> = phi.values().cloned().collect();
    if phi.keys().ne(g.vertices().iter()) {
        notes.push("phi is not defined on exactly the vertices of the graph".into());
    }
    if zeta.len() != phi.len() {
        notes.push("phi is not injective".into());
    }

    let (inter, outcome) = match (intermediate(factor_row, factor_col), vrsp_detailed(factor_row, factor_col)) {
        (Ok(i), Ok(o)) => (i, o),
        (Err(e), _) | (_, Err(e)) => {
            notes.push(format!("products could not be formed: {e}"));
            return VerificationReport {
                zeta,
                zeta_embedding_ok: false,
                vrsp_iso_ok: false,
                removed_vertices: BTreeSet::new(),
                removed_with_arcs: BTreeSet::new(),
                removed_zeta: BTreeSet::new(),
                verdict: Verdict::Fail,
                notes,
            };
        }
    };

    let rendered: BTreeMap<String, String> = phi.iter().map(|(k, v)| (k.clone(), v.render())).collect();
    let zeta_names: VertexSet = rendered.values().cloned().collect();
    let zeta_embedding_ok = notes.is_empty()
        && match (induced_subgraph(&inter, &zeta_names), g.relabel(&rendered)) {
            (Ok(induced), Ok(image)) => induced.arc_multiset() == image.arc_multiset(),
            (Err(e), _) | (_, Err(e)) => {
                notes.push(format!("zeta is not inside the product: {e}"));
                false
            }
        };
    if !zeta_embedding_ok {
        notes.push("the zeta-induced subgraph of the intermediate product differs from the graph".into());
    }

    let vrsp_iso_ok = is_isomorphic(&outcome.graph, g);
    if !vrsp_iso_ok {
        notes.push(format!(
            "vrsp has {} vertices and {} arcs, the graph has {} and {}",
            outcome.graph.vertex_count(),
            outcome.graph.arc_count(),
            g.vertex_count(),
            g.arc_count()
        ));
    }

    let removed_vertices = parse_all(&outcome.removed);
    let touched: VertexSet = inter.arcs().flat_map(|a| [a.tail.clone(), a.head.clone()]).collect();
    let removed_with_arcs = parse_all(outcome.removed.iter().filter(|v| touched.contains(*v)));
    let removed_zeta: BTreeSet<ProductVertex> = removed_vertices.intersection(&zeta).cloned().collect();
    if !removed_zeta.is_empty() {
        notes.push(format!("{} zeta vertices were removed", removed_zeta.len()));
    }

    let verdict = if zeta_embedding_ok && vrsp_iso_ok && removed_zeta.is_empty() {
        Verdict::Pass
    } else {
        Verdict::Fail
    };
    VerificationReport {
        zeta,
        zeta_embedding_ok,
        vrsp_iso_ok,
        removed_vertices,
        removed_with_arcs,
        removed_zeta,
        verdict,
        notes,
    }
}

pub fn verify_decomposition(g: &LabeledDigraph, d: &Decomposition) -> VerificationReport {
    verify(g, &d.factor_row, &d.factor_col, &d.phi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{Arc, LabelPair};

    fn set(vs: &[&str]) -> VertexSet {
        vs.iter().map(|s| s.to_string()).collect()
    }

    fn complete(m: usize, n: usize) -> (LabeledDigraph, VertexSet, VertexSet) {
        let x: VertexSet = (1..=m).map(|i| format!("u{i}")).collect();
        let y: VertexSet = (1..=n).map(|j| format!("v{j}")).collect();
        let arcs: Vec<Arc> = x
            .iter()
            .flat_map(|u| y.iter().map(move |v| Arc::new(format!("{u}->{v}"), u, v, LabelPair::sync())))
            .collect();
        let g = LabeledDigraph::new(x.iter().chain(&y).cloned(), arcs).unwrap();
        (g, x, y)
    }

    #[test]
    fn grid_fill_policy() {
        let g = grid_assign(&set(&["v1", "v2", "v3", "v4"]), 2, 2, None).unwrap();
        assert_eq!(
            [g.cell(1, 1), g.cell(1, 2), g.cell(2, 1), g.cell(2, 2)],
            ["v1", "v2", "v3", "v4"]
        );
        let g = grid_assign(&set(&["u2", "u3", "u4"]), 1, 3, Some(&set(&["u2", "u3"]))).unwrap();
        assert_eq!(g.row(1), ["u2", "u3", "u4"]);
        assert_eq!(g.priority_cols, 2);
    }

    #[test]
    fn grid_priority_packs_leading_columns() {
        let layer = set(&["a", "b", "c", "d", "e", "f"]);
        let g = grid_assign(&layer, 2, 3, Some(&set(&["c", "f"]))).unwrap();
        assert_eq!(g.cells, vec![vec!["c", "a", "b"], vec!["f", "d", "e"]]);
        assert_eq!(g.layer(), layer);
    }

    #[test]
    fn grid_errors() {
        let layer = set(&["a", "b", "c", "d", "e", "f"]);
        assert!(matches!(grid_assign(&layer, 4, 2, None), Err(Error::ShapeMismatch(_))));
        assert_eq!(
            grid_assign(&layer, 2, 3, Some(&set(&["a", "b", "c"]))),
            Err(Error::PriorityNotDivisible { priority: 3, rows: 2 })
        );
        assert!(matches!(
            grid_assign(&layer, 2, 3, Some(&set(&["z"]))),
            Err(Error::UnknownVertex(_))
        ));
    }

    #[test]
    fn default_shapes() {
        let s = |r, c, p| LayerShape { rows: r, cols: c, priority_cols: p };
        assert_eq!(default_factorization(4, None), s(2, 2, 0));
        assert_eq!(default_factorization(3, None), s(1, 3, 0));
        assert_eq!(default_factorization(6, Some(4)), s(2, 3, 2));
        assert_eq!(default_factorization(12, None), s(3, 4, 0));
        assert_eq!(default_factorization(1, None), s(1, 1, 0));
    }

    #[test]
    fn bipartite_k22_shapes() {
        let (g, x, y) = complete(2, 2);
        for (c, row_size, col_size) in [
            ((2, 1, 2, 1), (4, 4), (2, 1)),
            ((1, 2, 1, 2), (2, 1), (4, 4)),
            ((2, 1, 1, 2), (3, 2), (3, 2)),
        ] {
            let d = decompose_bipartite(&g, &x, &y, c).unwrap();
            assert_eq!((d.factor_row.vertex_count(), d.factor_row.arc_count()), row_size);
            assert_eq!((d.factor_col.vertex_count(), d.factor_col.arc_count()), col_size);
            assert_eq!(verify_decomposition(&g, &d).verdict, Verdict::Pass, "{c:?}");
        }
    }

    #[test]
    fn useless_bipartite_shape() {
        let (g, x, y) = complete(3, 4);
        let d = decompose_bipartite(&g, &x, &y, (3, 1, 4, 1)).unwrap();
        assert!(is_isomorphic(&d.factor_row, &g));
        assert_eq!((d.factor_col.vertex_count(), d.factor_col.arc_count()), (2, 1));
    }

    #[test]
    fn bad_factorization_rejected() {
        let (g, x, y) = complete(3, 4);
        assert!(matches!(
            decompose_bipartite(&g, &x, &y, (2, 2, 2, 2)),
            Err(Error::FactorizationMismatch(_))
        ));
    }

    #[test]
    fn incomplete_cut_rejected() {
        let g = LabeledDigraph::new(
            ["a", "b", "c"],
            [Arc::new("1", "a", "b", LabelPair::sync()), Arc::new("2", "a", "c", LabelPair::sync())],
        )
        .unwrap();
        let p = LayerPartition::new(vec![set(&["a", "b"]), set(&["c"])]).unwrap();
        let r = check_preconditions(&g, &p).unwrap();
        assert!(!r.ok);
        assert!(r.has(ViolationCode::NonConsecutiveArc));
        assert!(matches!(decompose_auto(&g, &p), Err(Error::PreconditionViolation(_))));
    }

    #[test]
    fn prime_layers_warn_useless() {
        let (g, x, y) = complete(1, 3);
        let p = LayerPartition::new(vec![x, y]).unwrap();
        let r = check_preconditions(&g, &p).unwrap();
        assert!(r.ok);
        assert!(r.has(ViolationCode::UselessFactorizationWarning));
        let (g, x, y) = complete(2, 3);
        let r = check_preconditions(&g, &LayerPartition::new(vec![x, y]).unwrap()).unwrap();
        assert!(!r.has(ViolationCode::UselessFactorizationWarning));
    }

    #[test]
    fn families_must_cover() {
        let (g, _, _) = complete(1, 1);
        let rows = vec![NamedSet::new("r", ["u1"]).unwrap()];
        let cols = vec![NamedSet::new("c", ["u1", "v1"]).unwrap()];
        assert!(matches!(
            decompose_with_families(&g, rows, cols),
            Err(Error::InvalidPartition(_))
        ));
    }
}
