use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use vrsp::contraction::{contract_family, NamedSet};
use vrsp::decomposition::{
    check_preconditions, decompose_auto, decompose_npartite, decompose_with_families, verify, Decomposition,
    Verdict,
};
use vrsp::generators::{gen_complete_bipartite, gen_figure, gen_layered, gen_random_valid, LayeredSpec};
use vrsp::graph::{validate, LabeledDigraph, LayerPartition, VertexSet};
use vrsp::io::{export_dot, parse_graph, parse_phi, serialize_graph, serialize_phi, write_atomic, ParsedGraph};
use vrsp::isomorphism::find_isomorphism;
use vrsp::products::{cartesian, intermediate, vrsp};

/// Exit code for a negative verification or isomorphism answer.
const NEGATIVE: u8 = 1;
/// Exit code for invalid input.
const INVALID: u8 = 2;

#[derive(Parser)]
#[command(name = "vrsp", version, about = "Vertex-removing synchronised products and layered decompositions")]
struct Cli {
    /// Also write the main graph of the command as DOT.
    #[arg(long, global = true, value_name = "OUT.dot")]
    dot: Option<PathBuf>,
    /// Suppress reports on stdout.
    #[arg(long, short, global = true)]
    quiet: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate an instance.
    Gen {
        #[command(subcommand)]
        kind: GenKind,
        /// Output file (stdout when absent).
        #[arg(short, long, global = true)]
        output: Option<PathBuf>,
    },
    /// Form a product of two graphs.
    Product {
        #[arg(long, value_enum)]
        kind: ProductKind,
        a: PathBuf,
        b: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Contract families stored in the graph document.
    Contract {
        graph: PathBuf,
        /// Family name; repeat to contract several in order.
        #[arg(long = "family", required = true)]
        families: Vec<String>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Split a layered graph into a row factor and a column factor.
    Decompose {
        graph: PathBuf,
        /// Per-layer grid shapes, e.g. `3x1,2x2`.
        #[arg(long, conflicts_with_all = ["auto", "families"])]
        factors: Option<String>,
        /// Balanced default shapes (the default when nothing else is given).
        #[arg(long)]
        auto: bool,
        /// Use the document's families: names with `''` are columns, names
        /// with a single `'` are rows.
        #[arg(long, conflicts_with = "auto")]
        families: bool,
        /// Writes PREFIX_row.json, PREFIX_col.json and PREFIX_phi.json.
        #[arg(short, long, value_name = "PREFIX")]
        output: PathBuf,
    },
    /// Check that two factors and a phi map reconstruct a graph.
    Verify {
        graph: PathBuf,
        factor_row: PathBuf,
        factor_col: PathBuf,
        #[arg(long)]
        phi: PathBuf,
    },
    /// Decide label-preserving isomorphism.
    Iso { a: PathBuf, b: PathBuf },
    /// Validate a graph and, when it has layers, the decomposition
    /// preconditions.
    Check { graph: PathBuf },
}

#[derive(Subcommand)]
enum GenKind {
    /// Complete bipartite graph u1..uM -> v1..vN.
    CompleteBipartite { m: usize, n: usize },
    /// Complete layered graph.
    Layered {
        /// Comma-separated layer sizes.
        sizes: String,
        /// Comma-separated chi sizes of the middle layers.
        #[arg(long, default_value = "")]
        chi: String,
        #[arg(long)]
        backward: bool,
    },
    /// One of the four reference figures, with its layers and families.
    Figure { k: u32 },
    /// Seeded random valid instance.
    Random {
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        max_part: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ProductKind {
    Cartesian,
    Intermediate,
    Vrsp,
}

type BoxError = Box<dyn std::error::Error>;

struct Ctx {
    dot: Option<PathBuf>,
    quiet: bool,
}

impl Ctx {
    fn report<T: Serialize>(&self, value: &T) {
        if !self.quiet {
            println!("{}", serde_json::to_string_pretty(value).expect("reports serialize"));
        }
    }

    fn dot(&self, g: &LabeledDigraph, p: Option<&LayerPartition>) -> Result<(), BoxError> {
        if let Some(path) = &self.dot {
            write_atomic(path, &export_dot(g, p))?;
        }
        Ok(())
    }

    fn emit(&self, out: Option<&Path>, text: &str) -> Result<(), BoxError> {
        match out {
            Some(path) => write_atomic(path, text)?,
            None => print!("{text}"),
        }
        Ok(())
    }
}

fn read_graph(path: &Path) -> Result<ParsedGraph, BoxError> {
    let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    parse_graph(&text).map_err(|e| format!("{}: {e}", path.display()).into())
}

fn parse_list(s: &str) -> Result<Vec<usize>, BoxError> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<usize>().map_err(|e| format!("`{t}`: {e}").into()))
        .collect()
}

fn parse_shapes(s: &str) -> Result<Vec<(usize, usize)>, BoxError> {
    s.split(',')
        .map(|t| {
            let (r, c) = t
                .trim()
                .split_once(['x', 'X'])
                .ok_or_else(|| format!("shape `{t}` is not ROWSxCOLS"))?;
            Ok((r.parse()?, c.parse()?))
        })
        .collect()
}

fn split_families(families: &BTreeMap<String, VertexSet>) -> Result<(Vec<NamedSet>, Vec<NamedSet>), BoxError> {
    let mut rows = Vec::new();
    let mut cols = Vec::new();
    for (name, members) in families {
        let set = NamedSet::new(name.clone(), members.iter().cloned())?;
        if name.contains("''") {
            cols.push(set);
        } else if name.contains('\'') {
            rows.push(set);
        } else {
            return Err(format!("family `{name}` is neither a row (') nor a column ('') set").into());
        }
    }
    Ok((rows, cols))
}

fn prefixed(prefix: &Path, suffix: &str) -> PathBuf {
    let mut name = prefix.file_name().map(|n| n.to_os_string()).unwrap_or_default();
    name.push(suffix);
    prefix.with_file_name(name)
}

fn run(cli: Cli) -> Result<u8, BoxError> {
    let ctx = Ctx {
        dot: cli.dot,
        quiet: cli.quiet,
    };
    match cli.command {
        Command::Gen { kind, output } => {
            let (g, p, families) = match kind {
                GenKind::CompleteBipartite { m, n } => {
                    if m == 0 || n == 0 {
                        return Err("layer sizes must be positive".into());
                    }
                    let g = gen_complete_bipartite(m, n)?;
                    let p = LayerPartition::new(vec![
                        (1..=m).map(|i| format!("u{i}")).collect(),
                        (1..=n).map(|j| format!("v{j}")).collect(),
                    ])?;
                    (g, p, BTreeMap::new())
                }
                GenKind::Layered { sizes, chi, backward } => {
                    let (sizes, chi) = (parse_list(&sizes)?, parse_list(&chi)?);
                    let spec = if backward {
                        LayeredSpec::backward(sizes, chi)
                    } else {
                        LayeredSpec::forward(sizes, chi)
                    };
                    let (g, p) = gen_layered(&spec)?;
                    (g, p, BTreeMap::new())
                }
                GenKind::Figure { k } => {
                    let f = gen_figure(k)?;
                    let families = f
                        .row_family
                        .iter()
                        .chain(&f.col_family)
                        .map(|s| (s.name.clone(), s.members.clone()))
                        .collect();
                    (f.graph, f.partition, families)
                }
                GenKind::Random { seed, n, max_part } => {
                    let (g, p) = gen_random_valid(seed, n, max_part)?;
                    (g, p, BTreeMap::new())
                }
            };
            ctx.dot(&g, Some(&p))?;
            ctx.emit(output.as_deref(), &serialize_graph(&g, Some(&p), Some(&families)))?;
            Ok(0)
        }
        Command::Product { kind, a, b, output } => {
            let (a, b) = (read_graph(&a)?.graph, read_graph(&b)?.graph);
            let g = match kind {
                ProductKind::Cartesian => cartesian(&a, &b)?,
                ProductKind::Intermediate => intermediate(&a, &b)?,
                ProductKind::Vrsp => vrsp(&a, &b)?,
            };
            ctx.dot(&g, None)?;
            ctx.emit(output.as_deref(), &serialize_graph(&g, None, None))?;
            Ok(0)
        }
        Command::Contract { graph, families, output } => {
            let doc = read_graph(&graph)?;
            let sets = families
                .iter()
                .map(|name| {
                    let members = doc
                        .families
                        .get(name)
                        .ok_or_else(|| format!("no family named `{name}` in the document"))?;
                    Ok(NamedSet::new(name.clone(), members.iter().cloned())?)
                })
                .collect::<Result<Vec<_>, BoxError>>()?;
            let g = contract_family(&doc.graph, &sets)?;
            ctx.dot(&g, None)?;
            ctx.emit(output.as_deref(), &serialize_graph(&g, None, None))?;
            Ok(0)
        }
        Command::Decompose {
            graph,
            factors,
            auto: _,
            families,
            output,
        } => {
            let doc = read_graph(&graph)?;
            let d: Decomposition = if families {
                let (rows, cols) = split_families(&doc.families)?;
                decompose_with_families(&doc.graph, rows, cols)?
            } else {
                let p = doc.partition.as_ref().ok_or("the graph document has no layers")?;
                match factors {
                    Some(spec) => {
                        let report = check_preconditions(&doc.graph, p)?;
                        if !report.ok {
                            return Err(vrsp::Error::PreconditionViolation(report.error_codes()).into());
                        }
                        let f = report.factorization(&parse_shapes(&spec)?)?;
                        decompose_npartite(&doc.graph, p, &f)?
                    }
                    None => decompose_auto(&doc.graph, p)?,
                }
            };
            write_atomic(&prefixed(&output, "_row.json"), &serialize_graph(&d.factor_row, None, None))?;
            write_atomic(&prefixed(&output, "_col.json"), &serialize_graph(&d.factor_col, None, None))?;
            write_atomic(&prefixed(&output, "_phi.json"), &serialize_phi(&d.phi))?;
            ctx.dot(&doc.graph, doc.partition.as_ref())?;
            ctx.report(&serde_json::json!({
                "factor_row": { "vertices": d.factor_row.vertex_count(), "arcs": d.factor_row.arc_count() },
                "factor_col": { "vertices": d.factor_col.vertex_count(), "arcs": d.factor_col.arc_count() },
                "grids": d.grids,
            }));
            Ok(0)
        }
        Command::Verify {
            graph,
            factor_row,
            factor_col,
            phi,
        } => {
            let g = read_graph(&graph)?;
            let (f1, f2) = (read_graph(&factor_row)?.graph, read_graph(&factor_col)?.graph);
            let phi_text = fs::read_to_string(&phi).map_err(|e| format!("{}: {e}", phi.display()))?;
            let phi = parse_phi(&phi_text)?;
            let report = verify(&g.graph, &f1, &f2, &phi);
            ctx.dot(&g.graph, g.partition.as_ref())?;
            ctx.report(&report);
            Ok(if report.verdict == Verdict::Pass { 0 } else { NEGATIVE })
        }
        Command::Iso { a, b } => {
            let (a, b) = (read_graph(&a)?.graph, read_graph(&b)?.graph);
            ctx.dot(&a, None)?;
            match find_isomorphism(&a, &b) {
                Some(w) => {
                    ctx.report(&serde_json::json!({ "isomorphic": true, "mapping": w.mapping }));
                    Ok(0)
                }
                None => {
                    ctx.report(&serde_json::json!({ "isomorphic": false }));
                    Ok(NEGATIVE)
                }
            }
        }
        Command::Check { graph } => {
            let doc = read_graph(&graph)?;
            ctx.dot(&doc.graph, doc.partition.as_ref())?;
            let validation = validate(&doc.graph);
            match &doc.partition {
                Some(p) => {
                    let report = check_preconditions(&doc.graph, p)?;
                    let ok = report.ok && validation.acyclic;
                    ctx.report(&serde_json::json!({ "validation": validation, "preconditions": report }));
                    Ok(if ok { 0 } else { NEGATIVE })
                }
                None => {
                    let ok = validation.acyclic && validation.issues.is_empty();
                    ctx.report(&serde_json::json!({ "validation": validation }));
                    Ok(if ok { 0 } else { NEGATIVE })
                }
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(INVALID)
        }
    }
}
