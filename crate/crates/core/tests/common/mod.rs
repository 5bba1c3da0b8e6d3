//! Random instances and independent reference computations shared by the
//! integration tests.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use vrsp::graph::{Arc, LabelPair, LabeledDigraph, Weight};

pub use rand::SeedableRng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn label(rng: &mut ChaCha8Rng, palette: &[(&str, u64)]) -> LabelPair {
    let (a, w) = palette[rng.gen_range(0..palette.len())];
    LabelPair::new(a, Weight::from_integer(w)).unwrap()
}

/// Random DAG on `n` vertices `{prefix}0…`: arcs only go from lower to
/// higher index, parallel arcs allowed.
pub fn random_dag(rng: &mut ChaCha8Rng, prefix: &str, n: usize, density: f64, palette: &[(&str, u64)]) -> LabeledDigraph {
    let names: Vec<String> = (0..n).map(|i| format!("{prefix}{i}")).collect();
    let mut arcs = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            while rng.gen_bool(density) && arcs.len() < 4 * n {
                arcs.push(Arc::new(format!("a{}", arcs.len()), names[i].clone(), names[j].clone(), label(rng, palette)));
                if rng.gen_bool(0.7) {
                    break;
                }
            }
        }
    }
    LabeledDigraph::new(names, arcs).unwrap()
}

/// Random digraph, cycles and self-loops allowed.
pub fn random_digraph(rng: &mut ChaCha8Rng, n: usize, m: usize, palette: &[(&str, u64)]) -> LabeledDigraph {
    let names: Vec<String> = (0..n).map(|i| format!("v{i}")).collect();
    let arcs: Vec<Arc> = (0..m)
        .map(|k| {
            let t = rng.gen_range(0..n);
            let h = rng.gen_range(0..n);
            Arc::new(format!("a{k}"), names[t].clone(), names[h].clone(), label(rng, palette))
        })
        .collect();
    LabeledDigraph::new(names, arcs).unwrap()
}

/// Renames vertices by a random permutation and shuffles arc ids.
pub fn scramble(rng: &mut ChaCha8Rng, g: &LabeledDigraph) -> LabeledDigraph {
    let mut targets: Vec<String> = (0..g.vertex_count()).map(|i| format!("w{i}")).collect();
    targets.shuffle(rng);
    let map: BTreeMap<&String, String> = g.vertices().iter().zip(targets).collect();
    let mut arcs: Vec<&Arc> = g.arcs().collect();
    arcs.shuffle(rng);
    let arcs = arcs
        .into_iter()
        .enumerate()
        .map(|(i, a)| Arc::new(format!("b{i}"), map[&a.tail].clone(), map[&a.head].clone(), a.label.clone()));
    LabeledDigraph::new(map.values().cloned(), arcs).unwrap()
}

/// Small structural change: retarget, relabel, add or drop one arc.
pub fn perturb(rng: &mut ChaCha8Rng, g: &LabeledDigraph) -> LabeledDigraph {
    let vs: Vec<String> = g.vertices().iter().cloned().collect();
    let mut arcs: Vec<Arc> = g.arcs().cloned().collect();
    match rng.gen_range(0..4) {
        0 if !arcs.is_empty() => {
            let i = rng.gen_range(0..arcs.len());
            arcs[i].head = vs[rng.gen_range(0..vs.len())].clone();
        }
        1 if !arcs.is_empty() => {
            let i = rng.gen_range(0..arcs.len());
            arcs[i].label = LabelPair::unit(if arcs[i].label.action() == "s" { "t" } else { "s" }).unwrap();
        }
        2 if !arcs.is_empty() => {
            let i = rng.gen_range(0..arcs.len());
            arcs.remove(i);
        }
        _ => {
            let t = vs[rng.gen_range(0..vs.len())].clone();
            let h = vs[rng.gen_range(0..vs.len())].clone();
            arcs.push(Arc::new("extra", t, h, LabelPair::sync()));
        }
    }
    LabeledDigraph::new(vs, arcs).unwrap()
}

/// Longest path ending at each vertex by exhaustive path enumeration.
pub fn brute_levels(g: &LabeledDigraph) -> BTreeMap<String, usize> {
    fn longest_into(g: &LabeledDigraph, v: &str, memo: &mut BTreeMap<String, usize>) -> usize {
        if let Some(&l) = memo.get(v) {
            return l;
        }
        let l = g
            .arcs()
            .filter(|a| a.head == v)
            .map(|a| longest_into(g, &a.tail, memo) + 1)
            .max()
            .unwrap_or(0);
        memo.insert(v.to_string(), l);
        l
    }
    let mut memo = BTreeMap::new();
    for v in g.vertices() {
        longest_into(g, v, &mut memo);
    }
    memo
}

/// Cycle detection by depth-first search from every vertex.
pub fn has_cycle(g: &LabeledDigraph) -> bool {
    fn dfs<'a>(g: &'a LabeledDigraph, v: &'a str, stack: &mut Vec<&'a str>, done: &mut BTreeSet<&'a str>) -> bool {
        if stack.contains(&v) {
            return true;
        }
        if done.contains(v) {
            return false;
        }
        stack.push(v);
        let found = g.arcs().filter(|a| a.tail == v).any(|a| dfs(g, &a.head, stack, done));
        stack.pop();
        done.insert(v);
        found
    }
    let mut done = BTreeSet::new();
    g.vertices().iter().any(|v| dfs(g, v, &mut Vec::new(), &mut done))
}

/// Closed-form arc count of the Cartesian product.
pub fn cartesian_arc_count(g1: &LabeledDigraph, g2: &LabeledDigraph) -> usize {
    g1.arc_count() * g2.vertex_count() + g2.arc_count() * g1.vertex_count()
}

/// Closed-form arc count of the intermediate product.
pub fn intermediate_arc_count(g1: &LabeledDigraph, g2: &LabeledDigraph) -> usize {
    let count = |g: &LabeledDigraph| {
        let mut c: BTreeMap<LabelPair, usize> = BTreeMap::new();
        for a in g.arcs() {
            *c.entry(a.label.clone()).or_insert(0) += 1;
        }
        c
    };
    let (c1, c2) = (count(g1), count(g2));
    let diagonal: usize = c1.iter().filter_map(|(l, n)| c2.get(l).map(|m| n * m)).sum();
    let async1: usize = c1.iter().filter(|(l, _)| !c2.contains_key(*l)).map(|(_, n)| n).sum();
    let async2: usize = c2.iter().filter(|(l, _)| !c1.contains_key(*l)).map(|(_, n)| n).sum();
    diagonal + async1 * g2.vertex_count() + async2 * g1.vertex_count()
}
