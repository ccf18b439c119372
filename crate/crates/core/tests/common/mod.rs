//! Oracles and generators shared by the integration tests.
#![allow(dead_code)]

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use treecompat::chordal::{edge, Edge, Graph};
use treecompat::compat::{random_binary_tree, random_profile, taxon_name};
use treecompat::{is_label_isomorphic, DisplayGraph, Label, PhyloTree};

pub fn labels(n: usize) -> BTreeSet<Label> {
    (0..n).map(|i| Label::new(taxon_name(i)).unwrap()).collect()
}

pub fn internal_edges(t: &PhyloTree) -> Vec<(usize, usize)> {
    t.edges()
        .into_iter()
        .filter(|&(u, v)| !t.is_labeled(u) && !t.is_labeled(v))
        .collect()
}

/// Random tree on `n` leaves with about `polytomy` of its internal edges contracted.
pub fn random_tree(seed: u64, n: usize, polytomy: f64) -> PhyloTree {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut t = random_binary_tree(&mut rng, &labels(n)).unwrap();
    let count = (internal_edges(&t).len() as f64 * polytomy).round() as usize;
    for _ in 0..count {
        let inner = internal_edges(&t);
        let (u, v) = inner[rng.gen_range(0..inner.len())];
        t = t.contract_edge(u, v).unwrap();
    }
    t.normalized().unwrap().0
}

pub fn random_subset(rng: &mut ChaCha8Rng, from: &BTreeSet<Label>, min: usize) -> BTreeSet<Label> {
    loop {
        let s: BTreeSet<Label> = from.iter().filter(|_| rng.gen_bool(0.7)).cloned().collect();
        if s.len() >= min {
            return s;
        }
    }
}

pub fn graph_from_mask(n: usize, mask: u64) -> Graph {
    let mut g = Graph::new(n);
    let mut bit = 0;
    for u in 0..n {
        for v in u + 1..n {
            if mask >> bit & 1 == 1 {
                g.add_edge(u, v).unwrap();
            }
            bit += 1;
        }
    }
    g
}

/// Chordal iff no vertex subset of size four or more induces a cycle.
pub fn chordal_oracle(g: &Graph) -> bool {
    let n = g.vertex_count();
    for subset in 0u32..1 << n {
        let vs: Vec<usize> = (0..n).filter(|&v| subset >> v & 1 == 1).collect();
        if vs.len() < 4 {
            continue;
        }
        let inside: BTreeSet<usize> = vs.iter().copied().collect();
        let all_degree_two = vs.iter().all(|&v| g.neighbors(v).intersection(&inside).count() == 2);
        if !all_degree_two {
            continue;
        }
        // connected 2-regular means one cycle
        let mut seen = BTreeSet::from([vs[0]]);
        let mut stack = vec![vs[0]];
        while let Some(v) = stack.pop() {
            for w in g.neighbors(v).intersection(&inside) {
                if seen.insert(*w) {
                    stack.push(*w);
                }
            }
        }
        if seen.len() == vs.len() {
            return false;
        }
    }
    true
}

/// Eliminates vertices in index order, adding fill.
pub fn chordal_completion(g: &Graph) -> Graph {
    let mut h = g.clone();
    for v in 0..h.vertex_count() {
        let later: Vec<usize> = h.neighbors(v).iter().copied().filter(|&w| w > v).collect();
        for (i, &a) in later.iter().enumerate() {
            for &b in &later[i + 1..] {
                if !h.has_edge(a, b) {
                    h.add_edge(a, b).unwrap();
                }
            }
        }
    }
    h
}

pub fn brute_maximal_cliques(g: &Graph) -> BTreeSet<BTreeSet<usize>> {
    let n = g.vertex_count();
    let cliques: Vec<BTreeSet<usize>> = (1u32..1 << n)
        .map(|s| (0..n).filter(|&v| s >> v & 1 == 1).collect::<BTreeSet<usize>>())
        .filter(|c| g.is_clique(c))
        .collect();
    cliques
        .iter()
        .filter(|c| !cliques.iter().any(|d| d.len() > c.len() && c.is_subset(d)))
        .cloned()
        .collect()
}

/// Whether some sequence of internal edge contractions turns `r` into `shown`.
pub fn reachable_by_contraction(r: &PhyloTree, shown: &PhyloTree) -> bool {
    if is_label_isomorphic(&r.normalized().unwrap().0, shown) {
        return true;
    }
    if r.edge_count() <= shown.edge_count() {
        return false;
    }
    internal_edges(r)
        .into_iter()
        .any(|(u, v)| reachable_by_contraction(&r.contract_edge(u, v).unwrap(), shown))
}

pub fn contraction_oracle(host: &PhyloTree, shown: &PhyloTree) -> bool {
    let r = host.restrict(&shown.label_set()).unwrap();
    reachable_by_contraction(&r, shown)
}

/// Every cross pair between two internal edges from different trees.
pub fn has_full_quad(g: &DisplayGraph, fill: &BTreeSet<Edge>) -> bool {
    let inner = g.internal_edges();
    inner.iter().enumerate().any(|(i, &(a, b))| {
        inner[i + 1..].iter().any(|&(c, d)| {
            g.member_of(a) != g.member_of(c)
                && [(a, c), (a, d), (b, c), (b, d)]
                    .iter()
                    .all(|&(x, y)| fill.contains(&edge(x, y)))
        })
    })
}

pub fn small_profile_graph(seed: u64, n: usize, overlap: f64) -> DisplayGraph {
    DisplayGraph::new(&random_profile(seed, 2, n, overlap).unwrap())
}

pub fn pick_fill(g: &DisplayGraph, mask: u64) -> BTreeSet<Edge> {
    g.candidate_fill_edges()
        .into_iter()
        .enumerate()
        .filter(|(i, _)| mask >> (i % 64) & 1 == 1)
        .map(|(_, e)| e)
        .collect()
}

/// `host` restricted to a random label subset (at least `min` labels), with
/// about `polytomy` of its internal edges then contracted. Always displayed by `host`.
pub fn contracted_restriction(host: &PhyloTree, rng: &mut ChaCha8Rng, min: usize, polytomy: f64) -> PhyloTree {
    let within = random_subset(rng, &host.label_set(), min);
    let mut shown = host.restrict(&within).unwrap();
    let count = (internal_edges(&shown).len() as f64 * polytomy).round() as usize;
    for _ in 0..count {
        let inner = internal_edges(&shown);
        let (u, v) = inner[rng.gen_range(0..inner.len())];
        shown = shown.contract_edge(u, v).unwrap();
    }
    shown.normalized().unwrap().0
}
