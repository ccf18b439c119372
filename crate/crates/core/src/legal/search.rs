//! Search for a minimum legal fill-in.
//!
//! Only candidate pairs (internal vertices of different trees) can appear in
//! a legal fill. With candidate fill only, a chordal completion is illegal
//! exactly when it holds all four cross pairs between an internal edge of one
//! tree and an internal edge of another: those four vertices form a clique
//! with two display graph edges, and every other way to break the clique rule
//! would need a pair that is not a candidate.
//!
//! Small instances enumerate fill subsets by size and then lexicographically.
//! Larger ones run a dynamic program over elimination orderings: a minimum
//! legal fill is always a minimal triangulation, and every minimal
//! triangulation comes from some elimination ordering. Both routes return the
//! lexicographically first fill of minimum size.

use std::collections::{BTreeSet, HashMap};

use itertools::Itertools;

use super::{check_legal, LegalError};
use crate::chordal::{edge, is_chordal, Edge, Graph, Triangulation};
use crate::display::DisplayGraph;

pub const DEFAULT_CANDIDATE_LIMIT: usize = 24;
/// Vertex cap of the elimination route (one bit per vertex).
pub const MAX_ELIMINATION_VERTICES: usize = 64;
/// Largest candidate count handled by plain subset enumeration.
const EXHAUSTIVE_MAX: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SearchMethod {
    Exhaustive,
    Elimination,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchOutcome {
    pub triangulation: Option<Triangulation>,
    /// Candidate fill edges, summed over components.
    pub candidates: usize,
    /// Fill subsets tested plus elimination states visited.
    pub examined: u64,
    /// Number of fill subsets when every component was enumerated.
    pub subsets: Option<u64>,
    pub method: SearchMethod,
    pub components: usize,
}

impl SearchOutcome {
    /// One-line account of an unsuccessful search.
    pub fn certificate(&self) -> String {
        match (self.method, self.subsets) {
            (SearchMethod::Exhaustive, Some(total)) => {
                format!("{}/{} fill subsets exhausted", self.examined, total)
            }
            _ => format!(
                "no legal elimination ordering; {} states explored over {} candidate fill edges",
                self.examined, self.candidates
            ),
        }
    }
}

/// Finds a minimum legal fill of `g`, or shows none exists. Components are
/// searched independently and `limit` caps the candidate count of each.
pub fn search_legal_triangulation(g: &DisplayGraph, limit: usize) -> Result<SearchOutcome, LegalError> {
    let components = g.components();
    let mut fill = BTreeSet::new();
    let mut outcome = SearchOutcome {
        triangulation: None,
        candidates: 0,
        examined: 0,
        subsets: Some(0),
        method: SearchMethod::Exhaustive,
        components: components.len(),
    };
    for c in &components {
        let part = search_connected(&c.graph, limit)?;
        outcome.candidates += part.candidates;
        outcome.examined += part.examined;
        outcome.subsets = match (outcome.subsets, part.subsets) {
            (Some(a), Some(b)) => Some(a + b),
            _ => None,
        };
        if part.method == SearchMethod::Elimination {
            outcome.method = SearchMethod::Elimination;
        }
        let Some(found) = part.fill else {
            return Ok(outcome);
        };
        fill.extend(found.into_iter().map(|(u, v)| edge(c.to_parent[u], c.to_parent[v])));
    }
    let t = Triangulation::new(g.graph().clone(), fill)?;
    if !check_legal(g, &t)?.legal {
        return Err(LegalError::Internal("search returned an illegal fill".into()));
    }
    outcome.triangulation = Some(t);
    Ok(outcome)
}

struct PartOutcome {
    fill: Option<Vec<Edge>>,
    candidates: usize,
    examined: u64,
    subsets: Option<u64>,
    method: SearchMethod,
}

fn search_connected(g: &DisplayGraph, limit: usize) -> Result<PartOutcome, LegalError> {
    let candidates = g.candidate_fill_edges();
    if candidates.len() > limit {
        return Err(LegalError::TooLarge {
            candidates: candidates.len(),
            limit,
        });
    }
    if candidates.len() <= EXHAUSTIVE_MAX {
        Ok(enumerate_subsets(g, &candidates))
    } else {
        if g.vertex_count() > MAX_ELIMINATION_VERTICES {
            return Err(LegalError::TooManyVertices {
                vertices: g.vertex_count(),
                max: MAX_ELIMINATION_VERTICES,
            });
        }
        Ok(Elimination::new(g, &candidates).lexicographic_minimum())
    }
}

/// Candidate index masks of the four cross pairs between two internal edges
/// of different trees.
fn full_quads(g: &DisplayGraph, candidates: &[Edge]) -> Vec<u32> {
    let index = |u: usize, v: usize| candidates.iter().position(|&c| c == edge(u, v));
    let internal = g.internal_edges();
    let mut out = Vec::new();
    for (i, &(a, b)) in internal.iter().enumerate() {
        for &(c, d) in &internal[i + 1..] {
            if g.member_of(a) == g.member_of(c) {
                continue;
            }
            let pairs = [index(a, c), index(a, d), index(b, c), index(b, d)];
            if pairs.iter().all(Option::is_some) {
                out.push(pairs.iter().map(|p| 1u32 << p.unwrap()).fold(0, |m, b| m | b));
            }
        }
    }
    out
}

fn enumerate_subsets(g: &DisplayGraph, candidates: &[Edge]) -> PartOutcome {
    let quads = full_quads(g, candidates);
    let mut examined = 0u64;
    for size in 0..=candidates.len() {
        for chosen in (0..candidates.len()).combinations(size) {
            examined += 1;
            let mask = chosen.iter().fold(0u32, |m, &i| m | 1 << i);
            if quads.iter().any(|&q| q & !mask == 0) {
                continue;
            }
            let mut h: Graph = g.graph().clone();
            for &i in &chosen {
                let (u, v) = candidates[i];
                h.add_edge(u, v).expect("candidate endpoints are valid");
            }
            if is_chordal(&h) {
                return PartOutcome {
                    fill: Some(chosen.iter().map(|&i| candidates[i]).collect()),
                    candidates: candidates.len(),
                    examined,
                    subsets: Some(1 << candidates.len()),
                    method: SearchMethod::Exhaustive,
                };
            }
        }
    }
    PartOutcome {
        fill: None,
        candidates: candidates.len(),
        examined,
        subsets: Some(1 << candidates.len()),
        method: SearchMethod::Exhaustive,
    }
}

const UNREACHABLE: u32 = u32::MAX;

/// Minimum-fill dynamic program over elimination orderings. A state is the
/// set of eliminated vertices; the elimination graph depends on nothing else.
struct Elimination<'a> {
    candidates: &'a [Edge],
    n: usize,
    adj: Vec<u64>,
    internal_adj: Vec<u64>,
    leaves: u64,
    member: Vec<Option<usize>>,
    visited: u64,
}

/// Extra constraints on the fill: `required` pairs must be added and
/// `forbidden` pairs must not be.
#[derive(Default, Clone)]
struct Constraints {
    required: BTreeSet<Edge>,
    forbidden: BTreeSet<Edge>,
}

impl<'a> Elimination<'a> {
    fn new(g: &DisplayGraph, candidates: &'a [Edge]) -> Elimination<'a> {
        let n = g.vertex_count();
        let mut adj = vec![0u64; n];
        let mut internal_adj = vec![0u64; n];
        for (u, v) in g.edges() {
            adj[u] |= 1 << v;
            adj[v] |= 1 << u;
            if g.is_internal_edge(u, v) {
                internal_adj[u] |= 1 << v;
                internal_adj[v] |= 1 << u;
            }
        }
        let leaves = g.leaves().fold(0u64, |m, v| m | 1 << v);
        Elimination {
            candidates,
            n,
            adj,
            internal_adj,
            leaves,
            member: (0..n).map(|v| g.member_of(v)).collect(),
            visited: 0,
        }
    }

    /// Neighbors of `v` in the elimination graph after eliminating `gone`.
    fn reach(&self, gone: u64, v: usize) -> u64 {
        let mut seen = 1u64 << v;
        let mut frontier = seen;
        let mut out = 0u64;
        while frontier != 0 {
            let mut next = 0u64;
            let mut f = frontier;
            while f != 0 {
                let w = f.trailing_zeros() as usize;
                f &= f - 1;
                next |= self.adj[w];
            }
            next &= !seen;
            seen |= next;
            out |= next & !gone;
            frontier = next & gone;
        }
        out
    }

    /// Fill added by eliminating `v`, or `None` when the step breaks a rule.
    fn step(&self, gone: u64, v: usize, rules: &Constraints) -> Option<Vec<Edge>> {
        let nbrs = self.reach(gone, v);
        let clique = nbrs | 1 << v;
        let mut graph_edges = 0u32;
        let mut has_internal = false;
        let mut c = clique;
        while c != 0 {
            let w = c.trailing_zeros() as usize;
            c &= c - 1;
            graph_edges += (self.adj[w] & clique).count_ones();
            has_internal |= self.internal_adj[w] & clique != 0;
        }
        if has_internal && graph_edges / 2 >= 2 {
            return None;
        }
        for &(a, b) in &rules.required {
            let other = if a == v {
                b
            } else if b == v {
                a
            } else {
                continue;
            };
            if gone & 1 << other == 0 && nbrs & 1 << other == 0 {
                return None;
            }
        }
        let mut fill = Vec::new();
        let mut rest = nbrs;
        while rest != 0 {
            let w = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            let missing = rest & !self.reach(gone, w);
            let mut m = missing;
            while m != 0 {
                let x = m.trailing_zeros() as usize;
                m &= m - 1;
                let pair = edge(w, x);
                let bad_end = (self.leaves >> w) & 1 == 1 || (self.leaves >> x) & 1 == 1;
                if bad_end || self.member[w] == self.member[x] || rules.forbidden.contains(&pair) {
                    return None;
                }
                fill.push(pair);
            }
        }
        Some(fill)
    }

    fn best(&mut self, gone: u64, rules: &Constraints, memo: &mut HashMap<u64, u32>) -> u32 {
        let full = if self.n == 64 { u64::MAX } else { (1u64 << self.n) - 1 };
        if gone == full {
            return 0;
        }
        if let Some(&cost) = memo.get(&gone) {
            return cost;
        }
        self.visited += 1;
        let mut best = UNREACHABLE;
        for v in 0..self.n {
            if gone & 1 << v != 0 {
                continue;
            }
            let Some(fill) = self.step(gone, v, rules) else {
                continue;
            };
            let rest = self.best(gone | 1 << v, rules, memo);
            if rest != UNREACHABLE {
                best = best.min(rest + fill.len() as u32);
            }
        }
        memo.insert(gone, best);
        best
    }

    /// Minimum fill under `rules` together with one fill achieving it.
    fn solve(&mut self, rules: &Constraints) -> Option<(u32, BTreeSet<Edge>)> {
        let mut memo = HashMap::new();
        let total = self.best(0, rules, &mut memo);
        if total == UNREACHABLE {
            return None;
        }
        let mut gone = 0u64;
        let mut fill = BTreeSet::new();
        let mut remaining = total;
        for _ in 0..self.n {
            let next = (0..self.n)
                .filter(|&v| gone & 1 << v == 0)
                .find_map(|v| {
                    let step = self.step(gone, v, rules)?;
                    let rest = self.best(gone | 1 << v, rules, &mut memo);
                    (rest != UNREACHABLE && rest + step.len() as u32 == remaining).then_some((v, step))
                })
                .expect("an optimal step exists");
            remaining -= next.1.len() as u32;
            fill.extend(next.1);
            gone |= 1 << next.0;
        }
        Some((total, fill))
    }

    /// The lexicographically first minimum legal fill: candidates are
    /// admitted greedily in order while a minimum fill still contains all
    /// admitted ones.
    fn lexicographic_minimum(mut self) -> PartOutcome {
        let mut rules = Constraints::default();
        let fill = self.solve(&rules).map(|(target, mut witness)| {
            for &e in self.candidates {
                if rules.required.len() == target as usize {
                    break;
                }
                if witness.contains(&e) {
                    rules.required.insert(e);
                    continue;
                }
                let mut trial = rules.clone();
                trial.required.insert(e);
                match self.solve(&trial) {
                    Some((cost, found)) if cost == target => {
                        rules = trial;
                        witness = found;
                    }
                    _ => {
                        rules.forbidden.insert(e);
                    }
                }
            }
            rules.required.iter().copied().collect()
        });
        PartOutcome {
            fill,
            candidates: self.candidates.len(),
            examined: self.visited,
            subsets: None,
            method: SearchMethod::Elimination,
        }
    }
}

/// Runs the elimination route regardless of instance size. Exposed for
/// cross-checking the two routes.
#[doc(hidden)]
pub fn elimination_fill(g: &DisplayGraph) -> Option<Vec<Edge>> {
    let candidates = g.candidate_fill_edges();
    Elimination::new(g, &candidates).lexicographic_minimum().fill
}

/// Runs subset enumeration regardless of instance size.
#[doc(hidden)]
pub fn enumerated_fill(g: &DisplayGraph) -> Option<Vec<Edge>> {
    let candidates = g.candidate_fill_edges();
    assert!(
        candidates.len() < 32,
        "subset enumeration needs fewer than 32 candidates"
    );
    enumerate_subsets(g, &candidates).fill
}
