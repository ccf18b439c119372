//! Legal and concise triangulations of display graphs.
//!
//! A triangulation of a display graph is legal when
//!
//! - a clique holding an internal edge holds no other edge of the display
//!   graph, and
//! - every fill edge joins two internal vertices of different trees.
//!
//! It is concise when every internal edge and every leaf lies in exactly one
//! maximal clique.

mod concise;
mod forward;
mod search;

use std::collections::BTreeSet;

use thiserror::Error;

use crate::chordal::{is_chordal, maximal_cliques, ChordalError, Edge, TreeDecomposition, Triangulation};
use crate::display::DisplayGraph;
use crate::tree::TreeError;

pub use concise::make_concise;
pub use forward::{bag_property_violations, decomposition_from_supertree, forward_decomposition};
pub use search::{
    elimination_fill, enumerated_fill, search_legal_triangulation, SearchMethod, SearchOutcome,
    DEFAULT_CANDIDATE_LIMIT, MAX_ELIMINATION_VERTICES,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LegalError {
    #[error("triangulation is not chordal")]
    NotChordal,
    #[error("triangulation base graph differs from the display graph")]
    BaseMismatch,
    #[error("triangulation is not legal")]
    NotLegal,
    #[error("triangulation is not concise")]
    NotConcise,
    #[error(transparent)]
    Chordal(#[from] ChordalError),
    #[error(transparent)]
    Tree(#[from] TreeError),
    #[error("expected {expected} embedding functions, got {got}")]
    EmbeddingCount { expected: usize, got: usize },
    #[error("embedding {member} does not map the supertree onto member tree {member}")]
    EmbeddingMismatch { member: usize },
    #[error("embedding {member} is invalid: {detail}")]
    InvalidEmbedding { member: usize, detail: String },
    #[error("supertree does not display member tree {member}")]
    NotDisplayed { member: usize },
    #[error("instance too large: {candidates} candidate fill edges exceed the limit of {limit}")]
    TooLarge { candidates: usize, limit: usize },
    #[error("instance too large: {vertices} vertices exceed the search maximum of {max}")]
    TooManyVertices { vertices: usize, max: usize },
    #[error("internal error: {0}")]
    Internal(String),
}

/// A maximal clique holding an internal edge together with a second display
/// graph edge.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CliqueViolation {
    pub clique: BTreeSet<usize>,
    pub internal_edge: Edge,
    pub other_edge: Edge,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LegalityReport {
    pub legal: bool,
    pub lt1_violations: Vec<CliqueViolation>,
    /// Fill edges touching a leaf or joining two vertices of one tree.
    pub lt2_violations: Vec<Edge>,
}

fn ensure_base(g: &DisplayGraph, t: &Triangulation) -> Result<(), LegalError> {
    if t.base() != g.graph() {
        return Err(LegalError::BaseMismatch);
    }
    Ok(())
}

/// Display graph edges with both endpoints in `clique`.
fn graph_edges_within(g: &DisplayGraph, clique: &BTreeSet<usize>) -> Vec<Edge> {
    let mut out = Vec::new();
    for &u in clique {
        for &v in clique.range(u + 1..) {
            if g.graph().has_edge(u, v) {
                out.push((u, v));
            }
        }
    }
    out
}

pub fn check_legal(g: &DisplayGraph, t: &Triangulation) -> Result<LegalityReport, LegalError> {
    ensure_base(g, t)?;
    let completed = t.completed();
    if !is_chordal(&completed) {
        return Err(LegalError::NotChordal);
    }
    let mut report = LegalityReport::default();
    for clique in maximal_cliques(&completed)? {
        let inside = graph_edges_within(g, &clique);
        if inside.len() < 2 {
            continue;
        }
        if let Some(&internal) = inside.iter().find(|&&(u, v)| g.is_internal_edge(u, v)) {
            let other = *inside.iter().find(|&&e| e != internal).expect("two edges");
            report.lt1_violations.push(CliqueViolation {
                clique,
                internal_edge: internal,
                other_edge: other,
            });
        }
    }
    for &(u, v) in t.fill() {
        let same_tree = g.member_of(u).is_some() && g.member_of(u) == g.member_of(v);
        if g.is_leaf(u) || g.is_leaf(v) || same_tree {
            report.lt2_violations.push((u, v));
        }
    }
    report.legal = report.lt1_violations.is_empty() && report.lt2_violations.is_empty();
    Ok(report)
}

pub fn is_legal(g: &DisplayGraph, t: &Triangulation) -> bool {
    check_legal(g, t).is_ok_and(|r| r.legal)
}

/// Whether every internal edge and every leaf lies in exactly one maximal
/// clique. Errors unless `t` is legal.
pub fn check_concise(g: &DisplayGraph, t: &Triangulation) -> Result<bool, LegalError> {
    if !check_legal(g, t)?.legal {
        return Err(LegalError::NotLegal);
    }
    let cliques = maximal_cliques(&t.completed())?;
    let count = |pred: &dyn Fn(&BTreeSet<usize>) -> bool| cliques.iter().filter(|c| pred(c)).count();
    for (u, v) in g.internal_edges() {
        if count(&|c| c.contains(&u) && c.contains(&v)) != 1 {
            return Ok(false);
        }
    }
    for leaf in g.leaves() {
        if count(&|c| c.contains(&leaf)) != 1 {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Decomposition nodes whose bag contains `v`.
pub fn bags_containing(d: &TreeDecomposition, v: usize) -> BTreeSet<usize> {
    d.nodes_containing(v)
}

/// Decomposition nodes whose bag contains both `u` and `v`.
pub fn bags_containing_edge(d: &TreeDecomposition, u: usize, v: usize) -> BTreeSet<usize> {
    let nu = d.nodes_containing(u);
    d.nodes_containing(v).intersection(&nu).copied().collect()
}

fn union_of_bags(d: &TreeDecomposition, nodes: &BTreeSet<usize>) -> BTreeSet<usize> {
    nodes.iter().flat_map(|&x| d.bag(x).iter().copied()).collect()
}

/// Checks, for every leaf `v`, that the bags containing `v` hold at most one
/// internal vertex per member tree, each adjacent to `v`.
pub fn leaf_neighborhoods_hold(g: &DisplayGraph, d: &TreeDecomposition) -> bool {
    g.leaves().all(|v| {
        let union = union_of_bags(d, &bags_containing(d, v));
        let internal: Vec<usize> = union.iter().copied().filter(|&u| !g.is_leaf(u)).collect();
        let members: BTreeSet<usize> = internal.iter().filter_map(|&u| g.member_of(u)).collect();
        members.len() == internal.len() && internal.iter().all(|&u| g.graph().has_edge(u, v))
    })
}

/// Checks, for every internal edge `{u, v}` of member `i`, that the bags
/// containing both endpoints hold no other vertex of member `i` and at most
/// one vertex of every other member.
pub fn edge_neighborhoods_hold(g: &DisplayGraph, d: &TreeDecomposition) -> bool {
    g.internal_edges().into_iter().all(|(u, v)| {
        let own = g.member_of(u).expect("internal vertex");
        let union = union_of_bags(d, &bags_containing_edge(d, u, v));
        (0..g.member_count()).all(|m| {
            let hits: BTreeSet<usize> = union
                .iter()
                .copied()
                .filter(|&w| g.tree_vertex(m, w).is_some())
                .collect();
            if m == own {
                hits == BTreeSet::from([u, v])
            } else {
                hits.len() <= 1
            }
        })
    })
}
