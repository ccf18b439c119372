//! Supertree extraction from the clique tree of a concise legal
//! triangulation.
//!
//! The clique tree itself is the skeleton. Per node `x`:
//!
//! - a bag holding a leaf `v` gets a new labeled neighbor `x_v`;
//! - a bag holding an internal edge `{u, v}` is split into `x_u – x_v`,
//!   neighbors whose bag holds `v` move to `x_v` and all others stay with
//!   `x_u`;
//! - any other bag maps to the single vertex each tree has in it.
//!
//! The raw tree is then cleaned of unlabeled leaves and degree-2 vertices.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::chordal::{triangulation_from_decomposition, ChordalError, CliqueTree};
use crate::display::DisplayGraph;
use crate::embedding::{embedding_violations, EmbeddingFunction};
use crate::legal::{check_concise, LegalError};
use crate::tree::{displays, Label, PhyloTree, TreeError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExtractError {
    #[error("clique tree does not come from a legal triangulation")]
    NotLegal,
    #[error("clique tree does not come from a concise triangulation")]
    NotConcise,
    #[error("bag of node {node} holds both a leaf and an internal edge")]
    MixedBag { node: usize },
    #[error("bag of node {node} holds two vertices of member tree {member}")]
    AmbiguousBag { node: usize, member: usize },
    #[error("node {node} gets two images in member tree {member}")]
    ConflictingImage { node: usize, member: usize },
    #[error("extracted embedding onto member tree {member} is invalid: {detail}")]
    InvalidEmbedding { member: usize, detail: String },
    #[error("extracted supertree does not display member tree {member}")]
    NotDisplayed { member: usize },
    #[error(transparent)]
    Legal(#[from] LegalError),
    #[error(transparent)]
    Chordal(#[from] ChordalError),
    #[error(transparent)]
    Tree(#[from] TreeError),
}

#[derive(Clone, Debug)]
pub struct ExtractionResult {
    /// Tree straight out of the case analysis, before cleanup.
    pub raw_tree: PhyloTree,
    pub raw_embeddings: Vec<EmbeddingFunction>,
    pub supertree: PhyloTree,
    /// One embedding per member tree, from `supertree`.
    pub embeddings: Vec<EmbeddingFunction>,
}

/// Raw tree under construction, with per-member partial maps.
struct Builder {
    adj: Vec<BTreeSet<usize>>,
    labels: Vec<Option<Label>>,
    /// Clique tree node each raw vertex descends from.
    origin: Vec<usize>,
    phis: Vec<BTreeMap<usize, usize>>,
}

impl Builder {
    fn add_vertex(&mut self, origin: usize, label: Option<Label>) -> usize {
        self.adj.push(BTreeSet::new());
        self.labels.push(label);
        self.origin.push(origin);
        self.adj.len() - 1
    }

    fn join(&mut self, a: usize, b: usize) {
        self.adj[a].insert(b);
        self.adj[b].insert(a);
    }

    fn assign(&mut self, node: usize, raw: usize, member: usize, image: usize) -> Result<(), ExtractError> {
        match self.phis[member].insert(raw, image) {
            Some(old) if old != image => Err(ExtractError::ConflictingImage { node, member }),
            _ => Ok(()),
        }
    }
}

pub fn extract_supertree(g: &DisplayGraph, ct: &CliqueTree) -> Result<ExtractionResult, ExtractError> {
    let t = triangulation_from_decomposition(g.graph(), ct)?;
    match check_concise(g, &t) {
        Ok(true) => {}
        Ok(false) => return Err(ExtractError::NotConcise),
        Err(LegalError::NotLegal) => return Err(ExtractError::NotLegal),
        Err(e) => return Err(e.into()),
    }

    let m = ct.node_count();
    let mut b = Builder {
        adj: vec![BTreeSet::new(); m],
        labels: vec![None; m],
        origin: (0..m).collect(),
        phis: vec![BTreeMap::new(); g.member_count()],
    };
    for &(x, y) in ct.edges() {
        b.join(x, y);
    }

    for x in 0..m {
        let bag = ct.bag(x);
        let leaves: Vec<usize> = bag.iter().copied().filter(|&v| g.is_leaf(v)).collect();
        let internal_edge = bag
            .iter()
            .flat_map(|&u| bag.range(u + 1..).map(move |&v| (u, v)))
            .find(|&(u, v)| g.is_internal_edge(u, v));
        match (leaves.is_empty(), internal_edge) {
            (false, Some(_)) => return Err(ExtractError::MixedBag { node: x }),
            (false, None) => {
                for &v in &leaves {
                    let label = g.leaf_label(v).expect("leaf").clone();
                    let xv = b.add_vertex(x, Some(label));
                    b.join(x, xv);
                    for member in g.members_containing(v) {
                        let tree = g.member_tree(member);
                        let leaf = g.tree_vertex(member, v).expect("member holds the leaf");
                        let neighbor = tree.neighbors(leaf)[0];
                        b.assign(x, xv, member, leaf)?;
                        b.assign(x, x, member, neighbor)?;
                    }
                }
            }
            (true, Some((u, v))) => {
                let member = g.member_of(u).expect("internal vertex");
                let xv = b.add_vertex(x, None);
                let movers: Vec<usize> = b.adj[x]
                    .iter()
                    .copied()
                    .filter(|&y| ct.bag(b.origin[y]).contains(&v))
                    .collect();
                for y in movers {
                    b.adj[x].remove(&y);
                    b.adj[y].remove(&x);
                    b.join(xv, y);
                }
                b.join(x, xv);
                let tu = g.tree_vertex(member, u).expect("own vertex");
                let tv = g.tree_vertex(member, v).expect("own vertex");
                b.assign(x, x, member, tu)?;
                b.assign(x, xv, member, tv)?;
                for other in (0..g.member_count()).filter(|&o| o != member) {
                    if let Some(w) = single_vertex(g, bag, x, other)? {
                        b.assign(x, x, other, w)?;
                        b.assign(x, xv, other, w)?;
                    }
                }
            }
            (true, None) => {
                for member in 0..g.member_count() {
                    if let Some(w) = single_vertex(g, bag, x, member)? {
                        b.assign(x, x, member, w)?;
                    }
                }
            }
        }
    }

    let edges: Vec<(usize, usize)> = b
        .adj
        .iter()
        .enumerate()
        .flat_map(|(a, ns)| ns.range(a + 1..).map(move |&c| (a, c)))
        .collect();
    let raw_tree = PhyloTree::new_unnormalized(b.adj.len(), &edges, b.labels.clone())?;
    let raw_embeddings = embeddings_onto_members(g, &raw_tree, &b.phis)?;

    let (supertree, survivors) = raw_tree.normalized()?;
    let moved: Vec<BTreeMap<usize, usize>> = b
        .phis
        .iter()
        .map(|phi| {
            phi.iter()
                .filter_map(|(&x, &t)| survivors[x].map(|nx| (nx, t)))
                .collect()
        })
        .collect();
    let embeddings = embeddings_onto_members(g, &supertree, &moved)?;
    for member in 0..g.member_count() {
        if !displays(&supertree, g.member_tree(member))? {
            return Err(ExtractError::NotDisplayed { member });
        }
    }
    Ok(ExtractionResult {
        raw_tree,
        raw_embeddings,
        supertree,
        embeddings,
    })
}

/// Deletes unlabeled leaves and suppresses unlabeled degree-2 vertices.
pub fn normalize_supertree(raw: &PhyloTree) -> Result<PhyloTree, TreeError> {
    Ok(raw.normalized()?.0)
}

/// The one vertex of `member` in `bag`, if any.
fn single_vertex(
    g: &DisplayGraph,
    bag: &BTreeSet<usize>,
    node: usize,
    member: usize,
) -> Result<Option<usize>, ExtractError> {
    let mut hits = bag.iter().filter_map(|&v| g.tree_vertex(member, v));
    let first = hits.next();
    if hits.next().is_some() {
        return Err(ExtractError::AmbiguousBag { node, member });
    }
    Ok(first)
}

fn embeddings_onto_members(
    g: &DisplayGraph,
    source: &PhyloTree,
    maps: &[BTreeMap<usize, usize>],
) -> Result<Vec<EmbeddingFunction>, ExtractError> {
    maps.iter()
        .enumerate()
        .map(|(member, map)| {
            let phi = EmbeddingFunction::new(source.clone(), g.member_tree(member).clone(), map.clone());
            let violations = embedding_violations(&phi);
            if violations.is_empty() {
                Ok(phi)
            } else {
                Err(ExtractError::InvalidEmbedding {
                    member,
                    detail: format!("{violations:?}"),
                })
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chordal::{build_clique_tree, Triangulation};
    use crate::legal::make_concise;
    use crate::newick::{parse_profile, parse_tree};
    use crate::tree::is_label_isomorphic;

    fn dg(text: &str) -> DisplayGraph {
        DisplayGraph::new(&parse_profile(text).unwrap())
    }

    fn clique_tree(g: &DisplayGraph, fill: &[(&str, &str)]) -> CliqueTree {
        let fill = fill.iter().map(|(a, b)| (g.resolve(a).unwrap(), g.resolve(b).unwrap()));
        let t = Triangulation::new(g.graph().clone(), fill).unwrap();
        build_clique_tree(&t.completed()).unwrap()
    }

    #[test]
    fn single_quartet_comes_back() {
        let g = dg("((a,b)u,(c,d)v);");
        let out = extract_supertree(&g, &clique_tree(&g, &[])).unwrap();
        assert!(is_label_isomorphic(
            &out.supertree,
            &parse_tree("((a,b),(c,d));").unwrap()
        ));
        assert_eq!(out.supertree.vertex_count(), 6);
        assert!(out.raw_tree.vertex_count() > 6);
        assert_eq!(out.embeddings.len(), 1);
    }

    #[test]
    fn same_quartets_give_the_quartet() {
        let g = dg("((a,b)u1,(c,d)v1);\n((a,b)u2,(c,d)v2);");
        let ct = clique_tree(&g, &[("u1", "u2"), ("v1", "v2"), ("u1", "v2")]);
        let out = extract_supertree(&g, &ct).unwrap();
        assert!(is_label_isomorphic(
            &out.supertree,
            &parse_tree("((a,b),(c,d));").unwrap()
        ));
        assert_eq!(out.raw_embeddings.len(), 2);
    }

    #[test]
    fn shared_stars_after_contraction() {
        let g = dg("(a,b,c)u1;\n(a,d,e)u2;");
        let ct = clique_tree(&g, &[]);
        assert_eq!(extract_supertree(&g, &ct).unwrap_err(), ExtractError::NotConcise);
        let concise = make_concise(&g, &ct).unwrap();
        let t = triangulation_from_decomposition(g.graph(), &concise).unwrap();
        let ct = build_clique_tree(&t.completed()).unwrap();
        let out = extract_supertree(&g, &ct).unwrap();
        assert_eq!(out.supertree.leaf_count(), 5);
        for tree in g.member_trees() {
            assert!(displays(&out.supertree, tree).unwrap());
        }
    }

    #[test]
    fn normalization_prunes_and_keeps() {
        // a - p - q - r(b, c), with an unlabeled dangling chain s - t off r
        let labels = |names: &[Option<&str>]| names.iter().map(|n| n.map(|s| Label::new(s).unwrap())).collect();
        let raw = PhyloTree::new_unnormalized(
            8,
            &[(0, 1), (1, 2), (2, 3), (3, 4), (3, 5), (3, 6), (6, 7)],
            labels(&[Some("a"), None, None, None, Some("b"), Some("c"), None, None]),
        )
        .unwrap();
        let clean = normalize_supertree(&raw).unwrap();
        assert!(is_label_isomorphic(&clean, &parse_tree("(a,b,c);").unwrap()));
        let quartet = parse_tree("((a,b),(c,d));").unwrap();
        assert_eq!(normalize_supertree(&quartet).unwrap(), quartet);
    }

    #[test]
    fn illegal_input_is_rejected() {
        let g = dg("((a,b)u1,(c,d)v1);\n((a,b)u2,(c,d)v2);");
        let ct = clique_tree(&g, &[("u1", "u2"), ("v1", "v2"), ("u1", "v2"), ("v1", "u2")]);
        assert_eq!(extract_supertree(&g, &ct).unwrap_err(), ExtractError::NotLegal);
    }
}
