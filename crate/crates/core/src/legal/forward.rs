use std::collections::BTreeSet;

use super::LegalError;
use crate::chordal::TreeDecomposition;
use crate::display::DisplayGraph;
use crate::embedding::{compute_embedding, embedding_violations, EmbeddingFunction};
use crate::tree::PhyloTree;

/// Tree decomposition of the display graph built over a supertree.
///
/// `phis[m]` maps `supertree` onto member tree `m`. Node `x` of the supertree
/// starts with the bag of all its images. Each supertree edge `{x, y}` crossed
/// by display graph edges `{u1,v1},…,{um,vm}` (`uj` in the bag of `x`, `vj` in
/// the bag of `y`, in member order) becomes a path `x, z1, …, zm, y` with
///
/// `B(zi) = (B(x) ∩ B(y)) ∪ {v1, …, vi} ∪ {ui, …, um}`.
///
/// Node `i` of the result is supertree vertex `i`; subdivision nodes follow
/// in edge order.
pub fn decomposition_from_supertree(
    g: &DisplayGraph,
    supertree: &PhyloTree,
    phis: &[EmbeddingFunction],
) -> Result<TreeDecomposition, LegalError> {
    if phis.len() != g.member_count() {
        return Err(LegalError::EmbeddingCount {
            expected: g.member_count(),
            got: phis.len(),
        });
    }
    let mut tight = Vec::with_capacity(phis.len());
    for (m, phi) in phis.iter().enumerate() {
        if phi.source() != supertree || phi.target() != g.member_tree(m) {
            return Err(LegalError::EmbeddingMismatch { member: m });
        }
        let violations = embedding_violations(phi);
        if !violations.is_empty() {
            return Err(LegalError::InvalidEmbedding {
                member: m,
                detail: format!("{violations:?}"),
            });
        }
        tight.push(phi.with_tight_leaf_classes());
    }

    let n = supertree.vertex_count();
    let mut bags: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); n];
    for (m, phi) in tight.iter().enumerate() {
        for (&x, &t) in phi.map() {
            bags[x].insert(g.graph_vertex(m, t));
        }
    }
    let mut edges = Vec::new();
    for (x, y) in supertree.edges() {
        let crossing: Vec<(usize, usize)> = tight
            .iter()
            .enumerate()
            .filter_map(|(m, phi)| match (phi.image(x), phi.image(y)) {
                (Some(a), Some(b)) if a != b => Some((g.graph_vertex(m, a), g.graph_vertex(m, b))),
                _ => None,
            })
            .collect();
        let shared: BTreeSet<usize> = bags[x].intersection(&bags[y]).copied().collect();
        let mut previous = x;
        for i in 0..crossing.len() {
            let mut bag = shared.clone();
            bag.extend(crossing[..=i].iter().map(|&(_, v)| v));
            bag.extend(crossing[i..].iter().map(|&(u, _)| u));
            let z = bags.len();
            bags.push(bag);
            edges.push((previous, z));
            previous = z;
        }
        edges.push((previous, y));
    }
    Ok(TreeDecomposition::new(bags, edges))
}

/// [`decomposition_from_supertree`] with embeddings computed from the
/// supertree.
pub fn forward_decomposition(g: &DisplayGraph, supertree: &PhyloTree) -> Result<TreeDecomposition, LegalError> {
    let mut phis = Vec::with_capacity(g.member_count());
    for (m, tree) in g.member_trees().iter().enumerate() {
        match compute_embedding(supertree, tree)? {
            Some(phi) => phis.push(phi),
            None => return Err(LegalError::NotDisplayed { member: m }),
        }
    }
    decomposition_from_supertree(g, supertree, &phis)
}

/// Nodes breaking either bag property of the supertree construction:
///
/// - a bag holding both ends of an internal edge holds no other display graph
///   edge;
/// - a bag holding a leaf `v` holds only `v` and neighbors of `v`.
pub fn bag_property_violations(g: &DisplayGraph, d: &TreeDecomposition) -> Vec<usize> {
    let mut out = Vec::new();
    for (x, bag) in d.bags().iter().enumerate() {
        let inside: Vec<(usize, usize)> = bag
            .iter()
            .flat_map(|&u| bag.range(u + 1..).map(move |&v| (u, v)))
            .filter(|&(u, v)| g.graph().has_edge(u, v))
            .collect();
        let edge_rule = !inside.iter().any(|&(u, v)| g.is_internal_edge(u, v)) || inside.len() == 1;
        let leaf_rule = bag
            .iter()
            .filter(|&&v| g.is_leaf(v))
            .all(|&v| bag.iter().all(|&u| u == v || g.graph().has_edge(u, v)));
        if !edge_rule || !leaf_rule {
            out.push(x);
        }
    }
    out
}
