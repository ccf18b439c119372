use std::collections::{BTreeMap, BTreeSet};

use super::{check_concise, check_legal, LegalError};
use crate::chordal::{compact_decomposition, triangulation_from_decomposition, TreeDecomposition};
use crate::display::DisplayGraph;

/// Decomposition with stable node ids, for contraction.
struct Contractible {
    bags: BTreeMap<usize, BTreeSet<usize>>,
    adj: BTreeMap<usize, BTreeSet<usize>>,
    next_id: usize,
}

impl Contractible {
    fn new(d: &TreeDecomposition) -> Contractible {
        let bags: BTreeMap<usize, BTreeSet<usize>> = d.bags().iter().cloned().enumerate().collect();
        let mut adj: BTreeMap<usize, BTreeSet<usize>> = bags.keys().map(|&x| (x, BTreeSet::new())).collect();
        for &(x, y) in d.edges() {
            adj.get_mut(&x).unwrap().insert(y);
            adj.get_mut(&y).unwrap().insert(x);
        }
        Contractible {
            bags,
            adj,
            next_id: d.node_count(),
        }
    }

    /// First tree edge with both ends among the nodes whose bags contain all
    /// of `vertices`.
    fn edge_within(&self, vertices: &[usize]) -> Option<(usize, usize)> {
        let nodes: BTreeSet<usize> = self
            .bags
            .iter()
            .filter(|(_, b)| vertices.iter().all(|v| b.contains(v)))
            .map(|(&x, _)| x)
            .collect();
        nodes
            .iter()
            .find_map(|&x| self.adj[&x].iter().find(|y| nodes.contains(y)).map(|&y| (x, y)))
    }

    /// Replaces `x` and `y` by a fresh node whose bag is the union.
    fn contract(&mut self, x: usize, y: usize) {
        let z = self.next_id;
        self.next_id += 1;
        let mut bag = self.bags.remove(&x).unwrap();
        bag.extend(self.bags.remove(&y).unwrap());
        let mut neighbors = self.adj.remove(&x).unwrap();
        neighbors.extend(self.adj.remove(&y).unwrap());
        neighbors.remove(&x);
        neighbors.remove(&y);
        for &w in &neighbors {
            let set = self.adj.get_mut(&w).unwrap();
            set.remove(&x);
            set.remove(&y);
            set.insert(z);
        }
        self.bags.insert(z, bag);
        self.adj.insert(z, neighbors);
    }

    fn contract_all_within(&mut self, vertices: &[usize]) {
        while let Some((x, y)) = self.edge_within(vertices) {
            self.contract(x, y);
        }
    }
}

/// Turns a tree decomposition whose associated triangulation is legal into
/// one whose associated triangulation is legal and concise.
///
/// First every leaf's nodes are merged into one, then for every display graph
/// edge the nodes holding both endpoints are merged into one. Merged nodes
/// get the union of their bags.
pub fn make_concise(g: &DisplayGraph, d: &TreeDecomposition) -> Result<TreeDecomposition, LegalError> {
    let before = triangulation_from_decomposition(g.graph(), d)?;
    if !check_legal(g, &before)?.legal {
        return Err(LegalError::NotLegal);
    }
    let mut work = Contractible::new(d);
    for leaf in g.leaves() {
        work.contract_all_within(&[leaf]);
    }
    for (u, v) in g.edges() {
        work.contract_all_within(&[u, v]);
    }
    let out = compact_decomposition(&work.bags, &work.adj);
    let after = triangulation_from_decomposition(g.graph(), &out)?;
    match check_concise(g, &after) {
        Ok(true) => Ok(out),
        Ok(false) => Err(LegalError::Internal(
            "contraction left a non-concise triangulation".into(),
        )),
        Err(e) => Err(LegalError::Internal(format!("contraction broke legality: {e}"))),
    }
}
