//! Chordal graphs, tree decompositions and clique trees.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

/// Unordered vertex pair, stored with the smaller endpoint first.
pub type Edge = (usize, usize);

pub fn edge(u: usize, v: usize) -> Edge {
    (u.min(v), u.max(v))
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ChordalError {
    #[error("vertex {0} is out of range")]
    VertexOutOfRange(usize),
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("graph is not chordal")]
    NotChordal,
    #[error("graph is not connected")]
    Disconnected,
    #[error("graph has no vertices")]
    EmptyGraph,
    #[error("fill edge {0:?} is already an edge of the base graph")]
    FillOverlapsBase(Edge),
    #[error("invalid tree decomposition: {0}")]
    InvalidDecomposition(DecompositionReport),
}

/// Simple undirected graph on vertices `0..n`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Graph {
    adj: Vec<BTreeSet<usize>>,
}

impl Graph {
    pub fn new(vertex_count: usize) -> Graph {
        Graph {
            adj: vec![BTreeSet::new(); vertex_count],
        }
    }

    pub fn from_edges(vertex_count: usize, edges: impl IntoIterator<Item = Edge>) -> Result<Graph, ChordalError> {
        let mut g = Graph::new(vertex_count);
        for (u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    /// Adds `{u, v}`; adding an existing edge is a no-op.
    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<(), ChordalError> {
        for w in [u, v] {
            if w >= self.adj.len() {
                return Err(ChordalError::VertexOutOfRange(w));
            }
        }
        if u == v {
            return Err(ChordalError::SelfLoop(u));
        }
        self.adj[u].insert(v);
        self.adj[v].insert(u);
        Ok(())
    }

    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(BTreeSet::len).sum::<usize>() / 2
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj.get(u).is_some_and(|n| n.contains(&v))
    }

    pub fn neighbors(&self, v: usize) -> &BTreeSet<usize> {
        &self.adj[v]
    }

    /// Sorted edge list.
    pub fn edges(&self) -> Vec<Edge> {
        let mut out = Vec::new();
        for (u, n) in self.adj.iter().enumerate() {
            out.extend(n.range(u + 1..).map(|&v| (u, v)));
        }
        out
    }

    pub fn is_clique(&self, vertices: &BTreeSet<usize>) -> bool {
        vertices
            .iter()
            .all(|&u| vertices.range(u + 1..).all(|&v| self.has_edge(u, v)))
    }

    pub fn is_connected(&self) -> bool {
        connected_components(self).len() <= 1
    }
}

pub fn connected_components(g: &Graph) -> Vec<Vec<usize>> {
    let mut seen = vec![false; g.vertex_count()];
    let mut out = Vec::new();
    for s in 0..g.vertex_count() {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let mut comp = vec![s];
        let mut stack = vec![s];
        while let Some(v) = stack.pop() {
            for &w in g.neighbors(v) {
                if !seen[w] {
                    seen[w] = true;
                    comp.push(w);
                    stack.push(w);
                }
            }
        }
        comp.sort_unstable();
        out.push(comp);
    }
    out
}

/// Maximum cardinality search: repeatedly visits the unvisited vertex with
/// the most visited neighbors (smallest index on ties). Returns visit order.
pub fn maximum_cardinality_search(g: &Graph) -> Vec<usize> {
    let n = g.vertex_count();
    let mut weight = vec![0usize; n];
    let mut visited = vec![false; n];
    let mut order = Vec::with_capacity(n);
    for _ in 0..n {
        let v = (0..n)
            .filter(|&v| !visited[v])
            .max_by_key(|&v| (weight[v], std::cmp::Reverse(v)))
            .expect("unvisited vertex remains");
        visited[v] = true;
        order.push(v);
        for &w in g.neighbors(v) {
            if !visited[w] {
                weight[w] += 1;
            }
        }
    }
    order
}

/// A perfect elimination order of `g`, if one exists. Taken as the reverse of
/// a maximum cardinality search and verified.
pub fn perfect_elimination_order(g: &Graph) -> Option<Vec<usize>> {
    let mut order = maximum_cardinality_search(g);
    order.reverse();
    let mut position = vec![0; g.vertex_count()];
    for (i, &v) in order.iter().enumerate() {
        position[v] = i;
    }
    for &v in &order {
        let later: Vec<usize> = g
            .neighbors(v)
            .iter()
            .copied()
            .filter(|&w| position[w] > position[v])
            .collect();
        let Some(&parent) = later.iter().min_by_key(|&&w| position[w]) else {
            continue;
        };
        if later.iter().any(|&w| w != parent && !g.has_edge(parent, w)) {
            return None;
        }
    }
    Some(order)
}

pub fn is_chordal(g: &Graph) -> bool {
    perfect_elimination_order(g).is_some()
}

/// Maximal cliques of a chordal graph, sorted.
pub fn maximal_cliques(g: &Graph) -> Result<Vec<BTreeSet<usize>>, ChordalError> {
    let order = perfect_elimination_order(g).ok_or(ChordalError::NotChordal)?;
    let mut position = vec![0; g.vertex_count()];
    for (i, &v) in order.iter().enumerate() {
        position[v] = i;
    }
    let candidates: Vec<BTreeSet<usize>> = order
        .iter()
        .map(|&v| {
            let mut c: BTreeSet<usize> = g
                .neighbors(v)
                .iter()
                .copied()
                .filter(|&w| position[w] > position[v])
                .collect();
            c.insert(v);
            c
        })
        .collect();
    let mut cliques: Vec<BTreeSet<usize>> = candidates
        .iter()
        .filter(|c| !candidates.iter().any(|d| d.len() > c.len() && c.is_subset(d)))
        .cloned()
        .collect();
    cliques.sort();
    cliques.dedup();
    Ok(cliques)
}

/// A tree of bags. Nodes are `0..node_count()`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TreeDecomposition {
    bags: Vec<BTreeSet<usize>>,
    edges: Vec<Edge>,
}

impl TreeDecomposition {
    pub fn new(bags: Vec<BTreeSet<usize>>, edges: Vec<Edge>) -> TreeDecomposition {
        let mut edges: Vec<Edge> = edges.into_iter().map(|(a, b)| edge(a, b)).collect();
        edges.sort_unstable();
        TreeDecomposition { bags, edges }
    }

    pub fn node_count(&self) -> usize {
        self.bags.len()
    }

    pub fn bags(&self) -> &[BTreeSet<usize>] {
        &self.bags
    }

    pub fn bag(&self, node: usize) -> &BTreeSet<usize> {
        &self.bags[node]
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn node_neighbors(&self, node: usize) -> Vec<usize> {
        self.edges
            .iter()
            .filter_map(|&(a, b)| {
                if a == node {
                    Some(b)
                } else if b == node {
                    Some(a)
                } else {
                    None
                }
            })
            .collect()
    }

    /// Nodes whose bag contains `v`.
    pub fn nodes_containing(&self, v: usize) -> BTreeSet<usize> {
        (0..self.bags.len()).filter(|&x| self.bags[x].contains(&v)).collect()
    }

    fn nodes_connected(&self, nodes: &BTreeSet<usize>) -> bool {
        let Some(&start) = nodes.first() else {
            return true;
        };
        let mut seen = BTreeSet::from([start]);
        let mut stack = vec![start];
        while let Some(x) = stack.pop() {
            for y in self.node_neighbors(x) {
                if nodes.contains(&y) && seen.insert(y) {
                    stack.push(y);
                }
            }
        }
        seen.len() == nodes.len()
    }
}

/// A tree decomposition whose bags are exactly the maximal cliques of a
/// chordal graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CliqueTree(TreeDecomposition);

impl CliqueTree {
    pub fn decomposition(&self) -> &TreeDecomposition {
        &self.0
    }

    pub fn into_decomposition(self) -> TreeDecomposition {
        self.0
    }
}

impl std::ops::Deref for CliqueTree {
    type Target = TreeDecomposition;

    fn deref(&self) -> &TreeDecomposition {
        &self.0
    }
}

/// Clique tree of a connected chordal graph: a maximum-weight spanning tree
/// of the clique intersection graph (Kruskal; ties go to the pair of
/// smallest clique indices).
pub fn build_clique_tree(g: &Graph) -> Result<CliqueTree, ChordalError> {
    if g.vertex_count() == 0 {
        return Err(ChordalError::EmptyGraph);
    }
    if !g.is_connected() {
        return Err(ChordalError::Disconnected);
    }
    let cliques = maximal_cliques(g)?;
    let mut pairs = Vec::new();
    for i in 0..cliques.len() {
        for j in i + 1..cliques.len() {
            let w = cliques[i].intersection(&cliques[j]).count();
            if w > 0 {
                pairs.push((std::cmp::Reverse(w), i, j));
            }
        }
    }
    pairs.sort();
    let mut parent: Vec<usize> = (0..cliques.len()).collect();
    fn find(parent: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while parent[r] != r {
            r = parent[r];
        }
        let mut x = x;
        while parent[x] != r {
            let next = parent[x];
            parent[x] = r;
            x = next;
        }
        r
    }
    let mut edges = Vec::new();
    for (_, i, j) in pairs {
        let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
        if ri != rj {
            parent[ri] = rj;
            edges.push((i, j));
        }
    }
    Ok(CliqueTree(TreeDecomposition::new(cliques, edges)))
}

/// Violations of the three tree-decomposition properties, plus structural
/// problems with the tree itself. Empty means valid.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DecompositionReport {
    /// The node graph is not a tree, or names unknown nodes/vertices.
    pub structure: Vec<String>,
    /// Vertices in no bag (vertex coverage).
    pub uncovered_vertices: Vec<usize>,
    /// Edges contained in no bag (edge coverage).
    pub uncovered_edges: Vec<Edge>,
    /// Vertices whose bags do not form a subtree (coherence).
    pub incoherent_vertices: Vec<usize>,
}

impl DecompositionReport {
    pub fn is_valid(&self) -> bool {
        self.structure.is_empty()
            && self.uncovered_vertices.is_empty()
            && self.uncovered_edges.is_empty()
            && self.incoherent_vertices.is_empty()
    }
}

impl std::fmt::Display for DecompositionReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_valid() {
            return f.write_str("valid");
        }
        let mut parts = self.structure.clone();
        if !self.uncovered_vertices.is_empty() {
            parts.push(format!("uncovered vertices {:?}", self.uncovered_vertices));
        }
        if !self.uncovered_edges.is_empty() {
            parts.push(format!("uncovered edges {:?}", self.uncovered_edges));
        }
        if !self.incoherent_vertices.is_empty() {
            parts.push(format!("incoherent vertices {:?}", self.incoherent_vertices));
        }
        f.write_str(&parts.join("; "))
    }
}

pub fn validate_decomposition(g: &Graph, d: &TreeDecomposition) -> DecompositionReport {
    let mut report = DecompositionReport::default();
    let m = d.node_count();
    if m == 0 {
        report.structure.push("decomposition has no nodes".into());
    }
    for &(a, b) in d.edges() {
        if a >= m || b >= m || a == b {
            report.structure.push(format!("bad tree edge {a}-{b}"));
        }
    }
    if report.structure.is_empty() && m > 0 {
        let all: BTreeSet<usize> = (0..m).collect();
        if d.edges().len() + 1 != m || !d.nodes_connected(&all) {
            report.structure.push("decomposition nodes do not form a tree".into());
        }
    }
    for bag in d.bags() {
        if let Some(&v) = bag.iter().find(|&&v| v >= g.vertex_count()) {
            report.structure.push(format!("bag names unknown vertex {v}"));
        }
    }
    if !report.structure.is_empty() {
        return report;
    }
    for v in 0..g.vertex_count() {
        let nodes = d.nodes_containing(v);
        if nodes.is_empty() {
            report.uncovered_vertices.push(v);
        } else if !d.nodes_connected(&nodes) {
            report.incoherent_vertices.push(v);
        }
    }
    for (u, v) in g.edges() {
        if !d.bags().iter().any(|b| b.contains(&u) && b.contains(&v)) {
            report.uncovered_edges.push((u, v));
        }
    }
    report
}

pub fn width(d: &TreeDecomposition) -> usize {
    d.bags().iter().map(BTreeSet::len).max().unwrap_or(0).saturating_sub(1)
}

/// A base graph together with a fill-in edge set disjoint from it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Triangulation {
    base: Graph,
    fill: BTreeSet<Edge>,
}

impl Triangulation {
    pub fn new(base: Graph, fill: impl IntoIterator<Item = Edge>) -> Result<Triangulation, ChordalError> {
        let mut set = BTreeSet::new();
        for (u, v) in fill {
            for w in [u, v] {
                if w >= base.vertex_count() {
                    return Err(ChordalError::VertexOutOfRange(w));
                }
            }
            if u == v {
                return Err(ChordalError::SelfLoop(u));
            }
            if base.has_edge(u, v) {
                return Err(ChordalError::FillOverlapsBase(edge(u, v)));
            }
            set.insert(edge(u, v));
        }
        Ok(Triangulation { base, fill: set })
    }

    pub fn base(&self) -> &Graph {
        &self.base
    }

    pub fn fill(&self) -> &BTreeSet<Edge> {
        &self.fill
    }

    /// Base plus fill.
    pub fn completed(&self) -> Graph {
        let mut g = self.base.clone();
        for &(u, v) in &self.fill {
            g.add_edge(u, v).expect("fill endpoints checked on construction");
        }
        g
    }

    pub fn is_chordal(&self) -> bool {
        is_chordal(&self.completed())
    }
}

/// Fill-in associated with a tree decomposition: every non-edge of `g` whose
/// endpoints share a bag.
pub fn triangulation_from_decomposition(g: &Graph, d: &TreeDecomposition) -> Result<Triangulation, ChordalError> {
    let report = validate_decomposition(g, d);
    if !report.is_valid() {
        return Err(ChordalError::InvalidDecomposition(report));
    }
    let mut fill = BTreeSet::new();
    for bag in d.bags() {
        for &u in bag {
            for &v in bag.range(u + 1..) {
                if !g.has_edge(u, v) {
                    fill.insert((u, v));
                }
            }
        }
    }
    Triangulation::new(g.clone(), fill)
}

/// Renumbers a decomposition given as id-keyed maps into dense node indices
/// (ascending id order).
pub(crate) fn compact_decomposition(
    bags: &BTreeMap<usize, BTreeSet<usize>>,
    adj: &BTreeMap<usize, BTreeSet<usize>>,
) -> TreeDecomposition {
    let index: BTreeMap<usize, usize> = bags.keys().enumerate().map(|(i, &id)| (id, i)).collect();
    let mut edges = Vec::new();
    for (&x, ns) in adj {
        for &y in ns.range(x + 1..) {
            edges.push((index[&x], index[&y]));
        }
    }
    TreeDecomposition::new(bags.values().cloned().collect(), edges)
}
