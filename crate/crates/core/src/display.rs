//! The display graph of a profile: all input trees glued along shared leaf
//! labels.

use std::collections::{BTreeMap, BTreeSet};

use crate::chordal::{connected_components, edge, Edge, Graph};
use crate::tree::{Label, PhyloTree, Profile};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum VertexKind {
    Leaf(Label),
    /// Internal vertex `vertex` of member tree `member`.
    Internal {
        member: usize,
        vertex: usize,
    },
}

/// Which member tree an edge came from, and whether both of its endpoints
/// were internal there.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EdgeOrigin {
    pub member: usize,
    pub internal: bool,
}

/// Display graph over the member trees of a profile.
///
/// Vertex numbering: leaves first in label order, then the internal vertices
/// of each member tree in member order and tree-vertex order. Members are the
/// profile trees with at least three leaves; smaller trees are left out.
#[derive(Clone, Debug)]
pub struct DisplayGraph {
    graph: Graph,
    kinds: Vec<VertexKind>,
    trees: Vec<PhyloTree>,
    profile_index: Vec<usize>,
    vertex_of: Vec<Vec<usize>>,
    origins: BTreeMap<Edge, EdgeOrigin>,
    names: Vec<String>,
    aliases: BTreeMap<String, usize>,
}

/// A connected piece of a display graph together with the parent vertex of
/// each of its vertices.
#[derive(Clone, Debug)]
pub struct Component {
    pub graph: DisplayGraph,
    pub to_parent: Vec<usize>,
}

impl DisplayGraph {
    pub fn new(profile: &Profile) -> DisplayGraph {
        let members = profile
            .informative()
            .into_iter()
            .map(|i| (i, profile.trees()[i].clone()))
            .collect();
        DisplayGraph::from_members(members)
    }

    /// Builds the display graph of the given `(profile index, tree)` pairs.
    pub fn from_members(members: Vec<(usize, PhyloTree)>) -> DisplayGraph {
        let labels: BTreeSet<Label> = members.iter().flat_map(|(_, t)| t.label_set()).collect();
        let mut kinds: Vec<VertexKind> = labels.iter().cloned().map(VertexKind::Leaf).collect();
        let leaf_id: BTreeMap<&Label, usize> = labels.iter().enumerate().map(|(i, l)| (l, i)).collect();
        let mut names: Vec<String> = labels.iter().map(|l| format!("leaf.{l}")).collect();
        let mut vertex_of = Vec::new();
        for (m, (pi, tree)) in members.iter().enumerate() {
            let mut ids = Vec::with_capacity(tree.vertex_count());
            for v in 0..tree.vertex_count() {
                match tree.label(v) {
                    Some(l) => ids.push(leaf_id[l]),
                    None => {
                        ids.push(kinds.len());
                        kinds.push(VertexKind::Internal { member: m, vertex: v });
                        names.push(format!("t{pi}.v{v}"));
                    }
                }
            }
            vertex_of.push(ids);
        }
        let mut graph = Graph::new(kinds.len());
        let mut origins = BTreeMap::new();
        for (m, (_, tree)) in members.iter().enumerate() {
            for (a, b) in tree.edges() {
                let (u, v) = (vertex_of[m][a], vertex_of[m][b]);
                graph.add_edge(u, v).expect("ids are in range and distinct");
                let internal = !tree.is_labeled(a) && !tree.is_labeled(b);
                origins.insert(edge(u, v), EdgeOrigin { member: m, internal });
            }
        }
        let mut alias_count: BTreeMap<String, Vec<usize>> = BTreeMap::new();
        for (id, kind) in kinds.iter().enumerate() {
            if let VertexKind::Internal { member, vertex } = kind {
                if let Some(name) = members[*member].1.name(*vertex) {
                    alias_count.entry(name.to_string()).or_default().push(id);
                }
            }
        }
        let aliases = alias_count
            .into_iter()
            .filter(|(name, ids)| ids.len() == 1 && !names.contains(name))
            .map(|(name, ids)| (name, ids[0]))
            .collect();
        let (profile_index, trees) = members.into_iter().unzip();
        DisplayGraph {
            graph,
            kinds,
            trees,
            profile_index,
            vertex_of,
            origins,
            names,
            aliases,
        }
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn vertex_count(&self) -> usize {
        self.graph.vertex_count()
    }

    pub fn edge_count(&self) -> usize {
        self.graph.edge_count()
    }

    pub fn kind(&self, v: usize) -> &VertexKind {
        &self.kinds[v]
    }

    pub fn is_leaf(&self, v: usize) -> bool {
        matches!(self.kinds[v], VertexKind::Leaf(_))
    }

    pub fn leaf_label(&self, v: usize) -> Option<&Label> {
        match &self.kinds[v] {
            VertexKind::Leaf(l) => Some(l),
            VertexKind::Internal { .. } => None,
        }
    }

    /// Member tree owning an internal vertex; `None` for leaves.
    pub fn member_of(&self, v: usize) -> Option<usize> {
        match self.kinds[v] {
            VertexKind::Internal { member, .. } => Some(member),
            VertexKind::Leaf(_) => None,
        }
    }

    /// Member trees containing `v`: one for an internal vertex, every tree
    /// carrying the label for a leaf.
    pub fn members_containing(&self, v: usize) -> Vec<usize> {
        match &self.kinds[v] {
            VertexKind::Internal { member, .. } => vec![*member],
            VertexKind::Leaf(l) => (0..self.trees.len())
                .filter(|&m| self.trees[m].leaf(l).is_some())
                .collect(),
        }
    }

    pub fn leaf_vertex(&self, label: &Label) -> Option<usize> {
        (0..self.kinds.len()).find(|&v| self.leaf_label(v) == Some(label))
    }

    pub fn leaves(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.kinds.len()).filter(|&v| self.is_leaf(v))
    }

    pub fn internal_vertices(&self) -> BTreeSet<usize> {
        (0..self.kinds.len()).filter(|&v| !self.is_leaf(v)).collect()
    }

    pub fn member_count(&self) -> usize {
        self.trees.len()
    }

    pub fn member_tree(&self, member: usize) -> &PhyloTree {
        &self.trees[member]
    }

    pub fn member_trees(&self) -> &[PhyloTree] {
        &self.trees
    }

    /// Position of a member tree in the original profile.
    pub fn profile_index(&self, member: usize) -> usize {
        self.profile_index[member]
    }

    /// Graph vertex of vertex `v` of member tree `member`.
    pub fn graph_vertex(&self, member: usize, v: usize) -> usize {
        self.vertex_of[member][v]
    }

    /// Vertex of member tree `member` behind graph vertex `v`, if the tree
    /// contains it.
    pub fn tree_vertex(&self, member: usize, v: usize) -> Option<usize> {
        match &self.kinds[v] {
            VertexKind::Internal { member: m, vertex } if *m == member => Some(*vertex),
            VertexKind::Internal { .. } => None,
            VertexKind::Leaf(l) => self.trees[member].leaf(l),
        }
    }

    pub fn edge_origin(&self, u: usize, v: usize) -> Option<EdgeOrigin> {
        self.origins.get(&edge(u, v)).copied()
    }

    pub fn edges(&self) -> Vec<Edge> {
        self.graph.edges()
    }

    pub fn is_internal_edge(&self, u: usize, v: usize) -> bool {
        self.edge_origin(u, v).is_some_and(|o| o.internal)
    }

    pub fn internal_edges(&self) -> Vec<Edge> {
        self.origins
            .iter()
            .filter(|(_, o)| o.internal)
            .map(|(&e, _)| e)
            .collect()
    }

    /// Pairs of non-adjacent internal vertices from different member trees,
    /// sorted. Every legal fill-in is a subset of these.
    pub fn candidate_fill_edges(&self) -> Vec<Edge> {
        let internal: Vec<usize> = self.internal_vertices().into_iter().collect();
        let mut out = Vec::new();
        for (i, &u) in internal.iter().enumerate() {
            for &v in &internal[i + 1..] {
                if self.member_of(u) != self.member_of(v) && !self.graph.has_edge(u, v) {
                    out.push((u, v));
                }
            }
        }
        out
    }

    /// Stable identifier: `leaf.<label>` or `t<profile index>.v<tree vertex>`.
    pub fn vertex_name(&self, v: usize) -> &str {
        &self.names[v]
    }

    /// Newick internal node name of `v`, when it is unique in the graph.
    pub fn alias(&self, v: usize) -> Option<&str> {
        self.aliases
            .iter()
            .find(|(_, &id)| id == v)
            .map(|(name, _)| name.as_str())
    }

    /// Looks up a vertex by stable identifier, unique internal node name, or
    /// bare leaf label.
    pub fn resolve(&self, name: &str) -> Option<usize> {
        if let Some(v) = self.names.iter().position(|n| n == name) {
            return Some(v);
        }
        if let Some(&v) = self.aliases.get(name) {
            return Some(v);
        }
        Label::new(name).ok().and_then(|l| self.leaf_vertex(&l))
    }

    /// Splits the graph into connected components. Each member tree is
    /// connected, so a component is just a group of members.
    pub fn components(&self) -> Vec<Component> {
        connected_components(&self.graph)
            .into_iter()
            .map(|vertices| {
                let members: BTreeSet<usize> = vertices.iter().flat_map(|&v| self.members_containing(v)).collect();
                let graph = DisplayGraph::from_members(
                    members
                        .iter()
                        .map(|&m| (self.profile_index[m], self.trees[m].clone()))
                        .collect(),
                );
                let to_parent = (0..graph.vertex_count())
                    .map(|v| match graph.kind(v) {
                        VertexKind::Leaf(l) => self.leaf_vertex(l).expect("label is present"),
                        VertexKind::Internal { member, vertex } => {
                            let parent_member = *members.iter().nth(*member).expect("member exists");
                            self.vertex_of[parent_member][*vertex]
                        }
                    })
                    .collect();
                Component { graph, to_parent }
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::newick::{parse_profile, parse_tree};

    fn dg(text: &str) -> DisplayGraph {
        DisplayGraph::new(&parse_profile(text).unwrap())
    }

    fn names(g: &DisplayGraph, edges: &[Edge]) -> Vec<(String, String)> {
        edges
            .iter()
            .map(|&(u, v)| (g.alias(u).unwrap().to_string(), g.alias(v).unwrap().to_string()))
            .collect()
    }

    #[test]
    fn counts() {
        let q = dg("((a,b)u,(c,d)v);");
        assert_eq!((q.vertex_count(), q.edge_count(), q.internal_edges().len()), (6, 5, 1));

        let same = dg("((a,b)u1,(c,d)v1);\n((a,b)u2,(c,d)v2);");
        assert_eq!(
            (same.vertex_count(), same.edge_count(), same.internal_edges().len()),
            (8, 10, 2)
        );

        let ok = dg("((a,b)u1,(c,d)v1);\n((a,b)u2,(c,e)v2);");
        assert_eq!(
            (ok.vertex_count(), ok.edge_count(), ok.internal_edges().len()),
            (9, 10, 2)
        );
    }

    #[test]
    fn internal_vertices_by_name() {
        let same = dg("((a,b)u1,(c,d)v1);\n((a,b)u2,(c,d)v2);");
        let got: BTreeSet<&str> = same
            .internal_vertices()
            .into_iter()
            .map(|v| same.alias(v).unwrap())
            .collect();
        assert_eq!(got, BTreeSet::from(["u1", "v1", "u2", "v2"]));
        let star = dg("(a,b,c)u1;");
        assert_eq!(star.internal_vertices().len(), 1);
    }

    fn pair_set(pairs: &[(&str, &str)]) -> BTreeSet<BTreeSet<String>> {
        pairs
            .iter()
            .map(|(a, b)| BTreeSet::from([a.to_string(), b.to_string()]))
            .collect()
    }

    #[test]
    fn candidates() {
        let same = dg("((a,b)u1,(c,d)v1);\n((a,b)u2,(c,d)v2);");
        let got: BTreeSet<BTreeSet<String>> = names(&same, &same.candidate_fill_edges())
            .into_iter()
            .map(|(a, b)| BTreeSet::from([a, b]))
            .collect();
        assert_eq!(got, pair_set(&[("u1", "u2"), ("u1", "v2"), ("v1", "u2"), ("v1", "v2")]));

        assert!(dg("((a,b),(c,d));").candidate_fill_edges().is_empty());
        let shared = dg("(a,b,c)u1;\n(a,d,e)u2;");
        assert_eq!(
            names(&shared, &shared.candidate_fill_edges()),
            vec![("u1".into(), "u2".into())]
        );
    }

    #[test]
    fn leaf_degree_counts_trees() {
        let ok = dg("((a,b)u1,(c,d)v1);\n((a,b)u2,(c,e)v2);");
        let a = ok.resolve("a").unwrap();
        let d = ok.resolve("leaf.d").unwrap();
        assert_eq!(ok.graph().neighbors(a).len(), 2);
        assert_eq!(ok.graph().neighbors(d).len(), 1);
    }

    #[test]
    fn names_and_resolution() {
        let same = dg("((a,b)u1,(c,d)v1);\n((a,b)u2,(c,d)v2);");
        let u2 = same.resolve("u2").unwrap();
        assert!(same.vertex_name(u2).starts_with("t1.v"));
        assert_eq!(same.resolve(same.vertex_name(u2)), Some(u2));
        // duplicate internal names do not resolve
        let dup = dg("((a,b)u,(c,d)v);\n((a,b)u,(c,d)w);");
        assert_eq!(dup.resolve("u"), None);
        assert!(dup.resolve("w").is_some());
    }

    #[test]
    fn small_trees_are_left_out() {
        let g = dg("((a,b),(c,d));\n(a,e);");
        assert_eq!(g.member_count(), 1);
        assert_eq!(g.vertex_count(), 6);
    }

    #[test]
    fn components_split_by_taxa() {
        let g = dg("((a,b),(c,d));\n((e,f),(g,h));\n((a,b),(c,x));");
        let comps = g.components();
        assert_eq!(comps.len(), 2);
        assert_eq!(comps[0].graph.member_count(), 2);
        assert_eq!(comps[0].graph.profile_index(1), 2);
        assert_eq!(comps[1].graph.profile_index(0), 1);
        for c in &comps {
            for (u, v) in c.graph.edges() {
                assert!(g.graph().has_edge(c.to_parent[u], c.to_parent[v]));
            }
        }
        let single = DisplayGraph::from_members(vec![(0, parse_tree("(a,b,c);").unwrap())]);
        assert_eq!(single.components().len(), 1);
    }
}
