//! Unrooted leaf-labeled trees, profiles, restriction, contraction and the
//! `displays` relation.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use thiserror::Error;

/// A taxon name. Never empty; compared by exact text equality.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Label(String);

impl Label {
    pub fn new(name: impl Into<String>) -> Result<Label, TreeError> {
        let name = name.into();
        if name.is_empty() {
            return Err(TreeError::EmptyLabel);
        }
        Ok(Label(name))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl TryFrom<&str> for Label {
    type Error = TreeError;

    fn try_from(value: &str) -> Result<Self, Self::Error> {
        Label::new(value)
    }
}

/// Builds a label set from string slices. Panics on an empty name, so it is
/// meant for literals.
pub fn label_set<'a>(names: impl IntoIterator<Item = &'a str>) -> BTreeSet<Label> {
    names
        .into_iter()
        .map(|n| Label::new(n).expect("label literal must be non-empty"))
        .collect()
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TreeError {
    #[error("labels must be non-empty")]
    EmptyLabel,
    #[error("a tree needs at least one vertex")]
    Empty,
    #[error("vertex {0} is out of range")]
    VertexOutOfRange(usize),
    #[error("edge {0}-{1} is a loop or appears twice")]
    BadEdge(usize, usize),
    #[error("{vertices} vertices and {edges} edges do not form a tree")]
    NotATree { vertices: usize, edges: usize },
    #[error("label `{0}` appears more than once")]
    DuplicateLabel(Label),
    #[error("labeled vertex {0} is not a leaf")]
    LabelOnInternal(usize),
    #[error("leaf {0} carries no label")]
    UnlabeledLeaf(usize),
    #[error("unlabeled vertex {0} has degree 2")]
    DegreeTwo(usize),
    #[error("label `{0}` is not in the tree")]
    UnknownLabel(Label),
    #[error("a restriction needs at least one label")]
    EmptyRestriction,
    #[error("{0}-{1} is not an edge of the tree")]
    NoSuchEdge(usize, usize),
    #[error("edge {0}-{1} touches a labeled vertex")]
    LabeledEndpoint(usize, usize),
    #[error("the displayed tree has labels missing from the host tree")]
    LabelsNotContained,
    #[error("the tree carries no labels")]
    NoLabels,
    #[error("a profile needs at least one tree")]
    EmptyProfile,
}

/// Unrooted tree whose labeled vertices are leaves.
///
/// Vertices are dense indices `0..vertex_count()`. A tree built with
/// [`PhyloTree::new`] is normalized: every leaf is labeled and every unlabeled
/// vertex has degree at least three. [`PhyloTree::new_unnormalized`] drops the
/// degree conditions, which is what intermediate supertrees need.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PhyloTree {
    adj: Vec<Vec<usize>>,
    labels: Vec<Option<Label>>,
    names: Vec<Option<String>>,
    leaf_index: BTreeMap<Label, usize>,
}

impl PhyloTree {
    pub fn new(
        vertex_count: usize,
        edges: &[(usize, usize)],
        labels: Vec<Option<Label>>,
    ) -> Result<PhyloTree, TreeError> {
        let tree = Self::new_unnormalized(vertex_count, edges, labels)?;
        tree.check_normalized()?;
        Ok(tree)
    }

    pub fn new_unnormalized(
        vertex_count: usize,
        edges: &[(usize, usize)],
        labels: Vec<Option<Label>>,
    ) -> Result<PhyloTree, TreeError> {
        if vertex_count == 0 {
            return Err(TreeError::Empty);
        }
        if labels.len() != vertex_count {
            return Err(TreeError::VertexOutOfRange(labels.len()));
        }
        if edges.len() + 1 != vertex_count {
            return Err(TreeError::NotATree {
                vertices: vertex_count,
                edges: edges.len(),
            });
        }
        let mut adj = vec![Vec::new(); vertex_count];
        let mut seen = BTreeSet::new();
        for &(u, v) in edges {
            if u >= vertex_count {
                return Err(TreeError::VertexOutOfRange(u));
            }
            if v >= vertex_count {
                return Err(TreeError::VertexOutOfRange(v));
            }
            if u == v || !seen.insert((u.min(v), u.max(v))) {
                return Err(TreeError::BadEdge(u, v));
            }
            adj[u].push(v);
            adj[v].push(u);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        if !is_connected(&adj) {
            return Err(TreeError::NotATree {
                vertices: vertex_count,
                edges: edges.len(),
            });
        }
        let mut leaf_index = BTreeMap::new();
        for (v, label) in labels.iter().enumerate() {
            if let Some(label) = label {
                if adj[v].len() > 1 {
                    return Err(TreeError::LabelOnInternal(v));
                }
                if leaf_index.insert(label.clone(), v).is_some() {
                    return Err(TreeError::DuplicateLabel(label.clone()));
                }
            }
        }
        Ok(PhyloTree {
            adj,
            labels,
            names: vec![None; vertex_count],
            leaf_index,
        })
    }

    /// Attaches optional display names to vertices (Newick internal node
    /// names). Names never take part in topology or label comparisons.
    pub fn with_names(mut self, names: Vec<Option<String>>) -> PhyloTree {
        assert_eq!(names.len(), self.vertex_count(), "one name slot per vertex");
        self.names = names;
        self
    }

    /// Star tree: one center joined to every label. Two labels give a single
    /// edge and one label a single vertex.
    pub fn star(labels: &BTreeSet<Label>) -> Result<PhyloTree, TreeError> {
        match labels.len() {
            0 => Err(TreeError::NoLabels),
            1 => PhyloTree::new(1, &[], labels.iter().cloned().map(Some).collect()),
            2 => PhyloTree::new(2, &[(0, 1)], labels.iter().cloned().map(Some).collect()),
            n => {
                let mut all = vec![None];
                all.extend(labels.iter().cloned().map(Some));
                let edges: Vec<_> = (1..=n).map(|v| (0, v)).collect();
                PhyloTree::new(n + 1, &edges, all)
            }
        }
    }

    fn check_normalized(&self) -> Result<(), TreeError> {
        if self.leaf_index.is_empty() {
            return Err(TreeError::NoLabels);
        }
        for v in 0..self.vertex_count() {
            match (&self.labels[v], self.adj[v].len()) {
                (None, 0) | (None, 1) => return Err(TreeError::UnlabeledLeaf(v)),
                (None, 2) => return Err(TreeError::DegreeTwo(v)),
                _ => {}
            }
        }
        Ok(())
    }

    pub fn is_normalized(&self) -> bool {
        self.check_normalized().is_ok()
    }

    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.len() - 1
    }

    /// Edges as `(u, v)` with `u < v`, sorted.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for (u, list) in self.adj.iter().enumerate() {
            out.extend(list.iter().filter(|&&v| u < v).map(|&v| (u, v)));
        }
        out
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.adj.len() && self.adj[u].binary_search(&v).is_ok()
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn label(&self, v: usize) -> Option<&Label> {
        self.labels[v].as_ref()
    }

    pub fn name(&self, v: usize) -> Option<&str> {
        self.names[v].as_deref()
    }

    pub fn is_labeled(&self, v: usize) -> bool {
        self.labels[v].is_some()
    }

    /// Vertex carrying `label`, if any.
    pub fn leaf(&self, label: &Label) -> Option<usize> {
        self.leaf_index.get(label).copied()
    }

    /// Labels in sorted order.
    pub fn labels(&self) -> impl Iterator<Item = &Label> {
        self.leaf_index.keys()
    }

    pub fn label_set(&self) -> BTreeSet<Label> {
        self.leaf_index.keys().cloned().collect()
    }

    pub fn leaf_count(&self) -> usize {
        self.leaf_index.len()
    }

    pub fn internal_vertices(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.vertex_count()).filter(|&v| !self.is_labeled(v))
    }

    /// `T|Y`: the minimal subtree spanning the leaves labeled by `labels`,
    /// with unlabeled degree-2 vertices suppressed.
    pub fn restrict(&self, labels: &BTreeSet<Label>) -> Result<PhyloTree, TreeError> {
        Ok(self.restrict_traced(labels)?.tree)
    }

    /// Like [`PhyloTree::restrict`], but also reports where every vertex and
    /// edge of the result came from.
    pub fn restrict_traced(&self, labels: &BTreeSet<Label>) -> Result<Restriction, TreeError> {
        if labels.is_empty() {
            return Err(TreeError::EmptyRestriction);
        }
        let mut keep = vec![true; self.vertex_count()];
        let mut protected = vec![false; self.vertex_count()];
        for label in labels {
            let v = self.leaf(label).ok_or_else(|| TreeError::UnknownLabel(label.clone()))?;
            protected[v] = true;
        }
        // Peel unprotected leaves until only the spanning subtree remains.
        let mut degree: Vec<usize> = self.adj.iter().map(Vec::len).collect();
        let mut queue: VecDeque<usize> = (0..self.vertex_count())
            .filter(|&v| !protected[v] && degree[v] <= 1)
            .collect();
        while let Some(v) = queue.pop_front() {
            if !keep[v] {
                continue;
            }
            keep[v] = false;
            for &w in &self.adj[v] {
                if keep[w] {
                    degree[w] -= 1;
                    if !protected[w] && degree[w] <= 1 {
                        queue.push_back(w);
                    }
                }
            }
        }
        let branch: Vec<usize> = (0..self.vertex_count())
            .filter(|&v| keep[v] && (self.is_labeled(v) || degree[v] != 2))
            .collect();
        let mut new_id = vec![usize::MAX; self.vertex_count()];
        for (i, &v) in branch.iter().enumerate() {
            new_id[v] = i;
        }
        let mut edges = Vec::new();
        let mut interiors = BTreeMap::new();
        for &start in &branch {
            for &first in &self.adj[start] {
                if !keep[first] {
                    continue;
                }
                let mut prev = start;
                let mut cur = first;
                let mut path = Vec::new();
                while new_id[cur] == usize::MAX {
                    path.push(cur);
                    let next = self.adj[cur]
                        .iter()
                        .copied()
                        .find(|&w| keep[w] && w != prev)
                        .expect("suppressed vertex has two kept neighbors");
                    prev = cur;
                    cur = next;
                }
                let (a, b) = (new_id[start], new_id[cur]);
                if a < b {
                    edges.push((a, b));
                    interiors.insert((a, b), path);
                }
            }
        }
        let tree = PhyloTree::new_unnormalized(
            branch.len(),
            &edges,
            branch.iter().map(|&v| self.labels[v].clone()).collect(),
        )?
        .with_names(branch.iter().map(|&v| self.names[v].clone()).collect());
        Ok(Restriction {
            tree,
            origin: branch,
            interiors,
        })
    }

    /// Merges the endpoints of an edge between two unlabeled vertices.
    pub fn contract_edge(&self, u: usize, v: usize) -> Result<PhyloTree, TreeError> {
        if !self.has_edge(u, v) {
            return Err(TreeError::NoSuchEdge(u, v));
        }
        if self.is_labeled(u) || self.is_labeled(v) {
            return Err(TreeError::LabeledEndpoint(u, v));
        }
        let (keep, gone) = (u.min(v), u.max(v));
        let renumber = |w: usize| {
            let w = if w == gone { keep } else { w };
            if w > gone {
                w - 1
            } else {
                w
            }
        };
        let edges: Vec<_> = self
            .edges()
            .into_iter()
            .filter(|&e| e != (keep, gone))
            .map(|(a, b)| (renumber(a), renumber(b)))
            .collect();
        let mut labels = self.labels.clone();
        labels.remove(gone);
        let mut names = self.names.clone();
        names.remove(gone);
        Ok(PhyloTree::new_unnormalized(self.vertex_count() - 1, &edges, labels)?.with_names(names))
    }

    /// For every edge `(u, v)` with `u < v`, the labels on `u`'s side.
    pub fn edge_sides(&self) -> BTreeMap<(usize, usize), BTreeSet<Label>> {
        let root = 0;
        let order = self.dfs_order(root);
        let mut parent = vec![usize::MAX; self.vertex_count()];
        for &v in &order {
            for &w in &self.adj[v] {
                if w != parent[v] {
                    parent[w] = v;
                }
            }
        }
        let mut below: Vec<BTreeSet<Label>> = vec![BTreeSet::new(); self.vertex_count()];
        for &v in order.iter().rev() {
            if let Some(label) = &self.labels[v] {
                below[v].insert(label.clone());
            }
            if v != root {
                let set = below[v].clone();
                below[parent[v]].extend(set);
            }
        }
        let all = self.label_set();
        let mut sides = BTreeMap::new();
        for &v in &order {
            if v == root {
                continue;
            }
            let p = parent[v];
            let child_side = below[v].clone();
            if v < p {
                sides.insert((v, p), child_side);
            } else {
                sides.insert((p, v), all.difference(&child_side).cloned().collect());
            }
        }
        sides
    }

    /// Nontrivial splits of the tree restricted to `within`, each written as
    /// the side that does not contain the smallest label of `within`.
    pub fn nontrivial_splits(&self, within: &BTreeSet<Label>) -> BTreeSet<BTreeSet<Label>> {
        let Some(min) = within.first() else {
            return BTreeSet::new();
        };
        self.edge_sides()
            .into_values()
            .filter_map(|side| {
                let side: BTreeSet<Label> = side.intersection(within).cloned().collect();
                let side = if side.contains(min) {
                    within.difference(&side).cloned().collect()
                } else {
                    side
                };
                (side.len() >= 2 && within.len() - side.len() >= 2).then_some(side)
            })
            .collect()
    }

    /// Canonical text form, invariant under label-preserving isomorphism.
    /// Rooted at the smallest label (vertex 0 when there are no labels).
    pub fn canonical_form(&self) -> String {
        let root = self.labels().next().and_then(|l| self.leaf(l)).unwrap_or(0);
        self.canonical_from(root, usize::MAX)
    }

    fn canonical_from(&self, v: usize, parent: usize) -> String {
        let mut children: Vec<String> = self.adj[v]
            .iter()
            .filter(|&&w| w != parent)
            .map(|&w| self.canonical_from(w, v))
            .collect();
        children.sort();
        let mut out = String::new();
        if !children.is_empty() {
            out.push('(');
            out.push_str(&children.join(","));
            out.push(')');
        }
        if let Some(label) = &self.labels[v] {
            out.push_str(&format!("{:?}", label.as_str()));
        }
        out
    }

    pub(crate) fn dfs_order(&self, root: usize) -> Vec<usize> {
        let mut order = Vec::with_capacity(self.vertex_count());
        let mut seen = vec![false; self.vertex_count()];
        let mut stack = vec![root];
        seen[root] = true;
        while let Some(v) = stack.pop() {
            order.push(v);
            for &w in self.adj[v].iter().rev() {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        order
    }

    /// Deletes unlabeled leaves and suppresses unlabeled degree-2 vertices
    /// until neither remains. Returns the normalized tree and, for every
    /// vertex of `self`, its index in the result if it survived.
    pub fn normalized(&self) -> Result<(PhyloTree, Vec<Option<usize>>), TreeError> {
        if self.leaf_index.is_empty() {
            return Err(TreeError::NoLabels);
        }
        let n = self.vertex_count();
        let mut adj: Vec<BTreeSet<usize>> = self.adj.iter().map(|l| l.iter().copied().collect()).collect();
        let mut alive = vec![true; n];
        loop {
            let mut changed = false;
            for v in 0..n {
                if !alive[v] || self.is_labeled(v) {
                    continue;
                }
                match adj[v].len() {
                    0 | 1 => {
                        for w in std::mem::take(&mut adj[v]) {
                            adj[w].remove(&v);
                        }
                        alive[v] = false;
                        changed = true;
                    }
                    2 => {
                        let mut it = std::mem::take(&mut adj[v]).into_iter();
                        let (a, b) = (it.next().unwrap(), it.next().unwrap());
                        adj[a].remove(&v);
                        adj[b].remove(&v);
                        adj[a].insert(b);
                        adj[b].insert(a);
                        alive[v] = false;
                        changed = true;
                    }
                    _ => {}
                }
            }
            if !changed {
                break;
            }
        }
        let mut map = vec![None; n];
        let survivors: Vec<usize> = (0..n).filter(|&v| alive[v]).collect();
        for (i, &v) in survivors.iter().enumerate() {
            map[v] = Some(i);
        }
        let mut edges = Vec::new();
        for &v in &survivors {
            for &w in &adj[v] {
                if v < w {
                    edges.push((map[v].unwrap(), map[w].unwrap()));
                }
            }
        }
        let tree = PhyloTree::new(
            survivors.len(),
            &edges,
            survivors.iter().map(|&v| self.labels[v].clone()).collect(),
        )?
        .with_names(survivors.iter().map(|&v| self.names[v].clone()).collect());
        Ok((tree, map))
    }
}

/// Output of [`PhyloTree::restrict_traced`].
#[derive(Clone, Debug)]
pub struct Restriction {
    pub tree: PhyloTree,
    /// Host vertex of every restriction vertex.
    pub origin: Vec<usize>,
    /// Host vertices suppressed along each restriction edge `(a, b)`, `a < b`.
    pub interiors: BTreeMap<(usize, usize), Vec<usize>>,
}

fn is_connected(adj: &[Vec<usize>]) -> bool {
    let mut seen = vec![false; adj.len()];
    let mut stack = vec![0];
    seen[0] = true;
    let mut count = 1;
    while let Some(v) = stack.pop() {
        for &w in &adj[v] {
            if !seen[w] {
                seen[w] = true;
                count += 1;
                stack.push(w);
            }
        }
    }
    count == adj.len()
}

/// Label-preserving isomorphism test.
pub fn is_label_isomorphic(a: &PhyloTree, b: &PhyloTree) -> bool {
    a.vertex_count() == b.vertex_count() && a.canonical_form() == b.canonical_form()
}

/// Whether `host` displays `shown`: `shown` arises from `host|L(shown)` by
/// contracting edges. Decided by split containment.
pub fn displays(host: &PhyloTree, shown: &PhyloTree) -> Result<bool, TreeError> {
    let within = shown.label_set();
    if !within.iter().all(|l| host.leaf(l).is_some()) {
        return Err(TreeError::LabelsNotContained);
    }
    let needed = shown.nontrivial_splits(&within);
    if needed.is_empty() {
        return Ok(true);
    }
    let available = host.nontrivial_splits(&within);
    Ok(needed.is_subset(&available))
}

/// An ordered collection of input trees.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Profile {
    trees: Vec<PhyloTree>,
}

impl Profile {
    pub fn new(trees: Vec<PhyloTree>) -> Result<Profile, TreeError> {
        if trees.is_empty() {
            return Err(TreeError::EmptyProfile);
        }
        Ok(Profile { trees })
    }

    pub fn trees(&self) -> &[PhyloTree] {
        &self.trees
    }

    pub fn len(&self) -> usize {
        self.trees.len()
    }

    pub fn is_empty(&self) -> bool {
        self.trees.is_empty()
    }

    pub fn label_union(&self) -> BTreeSet<Label> {
        self.trees.iter().flat_map(PhyloTree::label_set).collect()
    }

    /// Indices of trees with at least three leaves. Smaller trees have no
    /// nontrivial split and constrain nothing.
    pub fn informative(&self) -> Vec<usize> {
        (0..self.trees.len())
            .filter(|&i| self.trees[i].leaf_count() >= 3)
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::newick::parse_tree;

    fn t(s: &str) -> PhyloTree {
        parse_tree(s).unwrap()
    }

    #[test]
    fn restrict_identity() {
        let q = t("((a,b),(c,d));");
        let r = q.restrict(&q.label_set()).unwrap();
        assert!(is_label_isomorphic(&q, &r));
    }

    #[test]
    fn restrict_suppresses_degree_two() {
        let q = t("((a,b),(c,d));");
        let r = q.restrict(&label_set(["a", "b", "c"])).unwrap();
        assert!(is_label_isomorphic(&r, &t("(a,b,c);")));
        assert!(r.is_normalized());

        let cat = t("((a,b)u,c,(d,e)x)w;");
        let r = cat.restrict(&label_set(["a", "b", "d", "e"])).unwrap();
        assert!(is_label_isomorphic(&r, &t("((a,b),(d,e));")));
    }

    #[test]
    fn restrict_small_label_sets() {
        let q = t("((a,b),(c,d));");
        let one = q.restrict(&label_set(["c"])).unwrap();
        assert_eq!(one.vertex_count(), 1);
        let two = q.restrict_traced(&label_set(["a", "d"])).unwrap();
        assert_eq!(two.tree.vertex_count(), 2);
        assert_eq!(two.interiors.values().next().unwrap().len(), 2);
        assert_eq!(
            q.restrict(&label_set(["z"])).unwrap_err(),
            TreeError::UnknownLabel(Label::new("z").unwrap())
        );
        assert_eq!(q.restrict(&BTreeSet::new()).unwrap_err(), TreeError::EmptyRestriction);
    }

    #[test]
    fn contraction() {
        let q = t("((a,b)u,(c,d)v);");
        let u = (0..q.vertex_count()).find(|&v| q.name(v) == Some("u")).unwrap();
        let v = (0..q.vertex_count()).find(|&v| q.name(v) == Some("v")).unwrap();
        let s = q.contract_edge(u, v).unwrap();
        assert!(is_label_isomorphic(&s, &t("(a,b,c,d);")));

        let a = q.leaf(&Label::new("a").unwrap()).unwrap();
        assert_eq!(q.contract_edge(a, u).unwrap_err(), TreeError::LabeledEndpoint(a, u));
        assert!(matches!(q.contract_edge(a, v), Err(TreeError::NoSuchEdge(..))));

        let mut cat = t("((a,b),c,(d,e));");
        while let Some((x, y)) = cat
            .edges()
            .into_iter()
            .find(|&(x, y)| !cat.is_labeled(x) && !cat.is_labeled(y))
        {
            cat = cat.contract_edge(x, y).unwrap();
        }
        assert!(is_label_isomorphic(&cat, &t("(a,b,c,d,e);")));
    }

    #[test]
    fn displays_examples() {
        let q = t("((a,b),(c,d));");
        let star = t("(a,b,c,d);");
        assert!(displays(&q, &q).unwrap());
        assert!(displays(&q, &star).unwrap());
        assert!(!displays(&star, &q).unwrap());
        assert!(!displays(&q, &t("((a,c),(b,d));")).unwrap());
        assert_eq!(displays(&q, &t("(a,b,e);")).unwrap_err(), TreeError::LabelsNotContained);
    }

    #[test]
    fn constructor_rejects_bad_shapes() {
        let l = |s: &str| Some(Label::new(s).unwrap());
        assert!(matches!(
            PhyloTree::new(3, &[(0, 1)], vec![l("a"), None, l("b")]),
            Err(TreeError::NotATree { .. })
        ));
        assert_eq!(
            PhyloTree::new(3, &[(0, 1), (1, 2)], vec![l("a"), None, l("b")]).unwrap_err(),
            TreeError::DegreeTwo(1)
        );
        assert_eq!(
            PhyloTree::new(2, &[(0, 1)], vec![l("a"), l("a")]).unwrap_err(),
            TreeError::DuplicateLabel(Label::new("a").unwrap())
        );
        assert_eq!(
            PhyloTree::new(3, &[(0, 1), (1, 2)], vec![l("a"), l("b"), l("c")]).unwrap_err(),
            TreeError::LabelOnInternal(1)
        );
        assert!(PhyloTree::new_unnormalized(3, &[(0, 1), (1, 2)], vec![l("a"), None, None]).is_ok());
        assert_eq!(Label::new("").unwrap_err(), TreeError::EmptyLabel);
    }

    #[test]
    fn normalization_prunes_and_suppresses() {
        let l = |s: &str| Some(Label::new(s).unwrap());
        // center 0 with leaves a,b,c; a dangling chain 0-4-5 of unlabeled vertices
        let raw = PhyloTree::new_unnormalized(
            6,
            &[(0, 1), (0, 2), (0, 3), (0, 4), (4, 5)],
            vec![None, l("a"), l("b"), l("c"), None, None],
        )
        .unwrap();
        let (norm, map) = raw.normalized().unwrap();
        assert!(is_label_isomorphic(&norm, &t("(a,b,c);")));
        assert_eq!(map[4], None);
        assert_eq!(map[5], None);
        let q = t("((a,b),(c,d));");
        let (same, _) = q.normalized().unwrap();
        assert_eq!(same, q);
    }

    #[test]
    fn splits_of_quartet() {
        let q = t("((a,b),(c,d));");
        let splits = q.nontrivial_splits(&q.label_set());
        assert_eq!(splits, BTreeSet::from([label_set(["c", "d"])]));
        assert!(t("(a,b,c,d);").nontrivial_splits(&q.label_set()).is_empty());
    }
}
