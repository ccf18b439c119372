//! Embedding functions between phylogenetic trees.
//!
//! An embedding function from `source` onto `target` is a partial, surjective
//! vertex map with three properties:
//!
//! - labels are preserved: a labeled source vertex in the domain maps to the
//!   target vertex with the same label, and every labeled target vertex has
//!   the same-labeled source vertex among its preimages;
//! - every preimage class induces a connected subgraph of `source`;
//! - every target edge `{u, v}` is realized by exactly one source edge
//!   `{u', v'}` with `u' ↦ u` and `v' ↦ v`.
//!
//! A tree displays another exactly when such a map exists.

use std::collections::{BTreeMap, BTreeSet};

use crate::tree::{displays, Label, PhyloTree, TreeError};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EmbeddingFunction {
    source: PhyloTree,
    target: PhyloTree,
    map: BTreeMap<usize, usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EmbeddingViolation {
    /// A map entry names a vertex that does not exist.
    UnknownVertex {
        source: usize,
        target: usize,
    },
    NotSurjective {
        target: usize,
    },
    LabelMismatch {
        source: usize,
        target: usize,
    },
    LabelNotCovered(Label),
    DisconnectedPreimage {
        target: usize,
    },
    EdgeRealization {
        edge: (usize, usize),
        count: usize,
    },
}

impl EmbeddingFunction {
    pub fn new(source: PhyloTree, target: PhyloTree, map: BTreeMap<usize, usize>) -> Self {
        EmbeddingFunction { source, target, map }
    }

    pub fn source(&self) -> &PhyloTree {
        &self.source
    }

    pub fn target(&self) -> &PhyloTree {
        &self.target
    }

    pub fn map(&self) -> &BTreeMap<usize, usize> {
        &self.map
    }

    pub fn image(&self, v: usize) -> Option<usize> {
        self.map.get(&v).copied()
    }

    pub fn preimage(&self, t: usize) -> Vec<usize> {
        self.map.iter().filter(|&(_, &w)| w == t).map(|(&v, _)| v).collect()
    }

    /// Rewrites the map so that each labeled target vertex has only its
    /// labeled source vertex as preimage; the rest of the class moves to the
    /// class of the target leaf's neighbor. The result is again an embedding
    /// function whenever `self` is one and every target leaf has an unlabeled
    /// neighbor.
    pub fn with_tight_leaf_classes(&self) -> EmbeddingFunction {
        let mut map = self.map.clone();
        for label in self.target.labels() {
            let leaf = self.target.leaf(label).expect("label of target");
            let &[neighbor] = self.target.neighbors(leaf) else {
                continue;
            };
            if self.target.is_labeled(neighbor) {
                continue;
            }
            for image in map.values_mut() {
                if *image == leaf {
                    *image = neighbor;
                }
            }
            if let Some(src) = self.source.leaf(label) {
                map.insert(src, leaf);
            }
        }
        EmbeddingFunction::new(self.source.clone(), self.target.clone(), map)
    }
}

/// Every way `phi` fails to be an embedding function. Empty means valid.
pub fn embedding_violations(phi: &EmbeddingFunction) -> Vec<EmbeddingViolation> {
    let (source, target) = (&phi.source, &phi.target);
    let mut out = Vec::new();
    for (&s, &t) in &phi.map {
        if s >= source.vertex_count() || t >= target.vertex_count() {
            out.push(EmbeddingViolation::UnknownVertex { source: s, target: t });
        }
    }
    if !out.is_empty() {
        return out;
    }
    let mut classes: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); target.vertex_count()];
    for (&s, &t) in &phi.map {
        classes[t].insert(s);
    }
    for (t, class) in classes.iter().enumerate() {
        if class.is_empty() {
            out.push(EmbeddingViolation::NotSurjective { target: t });
        }
    }
    for (&s, &t) in &phi.map {
        if let Some(label) = source.label(s) {
            if target.label(t) != Some(label) {
                out.push(EmbeddingViolation::LabelMismatch { source: s, target: t });
            }
        }
    }
    for label in target.labels() {
        let t = target.leaf(label).expect("label of target");
        let covered = source.leaf(label).is_some_and(|s| phi.map.get(&s) == Some(&t));
        if !covered {
            out.push(EmbeddingViolation::LabelNotCovered(label.clone()));
        }
    }
    for (t, class) in classes.iter().enumerate() {
        if !class.is_empty() && !induces_connected(source, class) {
            out.push(EmbeddingViolation::DisconnectedPreimage { target: t });
        }
    }
    let mut realized: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for (a, b) in source.edges() {
        if let (Some(&x), Some(&y)) = (phi.map.get(&a), phi.map.get(&b)) {
            if x != y {
                *realized.entry((x.min(y), x.max(y))).or_default() += 1;
            }
        }
    }
    for edge in target.edges() {
        let count = realized.get(&edge).copied().unwrap_or(0);
        if count != 1 {
            out.push(EmbeddingViolation::EdgeRealization { edge, count });
        }
    }
    out
}

pub fn verify_embedding(phi: &EmbeddingFunction) -> bool {
    embedding_violations(phi).is_empty()
}

fn induces_connected(tree: &PhyloTree, class: &BTreeSet<usize>) -> bool {
    let Some(&start) = class.first() else {
        return true;
    };
    let mut seen = BTreeSet::from([start]);
    let mut stack = vec![start];
    while let Some(v) = stack.pop() {
        for &w in tree.neighbors(v) {
            if class.contains(&w) && seen.insert(w) {
                stack.push(w);
            }
        }
    }
    seen.len() == class.len()
}

/// A tree edge and the labels on its first endpoint's side.
type SplitEdge = ((usize, usize), BTreeSet<Label>);

/// Builds an embedding function from `host` onto `target` when `host`
/// displays `target`, and `None` otherwise.
///
/// The restriction `host|L(target)` is traced back to `host`; its edges whose
/// split is absent from `target` are contracted, and the remaining edges are
/// matched to target edges by split. Leaf classes come out as single leaves
/// whenever the target has at least three labels.
pub fn compute_embedding(host: &PhyloTree, target: &PhyloTree) -> Result<Option<EmbeddingFunction>, TreeError> {
    if !displays(host, target)? {
        return Ok(None);
    }
    let labels = target.label_set();
    let restriction = host.restrict_traced(&labels)?;
    let r = &restriction.tree;
    let min = labels.first().expect("target has labels").clone();
    let canonical = |side: &BTreeSet<Label>| -> BTreeSet<Label> {
        if side.contains(&min) {
            labels.difference(side).cloned().collect()
        } else {
            side.clone()
        }
    };

    // canonical split -> (target edge, labels on the edge's first endpoint side)
    let target_splits: BTreeMap<BTreeSet<Label>, SplitEdge> = target
        .edge_sides()
        .into_iter()
        .map(|(edge, side)| (canonical(&side), (edge, side)))
        .collect();

    let mut image: Vec<Option<usize>> = vec![None; r.vertex_count()];
    let mut kept = BTreeSet::new();
    let mut contracted: Vec<Vec<usize>> = vec![Vec::new(); r.vertex_count()];
    for ((a, b), side) in r.edge_sides() {
        match target_splits.get(&canonical(&side)) {
            Some(&((p, q), ref p_side)) => {
                let (ia, ib) = if *p_side == side { (p, q) } else { (q, p) };
                image[a] = Some(ia);
                image[b] = Some(ib);
                kept.insert((a, b));
            }
            None => {
                contracted[a].push(b);
                contracted[b].push(a);
            }
        }
    }
    if r.vertex_count() == 1 {
        image[0] = Some(0);
    }
    // Spread images across contracted edges.
    let mut stack: Vec<usize> = (0..r.vertex_count()).filter(|&v| image[v].is_some()).collect();
    while let Some(v) = stack.pop() {
        for &w in &contracted[v] {
            if image[w].is_none() {
                image[w] = image[v];
                stack.push(w);
            }
        }
    }

    let mut map = BTreeMap::new();
    for (v, &img) in image.iter().enumerate() {
        map.insert(restriction.origin[v], img.expect("every restriction vertex is reached"));
    }
    for (&(a, b), interior) in &restriction.interiors {
        // Suppressed vertices join one endpoint's class; on a kept edge that is
        // the unlabeled endpoint so leaf classes stay single vertices.
        let holder = if kept.contains(&(a, b)) && r.is_labeled(a) && !r.is_labeled(b) {
            b
        } else {
            a
        };
        let img = image[holder].expect("assigned above");
        for &s in interior {
            map.insert(s, img);
        }
    }
    Ok(Some(EmbeddingFunction::new(host.clone(), target.clone(), map)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::newick::parse_tree;

    fn t(s: &str) -> PhyloTree {
        parse_tree(s).unwrap()
    }

    fn by_name(tree: &PhyloTree, name: &str) -> usize {
        (0..tree.vertex_count())
            .find(|&v| tree.name(v) == Some(name) || tree.label(v).map(Label::as_str) == Some(name))
            .unwrap()
    }

    #[test]
    fn identity_is_an_embedding() {
        let q = t("((a,b),(c,d));");
        let map = (0..q.vertex_count()).map(|v| (v, v)).collect();
        assert!(verify_embedding(&EmbeddingFunction::new(q.clone(), q.clone(), map)));
    }

    #[test]
    fn disconnected_preimage_is_rejected() {
        // x and u are not adjacent (w lies between them)
        let cat = t("((a,b)u,(c,(d,e)x)w,f)r;");
        let mut map: BTreeMap<usize, usize> = (0..cat.vertex_count()).map(|v| (v, v)).collect();
        map.insert(by_name(&cat, "x"), by_name(&cat, "u"));
        let phi = EmbeddingFunction::new(cat.clone(), cat.clone(), map);
        let violations = embedding_violations(&phi);
        assert!(!verify_embedding(&phi));
        assert!(violations.contains(&EmbeddingViolation::DisconnectedPreimage {
            target: by_name(&cat, "u")
        }));
    }

    #[test]
    fn caterpillar_onto_quartet() {
        let cat = t("((a,b)u,c,(d,e)x)w;");
        let quartet = t("((a,b)p,(d,e)q);");
        let mut map = BTreeMap::new();
        for l in ["a", "b", "d", "e"] {
            map.insert(by_name(&cat, l), by_name(&quartet, l));
        }
        map.insert(by_name(&cat, "u"), by_name(&quartet, "p"));
        map.insert(by_name(&cat, "w"), by_name(&quartet, "p"));
        map.insert(by_name(&cat, "x"), by_name(&quartet, "q"));
        let phi = EmbeddingFunction::new(cat.clone(), quartet.clone(), map);
        assert_eq!(embedding_violations(&phi), vec![]);

        let computed = compute_embedding(&cat, &quartet).unwrap().unwrap();
        assert!(verify_embedding(&computed));
        // c is outside the domain
        assert_eq!(computed.image(by_name(&cat, "c")), None);
    }

    #[test]
    fn compute_absent_when_not_displayed() {
        let q = t("((a,b),(c,d));");
        assert!(compute_embedding(&q, &t("((a,c),(b,d));")).unwrap().is_none());
        let phi = compute_embedding(&q, &q).unwrap().unwrap();
        assert!(verify_embedding(&phi));
        assert_eq!(phi.map().len(), q.vertex_count());
        assert!(compute_embedding(&q, &t("(a,b,z);")).is_err());
    }

    #[test]
    fn small_targets() {
        let q = t("((a,b),(c,d));");
        for target in ["a;", "(a,d);", "(a,b,c);", "(a,b,c,d);"] {
            let target = t(target);
            let phi = compute_embedding(&q, &target).unwrap().unwrap();
            assert_eq!(embedding_violations(&phi), vec![], "target {target:?}");
        }
    }

    #[test]
    fn tightening_keeps_validity() {
        let l = |s: &str| Some(Label::new(s).unwrap());
        // a hangs off a path a-s-u; s is an unlabeled degree-2 vertex
        let host = PhyloTree::new_unnormalized(
            7,
            &[(0, 1), (1, 2), (2, 3), (2, 4), (4, 5), (4, 6)],
            vec![l("a"), None, None, l("b"), None, l("d"), l("e")],
        )
        .unwrap();
        let quartet = t("((a,b)p,(d,e)q);");
        let q = |name: &str| by_name(&quartet, name);
        let loose: BTreeMap<usize, usize> = [
            (0, q("a")),
            (1, q("a")),
            (2, q("p")),
            (3, q("b")),
            (4, q("q")),
            (5, q("d")),
            (6, q("e")),
        ]
        .into();
        let loose = EmbeddingFunction::new(host, quartet.clone(), loose);
        assert!(verify_embedding(&loose));
        let tight = loose.with_tight_leaf_classes();
        assert!(verify_embedding(&tight));
        assert_eq!(tight.image(1), Some(q("p")));
        for l in quartet.labels() {
            assert_eq!(tight.preimage(quartet.leaf(l).unwrap()).len(), 1);
        }
    }
}
