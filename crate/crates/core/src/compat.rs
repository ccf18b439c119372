//! Deciding compatibility of a profile, plus a brute-force oracle and a
//! random profile generator for testing.

use std::collections::{BTreeMap, BTreeSet};
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::chordal::{
    build_clique_tree, edge, triangulation_from_decomposition, ChordalError, CliqueTree, TreeDecomposition,
    Triangulation,
};
use crate::display::DisplayGraph;
use crate::embedding::{compute_embedding, EmbeddingFunction};
use crate::extract::{extract_supertree, ExtractError, ExtractionResult};
use crate::legal::{make_concise, search_legal_triangulation, LegalError};
use crate::tree::{displays, Label, PhyloTree, Profile, TreeError};

/// Largest label union the brute-force oracle accepts.
pub const ORACLE_MAX_TAXA: usize = 8;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CompatError {
    #[error(transparent)]
    Legal(#[from] LegalError),
    #[error(transparent)]
    Extract(#[from] ExtractError),
    #[error(transparent)]
    Chordal(#[from] ChordalError),
    #[error(transparent)]
    Tree(#[from] TreeError),
    #[error("{taxa} taxa exceed the brute-force maximum of {max}")]
    TooManyTaxa { taxa: usize, max: usize },
    #[error("topology enumeration needs 3 to {max} labels, got {got}")]
    TopologySize { got: usize, max: usize },
    #[error("invalid generator parameters: {0}")]
    BadParameters(String),
    #[error("witness supertree fails to display profile tree {0}")]
    Unsound(usize),
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SearchStats {
    pub candidates: usize,
    pub examined: u64,
    pub components: usize,
    pub elapsed: Duration,
}

/// Everything found for one connected component of the display graph.
#[derive(Clone, Debug)]
pub struct ComponentWitness {
    pub graph: DisplayGraph,
    /// Parent display graph vertex of each component vertex.
    pub to_parent: Vec<usize>,
    /// Minimum legal fill returned by the search.
    pub minimum: Triangulation,
    /// Legal and concise triangulation after contraction.
    pub concise: Triangulation,
    pub clique_tree: CliqueTree,
    pub extraction: ExtractionResult,
}

#[derive(Clone, Debug)]
pub struct Witness {
    pub supertree: PhyloTree,
    /// One embedding per profile tree, in profile order.
    pub embeddings: Vec<EmbeddingFunction>,
    /// Display graph of the informative profile trees.
    pub graph: DisplayGraph,
    /// Minimum legal triangulation of `graph`.
    pub minimum: Triangulation,
    /// Concise legal triangulation of `graph`.
    pub concise: Triangulation,
    /// Clique trees of the concise triangulation, components chained by one
    /// edge between their first nodes.
    pub decomposition: TreeDecomposition,
    pub components: Vec<ComponentWitness>,
}

#[derive(Clone, Debug)]
pub struct CompatReport {
    pub compatible: bool,
    pub witness: Option<Witness>,
    /// Why the search came up empty.
    pub certificate: Option<String>,
    pub stats: SearchStats,
}

/// Decides compatibility by searching every component of the display graph
/// for a legal triangulation, then extracts and checks a supertree.
pub fn decide(profile: &Profile, limit: usize) -> Result<CompatReport, CompatError> {
    let start = Instant::now();
    let graph = DisplayGraph::new(profile);
    let components = graph.components();
    let mut stats = SearchStats {
        components: components.len(),
        ..SearchStats::default()
    };
    let mut found = Vec::with_capacity(components.len());
    for comp in components {
        let outcome = search_legal_triangulation(&comp.graph, limit)?;
        stats.candidates += outcome.candidates;
        stats.examined += outcome.examined;
        let Some(minimum) = outcome.triangulation.clone() else {
            stats.elapsed = start.elapsed();
            return Ok(CompatReport {
                compatible: false,
                witness: None,
                certificate: Some(outcome.certificate()),
                stats,
            });
        };
        let first = build_clique_tree(&minimum.completed())?;
        let contracted = make_concise(&comp.graph, &first)?;
        let concise = triangulation_from_decomposition(comp.graph.graph(), &contracted)?;
        let clique_tree = build_clique_tree(&concise.completed())?;
        let extraction = extract_supertree(&comp.graph, &clique_tree)?;
        found.push(ComponentWitness {
            graph: comp.graph,
            to_parent: comp.to_parent,
            minimum,
            concise,
            clique_tree,
            extraction,
        });
    }

    let covered: BTreeSet<Label> = graph.leaves().filter_map(|v| graph.leaf_label(v).cloned()).collect();
    let extra: BTreeSet<Label> = profile.label_union().difference(&covered).cloned().collect();
    let parts: Vec<PhyloTree> = found.iter().map(|c| c.extraction.supertree.clone()).collect();
    let supertree = join_supertrees(&parts, &extra)?;

    let mut embeddings = Vec::with_capacity(profile.len());
    for (i, tree) in profile.trees().iter().enumerate() {
        if !displays(&supertree, tree)? {
            return Err(CompatError::Unsound(i));
        }
        embeddings.push(compute_embedding(&supertree, tree)?.ok_or(CompatError::Unsound(i))?);
    }
    let lift = |pick: fn(&ComponentWitness) -> &Triangulation| -> Result<Triangulation, CompatError> {
        let fill = found.iter().flat_map(|c| {
            pick(c)
                .fill()
                .iter()
                .map(|&(u, v)| edge(c.to_parent[u], c.to_parent[v]))
                .collect::<Vec<_>>()
        });
        Ok(Triangulation::new(graph.graph().clone(), fill)?)
    };
    let minimum = lift(|c| &c.minimum)?;
    let concise = lift(|c| &c.concise)?;
    let decomposition = chain_decompositions(&found);
    stats.elapsed = start.elapsed();
    Ok(CompatReport {
        compatible: true,
        witness: Some(Witness {
            supertree,
            embeddings,
            graph,
            minimum,
            concise,
            decomposition,
            components: found,
        }),
        certificate: None,
        stats,
    })
}

fn chain_decompositions(parts: &[ComponentWitness]) -> TreeDecomposition {
    let mut bags = Vec::new();
    let mut edges = Vec::new();
    for (i, c) in parts.iter().enumerate() {
        let offset = bags.len();
        if i > 0 {
            edges.push((0, offset));
        }
        bags.extend(
            c.clique_tree
                .bags()
                .iter()
                .map(|b| b.iter().map(|&v| c.to_parent[v]).collect::<BTreeSet<usize>>()),
        );
        edges.extend(c.clique_tree.edges().iter().map(|&(x, y)| (x + offset, y + offset)));
    }
    TreeDecomposition::new(bags, edges)
}

/// Joins component supertrees into one tree: each gets a new vertex on its
/// first edge, and those vertices hang off a new center, which also carries
/// any `extra` labels as leaves.
pub fn join_supertrees(parts: &[PhyloTree], extra: &BTreeSet<Label>) -> Result<PhyloTree, TreeError> {
    if parts.is_empty() {
        return PhyloTree::star(extra);
    }
    if parts.len() == 1 && extra.is_empty() {
        return Ok(parts[0].clone());
    }
    let mut labels: Vec<Option<Label>> = vec![None];
    let mut edges = Vec::new();
    let center = 0;
    for part in parts {
        let offset = labels.len();
        labels.extend((0..part.vertex_count()).map(|v| part.label(v).cloned()));
        let all = part.edges();
        let (a, b) = all[0];
        let hub = labels.len();
        labels.push(None);
        edges.push((a + offset, hub));
        edges.push((hub, b + offset));
        edges.extend(all[1..].iter().map(|&(u, v)| (u + offset, v + offset)));
        edges.push((center, hub));
    }
    for label in extra {
        edges.push((center, labels.len()));
        labels.push(Some(label.clone()));
    }
    let joined = PhyloTree::new_unnormalized(labels.len(), &edges, labels)?;
    Ok(joined.normalized()?.0)
}

/// Result of the brute-force oracle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleVerdict {
    /// First binary topology displaying every tree, if any.
    pub witness: Option<PhyloTree>,
    pub topologies_examined: usize,
}

impl OracleVerdict {
    pub fn compatible(&self) -> bool {
        self.witness.is_some()
    }
}

/// Tries every binary topology on the label union. Any supertree can be
/// refined to a binary one that still displays everything, so binary
/// topologies suffice.
pub fn brute_force_compatible(profile: &Profile) -> Result<OracleVerdict, CompatError> {
    let labels = profile.label_union();
    if labels.len() > ORACLE_MAX_TAXA {
        return Err(CompatError::TooManyTaxa {
            taxa: labels.len(),
            max: ORACLE_MAX_TAXA,
        });
    }
    if labels.len() <= 3 {
        return Ok(OracleVerdict {
            witness: Some(PhyloTree::star(&labels)?),
            topologies_examined: 0,
        });
    }
    let bit: BTreeMap<&Label, u32> = labels.iter().enumerate().map(|(i, l)| (l, 1 << i)).collect();
    let required: Vec<(u32, BTreeSet<u32>)> = profile
        .trees()
        .iter()
        .map(|t| {
            let within = t.labels().fold(0, |m, l| m | bit[l]);
            (within, restricted_splits(&side_masks(t, &bit), within))
        })
        .collect();
    let mut examined = 0;
    for candidate in enumerate_binary_topologies(&labels)? {
        examined += 1;
        let sides = side_masks(&candidate, &bit);
        if required
            .iter()
            .all(|(within, needed)| needed.is_subset(&restricted_splits(&sides, *within)))
        {
            return Ok(OracleVerdict {
                witness: Some(candidate),
                topologies_examined: examined,
            });
        }
    }
    Ok(OracleVerdict {
        witness: None,
        topologies_examined: examined,
    })
}

/// Label mask below every non-root vertex, rooted at vertex 0.
fn side_masks(tree: &PhyloTree, bit: &BTreeMap<&Label, u32>) -> Vec<u32> {
    let n = tree.vertex_count();
    let mut parent = vec![usize::MAX; n];
    let mut order = vec![0];
    let mut i = 0;
    while i < order.len() {
        let v = order[i];
        i += 1;
        for &w in tree.neighbors(v) {
            if w != parent[v] && w != 0 {
                parent[w] = v;
                order.push(w);
            }
        }
    }
    let mut below: Vec<u32> = (0..n).map(|v| tree.label(v).map_or(0, |l| bit[l])).collect();
    for &v in order.iter().skip(1).rev() {
        below[parent[v]] |= below[v];
    }
    order[1..].iter().map(|&v| below[v]).collect()
}

/// Splits with both sides of size at least two after restricting to `within`,
/// each given by the side avoiding the lowest bit of `within`.
fn restricted_splits(sides: &[u32], within: u32) -> BTreeSet<u32> {
    let low = within & within.wrapping_neg();
    sides
        .iter()
        .filter_map(|&s| {
            let a = s & within;
            let b = within & !s;
            (a.count_ones() >= 2 && b.count_ones() >= 2).then_some(if a & low != 0 { b } else { a })
        })
        .collect()
}

/// Builds a binary tree by inserting labels `3..` one at a time into the edge
/// picked by `choices`, starting from a star on the first three labels.
fn insert_leaves(labels: &[Label], choices: &[usize]) -> Result<PhyloTree, TreeError> {
    let mut names: Vec<Option<Label>> = labels[..3].iter().cloned().map(Some).collect();
    names.push(None);
    let mut edges = vec![(0, 3), (1, 3), (2, 3)];
    for (label, &choice) in labels[3..].iter().zip(choices) {
        let (a, b) = edges[choice];
        let w = names.len();
        names.push(None);
        let leaf = names.len();
        names.push(Some(label.clone()));
        edges[choice] = (a, w);
        edges.push((w, b));
        edges.push((w, leaf));
    }
    PhyloTree::new(names.len(), &edges, names)
}

/// Every binary unrooted topology on a label set, each exactly once.
pub struct BinaryTopologies {
    labels: Vec<Label>,
    choices: Vec<usize>,
    done: bool,
}

impl Iterator for BinaryTopologies {
    type Item = PhyloTree;

    fn next(&mut self) -> Option<PhyloTree> {
        if self.done {
            return None;
        }
        let tree = insert_leaves(&self.labels, &self.choices).expect("insertion builds a valid tree");
        // Odometer: inserting label j (0-based) has 2j - 3 edges to pick from.
        self.done = true;
        for (i, c) in self.choices.iter_mut().enumerate().rev() {
            let j = i + 3;
            if *c + 1 < 2 * j - 3 {
                *c += 1;
                self.done = false;
                break;
            }
            *c = 0;
        }
        Some(tree)
    }
}

/// Lazily yields the `(2n - 5)!!` binary topologies on `labels`.
pub fn enumerate_binary_topologies(labels: &BTreeSet<Label>) -> Result<BinaryTopologies, CompatError> {
    if !(3..=ORACLE_MAX_TAXA).contains(&labels.len()) {
        return Err(CompatError::TopologySize {
            got: labels.len(),
            max: ORACLE_MAX_TAXA,
        });
    }
    Ok(BinaryTopologies {
        labels: labels.iter().cloned().collect(),
        choices: vec![0; labels.len() - 3],
        done: false,
    })
}

/// Uniform random leaf insertion over a shuffled label order.
pub fn random_binary_tree<R: Rng>(rng: &mut R, labels: &BTreeSet<Label>) -> Result<PhyloTree, TreeError> {
    if labels.len() < 3 {
        return PhyloTree::star(labels);
    }
    let mut order: Vec<Label> = labels.iter().cloned().collect();
    order.shuffle(rng);
    let choices: Vec<usize> = (3..order.len()).map(|j| rng.gen_range(0..2 * j - 3)).collect();
    insert_leaves(&order, &choices)
}

/// Taxon name for index `i`: `a` to `z`, then `t26`, `t27`, ...
pub fn taxon_name(i: usize) -> String {
    if i < 26 {
        char::from(b'a' + i as u8).to_string()
    } else {
        format!("t{i}")
    }
}

/// `k` random binary trees with `n` leaves each, drawn from a pool of
/// `n + round((1 - overlap) * n)` taxa. Same seed, same profile.
pub fn random_profile(seed: u64, k: usize, n: usize, overlap: f64) -> Result<Profile, CompatError> {
    if k == 0 {
        return Err(CompatError::BadParameters("at least one tree is needed".into()));
    }
    if n < 3 {
        return Err(CompatError::BadParameters("trees need at least three taxa".into()));
    }
    if !(0.0..=1.0).contains(&overlap) {
        return Err(CompatError::BadParameters(format!(
            "overlap {overlap} is outside [0, 1]"
        )));
    }
    let pool = n + ((1.0 - overlap) * n as f64).round() as usize;
    let names: Vec<Label> = (0..pool)
        .map(|i| Label::new(taxon_name(i)).expect("non-empty"))
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut trees = Vec::with_capacity(k);
    for _ in 0..k {
        let picked: BTreeSet<Label> = rand::seq::index::sample(&mut rng, pool, n)
            .into_iter()
            .map(|i| names[i].clone())
            .collect();
        trees.push(random_binary_tree(&mut rng, &picked)?);
    }
    Ok(Profile::new(trees)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::legal::DEFAULT_CANDIDATE_LIMIT;
    use crate::newick::{parse_profile, parse_tree, write_tree};
    use crate::tree::{is_label_isomorphic, label_set};

    const SAME: &str = "((a,b)u1,(c,d)v1);\n((a,b)u2,(c,d)v2);";
    const CONFLICT: &str = "((a,b),(c,d));\n((a,c),(b,d));";
    const OK: &str = "((a,b),(c,d));\n((a,b),(c,e));";

    fn decide_text(text: &str) -> CompatReport {
        decide(&parse_profile(text).unwrap(), DEFAULT_CANDIDATE_LIMIT).unwrap()
    }

    fn oracle_text(text: &str) -> OracleVerdict {
        brute_force_compatible(&parse_profile(text).unwrap()).unwrap()
    }

    #[test]
    fn single_quartet() {
        let r = decide_text("((a,b),(c,d));");
        assert!(r.compatible);
        let w = r.witness.unwrap();
        assert!(is_label_isomorphic(
            &w.supertree,
            &parse_tree("((a,b),(c,d));").unwrap()
        ));
    }

    #[test]
    fn conflicting_quartets() {
        let r = decide_text(CONFLICT);
        assert!(!r.compatible && r.witness.is_none());
        assert_eq!(r.certificate.as_deref(), Some("16/16 fill subsets exhausted"));
        assert_eq!((r.stats.candidates, r.stats.examined), (4, 16));
        let o = oracle_text(CONFLICT);
        assert!(!o.compatible());
        assert_eq!(o.topologies_examined, 3);
    }

    #[test]
    fn overlapping_quartets() {
        let r = decide_text(OK);
        let w = r.witness.unwrap();
        assert_eq!(w.supertree.label_set(), label_set(["a", "b", "c", "d", "e"]));
        let o = oracle_text(OK);
        assert!(o.compatible());
        assert!(o.topologies_examined <= 15);
    }

    #[test]
    fn same_quartets() {
        let r = decide_text(SAME);
        let w = r.witness.unwrap();
        assert_eq!(w.minimum.fill().len(), 3);
        assert_eq!(write_tree(&w.supertree), "(a,b,(c,d));");
        let o = oracle_text(SAME);
        assert!(is_label_isomorphic(
            o.witness.as_ref().unwrap(),
            &parse_tree("((a,b),(c,d));").unwrap()
        ));
    }

    #[test]
    fn small_trees_and_components() {
        let r = decide_text("((a,b),(c,d));\n((e,f),(g,h));\n(x,y);\nz;");
        let w = r.witness.unwrap();
        assert_eq!(r.stats.components, 2);
        assert_eq!(w.supertree.leaf_count(), 11);
        assert_eq!(w.embeddings.len(), 4);
        assert!(w.supertree.is_normalized());

        let tiny = decide_text("(a,b);\n(b,c);");
        assert_eq!(tiny.witness.unwrap().supertree.label_set(), label_set(["a", "b", "c"]));
    }

    #[test]
    fn topology_counts() {
        let count = |n: usize| {
            let labels: BTreeSet<Label> = (0..n).map(|i| Label::new(taxon_name(i)).unwrap()).collect();
            let all: Vec<PhyloTree> = enumerate_binary_topologies(&labels).unwrap().collect();
            let distinct: BTreeSet<String> = all.iter().map(PhyloTree::canonical_form).collect();
            assert_eq!(distinct.len(), all.len());
            all.len()
        };
        assert_eq!(count(3), 1);
        assert_eq!(count(4), 3);
        assert_eq!(count(5), 15);
        assert_eq!(count(6), 105);
        assert!(enumerate_binary_topologies(&label_set(["a", "b"])).is_err());
    }

    #[test]
    fn oracle_caps_taxa() {
        let p = parse_profile("((a,b),(c,d),(e,f),(g,h),i);").unwrap();
        assert_eq!(
            brute_force_compatible(&p).unwrap_err(),
            CompatError::TooManyTaxa { taxa: 9, max: 8 }
        );
    }

    #[test]
    fn random_profiles_are_deterministic() {
        let a = random_profile(1, 1, 4, 1.0).unwrap();
        assert_eq!(a.trees()[0].leaf_count(), 4);
        assert!(decide(&a, DEFAULT_CANDIDATE_LIMIT).unwrap().compatible);
        assert_eq!(
            random_profile(7, 3, 5, 0.5).unwrap(),
            random_profile(7, 3, 5, 0.5).unwrap()
        );
        let p = random_profile(3, 2, 4, 0.75).unwrap();
        assert!(p.label_union().len() <= 5);
        assert!(random_profile(1, 0, 4, 0.5).is_err());
        assert!(random_profile(1, 2, 2, 0.5).is_err());
        assert!(random_profile(1, 2, 4, 1.5).is_err());
        assert!(random_profile(1, 2, 4, f64::NAN).is_err());
    }

    #[test]
    fn seed_sweep_matches_oracle() {
        for seed in 1..=100 {
            let p = random_profile(seed, 2, 4, 0.75).unwrap();
            let fast = decide(&p, DEFAULT_CANDIDATE_LIMIT).unwrap().compatible;
            assert_eq!(fast, brute_force_compatible(&p).unwrap().compatible(), "seed {seed}");
        }
    }
}
