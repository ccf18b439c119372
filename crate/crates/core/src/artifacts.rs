//! JSON forms of display graphs, fills, decompositions, legality reports and
//! compatibility reports. Vertices are named by their stable identifiers
//! (`leaf.a`, `t0.v3`).

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::chordal::{edge, is_chordal, ChordalError, Edge, TreeDecomposition, Triangulation};
use crate::compat::CompatReport;
use crate::display::{DisplayGraph, VertexKind};
use crate::embedding::EmbeddingFunction;
use crate::legal::{check_concise, check_legal, LegalError};
use crate::newick::write_tree;

#[derive(Debug, Error)]
pub enum ArtifactError {
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("unknown vertex {0:?}")]
    UnknownVertex(String),
    #[error(transparent)]
    Chordal(#[from] ChordalError),
    #[error(transparent)]
    Legal(#[from] LegalError),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexJson {
    pub id: String,
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    /// Profile index of the owning tree (internal vertices only).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tree: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vertex: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alias: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeJson {
    pub endpoints: [String; 2],
    pub tree: usize,
    pub internal: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphJson {
    pub vertices: Vec<VertexJson>,
    pub edges: Vec<EdgeJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FillJson {
    pub fill: Vec<[String; 2]>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NodeJson {
    pub id: usize,
    pub bag: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecompositionJson {
    pub nodes: Vec<NodeJson>,
    pub edges: Vec<[usize; 2]>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CliqueViolationJson {
    pub clique: Vec<String>,
    pub internal_edge: [String; 2],
    pub other_edge: [String; 2],
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LegalityJson {
    pub chordal: bool,
    pub legal: bool,
    /// Only decided for legal triangulations.
    pub concise: Option<bool>,
    pub lt1_violations: Vec<CliqueViolationJson>,
    pub lt2_violations: Vec<[String; 2]>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EmbeddingJson {
    pub tree_index: usize,
    /// `[supertree vertex, input tree vertex]`.
    pub pairs: Vec<(usize, String)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StatsJson {
    pub candidates: usize,
    pub examined: u64,
    pub components: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportJson {
    pub compatible: bool,
    pub supertree: Option<String>,
    pub certificate: Option<String>,
    pub fill: Option<Vec<[String; 2]>>,
    pub embeddings: Vec<EmbeddingJson>,
    pub stats: StatsJson,
}

fn pair_names(g: &DisplayGraph, (u, v): Edge) -> [String; 2] {
    [g.vertex_name(u).to_string(), g.vertex_name(v).to_string()]
}

fn fill_names(g: &DisplayGraph, fill: &BTreeSet<Edge>) -> Vec<[String; 2]> {
    fill.iter().map(|&e| pair_names(g, e)).collect()
}

pub fn graph_json(g: &DisplayGraph) -> GraphJson {
    let vertices = (0..g.vertex_count())
        .map(|v| {
            let (kind, label, tree, vertex) = match g.kind(v) {
                VertexKind::Leaf(l) => ("leaf", Some(l.to_string()), None, None),
                VertexKind::Internal { member, vertex } => {
                    ("internal", None, Some(g.profile_index(*member)), Some(*vertex))
                }
            };
            VertexJson {
                id: g.vertex_name(v).to_string(),
                kind: kind.to_string(),
                label,
                tree,
                vertex,
                alias: g.alias(v).map(str::to_string),
            }
        })
        .collect();
    let edges = g
        .edges()
        .into_iter()
        .map(|(u, v)| {
            let origin = g.edge_origin(u, v).expect("display graph edge");
            EdgeJson {
                endpoints: pair_names(g, (u, v)),
                tree: g.profile_index(origin.member),
                internal: origin.internal,
            }
        })
        .collect();
    GraphJson { vertices, edges }
}

pub fn fill_json(g: &DisplayGraph, fill: &BTreeSet<Edge>) -> FillJson {
    FillJson {
        fill: fill_names(g, fill),
    }
}

/// Reads `{"fill": [[u, v], ...]}` with vertices given by stable identifier,
/// unique internal node name, or leaf label.
pub fn parse_fill(g: &DisplayGraph, text: &str) -> Result<BTreeSet<Edge>, ArtifactError> {
    let parsed: FillJson = serde_json::from_str(text)?;
    let resolve = |name: &str| {
        g.resolve(name)
            .ok_or_else(|| ArtifactError::UnknownVertex(name.to_string()))
    };
    parsed
        .fill
        .iter()
        .map(|[a, b]| Ok(edge(resolve(a)?, resolve(b)?)))
        .collect()
}

pub fn decomposition_json(g: &DisplayGraph, d: &TreeDecomposition) -> DecompositionJson {
    DecompositionJson {
        nodes: d
            .bags()
            .iter()
            .enumerate()
            .map(|(id, bag)| NodeJson {
                id,
                bag: bag.iter().map(|&v| g.vertex_name(v).to_string()).collect(),
            })
            .collect(),
        edges: d.edges().iter().map(|&(x, y)| [x, y]).collect(),
    }
}

/// Checks a user-supplied fill. Non-chordal fills are reported, not rejected.
pub fn legality_json(g: &DisplayGraph, fill: &BTreeSet<Edge>) -> Result<LegalityJson, ArtifactError> {
    let t = Triangulation::new(g.graph().clone(), fill.iter().copied())?;
    if !is_chordal(&t.completed()) {
        return Ok(LegalityJson {
            chordal: false,
            legal: false,
            concise: None,
            lt1_violations: Vec::new(),
            lt2_violations: Vec::new(),
        });
    }
    let report = check_legal(g, &t)?;
    let concise = if report.legal {
        Some(check_concise(g, &t)?)
    } else {
        None
    };
    Ok(LegalityJson {
        chordal: true,
        legal: report.legal,
        concise,
        lt1_violations: report
            .lt1_violations
            .iter()
            .map(|v| CliqueViolationJson {
                clique: v.clique.iter().map(|&x| g.vertex_name(x).to_string()).collect(),
                internal_edge: pair_names(g, v.internal_edge),
                other_edge: pair_names(g, v.other_edge),
            })
            .collect(),
        lt2_violations: report.lt2_violations.iter().map(|&e| pair_names(g, e)).collect(),
    })
}

/// Input tree vertices are named like display graph vertices, using the
/// tree's profile index.
pub fn embedding_json(tree_index: usize, phi: &EmbeddingFunction) -> EmbeddingJson {
    let target = phi.target();
    EmbeddingJson {
        tree_index,
        pairs: phi
            .map()
            .iter()
            .map(|(&s, &t)| {
                let name = match target.label(t) {
                    Some(l) => format!("leaf.{l}"),
                    None => format!("t{tree_index}.v{t}"),
                };
                (s, name)
            })
            .collect(),
    }
}

/// Serializable summary of a report. Timing is left out so output is
/// reproducible.
pub fn report_json(report: &CompatReport) -> ReportJson {
    let witness = report.witness.as_ref();
    ReportJson {
        compatible: report.compatible,
        supertree: witness.map(|w| write_tree(&w.supertree)),
        certificate: report.certificate.clone(),
        fill: witness.map(|w| fill_names(&w.graph, w.minimum.fill())),
        embeddings: witness
            .map(|w| {
                w.embeddings
                    .iter()
                    .enumerate()
                    .map(|(i, phi)| embedding_json(i, phi))
                    .collect()
            })
            .unwrap_or_default(),
        stats: StatsJson {
            candidates: report.stats.candidates,
            examined: report.stats.examined,
            components: report.stats.components,
        },
    }
}
