//! Compatibility of unrooted phylogenetic trees.
//!
//! A profile of trees is compatible exactly when its display graph has a
//! legal triangulation. This crate builds the display graph, searches for
//! such a triangulation, and turns a found one back into a supertree with
//! explicit embedding functions. The other direction is covered too: a
//! supertree and its embeddings give a tree decomposition whose fill-in is
//! legal.

pub mod artifacts;
pub mod chordal;
pub mod compat;
pub mod display;
pub mod embedding;
pub mod extract;
pub mod legal;
pub mod newick;
pub mod tree;

pub use compat::{brute_force_compatible, decide, CompatError, CompatReport};
pub use display::DisplayGraph;
pub use embedding::{compute_embedding, verify_embedding, EmbeddingFunction};
pub use newick::{parse_profile, parse_tree, write_tree, NewickError};
pub use tree::{displays, is_label_isomorphic, Label, PhyloTree, Profile, TreeError};
