//! Newick reading and writing.
//!
//! Format notes:
//! - One tree per string, terminated by `;`. Whitespace between tokens and
//!   `[...]` comments are ignored.
//! - Branch lengths (`:0.5`) are parsed and discarded; a malformed length is
//!   a syntax error.
//! - Unquoted names turn `_` into a space. Quoted names (`'...'`, with `''`
//!   for a literal quote) are taken verbatim.
//! - Leaf names become labels and must be unique. Internal node names are
//!   kept as vertex names only; they never become labels.
//! - The parse is unrooted afterwards: a degree-2 root is suppressed, as is
//!   any other unlabeled degree-2 vertex. A degree-1 root is accepted only
//!   when it is named and the tree then has exactly two leaves.
//!
//! Profile files hold one tree per line; blank lines and lines starting with
//! `#` are skipped.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::tree::{Label, PhyloTree, Profile, TreeError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum NewickError {
    #[error("syntax error at byte {position}: {message}")]
    Syntax { position: usize, message: String },
    #[error("leaf without a name at byte {0}")]
    UnnamedLeaf(usize),
    #[error("duplicate leaf label `{0}`")]
    DuplicateLabel(Label),
    #[error("root has a single child")]
    DegreeOneRoot,
    #[error(transparent)]
    Tree(#[from] TreeError),
    #[error("{}", LineErrors(.0))]
    Profile(Vec<LineError>),
    #[error("profile file contains no trees")]
    EmptyProfile,
}

/// A parse failure on one line of a profile file (1-based line number).
#[derive(Debug, Clone, PartialEq)]
pub struct LineError {
    pub line: usize,
    pub error: NewickError,
}

struct LineErrors<'a>(&'a [LineError]);

impl fmt::Display for LineErrors<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            write!(f, "line {}: {}", e.line, e.error)?;
        }
        Ok(())
    }
}

struct Node {
    name: Option<String>,
    children: Vec<usize>,
}

struct Parser<'a> {
    text: &'a str,
    pos: usize,
    nodes: Vec<Node>,
}

impl<'a> Parser<'a> {
    fn syntax<T>(&self, message: impl Into<String>) -> Result<T, NewickError> {
        Err(NewickError::Syntax {
            position: self.pos,
            message: message.into(),
        })
    }

    fn peek(&self) -> Option<char> {
        self.text[self.pos..].chars().next()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += c.len_utf8();
        Some(c)
    }

    fn skip_blank(&mut self) -> Result<(), NewickError> {
        loop {
            match self.peek() {
                Some(c) if c.is_whitespace() => {
                    self.bump();
                }
                Some('[') => {
                    let start = self.pos;
                    match self.text[self.pos..].find(']') {
                        Some(off) => self.pos += off + 1,
                        None => {
                            self.pos = start;
                            return self.syntax("unterminated comment");
                        }
                    }
                }
                _ => return Ok(()),
            }
        }
    }

    fn subtree(&mut self) -> Result<usize, NewickError> {
        self.skip_blank()?;
        let id = self.nodes.len();
        self.nodes.push(Node {
            name: None,
            children: Vec::new(),
        });
        if self.peek() == Some('(') {
            self.bump();
            loop {
                let child = self.subtree()?;
                self.nodes[id].children.push(child);
                self.skip_blank()?;
                match self.bump() {
                    Some(',') => continue,
                    Some(')') => break,
                    Some(c) => {
                        self.pos -= c.len_utf8();
                        return self.syntax(format!("expected ',' or ')', found '{c}'"));
                    }
                    None => return self.syntax("unexpected end of input inside '('"),
                }
            }
        }
        self.skip_blank()?;
        let start = self.pos;
        let name = self.name()?;
        if self.nodes[id].children.is_empty() && name.is_none() {
            return Err(NewickError::UnnamedLeaf(start));
        }
        self.nodes[id].name = name;
        self.skip_blank()?;
        if self.peek() == Some(':') {
            self.bump();
            self.skip_blank()?;
            self.branch_length()?;
        }
        Ok(id)
    }

    fn name(&mut self) -> Result<Option<String>, NewickError> {
        if self.peek() == Some('\'') {
            self.bump();
            let mut out = String::new();
            loop {
                match self.bump() {
                    Some('\'') if self.peek() == Some('\'') => {
                        self.bump();
                        out.push('\'');
                    }
                    Some('\'') => break,
                    Some(c) => out.push(c),
                    None => return self.syntax("unterminated quoted name"),
                }
            }
            return Ok((!out.is_empty()).then_some(out));
        }
        let start = self.pos;
        while let Some(c) = self.peek() {
            if c.is_whitespace() || "()[]':;,".contains(c) {
                break;
            }
            self.bump();
        }
        let raw = &self.text[start..self.pos];
        Ok((!raw.is_empty()).then(|| raw.replace('_', " ")))
    }

    fn branch_length(&mut self) -> Result<(), NewickError> {
        let start = self.pos;
        while let Some(c) = self.peek() {
            if c.is_ascii_digit() || "+-.eE".contains(c) {
                self.bump();
            } else {
                break;
            }
        }
        let raw = &self.text[start..self.pos];
        if raw.parse::<f64>().is_err() {
            self.pos = start;
            return self.syntax(format!("malformed branch length `{raw}`"));
        }
        Ok(())
    }
}

/// Parses one Newick tree.
pub fn parse_tree(text: &str) -> Result<PhyloTree, NewickError> {
    let mut p = Parser {
        text,
        pos: 0,
        nodes: Vec::new(),
    };
    let root = p.subtree()?;
    p.skip_blank()?;
    if p.bump() != Some(';') {
        p.pos = p.pos.min(text.len());
        return p.syntax("expected ';' after the tree");
    }
    p.skip_blank()?;
    if p.pos != text.len() {
        return p.syntax("trailing characters after ';'");
    }
    build(p.nodes, root)
}

fn build(nodes: Vec<Node>, root: usize) -> Result<PhyloTree, NewickError> {
    let mut labels: Vec<Option<Label>> = Vec::with_capacity(nodes.len());
    let mut names = Vec::with_capacity(nodes.len());
    let mut edges = Vec::new();
    let mut seen = BTreeSet::new();
    for (id, node) in nodes.iter().enumerate() {
        let leaf = node.children.is_empty() || (id == root && node.children.len() == 1);
        if leaf {
            if node.children.len() == 1 && node.name.is_none() {
                return Err(NewickError::DegreeOneRoot);
            }
            let label = Label::new(node.name.clone().expect("leaves are named"))?;
            if !seen.insert(label.clone()) {
                return Err(NewickError::DuplicateLabel(label));
            }
            labels.push(Some(label));
            names.push(None);
        } else {
            labels.push(None);
            names.push(node.name.clone());
        }
        edges.extend(node.children.iter().map(|&c| (id, c)));
    }
    if nodes[root].children.len() == 1 && seen.len() != 2 {
        return Err(NewickError::DegreeOneRoot);
    }
    let raw = PhyloTree::new_unnormalized(nodes.len(), &edges, labels)?.with_names(names);
    let (tree, _) = raw.normalized()?;
    Ok(tree)
}

/// Parses a profile file: one tree per line, `#` comments and blank lines
/// skipped. All failing lines are reported together.
pub fn parse_profile(text: &str) -> Result<Profile, NewickError> {
    let mut trees = Vec::new();
    let mut errors = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        match parse_tree(trimmed) {
            Ok(tree) => trees.push(tree),
            Err(error) => errors.push(LineError { line: i + 1, error }),
        }
    }
    if !errors.is_empty() {
        return Err(NewickError::Profile(errors));
    }
    if trees.is_empty() {
        return Err(NewickError::EmptyProfile);
    }
    Ok(Profile::new(trees)?)
}

/// Writes a tree as Newick. Deterministic: rooted at the neighbor of the
/// smallest label, children ordered by their smallest descendant label.
pub fn write_tree(tree: &PhyloTree) -> String {
    let mut out = String::new();
    let first = tree.labels().next().and_then(|l| tree.leaf(l)).unwrap_or(0);
    match tree.vertex_count() {
        1 => write_label(&mut out, tree, 0),
        2 => {
            let mut pair: Vec<_> = (0..2).collect();
            pair.sort_by_key(|&v| tree.label(v).cloned());
            out.push('(');
            write_label(&mut out, tree, pair[0]);
            out.push(',');
            write_label(&mut out, tree, pair[1]);
            out.push(')');
        }
        _ => {
            let root = if tree.is_labeled(first) {
                tree.neighbors(first)[0]
            } else {
                first
            };
            write_subtree(&mut out, tree, root, usize::MAX);
        }
    }
    out.push(';');
    out
}

fn min_label(tree: &PhyloTree, v: usize, parent: usize) -> Option<Label> {
    let own = tree.label(v).cloned();
    tree.neighbors(v)
        .iter()
        .filter(|&&w| w != parent)
        .filter_map(|&w| min_label(tree, w, v))
        .chain(own)
        .min()
}

fn write_subtree(out: &mut String, tree: &PhyloTree, v: usize, parent: usize) {
    let mut children: Vec<usize> = tree.neighbors(v).iter().copied().filter(|&w| w != parent).collect();
    if children.is_empty() {
        write_label(out, tree, v);
        return;
    }
    // Unlabeled subtrees sort last.
    children.sort_by_key(|&w| (min_label(tree, w, v).is_none(), min_label(tree, w, v)));
    out.push('(');
    for (i, &w) in children.iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        write_subtree(out, tree, w, v);
    }
    out.push(')');
}

fn write_label(out: &mut String, tree: &PhyloTree, v: usize) {
    let Some(label) = tree.label(v) else {
        return;
    };
    let s = label.as_str();
    let plain = s.chars().all(|c| !c.is_whitespace() && !"()[]':;,_".contains(c));
    if plain {
        out.push_str(s);
    } else {
        out.push('\'');
        out.push_str(&s.replace('\'', "''"));
        out.push('\'');
    }
}
