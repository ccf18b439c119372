//! `treecompat` command-line tool.
//!
//! Exit codes: 0 compatible / legal / success, 1 incompatible / illegal,
//! 2 input or resource error.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use treecompat::artifacts::{decomposition_json, fill_json, graph_json, legality_json, parse_fill, report_json};
use treecompat::compat::{decide, random_profile, CompatReport};
use treecompat::legal::DEFAULT_CANDIDATE_LIMIT;
use treecompat::{parse_profile, write_tree, DisplayGraph, Profile};

#[derive(Parser)]
#[command(name = "treecompat", version, about = "Compatibility of unrooted phylogenetic trees")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether the trees in a profile are compatible.
    Check {
        profile: PathBuf,
        /// Cap on candidate fill edges per component (default: TREECOMPAT_LIMIT or 24).
        #[arg(long)]
        limit: Option<usize>,
        #[arg(long)]
        json: bool,
    },
    /// Print a supertree displaying every tree of the profile.
    Supertree {
        profile: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[arg(long)]
        limit: Option<usize>,
    },
    /// Emit the display graph, a minimum legal fill, or a concise clique tree.
    Triangulate {
        profile: PathBuf,
        #[arg(long, value_enum)]
        emit: Emit,
        #[arg(long)]
        limit: Option<usize>,
    },
    /// Check a fill-in for chordality, legality and conciseness.
    Verify {
        profile: PathBuf,
        /// Inline JSON (`{"fill": [[u, v], ...]}`) or a path to a JSON file.
        #[arg(long)]
        fill: String,
    },
    /// Write a random profile.
    Gen {
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        trees: usize,
        #[arg(long)]
        taxa: usize,
        #[arg(long, default_value_t = 0.5)]
        overlap: f64,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Emit {
    Graph,
    Fill,
    Decomposition,
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<u8> {
    match cli.command {
        Command::Check { profile, limit, json } => {
            let report = decide_file(&profile, limit)?;
            if json {
                println!("{}", serde_json::to_string_pretty(&report_json(&report))?);
            } else if let Some(w) = &report.witness {
                println!("compatible: {}", write_tree(&w.supertree));
            } else {
                println!(
                    "incompatible ({})",
                    report.certificate.as_deref().unwrap_or("no legal triangulation")
                );
            }
            Ok(if report.compatible { 0 } else { 1 })
        }
        Command::Supertree { profile, output, limit } => {
            let report = decide_file(&profile, limit)?;
            let Some(w) = &report.witness else {
                eprintln!(
                    "incompatible ({}); no supertree exists",
                    report.certificate.as_deref().unwrap_or("no legal triangulation")
                );
                return Ok(1);
            };
            emit(output.as_deref(), &format!("{}\n", write_tree(&w.supertree)))?;
            Ok(0)
        }
        Command::Triangulate {
            profile,
            emit: what,
            limit,
        } => {
            let p = read_profile(&profile)?;
            if let Emit::Graph = what {
                let g = DisplayGraph::new(&p);
                println!("{}", serde_json::to_string_pretty(&graph_json(&g))?);
                return Ok(0);
            }
            let report = decide(&p, resolve_limit(limit)?)?;
            let Some(w) = &report.witness else {
                eprintln!("incompatible ({})", report.certificate.as_deref().unwrap_or(""));
                return Ok(1);
            };
            let text = match what {
                Emit::Fill => serde_json::to_string_pretty(&fill_json(&w.graph, w.minimum.fill()))?,
                Emit::Decomposition => serde_json::to_string_pretty(&decomposition_json(&w.graph, &w.decomposition))?,
                Emit::Graph => unreachable!("handled above"),
            };
            println!("{text}");
            Ok(0)
        }
        Command::Verify { profile, fill } => {
            let p = read_profile(&profile)?;
            let g = DisplayGraph::new(&p);
            let text = if fill.trim_start().starts_with('{') {
                fill
            } else {
                fs::read_to_string(&fill).with_context(|| format!("reading {fill}"))?
            };
            let edges = parse_fill(&g, &text)?;
            let report = legality_json(&g, &edges)?;
            println!("{}", serde_json::to_string_pretty(&report)?);
            Ok(if report.legal { 0 } else { 1 })
        }
        Command::Gen {
            seed,
            trees,
            taxa,
            overlap,
            output,
        } => {
            let p = random_profile(seed, trees, taxa, overlap)?;
            let text: String = p.trees().iter().map(|t| write_tree(t) + "\n").collect();
            emit(output.as_deref(), &text)?;
            Ok(0)
        }
    }
}

fn read_profile(path: &Path) -> Result<Profile> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_profile(&text).with_context(|| format!("parsing {}", path.display()))
}

fn resolve_limit(flag: Option<usize>) -> Result<usize> {
    if let Some(limit) = flag {
        return Ok(limit);
    }
    match std::env::var("TREECOMPAT_LIMIT") {
        Ok(value) => value
            .trim()
            .parse()
            .with_context(|| format!("TREECOMPAT_LIMIT={value:?} is not a count")),
        Err(std::env::VarError::NotPresent) => Ok(DEFAULT_CANDIDATE_LIMIT),
        Err(e) => bail!("TREECOMPAT_LIMIT: {e}"),
    }
}

fn decide_file(path: &Path, limit: Option<usize>) -> Result<CompatReport> {
    let p = read_profile(path)?;
    Ok(decide(&p, resolve_limit(limit)?)?)
}

fn emit(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}
