//! Input loading, output files and run manifests.

use std::collections::BTreeMap;
use std::fs::{self, File};
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::Serialize;
use sha2::{Digest, Sha256};

use rls_core::eval::{write_reports_csv, EvalReport};
use rls_core::graph::{parse_edge_list, parse_node_list, write_node_list, NodeSet, ParsedGraph};
use rls_core::result::SubgraphResult;

pub fn digest(path: &Path) -> Result<String> {
    let bytes = fs::read(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(Sha256::digest(&bytes).iter().map(|b| format!("{b:02x}")).collect())
}

/// Parsed input graph, optionally cut down to its largest component.
pub fn load_graph(path: &Path, lcc: bool) -> Result<ParsedGraph> {
    let file = File::open(path).with_context(|| format!("opening {}", path.display()))?;
    let parsed = parse_edge_list(BufReader::new(file)).with_context(|| format!("parsing {}", path.display()))?;
    if !lcc {
        return Ok(parsed);
    }
    let keep = parsed.graph.largest_component();
    Ok(ParsedGraph {
        graph: parsed.graph.induced_subgraph(&keep)?,
        labels: parsed.labels_of(&keep),
    })
}

pub fn load_labels(path: &Path) -> Result<Vec<u64>> {
    let file = File::open(path).with_context(|| format!("opening {}", path.display()))?;
    parse_node_list(BufReader::new(file)).with_context(|| format!("parsing {}", path.display()))
}

pub fn load_nodes(graph: &ParsedGraph, path: &Path) -> Result<NodeSet> {
    Ok(graph.nodes_from_labels(&load_labels(path)?)?)
}

pub fn with_suffix(prefix: &Path, suffix: &str) -> PathBuf {
    let mut s = prefix.as_os_str().to_owned();
    s.push(".");
    s.push(suffix);
    PathBuf::from(s)
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    }
    Ok(BufWriter::new(File::create(path).with_context(|| format!("creating {}", path.display()))?))
}

pub fn write_labels(path: &Path, labels: &[u64]) -> Result<()> {
    write_node_list(labels, create(path)?)?;
    Ok(())
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut w = create(path)?;
    serde_json::to_writer_pretty(&mut w, value)?;
    writeln!(w)?;
    w.flush()?;
    Ok(())
}

pub fn write_csv(path: &Path, reports: &[EvalReport]) -> Result<()> {
    write_reports_csv(reports, create(path)?)?;
    Ok(())
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    let mut w = create(path)?;
    w.write_all(text.as_bytes())?;
    w.flush()?;
    Ok(())
}

#[derive(Serialize)]
struct Manifest<'a, T: Serialize> {
    tool: &'static str,
    version: &'static str,
    command: &'a str,
    options: &'a T,
    /// SHA-256 of every input file, keyed by role.
    inputs: &'a BTreeMap<String, String>,
}

/// Writes `run-manifest.json` beside the output prefix. Thread count and
/// output format are left out because they never change results.
pub fn write_manifest<T: Serialize>(prefix: &Path, command: &str, options: &T, inputs: &BTreeMap<String, String>) -> Result<()> {
    let dir = prefix.parent().unwrap_or(Path::new(""));
    let manifest = Manifest {
        tool: "rls",
        version: env!("CARGO_PKG_VERSION"),
        command,
        options,
        inputs,
    };
    write_json(&dir.join("run-manifest.json"), &manifest)
}

/// A result in external labels, as printed and stored in diagnostics.
#[derive(Serialize)]
pub struct Summary {
    pub rank: usize,
    pub algorithm: String,
    pub size: usize,
    pub lambda: f64,
    pub objective: f64,
    pub multi_component: bool,
    pub nodes: Vec<u64>,
}

impl Summary {
    pub fn new(rank: usize, graph: &ParsedGraph, r: &SubgraphResult) -> Summary {
        let mut nodes = graph.labels_of(&r.nodes);
        nodes.sort_unstable();
        Summary {
            rank,
            algorithm: r.algorithm.name().to_string(),
            size: r.nodes.len(),
            lambda: r.score.value,
            objective: r.objective,
            multi_component: r.multi_component,
            nodes,
        }
    }

    pub fn line(&self) -> String {
        format!(
            "{} size={} lambda={:.4} objective={:.4}{}",
            self.algorithm,
            self.size,
            self.lambda,
            self.objective,
            if self.multi_component { " (multi-component)" } else { "" }
        )
    }
}
