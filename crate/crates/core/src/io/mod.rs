//! Graph file formats, synthetic datasets and the experiment runner.

mod experiment;
mod gxl;
mod synthetic;
mod text;

use std::collections::HashSet;
use std::fs;
use std::path::Path;

use thiserror::Error;

pub use experiment::{
    run_experiment, Aggregate, ExperimentConfig, ExperimentReport, PairRecord, RunSpec, CSV_HEADER,
};
pub use gxl::{parse_gxl_subset, GxlGraph};
pub use synthetic::{generate_dataset, generate_synthetic};
pub use text::{parse_text_graph, parse_text_graphs, serialize_text, serialize_text_all};

use crate::error::{GedError, Result};
use crate::model::LabeledGraph;

/// Input errors with the offending line (1-based) where one exists.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("line {line}: malformed line: {reason}")]
    Malformed { line: usize, reason: String },
    #[error("line {line}: edge {i} {j} references a node outside 1..={order}")]
    DanglingEdge { line: usize, i: usize, j: usize, order: usize },
    #[error("line {line}: duplicate edge {i} {j}")]
    DuplicateEdge { line: usize, i: usize, j: usize },
    #[error("line {line}: self-loop on node {node}")]
    SelfLoop { line: usize, node: usize },
    #[error("line {line}: node {node} outside 1..={order}")]
    NodeOutOfRange { line: usize, node: usize, order: usize },
    #[error("line {line}: node {node} declared twice")]
    DuplicateNode { line: usize, node: usize },
    #[error("graph {graph}: node {node} is never declared")]
    MissingNode { graph: String, node: usize },
    #[error("expected exactly one graph, found {0}")]
    GraphCount(usize),
    #[error("duplicate graph id {0}")]
    DuplicateGraphId(String),
    #[error("invalid GXL: {0}")]
    Xml(String),
    #[error("line {line}: {element} element without `{attribute}`")]
    MissingId { line: usize, element: String, attribute: String },
    #[error("line {line}: edge references unknown node `{node}`")]
    UnknownNode { line: usize, node: String },
}

/// Supported dataset formats.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Text,
    Gxl,
}

impl Format {
    fn extensions(self) -> &'static [&'static str] {
        match self {
            Format::Text => &["txt", "graph", "graphs"],
            Format::Gxl => &["gxl"],
        }
    }
}

fn parse_file(path: &Path, format: Format) -> Result<Vec<LabeledGraph>> {
    let text = fs::read_to_string(path).map_err(|e| GedError::io(path, e))?;
    let with_path = |e: ParseError| GedError::io(path, e);
    match format {
        Format::Text => parse_text_graphs(&text).map_err(with_path),
        Format::Gxl => {
            let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("graph");
            let parsed = parse_gxl_subset(&text, stem).map_err(with_path)?;
            for warning in &parsed.warnings {
                log::warn!("{}: {warning}", path.display());
            }
            Ok(vec![parsed.graph])
        }
    }
}

/// Loads every graph from a file, or from the matching files of a directory
/// in file-name order. Graph ids must be unique.
pub fn load_dataset(path: impl AsRef<Path>, format: Format) -> Result<Vec<LabeledGraph>> {
    let path = path.as_ref();
    let mut graphs = Vec::new();
    if path.is_dir() {
        let mut files = Vec::new();
        for entry in fs::read_dir(path).map_err(|e| GedError::io(path, e))? {
            let file = entry.map_err(|e| GedError::io(path, e))?.path();
            let ext = file.extension().and_then(|e| e.to_str()).unwrap_or("");
            if file.is_file() && format.extensions().contains(&ext) {
                files.push(file);
            }
        }
        files.sort();
        for file in files {
            graphs.extend(parse_file(&file, format)?);
        }
    } else {
        graphs = parse_file(path, format)?;
    }
    let mut ids = HashSet::new();
    for g in &graphs {
        if !ids.insert(g.id()) {
            return Err(ParseError::DuplicateGraphId(g.id().to_string()).into());
        }
    }
    Ok(graphs)
}
