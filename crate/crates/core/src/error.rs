use std::fmt;

use thiserror::Error;

/// A cell of a polygonal complex, by index.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Cell {
    Vertex(usize),
    Edge(usize),
    Face(usize),
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cell::Vertex(i) => write!(f, "vertex {i}"),
            Cell::Edge(i) => write!(f, "edge {i}"),
            Cell::Face(i) => write!(f, "face {i}"),
        }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("{kind} {index} referenced but only {len} exist")]
    DanglingIndex {
        kind: &'static str,
        index: usize,
        len: usize,
    },

    #[error("face {face} repeats vertex {vertex} in its boundary cycle")]
    RepeatedVertex { face: usize, vertex: usize },

    #[error("face {face} has a boundary cycle of length {len}; at least 3 required")]
    ShortFace { face: usize, len: usize },

    #[error("edge {{{0}, {1}}} listed more than once")]
    DuplicateEdge(usize, usize),

    #[error("edge at vertex {0} is a loop")]
    LoopEdge(usize),

    #[error("{axiom} violated by {cells:?}")]
    Invariant {
        axiom: String,
        cells: Vec<Vec<usize>>,
    },

    #[error("{0} is incomplete and has no true-degree override")]
    Incomplete(Cell),

    #[error("{0} has infinite degree")]
    NotLocallyFinite(Cell),

    #[error("untrusted region reached at face {face} ({context})")]
    Untrusted { face: usize, context: String },

    #[error("faces {0} and {1} are not connected")]
    Disconnected(usize, usize),

    #[error("{what}: needs {needed}, cap is {cap}")]
    CapExceeded {
        what: &'static str,
        needed: u128,
        cap: u128,
    },

    #[error("infeasible parameters: {0}")]
    Infeasible(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("linear solve stopped at residual {achieved:e} (target {target:e})")]
    Residual { target: f64, achieved: f64 },

    #[error("complex file: {0}")]
    Format(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
