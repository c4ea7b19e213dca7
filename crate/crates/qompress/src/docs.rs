//! Circuit and layout documents.
//!
//! ```json
//! {"qubits": 4, "gates": [{"kind": "ccx", "operands": [0, 1, 3]}]}
//! {"groups": [[0, 1, 2], [3]]}
//! ```
//!
//! Unknown fields are rejected.

use std::fs;
use std::path::{Path, PathBuf};

use qompress_core::compress::{Circuit, CompressError, Gate, GateKind, QuditLayout};
use serde::Deserialize;

pub const QFA_CIRCUIT: &str = include_str!("../data/qfa.circuit.json");
pub const QFA_LAYOUT: &str = include_str!("../data/qfa.layout.json");

#[derive(Debug, thiserror::Error)]
pub enum DocError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("gate {index}: unknown kind {kind:?}")]
    UnknownGate { index: usize, kind: String },
    #[error(transparent)]
    Invalid(#[from] CompressError),
}

impl From<serde_json::Error> for DocError {
    fn from(e: serde_json::Error) -> Self {
        DocError::Syntax {
            line: e.line(),
            column: e.column(),
            message: strip_location(&e.to_string()),
        }
    }
}

fn strip_location(message: &str) -> String {
    match message.rfind(" at line ") {
        Some(i) => message[..i].to_string(),
        None => message.to_string(),
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CircuitDoc {
    qubits: usize,
    gates: Vec<GateDoc>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct GateDoc {
    kind: String,
    operands: Vec<usize>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct LayoutDoc {
    groups: Vec<Vec<usize>>,
}

pub fn parse_circuit(text: &str) -> Result<Circuit, DocError> {
    let doc: CircuitDoc = serde_json::from_str(text)?;
    let gates = doc
        .gates
        .into_iter()
        .enumerate()
        .map(|(index, g)| {
            let kind = GateKind::from_name(&g.kind).ok_or(DocError::UnknownGate {
                index,
                kind: g.kind,
            })?;
            Ok(Gate::new(kind, g.operands))
        })
        .collect::<Result<Vec<_>, DocError>>()?;
    Ok(Circuit::new(doc.qubits, gates)?)
}

pub fn parse_layout(text: &str) -> Result<QuditLayout, DocError> {
    let doc: LayoutDoc = serde_json::from_str(text)?;
    Ok(QuditLayout::new(doc.groups)?)
}

fn read(path: &Path) -> Result<String, DocError> {
    fs::read_to_string(path).map_err(|source| DocError::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub fn read_circuit(path: &Path) -> Result<Circuit, DocError> {
    parse_circuit(&read(path)?)
}

pub fn read_layout(path: &Path) -> Result<QuditLayout, DocError> {
    parse_layout(&read(path)?)
}

pub fn qfa() -> (Circuit, QuditLayout) {
    (
        parse_circuit(QFA_CIRCUIT).expect("bundled circuit parses"),
        parse_layout(QFA_LAYOUT).expect("bundled layout parses"),
    )
}
