//! JSON document format for realizations.
//!
//! ```json
//! {
//!   "field": 2,
//!   "symbols": [{"id":"a0","dim":1}],
//!   "states": [{"id":"s0","dim":1,"left":"c2","right":"c0","negate_at":"right"}],
//!   "constraints": [{"id":"c0","vars":["s0","a0","s1"],"generators":[[0,1,1],[1,0,1]]}]
//! }
//! ```
//!
//! `negate_at` may be omitted and defaults to `right`. Emitted documents carry
//! RREF generators, an explicit `negate_at`, and one entry per line, so that
//! emitting a parsed canonical document reproduces it byte for byte.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::code::{BlockedCode, CodeError};
use crate::linalg::{LinalgError, PrimeField};
use crate::realization::{
    ConstraintNode, Endpoint, Realization, RealizationError, StateVar, SymbolVar, Topology, ValidationErrors,
};

#[derive(Debug, Error)]
pub enum DocumentError {
    #[error("syntax error at {path} (line {line}, column {column}): {message}")]
    Syntax {
        path: String,
        line: usize,
        column: usize,
        message: String,
    },
    #[error("state `{state}` is missing its `{side}` endpoint")]
    MissingEndpoint { state: String, side: &'static str },
    #[error("field: {0}")]
    Field(LinalgError),
    #[error("constraint `{constraint}` generator row {row} has length {found}, expected {expected}")]
    GeneratorLength {
        constraint: String,
        row: usize,
        expected: usize,
        found: usize,
    },
    #[error("constraint `{constraint}` generator row {row} holds {value}, not a residue mod {modulus}")]
    Residue {
        constraint: String,
        row: usize,
        value: i64,
        modulus: u32,
    },
    #[error("invalid realization: {0}")]
    Invalid(ValidationErrors),
    #[error(transparent)]
    Code(#[from] CodeError),
    #[error("{0}")]
    Other(String),
}

impl From<RealizationError> for DocumentError {
    fn from(e: RealizationError) -> Self {
        match e {
            RealizationError::Invalid(v) => DocumentError::Invalid(v),
            RealizationError::Code(c) => DocumentError::Code(c),
            other => DocumentError::Other(other.to_string()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SymbolDoc {
    pub id: String,
    pub dim: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateDoc {
    pub id: String,
    pub dim: usize,
    #[serde(default)]
    pub left: Option<String>,
    #[serde(default)]
    pub right: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub negate_at: Option<Endpoint>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConstraintDoc {
    pub id: String,
    pub vars: Vec<String>,
    pub generators: Vec<Vec<i64>>,
}

/// Serialized form of a realization.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RealizationDocument {
    pub field: u32,
    pub symbols: Vec<SymbolDoc>,
    pub states: Vec<StateDoc>,
    pub constraints: Vec<ConstraintDoc>,
}

impl RealizationDocument {
    pub fn from_json(text: &str) -> Result<Self, DocumentError> {
        let de = &mut serde_json::Deserializer::from_str(text);
        serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            let inner = e.into_inner();
            DocumentError::Syntax {
                path,
                line: inner.line(),
                column: inner.column(),
                message: inner.to_string(),
            }
        })
    }

    pub fn to_realization(&self) -> Result<Realization, DocumentError> {
        let field = PrimeField::new(self.field).map_err(DocumentError::Field)?;
        let mut states = Vec::with_capacity(self.states.len());
        for s in &self.states {
            let left = s.left.clone().ok_or_else(|| DocumentError::MissingEndpoint {
                state: s.id.clone(),
                side: "left",
            })?;
            let right = s.right.clone().ok_or_else(|| DocumentError::MissingEndpoint {
                state: s.id.clone(),
                side: "right",
            })?;
            states.push(StateVar {
                id: s.id.clone(),
                dim: s.dim,
                left,
                right,
                negate_at: s.negate_at.unwrap_or_default(),
            });
        }
        let topology = Topology {
            symbols: self.symbols.iter().map(|s| SymbolVar { id: s.id.clone(), dim: s.dim }).collect(),
            states,
            constraints: self.constraints.iter().map(|c| ConstraintNode::new(c.id.clone(), c.vars.clone())).collect(),
        };
        let errors = topology.validate();
        if !errors.is_empty() {
            return Err(DocumentError::Invalid(ValidationErrors(errors)));
        }
        let mut codes = Vec::with_capacity(self.constraints.len());
        for (doc, node) in self.constraints.iter().zip(&topology.constraints) {
            let structure = topology.constraint_structure(node);
            let width = structure.total();
            let mut rows = Vec::with_capacity(doc.generators.len());
            for (i, row) in doc.generators.iter().enumerate() {
                if row.len() != width {
                    return Err(DocumentError::GeneratorLength {
                        constraint: doc.id.clone(),
                        row: i,
                        expected: width,
                        found: row.len(),
                    });
                }
                let mut residues = Vec::with_capacity(width);
                for &x in row {
                    if x < 0 || x >= i64::from(field.modulus()) {
                        return Err(DocumentError::Residue {
                            constraint: doc.id.clone(),
                            row: i,
                            value: x,
                            modulus: field.modulus(),
                        });
                    }
                    residues.push(x as u32);
                }
                rows.push(residues);
            }
            codes.push(BlockedCode::from_generators(field, structure, &rows)?);
        }
        Ok(Realization::new(field, topology, codes)?)
    }

    pub fn from_realization(r: &Realization) -> Self {
        let t = r.topology();
        Self {
            field: r.field().modulus(),
            symbols: t.symbols.iter().map(|s| SymbolDoc { id: s.id.clone(), dim: s.dim }).collect(),
            states: t
                .states
                .iter()
                .map(|s| StateDoc {
                    id: s.id.clone(),
                    dim: s.dim,
                    left: Some(s.left.clone()),
                    right: Some(s.right.clone()),
                    negate_at: Some(s.negate_at),
                })
                .collect(),
            constraints: t
                .constraints
                .iter()
                .zip(r.codes())
                .map(|(node, code)| ConstraintDoc {
                    id: node.id.clone(),
                    vars: node.vars.clone(),
                    generators: code
                        .generators()
                        .row_iter()
                        .map(|row| row.iter().map(|&x| i64::from(x)).collect())
                        .collect(),
                })
                .collect(),
        }
    }

    /// Canonical text: top-level keys in fixed order, one compact JSON
    /// object per line for every symbol, state and constraint.
    pub fn to_canonical_json(&self) -> String {
        fn section<T: Serialize>(out: &mut String, key: &str, items: &[T], last: bool) {
            out.push_str(&format!("  \"{key}\": ["));
            if items.is_empty() {
                out.push(']');
            } else {
                out.push('\n');
                for (i, item) in items.iter().enumerate() {
                    out.push_str("    ");
                    out.push_str(&serde_json::to_string(item).expect("plain data serializes"));
                    if i + 1 < items.len() {
                        out.push(',');
                    }
                    out.push('\n');
                }
                out.push_str("  ]");
            }
            out.push_str(if last { "\n" } else { ",\n" });
        }
        let mut out = String::from("{\n");
        out.push_str(&format!("  \"field\": {},\n", self.field));
        section(&mut out, "symbols", &self.symbols, false);
        section(&mut out, "states", &self.states, false);
        section(&mut out, "constraints", &self.constraints, true);
        out.push_str("}\n");
        out
    }
}

pub fn parse_realization(text: &str) -> Result<Realization, DocumentError> {
    RealizationDocument::from_json(text)?.to_realization()
}

pub fn emit_realization(r: &Realization) -> String {
    RealizationDocument::from_realization(r).to_canonical_json()
}
