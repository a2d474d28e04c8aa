//! Normal realizations: a normal graph whose vertices carry constraint codes.
//!
//! Symbol variables are half-edges attached to exactly one constraint, state
//! variables are edges joining exactly two. The behavior, the realized code and
//! every structural predicate are derived from the constraint codes by exact
//! linear algebra.

mod analysis;
mod topology;

pub use analysis::{
    AnalysisReport, Behavior, ConstraintReport, DimEntry, ProperVerdict, StateLocalReport,
    TrimVerdict,
};
pub use topology::{ConstraintNode, Endpoint, StateVar, SymbolVar, Topology};

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::code::{Block, BlockStructure, BlockedCode, CodeError};
use crate::linalg::{MatrixF, PrimeField};

/// One structural problem found by [`validate`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Error)]
#[serde(tag = "error", rename_all = "kebab-case")]
pub enum ValidationError {
    #[error("identifier `{id}` is declared more than once")]
    DuplicateId { id: String },
    #[error("constraint `{constraint}` lists unknown variable `{variable}`")]
    UnknownVariable { constraint: String, variable: String },
    #[error("state `{state}` names unknown constraint `{constraint}`")]
    UnknownConstraint { state: String, constraint: String },
    #[error("constraint `{constraint}` lists variable `{variable}` more than once")]
    RepeatedVariable { constraint: String, variable: String },
    #[error("symbol `{symbol}` appears in {count} constraints, expected exactly 1")]
    SymbolUsage { symbol: String, count: usize },
    #[error("state `{state}` appears in {count} constraints, expected exactly 2")]
    StateUsage { state: String, count: usize },
    #[error("state `{state}` declares endpoints ({left}, {right}) but is listed by {found:?}")]
    EndpointMismatch {
        state: String,
        left: String,
        right: String,
        found: Vec<String>,
    },
    #[error("state `{state}` joins constraint `{constraint}` to itself")]
    SelfLoop { state: String, constraint: String },
    #[error("realization has no constraints")]
    NoConstraints,
    #[error("graph is disconnected: components {components:?}")]
    Disconnected { components: Vec<Vec<String>> },
    #[error("{expected} constraints but {found} constraint codes")]
    CodeCount { expected: usize, found: usize },
    #[error("code of constraint `{constraint}` has blocks {found:?}, expected {expected:?}")]
    BlockMismatch {
        constraint: String,
        expected: Vec<Block>,
        found: Vec<Block>,
    },
    #[error("code of constraint `{constraint}` is not over the realization field")]
    FieldMismatch { constraint: String },
}

impl ValidationError {
    /// Coarse category: `identifier`, `normality`, `connectivity`,
    /// `dimension` or `field`.
    pub fn kind(&self) -> &'static str {
        use ValidationError::*;
        match self {
            DuplicateId { .. } | UnknownVariable { .. } | UnknownConstraint { .. } => "identifier",
            RepeatedVariable { .. }
            | SymbolUsage { .. }
            | StateUsage { .. }
            | EndpointMismatch { .. }
            | SelfLoop { .. } => "normality",
            NoConstraints | Disconnected { .. } => "connectivity",
            CodeCount { .. } | BlockMismatch { .. } => "dimension",
            FieldMismatch { .. } => "field",
        }
    }
}

/// Non-empty list of validation failures.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct ValidationErrors(pub Vec<ValidationError>);

impl fmt::Display for ValidationErrors {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, "; ")?;
            }
            write!(f, "{e}")?;
        }
        Ok(())
    }
}

impl std::error::Error for ValidationErrors {}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RealizationError {
    #[error("invalid realization: {0}")]
    Invalid(ValidationErrors),
    #[error("unknown constraint `{0}`")]
    UnknownConstraint(String),
    #[error("unknown state `{0}`")]
    UnknownState(String),
    #[error("state `{state}` is not involved in constraint `{constraint}`")]
    StateNotInvolved { constraint: String, state: String },
    #[error(transparent)]
    Code(#[from] CodeError),
}

/// Checks every structural invariant of a would-be realization and returns
/// all violations found.
pub fn validate(field: PrimeField, topology: &Topology, codes: &[BlockedCode]) -> Vec<ValidationError> {
    let mut errors = topology.validate();
    if codes.len() != topology.constraints.len() {
        errors.push(ValidationError::CodeCount {
            expected: topology.constraints.len(),
            found: codes.len(),
        });
        return errors;
    }
    for (node, code) in topology.constraints.iter().zip(codes) {
        if code.field() != field {
            errors.push(ValidationError::FieldMismatch {
                constraint: node.id.clone(),
            });
        }
        let expected: Vec<Block> = node
            .vars
            .iter()
            .map(|v| Block::new(v.clone(), topology.var_dim(v).unwrap_or(0)))
            .collect();
        if code.structure().blocks() != expected.as_slice() {
            errors.push(ValidationError::BlockMismatch {
                constraint: node.id.clone(),
                expected,
                found: code.structure().blocks().to_vec(),
            });
        }
    }
    errors
}

/// A validated normal linear realization over GF(p).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Realization {
    field: PrimeField,
    topology: Topology,
    codes: Vec<BlockedCode>,
}

impl Realization {
    pub fn new(
        field: PrimeField,
        topology: Topology,
        codes: Vec<BlockedCode>,
    ) -> Result<Self, RealizationError> {
        let errors = validate(field, &topology, &codes);
        if !errors.is_empty() {
            return Err(RealizationError::Invalid(ValidationErrors(errors)));
        }
        Ok(Self {
            field,
            topology,
            codes,
        })
    }

    /// Builds each constraint code as the row span of the given rows, with
    /// blocks taken from the constraint's variable list.
    pub fn from_generator_rows(
        field: PrimeField,
        topology: Topology,
        rows: Vec<Vec<Vec<u32>>>,
    ) -> Result<Self, RealizationError> {
        let topo_errors = topology.validate();
        if !topo_errors.is_empty() {
            return Err(RealizationError::Invalid(ValidationErrors(topo_errors)));
        }
        if rows.len() != topology.constraints.len() {
            return Err(RealizationError::Invalid(ValidationErrors(vec![
                ValidationError::CodeCount {
                    expected: topology.constraints.len(),
                    found: rows.len(),
                },
            ])));
        }
        let codes = topology
            .constraints
            .iter()
            .zip(&rows)
            .map(|(node, rows)| {
                BlockedCode::from_generators(field, topology.constraint_structure(node), rows)
            })
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(field, topology, codes)
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn topology(&self) -> &Topology {
        &self.topology
    }

    pub fn codes(&self) -> &[BlockedCode] {
        &self.codes
    }

    pub fn code(&self, constraint: &str) -> Result<&BlockedCode, RealizationError> {
        self.topology
            .constraint_index(constraint)
            .map(|i| &self.codes[i])
            .ok_or_else(|| RealizationError::UnknownConstraint(constraint.to_string()))
    }

    /// dim A, the total symbol dimension.
    pub fn symbol_dim(&self) -> usize {
        self.topology.symbols.iter().map(|s| s.dim).sum()
    }

    /// dim S, the total state dimension.
    pub fn state_dim(&self) -> usize {
        self.topology.states.iter().map(|s| s.dim).sum()
    }

    /// Σ_i dim C_i.
    pub fn constraint_dim_sum(&self) -> usize {
        self.codes.iter().map(BlockedCode::dim).sum()
    }

    pub fn state_dims(&self) -> Vec<usize> {
        self.topology.states.iter().map(|s| s.dim).collect()
    }

    /// Block structure of the global frame: symbols in topology order, then
    /// states in topology order.
    pub fn global_structure(&self) -> BlockStructure {
        let blocks = self
            .topology
            .symbols
            .iter()
            .map(|s| Block::new(s.id.clone(), s.dim))
            .chain(self.topology.states.iter().map(|s| Block::new(s.id.clone(), s.dim)))
            .collect();
        BlockStructure::new(blocks).expect("ids validated unique")
    }

    /// Dual realization: every constraint code replaced by its orthogonal
    /// code, then each state block negated inside the constraint at the
    /// state's `negate_at` endpoint.
    pub fn dualize(&self) -> Realization {
        let mut codes: Vec<BlockedCode> = self.codes.iter().map(BlockedCode::dual).collect();
        let f = self.field;
        for state in &self.topology.states {
            if state.dim == 0 || f.modulus() == 2 {
                continue;
            }
            let at = self
                .topology
                .constraint_index(state.negate_constraint())
                .expect("validated endpoint");
            let mut neg = MatrixF::zeros(f, state.dim, state.dim);
            for k in 0..state.dim {
                neg.set(k, k, f.neg(1));
            }
            codes[at] = codes[at]
                .pushforward_block(&state.id, &neg)
                .expect("state block present at its endpoint");
        }
        Realization {
            field: f,
            topology: self.topology.clone(),
            codes,
        }
    }

    /// Returns a copy with one state recoordinatized: both incident
    /// constraint codes are rewritten by `rewrite` and the state takes
    /// dimension `new_dim`.
    pub(crate) fn rewrite_state(
        &self,
        state: &str,
        new_dim: usize,
        mut rewrite: impl FnMut(&BlockedCode) -> Result<BlockedCode, CodeError>,
    ) -> Result<Realization, RealizationError> {
        let j = self
            .topology
            .state_index(state)
            .ok_or_else(|| RealizationError::UnknownState(state.to_string()))?;
        let mut topology = self.topology.clone();
        topology.states[j].dim = new_dim;
        let mut codes = self.codes.clone();
        let sv = &self.topology.states[j];
        for endpoint in [&sv.left, &sv.right] {
            let i = self
                .topology
                .constraint_index(endpoint)
                .expect("validated endpoint");
            codes[i] = rewrite(&self.codes[i])?;
        }
        Realization::new(self.field, topology, codes)
    }
}
