//! Exact linear algebra over prime fields.

mod field;
mod matrix;
mod subspace;

pub use field::{PrimeField, MAX_MODULUS};
pub use matrix::{MatrixF, Rref};
pub use subspace::Subspace;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("modulus {0} is not a prime in [2, {MAX_MODULUS}]")]
    InvalidModulus(u32),
    #[error("entry {value} is not a residue mod {modulus}")]
    EntryOutOfRange { value: u32, modulus: u32 },
    #[error("row {row} has length {found}, expected {expected}")]
    RaggedRow {
        row: usize,
        expected: usize,
        found: usize,
    },
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("operands live over different fields")]
    FieldMismatch,
}
