//! Linear realizations of codes on normal graphs over prime fields.
//!
//! A [`Realization`] attaches a linear constraint code to every vertex of a
//! normal graph. This crate computes its behavior and realized code, tests
//! observability, controllability, trimness and properness, performs local
//! reductions, dualizes, and builds generator, parity-check and product
//! trellis realizations from explicit data. An independent brute-force
//! [`oracle`] cross-checks the linear algebra on small instances.

pub mod code;
pub mod constructions;
pub mod document;
pub mod dot;
pub mod fixtures;
pub mod linalg;
pub mod oracle;
pub mod random;
pub mod realization;
pub mod reduction;

pub use code::{Block, BlockStructure, BlockedCode, CodeError};
pub use document::{emit_realization, parse_realization, DocumentError, RealizationDocument};
pub use linalg::{LinalgError, MatrixF, PrimeField, Subspace};
pub use realization::{Realization, RealizationError, Topology};
