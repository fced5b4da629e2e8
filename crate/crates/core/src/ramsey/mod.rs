//! Searchers and independent verifiers for monochromatic patterns.
//!
//! Searchers return the least witness in a fixed scan order, so results
//! do not depend on the worker count. Verifiers re-evaluate certificates
//! against the coloring alone.

mod certificate;
mod coloring;
mod extract;
mod search;

use thiserror::Error;

pub use certificate::{check_certificate, verify_certificate, Certificate, VerifyError, Witness};
pub use coloring::{Builtin, ColoringSpec, MAX_TABLE_CELLS};
pub use extract::{
    check_extraction, half_grid_certificate, half_grid_extract, pattern4_certificate,
    pattern4_extract, verify_extraction, HorizonOracle, LargenessOracle, PredicateFamily,
    DEFAULT_HORIZON,
};
pub use search::{
    exp_triple, find_brauer, find_exp_witness, find_homothetic, find_mono_ramsey, find_schur,
    ExpKind, Threads, MAX_EXP_BITS,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RamseyError {
    #[error("set size {h} exceeds the box size {n}")]
    BoxTooSmall { h: u64, n: u64 },
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("coloring table line {line}: {message}")]
    TableFormat { line: usize, message: String },
    #[error("invalid certificate: {0}")]
    Certificate(String),
    #[error("oracle exhausted at depth {depth}")]
    OracleExhausted { depth: usize },
}
