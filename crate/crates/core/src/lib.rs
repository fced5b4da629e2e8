//! Symbolic calculus of iterated star maps and internal star maps.
//!
//! - [`composition`]: compositions of `s` and `i_n`, rank, normal forms,
//!   natural domains and level transport.
//! - [`expr`]: the text syntax for compositions.
//! - [`hypernat`]: a symbolic model of the hypernatural levels.
//! - [`arith`]: canonical forms for arithmetic over model terms.
//! - [`uequiv`]: a depth-bounded prover for u-equivalence judgments.
//! - [`ramsey`]: searchers and certificate verifiers for Ramsey-type
//!   colouring problems.

pub mod arith;
pub mod composition;
pub mod expr;
pub mod hypernat;
pub mod ramsey;
pub mod uequiv;

pub use composition::{
    enumerate_compositions, sigma, Composition, DomainMode, MapAtom, NormalForm,
};
pub use expr::{parse, pretty, ParseError};
