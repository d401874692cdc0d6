//! Exact analysis of systems of diagonal Diophantine equations
//! `M x^k = 0`: structural criteria (columns condition, the support
//! non-singularity condition, partitionability), solution counting, and the
//! experiment machinery used to probe partition and density regularity.

pub mod counting;
pub mod error;
pub mod lab;
pub mod linalg;
pub mod matroid;
pub mod structure;

pub use error::{Error, ErrorKind, Result};
pub use linalg::{Rational, RationalMatrix, RowOp, Transform};
