//! Exact symbolic verification of two ordering obstructions: the quantization
//! of polynomials in `(q, p)` beyond degree two, and the minimal-substitution
//! generalization of flat-spacetime tensor laws beyond order two.

pub mod cli;
pub mod error;
pub mod kernel;
pub mod oracle;
pub mod parse;
pub mod tensor;
pub mod weyl;

pub use error::{Error, Result};
