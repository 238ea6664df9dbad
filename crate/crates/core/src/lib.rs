//! Uniform robust recovery of non-negative sparse vectors.
//!
//! The crate builds measurement matrices whose real kernel vectors all carry
//! many negative entries (the signed kernel condition), decodes with
//! non-negative least-residual linear programs, and computes the robustness
//! constant `tau` and normalization constant `kappa` that control the
//! recovery error.

pub mod certify;
pub mod construct;
pub mod decode;
pub mod error;
pub mod experiments;
pub mod linalg;
pub mod lp;

pub use error::{Error, Result};
