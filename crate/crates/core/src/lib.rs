//! Exact desk-scale simulation of qubit port-based teleportation.

pub mod circuit;
pub mod error;
pub mod limits;
pub mod operator;
pub mod povm_analytic;
pub mod povm_oracle;
pub mod protocols;
pub mod schur;
pub mod spinalg;

pub use error::{Error, Result};
pub use spinalg::{HalfInt, Regime};
