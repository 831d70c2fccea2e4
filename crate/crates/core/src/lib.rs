//! Numerical laboratory for codes as Grassmannian points, frame transport and
//! logical gates as monodromies.

pub mod error;
pub mod pauli_linalg;
pub mod error_models;
pub mod holonomy;
pub mod qecc;
pub mod toric;
pub mod transversal;

pub use error::{Error, Result};
