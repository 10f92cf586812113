//! Mixing times of open quantum systems from the spectrum of the
//! Lindbladian, written as a non-Hermitian operator on the doubled space.

pub mod cli;
pub mod criteria;
pub mod error;
pub mod expm;
pub mod liouvillian;
pub mod mixing;
pub mod models;
pub mod operators;
pub mod perturbation;
pub mod spectral;

pub use error::{Error, Result};
pub use operators::{DensityMatrix, Operator, SuperVector, C64};
