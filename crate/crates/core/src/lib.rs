//! Non-equilibrium thermodynamics of a two-qubit controlled-rotation gate.
//!
//! The crate models the gate generated by a local Zeeman term plus a
//! conditional `sigma^x` interaction, characterizes it with the two-point
//! measurement (TPM) scheme in the local energy basis, and provides:
//!
//! - [`linalg`]: 2x2/4x4 complex algebra, Hermitian Jacobi eigensolver and
//!   matrix exponential;
//! - [`model`]: Hamiltonians, closed-form propagator, thermal state, l1-coherence;
//! - [`tpm`]: joint/conditional tables, energy and entropy-production
//!   distributions, moments, fluctuation-theorem and Landauer checks;
//! - [`sampler`]: seeded, worker-count-independent Monte Carlo of the
//!   measurement procedure;
//! - [`photonic`]: post-selected linear-optical implementation of the gate;
//! - [`config`] and [`run`]: sweep orchestration and CSV/JSON output.
//!
//! Data-parallel loops go through [`exec`], which uses rayon when the
//! `parallel` feature is on and runs sequentially otherwise.

pub mod config;
pub mod error;
pub mod exec;
pub mod linalg;
pub mod model;
pub mod photonic;
pub mod run;
pub mod sampler;
pub mod tpm;

pub use error::{Error, Result};
