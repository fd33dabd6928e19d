//! State-vector simulation of embedding quantum simulators.
//!
//! A pure state `|ψ⟩` of `N` qubits is mapped to the real `N+1`-qubit state
//! `|0⟩⊗Re|ψ⟩ + |1⟩⊗Im|ψ⟩`. On that enlarged state the antilinear expectation
//! `⟨ψ|A|ψ*⟩` becomes `⟨Z⊗A⟩ − i⟨X⊗A⟩`, so entanglement monotones built from
//! it (concurrence, three-tangle and their `N`-qubit versions) need only 2 or 6
//! Hermitian measurement settings.

pub mod cli;
pub mod embedding;
mod error;
pub mod measurement;
pub mod monotones;
pub mod qcore;
pub mod scenarios;
pub mod selfcheck;

pub use error::{Error, Result};
pub use qcore::{Pauli, PauliString, PauliSum, StateVector};
