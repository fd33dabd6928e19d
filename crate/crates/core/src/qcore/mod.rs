//! Numerical substrate: state vectors, Pauli algebra, dense reference
//! matrices and Hamiltonian time evolution.

pub mod dense;
mod evolve;
mod pauli;
mod pauli_sum;
mod state;

pub use dense::{dense_matrix, DenseMatrix, DENSE_LIMIT};
pub use evolve::{evolve, TAYLOR_TOL};
pub use pauli::{pauli_matrix, Pauli, PauliString};
pub use pauli_sum::PauliSum;
pub use state::{StateVector, NORM_TOL};

/// `P|s⟩`.
pub fn apply_pauli_string(p: &PauliString, s: &StateVector) -> crate::Result<StateVector> {
    p.apply(s)
}

/// `⟨s|P|s⟩`.
pub fn expectation(p: &PauliString, s: &StateVector) -> crate::Result<f64> {
    p.expectation(s)
}
