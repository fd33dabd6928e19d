//! Ancilla embedding of states and Hamiltonians.
//!
//! The ancilla is qubit 0 (leftmost letter), so an embedded observable reads
//! `"Z" + A`, e.g. `ZYY` for `A = YY`.

use ndarray::{s, Array2};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::qcore::{dense, evolve, Pauli, PauliString, PauliSum, StateVector, NORM_TOL};

/// `|0⟩⊗Re|ψ⟩ + |1⟩⊗Im|ψ⟩`. All output amplitudes are real.
pub fn embed_state(psi: &StateVector) -> StateVector {
    let amps = psi.amplitudes();
    let mut out = Vec::with_capacity(2 * amps.len());
    out.extend(amps.iter().map(|a| Complex64::new(a.re, 0.0)));
    out.extend(amps.iter().map(|a| Complex64::new(a.im, 0.0)));
    StateVector::from_raw(psi.n_qubits() + 1, out)
}

/// Inverse of [`embed_state`]: `Re-block + i·Im-block`.
///
/// Fails when the reconstruction is not a unit vector, which happens for
/// enlarged states that are not (evolved) embeddings.
pub fn unembed_state(psi_tilde: &StateVector) -> Result<StateVector> {
    if psi_tilde.n_qubits() < 2 {
        return Err(Error::Domain("an embedded state has at least 2 qubits".into()));
    }
    let half = psi_tilde.dim() / 2;
    let (re, im) = psi_tilde.amplitudes().split_at(half);
    let amps: Vec<Complex64> = re
        .iter()
        .zip(im)
        .map(|(a, b)| {
            if a.im == 0.0 && b.im == 0.0 {
                Complex64::new(a.re, b.re)
            } else {
                a + Complex64::i() * b
            }
        })
        .collect();
    let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    if (norm - 1.0).abs() > NORM_TOL {
        return Err(Error::NotAnEmbedding { norm });
    }
    Ok(StateVector::from_raw(psi_tilde.n_qubits() - 1, amps))
}

/// Enlarged Hamiltonian `H̃` for `H = A + iB` (`A` real symmetric, `B` real
/// antisymmetric), whose dense form is `[[iB, iA], [−iA, iB]]`.
///
/// A Pauli string is entrywise real iff it has an even number of `Y` factors,
/// so each term is routed by its `Y` count: even → `−c·(Y⊗P)`, odd → `c·(I⊗P)`.
pub fn embed_hamiltonian(h: &PauliSum) -> PauliSum {
    let terms = h.terms().iter().map(|(c, p)| {
        if p.count(Pauli::Y) % 2 == 0 {
            (-c, p.prepend(Pauli::Y))
        } else {
            (*c, p.prepend(Pauli::I))
        }
    });
    PauliSum::new(h.n_qubits() + 1, terms).expect("prepending one factor keeps all terms the same length")
}

/// Dense `[[iB, iA], [−iA, iB]]` built directly from the entries of `H`.
/// Reference construction for [`embed_hamiltonian`].
pub fn block_embedding_matrix(h: &PauliSum) -> Result<dense::DenseMatrix> {
    let hd = dense::dense_matrix(h)?;
    let dim = hd.nrows();
    let i = Complex64::i();
    let ia = hd.mapv(|z| i * z.re);
    let ib = hd.mapv(|z| i * z.im);
    let mut out = Array2::zeros((2 * dim, 2 * dim));
    out.slice_mut(s![..dim, ..dim]).assign(&ib);
    out.slice_mut(s![..dim, dim..]).assign(&ia);
    out.slice_mut(s![dim.., ..dim]).assign(&ia.mapv(|z| -z));
    out.slice_mut(s![dim.., dim..]).assign(&ib);
    Ok(out)
}

/// `⟨AK⟩ = ⟨ψ|A|ψ*⟩`, evaluated directly on the amplitudes.
pub fn conjugation_expectation(a: &PauliString, psi: &StateVector) -> Result<Complex64> {
    let conj = psi.conj();
    a.sandwich(psi.n_qubits(), psi.amplitudes(), conj.amplitudes())
}

/// Ancilla-extended settings `(Z⊗A, X⊗A)` whose expectations give the real
/// and (negated) imaginary part of `⟨AK⟩`.
pub fn conjugation_settings(a: &PauliString) -> (PauliString, PauliString) {
    (a.prepend(Pauli::Z), a.prepend(Pauli::X))
}

/// `⟨AK⟩` from Hermitian measurements on the enlarged state:
/// `⟨Z⊗A⟩ − i⟨X⊗A⟩`.
pub fn embedded_conjugation_expectation(a: &PauliString, psi_tilde: &StateVector) -> Result<Complex64> {
    if psi_tilde.n_qubits() != a.n_qubits() + 1 {
        return Err(Error::Dimension {
            expected: a.n_qubits() + 1,
            found: psi_tilde.n_qubits(),
        });
    }
    let (za, xa) = conjugation_settings(a);
    Ok(Complex64::new(za.expectation(psi_tilde)?, -xa.expectation(psi_tilde)?))
}

/// A system Hamiltonian and initial state carried into the enlarged simulator.
#[derive(Clone, Debug, PartialEq)]
pub struct EmbeddedSystem {
    pub n_system: usize,
    pub h_tilde: PauliSum,
    pub psi_tilde_0: StateVector,
}

impl EmbeddedSystem {
    pub fn new(h: &PauliSum, psi0: &StateVector) -> Result<Self> {
        if h.n_qubits() != psi0.n_qubits() {
            return Err(Error::Dimension {
                expected: h.n_qubits(),
                found: psi0.n_qubits(),
            });
        }
        Ok(Self {
            n_system: psi0.n_qubits(),
            h_tilde: embed_hamiltonian(h),
            psi_tilde_0: embed_state(psi0),
        })
    }

    /// `exp(−iH̃t)|ψ̃(0)⟩`.
    pub fn state_at(&self, t: f64) -> Result<StateVector> {
        evolve(&self.h_tilde, &self.psi_tilde_0, t)
    }
}
