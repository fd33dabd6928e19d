//! Matrix-free `exp(−iHt)|ψ⟩`.
//!
//! The interval is split into `m` substeps with `‖H‖₁·|t|/m ≤ 1`, and each
//! substep applies the truncated Taylor series of `exp(−iHτ)`. The series stops
//! once the a-priori bound `(‖H‖₁|τ|)^{k+1}/(k+1)!` on the next term falls below
//! [`TAYLOR_TOL`]. Only `H·v` products are ever formed.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::qcore::state::norm_of;
use crate::qcore::{PauliSum, StateVector};

pub const TAYLOR_TOL: f64 = 1e-14;
const RENORM_TOL: f64 = 1e-12;
const DRIFT_LIMIT: f64 = 1e-8;
const MAX_ORDER: usize = 60;

/// `exp(−iHt)|s0⟩` with `ħ = 1`.
pub fn evolve(h: &PauliSum, s0: &StateVector, t: f64) -> Result<StateVector> {
    if !t.is_finite() {
        return Err(Error::NonFinite("evolution time"));
    }
    if h.n_qubits() != s0.n_qubits() {
        return Err(Error::Dimension {
            expected: h.n_qubits(),
            found: s0.n_qubits(),
        });
    }
    let norm_h = h.one_norm();
    if t == 0.0 || h.is_empty() {
        return Ok(s0.clone());
    }

    let substeps = (norm_h * t.abs()).ceil().max(1.0) as usize;
    let tau = t / substeps as f64;
    let x = norm_h * tau.abs();

    let dim = s0.dim();
    let mut v = s0.amplitudes().to_vec();
    let mut term = vec![Complex64::new(0.0, 0.0); dim];
    let mut next = vec![Complex64::new(0.0, 0.0); dim];
    for _ in 0..substeps {
        term.copy_from_slice(&v);
        let mut bound = 1.0;
        for k in 1..=MAX_ORDER {
            h.apply_into(&term, &mut next);
            let factor = Complex64::new(0.0, -tau / k as f64);
            for (tv, nv) in term.iter_mut().zip(&next) {
                *tv = nv * factor;
            }
            for (vv, tv) in v.iter_mut().zip(&term) {
                *vv += tv;
            }
            bound *= x / (k + 1) as f64;
            if bound < TAYLOR_TOL {
                break;
            }
        }
    }

    let norm = norm_of(&v);
    let drift = (norm - 1.0).abs();
    if drift > DRIFT_LIMIT {
        return Err(Error::NormDrift(drift));
    }
    if drift > RENORM_TOL {
        v.iter_mut().for_each(|a| *a /= norm);
    }
    Ok(StateVector::from_raw(s0.n_qubits(), v))
}
