//! Dense matrix forms of Pauli operators. These are the reference path for
//! small registers; production code never needs them.

use ndarray::linalg::kron;
use ndarray::{Array1, Array2};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::qcore::pauli::{pauli_matrix, PauliString};
use crate::qcore::{PauliSum, StateVector};

/// Largest register for which dense matrices are built.
pub const DENSE_LIMIT: usize = 12;

pub type DenseMatrix = Array2<Complex64>;

fn check_limit(n: usize) -> Result<()> {
    if n > DENSE_LIMIT {
        return Err(Error::Capacity { n, limit: DENSE_LIMIT });
    }
    Ok(())
}

/// Kronecker product of the factor matrices, qubit 0 outermost.
pub fn pauli_string_matrix(p: &PauliString) -> Result<DenseMatrix> {
    check_limit(p.n_qubits())?;
    let mut m = Array2::from_elem((1, 1), Complex64::new(1.0, 0.0));
    for &f in p.factors() {
        let [[a, b], [c, d]] = pauli_matrix(f);
        m = kron(&m, &ndarray::array![[a, b], [c, d]]);
    }
    Ok(m)
}

/// `Σ c_k · P_k` as a `2^n × 2^n` matrix.
pub fn dense_matrix(h: &PauliSum) -> Result<DenseMatrix> {
    let n = h.n_qubits();
    check_limit(n)?;
    let dim = 1usize << n;
    let mut m = Array2::zeros((dim, dim));
    for (c, p) in h.terms() {
        m.scaled_add(Complex64::new(*c, 0.0), &pauli_string_matrix(p)?);
    }
    Ok(m)
}

pub fn to_array(s: &StateVector) -> Array1<Complex64> {
    Array1::from_vec(s.amplitudes().to_vec())
}

/// `M·|s⟩` as a raw amplitude vector (no normalization check).
pub fn matvec(m: &DenseMatrix, s: &StateVector) -> Vec<Complex64> {
    m.dot(&to_array(s)).to_vec()
}

/// `⟨s|M|s⟩`.
pub fn sandwich(m: &DenseMatrix, s: &StateVector) -> Complex64 {
    let v = to_array(s);
    v.mapv(|a| a.conj()).dot(&m.dot(&v))
}

/// `max |M − M†|` entrywise.
pub fn hermiticity_defect(m: &DenseMatrix) -> f64 {
    let mut worst = 0.0f64;
    for ((i, j), a) in m.indexed_iter() {
        worst = worst.max((a - m[(j, i)].conj()).norm());
    }
    worst
}

pub fn max_abs_diff(a: &DenseMatrix, b: &DenseMatrix) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;

    const ONE: Complex64 = Complex64::new(1.0, 0.0);
    const ZERO: Complex64 = Complex64::new(0.0, 0.0);

    #[test]
    fn single_z() {
        let h: PauliSum = "Z".parse().unwrap();
        let m = dense_matrix(&h).unwrap();
        assert_eq!(m, ndarray::array![[ONE, ZERO], [ZERO, -ONE]]);
    }

    #[test]
    fn xy_plus_xz_is_hermitian() {
        let h: PauliSum = "1*XY + 1*XZ".parse().unwrap();
        let m = dense_matrix(&h).unwrap();
        assert_eq!(m.dim(), (4, 4));
        assert!(hermiticity_defect(&m) < 1e-12);
        let expected = pauli_string_matrix(&"XY".parse().unwrap()).unwrap()
            + pauli_string_matrix(&"XZ".parse().unwrap()).unwrap();
        assert_eq!(m, expected);
        // H² = 2·1
        let sq = m.dot(&m);
        for ((i, j), v) in sq.indexed_iter() {
            let want = if i == j { 2.0 } else { 0.0 };
            assert!((v - Complex64::new(want, 0.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn empty_sum_is_zero_matrix() {
        let h = PauliSum::zero(2).unwrap();
        let m = dense_matrix(&h).unwrap();
        assert!(m.iter().all(|v| *v == ZERO));
    }

    #[test]
    fn capacity_limit() {
        let p = PauliString::identity(DENSE_LIMIT + 1);
        assert!(matches!(
            pauli_string_matrix(&p),
            Err(Error::Capacity { n: 13, limit: 12 })
        ));
    }

    #[test]
    fn pauli_strings_are_involutory_and_traceless() {
        for s in ["XYZ", "YYI", "ZIX", "III"] {
            let p: PauliString = s.parse().unwrap();
            let m = pauli_string_matrix(&p).unwrap();
            assert!(hermiticity_defect(&m) < 1e-15);
            let sq = m.dot(&m);
            let id = Array2::<Complex64>::eye(8);
            assert!(max_abs_diff(&sq, &id) < 1e-15);
            let tr: Complex64 = m.diag().sum();
            let want = if p.is_identity() { 8.0 } else { 0.0 };
            assert!((tr - Complex64::new(want, 0.0)).norm() < 1e-15);
        }
    }
}
