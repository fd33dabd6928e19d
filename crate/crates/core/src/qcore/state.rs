use std::fmt;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};

/// Tolerance on `‖ψ‖ = 1` accepted at construction.
pub const NORM_TOL: f64 = 1e-9;

/// A normalized pure state of `n` qubits.
///
/// Amplitudes are indexed by the computational basis with qubit 0 as the most
/// significant bit, so `|0…0⟩` is index 0 and `|10⟩` is index 2.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    n_qubits: usize,
    amplitudes: Vec<Complex64>,
}

impl StateVector {
    pub fn new(amplitudes: Vec<Complex64>) -> Result<Self> {
        let len = amplitudes.len();
        if len < 2 || !len.is_power_of_two() {
            return Err(Error::NotPowerOfTwo(len));
        }
        if amplitudes.iter().any(|a| !a.re.is_finite() || !a.im.is_finite()) {
            return Err(Error::NonFinite("state amplitudes"));
        }
        let norm = norm_of(&amplitudes);
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized { norm, tol: NORM_TOL });
        }
        Ok(Self {
            n_qubits: len.trailing_zeros() as usize,
            amplitudes,
        })
    }

    /// Build from real amplitudes.
    pub fn from_real(amplitudes: &[f64]) -> Result<Self> {
        Self::new(amplitudes.iter().map(|&a| Complex64::new(a, 0.0)).collect())
    }

    /// Scale arbitrary nonzero amplitudes to unit norm.
    pub fn normalized(mut amplitudes: Vec<Complex64>) -> Result<Self> {
        let norm = norm_of(&amplitudes);
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::NotNormalized { norm, tol: NORM_TOL });
        }
        amplitudes.iter_mut().for_each(|a| *a /= norm);
        Self::new(amplitudes)
    }

    /// Internal constructor for results of norm-preserving maps.
    pub(crate) fn from_raw(n_qubits: usize, amplitudes: Vec<Complex64>) -> Self {
        debug_assert_eq!(amplitudes.len(), 1 << n_qubits);
        Self {
            n_qubits,
            amplitudes,
        }
    }

    /// The computational basis state `|index⟩`.
    pub fn basis(n_qubits: usize, index: usize) -> Result<Self> {
        if n_qubits == 0 {
            return Err(Error::Domain("a state needs at least one qubit".into()));
        }
        let dim = 1usize << n_qubits;
        if index >= dim {
            return Err(Error::Domain(format!("basis index {index} out of range for {n_qubits} qubits")));
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); dim];
        amps[index] = Complex64::new(1.0, 0.0);
        Ok(Self::from_raw(n_qubits, amps))
    }

    pub fn zero(n_qubits: usize) -> Result<Self> {
        Self::basis(n_qubits, 0)
    }

    /// `(|0…0⟩ + |1…1⟩)/√2`.
    pub fn ghz(n_qubits: usize) -> Result<Self> {
        let mut s = Self::zero(n_qubits)?;
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let last = s.amplitudes.len() - 1;
        s.amplitudes[0] = Complex64::new(h, 0.0);
        s.amplitudes[last] = Complex64::new(h, 0.0);
        Ok(s)
    }

    /// Haar-random state: i.i.d. complex Gaussian amplitudes, normalized.
    pub fn random<R: Rng + ?Sized>(n_qubits: usize, rng: &mut R) -> Self {
        let amps = (0..1usize << n_qubits)
            .map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
            .collect();
        Self::normalized(amps).expect("Gaussian amplitudes are nonzero with probability one")
    }

    /// Random real state (real Gaussian amplitudes).
    pub fn random_real<R: Rng + ?Sized>(n_qubits: usize, rng: &mut R) -> Self {
        let amps = (0..1usize << n_qubits)
            .map(|_| Complex64::new(rng.sample(StandardNormal), 0.0))
            .collect();
        Self::normalized(amps).expect("Gaussian amplitudes are nonzero with probability one")
    }

    /// Tensor product of `n_qubits` independent random single-qubit states.
    pub fn random_product<R: Rng + ?Sized>(n_qubits: usize, rng: &mut R) -> Self {
        let mut s = Self::random(1, rng);
        for _ in 1..n_qubits {
            s = s.kron(&Self::random(1, rng));
        }
        s
    }

    /// `self ⊗ other`, with `self` on the leading qubits.
    pub fn kron(&self, other: &StateVector) -> StateVector {
        let amps = self
            .amplitudes
            .iter()
            .flat_map(|&a| other.amplitudes.iter().map(move |&b| a * b))
            .collect();
        Self::from_raw(self.n_qubits + other.n_qubits, amps)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        norm_of(&self.amplitudes)
    }

    /// Entrywise complex conjugate `K|ψ⟩ = |ψ*⟩`.
    pub fn conj(&self) -> StateVector {
        Self::from_raw(self.n_qubits, self.amplitudes.iter().map(|a| a.conj()).collect())
    }

    /// `e^{iφ}|ψ⟩`.
    pub fn with_phase(&self, phi: f64) -> StateVector {
        let w = Complex64::from_polar(1.0, phi);
        Self::from_raw(self.n_qubits, self.amplitudes.iter().map(|&a| a * w).collect())
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &StateVector) -> Result<Complex64> {
        if self.n_qubits != other.n_qubits {
            return Err(Error::Dimension {
                expected: self.n_qubits,
                found: other.n_qubits,
            });
        }
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// Largest per-amplitude distance `max_i |a_i − b_i|`.
    pub fn max_abs_diff(&self, other: &StateVector) -> f64 {
        assert_eq!(self.dim(), other.dim(), "comparing states of different size");
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

pub(crate) fn norm_of(amps: &[Complex64]) -> f64 {
    amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
}

impl fmt::Display for StateVector {
    /// Ket notation, skipping amplitudes below 1e-12.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (b, a) in self.amplitudes.iter().enumerate() {
            if a.norm() < 1e-12 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({:.6}{:+.6}i)|{:0width$b}⟩", a.re, a.im, b, width = self.n_qubits)?;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}
