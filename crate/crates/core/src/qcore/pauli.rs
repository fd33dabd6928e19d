//! Single-qubit Pauli operators and Pauli strings.
//!
//! A [`PauliString`] is written as a letter string with the leftmost letter
//! acting on qubit 0, which is the most significant bit of a basis index.
//! So `"ZYY"` puts `Z` on qubit 0 (the ancilla, in embedded systems).
//!
//! Application to a state never builds a matrix. Every string maps a basis
//! state to a single basis state times a phase:
//!
//! ```text
//! P|b⟩ = i^{#Y} · (-1)^{popcount(b & (zmask | ymask))} · |b ^ (xmask | ymask)⟩
//! ```
//!
//! which follows from `Y = i·X·Z`.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qcore::StateVector;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub fn from_char(c: char) -> Option<Self> {
        match c {
            'I' => Some(Pauli::I),
            'X' => Some(Pauli::X),
            'Y' => Some(Pauli::Y),
            'Z' => Some(Pauli::Z),
            _ => None,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }
}

/// The 2×2 matrix of a single-qubit Pauli operator, row-major.
pub fn pauli_matrix(label: Pauli) -> [[Complex64; 2]; 2] {
    match label {
        Pauli::I => [[ONE, ZERO], [ZERO, ONE]],
        Pauli::X => [[ZERO, ONE], [ONE, ZERO]],
        Pauli::Y => [[ZERO, -I], [I, ZERO]],
        Pauli::Z => [[ONE, ZERO], [ZERO, -ONE]],
    }
}

/// A tensor product of single-qubit Pauli operators.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PauliString {
    factors: Vec<Pauli>,
}

/// Bit masks and global phase describing the action of a [`PauliString`] on
/// computational basis indices.
#[derive(Clone, Copy, Debug)]
pub(crate) struct PauliAction {
    /// Bits flipped by X or Y factors.
    pub flip: usize,
    /// Bits that pick up a sign from Z or Y factors.
    pub sign: usize,
    /// `i^{#Y}`.
    pub phase: Complex64,
}

impl PauliAction {
    /// Phase acquired by basis index `b`: `P|b⟩ = phase_of(b) |b ^ flip⟩`.
    #[inline]
    pub fn phase_of(&self, b: usize) -> Complex64 {
        if (b & self.sign).count_ones() & 1 == 1 {
            -self.phase
        } else {
            self.phase
        }
    }
}

impl PauliString {
    pub fn new(factors: Vec<Pauli>) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::Parse("empty Pauli string".into()));
        }
        Ok(Self { factors })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            factors: vec![Pauli::I; n.max(1)],
        }
    }

    pub fn factors(&self) -> &[Pauli] {
        &self.factors
    }

    pub fn n_qubits(&self) -> usize {
        self.factors.len()
    }

    pub fn is_identity(&self) -> bool {
        self.factors.iter().all(|&p| p == Pauli::I)
    }

    pub fn count(&self, label: Pauli) -> usize {
        self.factors.iter().filter(|&&p| p == label).count()
    }

    /// `label ⊗ self`: a new string with `label` on a fresh qubit 0.
    pub fn prepend(&self, label: Pauli) -> Self {
        let mut factors = Vec::with_capacity(self.factors.len() + 1);
        factors.push(label);
        factors.extend_from_slice(&self.factors);
        Self { factors }
    }

    pub(crate) fn action(&self) -> PauliAction {
        let n = self.factors.len();
        let mut flip = 0usize;
        let mut sign = 0usize;
        let mut n_y = 0u32;
        for (q, &p) in self.factors.iter().enumerate() {
            let bit = 1usize << (n - 1 - q);
            match p {
                Pauli::I => {}
                Pauli::X => flip |= bit,
                Pauli::Z => sign |= bit,
                Pauli::Y => {
                    flip |= bit;
                    sign |= bit;
                    n_y += 1;
                }
            }
        }
        let phase = match n_y % 4 {
            0 => ONE,
            1 => I,
            2 => -ONE,
            _ => -I,
        };
        PauliAction { flip, sign, phase }
    }

    fn check_len(&self, n: usize) -> Result<()> {
        if self.n_qubits() != n {
            return Err(Error::Dimension {
                expected: self.n_qubits(),
                found: n,
            });
        }
        Ok(())
    }

    /// `P|s⟩` in O(2^n) without forming the matrix.
    pub fn apply(&self, s: &StateVector) -> Result<StateVector> {
        self.check_len(s.n_qubits())?;
        let act = self.action();
        let amps = s.amplitudes();
        let mut out = vec![ZERO; amps.len()];
        for (b, &a) in amps.iter().enumerate() {
            out[b ^ act.flip] = act.phase_of(b) * a;
        }
        Ok(StateVector::from_raw(s.n_qubits(), out))
    }

    /// `⟨s|P|s⟩`. The imaginary residue is checked and dropped.
    pub fn expectation(&self, s: &StateVector) -> Result<f64> {
        let z = self.sandwich(s.n_qubits(), s.amplitudes(), s.amplitudes())?;
        debug_assert!(
            z.im.abs() <= 1e-10,
            "Pauli expectation has imaginary residue {}",
            z.im
        );
        Ok(z.re.clamp(-1.0, 1.0))
    }

    /// `⟨bra|P|ket⟩` on raw amplitude slices of an `n`-qubit register.
    pub(crate) fn sandwich(&self, n: usize, bra: &[Complex64], ket: &[Complex64]) -> Result<Complex64> {
        self.check_len(n)?;
        let act = self.action();
        Ok(ket
            .iter()
            .enumerate()
            .map(|(b, &a)| bra[b ^ act.flip].conj() * act.phase_of(b) * a)
            .sum())
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for p in &self.factors {
            write!(f, "{}", p.as_char())?;
        }
        Ok(())
    }
}

impl FromStr for PauliString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let factors = s
            .chars()
            .map(|c| {
                Pauli::from_char(c)
                    .ok_or_else(|| Error::Parse(format!("invalid Pauli letter {c:?} in {s:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        PauliString::new(factors)
    }
}

impl Serialize for PauliString {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for PauliString {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn basis(n: usize, idx: usize) -> StateVector {
        let mut amps = vec![ZERO; 1 << n];
        amps[idx] = ONE;
        StateVector::new(amps).unwrap()
    }

    #[test]
    fn pauli_matrices() {
        assert_eq!(pauli_matrix(Pauli::I), [[ONE, ZERO], [ZERO, ONE]]);
        assert_eq!(pauli_matrix(Pauli::Y), [[ZERO, -I], [I, ZERO]]);
        assert_eq!(pauli_matrix(Pauli::Z), [[ONE, ZERO], [ZERO, -ONE]]);
    }

    #[test]
    fn text_form() {
        let p: PauliString = "ZXYY".parse().unwrap();
        assert_eq!(p.to_string(), "ZXYY");
        assert_eq!(p.factors()[0], Pauli::Z);
        assert!("ZQ".parse::<PauliString>().is_err());
        assert!("".parse::<PauliString>().is_err());
    }

    #[test]
    fn yy_on_00() {
        let p: PauliString = "YY".parse().unwrap();
        let out = p.apply(&basis(2, 0)).unwrap();
        assert_eq!(out.amplitudes()[3], -ONE);
        assert_eq!(out.amplitudes()[0], ZERO);
    }

    #[test]
    fn zyy_on_011() {
        let p: PauliString = "ZYY".parse().unwrap();
        let out = p.apply(&basis(3, 0b011)).unwrap();
        assert_eq!(out.amplitudes()[0], -ONE);
        assert_eq!(out.amplitudes().iter().filter(|a| a.norm() > 0.0).count(), 1);
    }

    #[test]
    fn identity_is_noop() {
        let s = StateVector::new(vec![
            Complex64::new(0.5, 0.0),
            Complex64::new(0.0, 0.5),
            Complex64::new(-0.5, 0.0),
            Complex64::new(0.0, -0.5),
        ])
        .unwrap();
        let out = "II".parse::<PauliString>().unwrap().apply(&s).unwrap();
        assert_eq!(out, s);
    }

    #[test]
    fn z_on_zero() {
        let p: PauliString = "Z".parse().unwrap();
        assert_eq!(p.expectation(&basis(1, 0)).unwrap(), 1.0);
        assert_eq!(p.expectation(&basis(1, 1)).unwrap(), -1.0);
    }

    #[test]
    fn length_mismatch() {
        let p: PauliString = "ZZ".parse().unwrap();
        assert!(matches!(
            p.apply(&basis(3, 0)),
            Err(Error::Dimension { expected: 2, found: 3 })
        ));
        assert!(p.expectation(&basis(1, 0)).is_err());
    }
}
