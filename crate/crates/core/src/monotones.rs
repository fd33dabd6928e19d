//! Pure-state entanglement monotones built from `⟨AK⟩`.
//!
//! Even `N`: `|⟨A₀K⟩|` with `A₀ = Y^{⊗N}` (concurrence for `N = 2`).
//! Odd `N`: `|⟨A₁K⟩² + ⟨A₂K⟩² − ⟨A₃K⟩²|` with `A₁ = XY^{⊗N−1}`,
//! `A₂ = ZY^{⊗N−1}`, `A₃ = IY^{⊗N−1}` (three-tangle for `N = 3`). The `⟨AₖK⟩`
//! are complex; they are squared as complex numbers and the modulus is taken
//! last.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::embedding::{conjugation_expectation, conjugation_settings};
use crate::error::{Error, Result};
use crate::qcore::{Pauli, PauliString, StateVector};

/// Largest overshoot above 1 that is attributed to rounding and clamped.
pub const CLAMP_LIMIT: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn of(n_system: usize) -> Self {
        if n_system.is_multiple_of(2) {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    /// Number of Hermitian settings needed on the enlarged state.
    pub fn settings_count(self) -> usize {
        match self {
            Parity::Even => 2,
            Parity::Odd => 6,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Component {
    pub setting: PauliString,
    pub expectation: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MonotoneResult {
    pub value: f64,
    pub n_system: usize,
    pub parity: Parity,
    pub components: Vec<Component>,
    /// Amount removed when clamping `value` down to 1.
    #[serde(default)]
    pub clamp_residual: f64,
}

impl MonotoneResult {
    pub fn label(&self) -> String {
        match (self.n_system, self.parity) {
            (2, _) => "concurrence".into(),
            (3, _) => "three-tangle".into(),
            (n, Parity::Even) => format!("{n}-monotone (even)"),
            (n, Parity::Odd) => format!("{n}-monotone (odd)"),
        }
    }
}

fn check_n(n_system: usize) -> Result<()> {
    if n_system < 2 {
        return Err(Error::Domain(format!("monotones need at least 2 system qubits, got {n_system}")));
    }
    Ok(())
}

/// The system operators `A₀` (even) or `A₁, A₂, A₃` (odd).
pub fn system_operators(n_system: usize) -> Result<Vec<PauliString>> {
    check_n(n_system)?;
    let ys = |n: usize| vec![Pauli::Y; n];
    let ops = match Parity::of(n_system) {
        Parity::Even => vec![ys(n_system)],
        Parity::Odd => [Pauli::X, Pauli::Z, Pauli::I]
            .iter()
            .map(|&lead| {
                let mut f = vec![lead];
                f.extend(ys(n_system - 1));
                f
            })
            .collect(),
    };
    ops.into_iter().map(PauliString::new).collect()
}

/// Settings on the enlarged state, ancilla letter first: `Z·A, X·A` for each
/// system operator in order.
pub fn required_settings(n_system: usize) -> Result<Vec<PauliString>> {
    Ok(system_operators(n_system)?
        .iter()
        .flat_map(|a| {
            let (z, x) = conjugation_settings(a);
            [z, x]
        })
        .collect())
}

/// Raw monotone from conjugation expectations `⟨AₖK⟩` (no clamping).
pub fn combine_conjugations(parity: Parity, c: &[Complex64]) -> f64 {
    match parity {
        Parity::Even => c[0].norm(),
        Parity::Odd => (c[0] * c[0] + c[1] * c[1] - c[2] * c[2]).norm(),
    }
}

/// Raw monotone from measured expectations in [`required_settings`] order,
/// pairing `(⟨Z·A⟩, ⟨X·A⟩)` into `⟨AK⟩ = ⟨Z·A⟩ − i⟨X·A⟩`. Not clamped, so
/// noisy inputs may exceed 1.
pub fn combine_expectations(n_system: usize, expectations: &[f64]) -> Result<f64> {
    check_n(n_system)?;
    let parity = Parity::of(n_system);
    if expectations.len() != parity.settings_count() {
        return Err(Error::Domain(format!(
            "expected {} expectations for N = {n_system}, got {}",
            parity.settings_count(),
            expectations.len()
        )));
    }
    let c: Vec<Complex64> = expectations.chunks(2).map(|p| Complex64::new(p[0], -p[1])).collect();
    Ok(combine_conjugations(parity, &c))
}

fn finish(n_system: usize, raw: f64, components: Vec<Component>) -> Result<MonotoneResult> {
    let excess = raw - 1.0;
    if excess > CLAMP_LIMIT {
        return Err(Error::MonotoneOverflow(excess));
    }
    Ok(MonotoneResult {
        value: raw.min(1.0),
        n_system,
        parity: Parity::of(n_system),
        components,
        clamp_residual: excess.max(0.0),
    })
}

/// Monotone evaluated directly on the system amplitudes via `⟨ψ|A|ψ*⟩`.
pub fn monotone_direct(psi: &StateVector) -> Result<MonotoneResult> {
    let n = psi.n_qubits();
    let ops = system_operators(n)?;
    let mut c = Vec::with_capacity(ops.len());
    let mut components = Vec::with_capacity(2 * ops.len());
    for a in &ops {
        let ak = conjugation_expectation(a, psi)?;
        let (z, x) = conjugation_settings(a);
        components.push(Component {
            setting: z,
            expectation: ak.re,
        });
        components.push(Component {
            setting: x,
            expectation: -ak.im,
        });
        c.push(ak);
    }
    finish(n, combine_conjugations(Parity::of(n), &c), components)
}

/// Monotone from the 2 or 6 Hermitian expectations on an enlarged state.
pub fn monotone_embedded(psi_tilde: &StateVector) -> Result<MonotoneResult> {
    let n = psi_tilde
        .n_qubits()
        .checked_sub(1)
        .ok_or_else(|| Error::Domain("empty register".into()))?;
    let settings = required_settings(n)?;
    let components = settings
        .into_iter()
        .map(|setting| {
            let expectation = setting.expectation(psi_tilde)?;
            Ok(Component { setting, expectation })
        })
        .collect::<Result<Vec<_>>>()?;
    let values: Vec<f64> = components.iter().map(|c| c.expectation).collect();
    finish(n, combine_expectations(n, &values)?, components)
}
