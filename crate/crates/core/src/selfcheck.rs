//! Randomized oracle-equivalence suites run by `eqsim selfcheck`.
//!
//! Every suite compares a production path against an independent route
//! (dense matrices, direct amplitude arithmetic, the block form of `H̃`) on
//! small registers and reports the largest discrepancy seen.

use ndarray::Array2;
use num_complex::Complex64;
use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::embedding::{
    block_embedding_matrix, conjugation_expectation, embed_hamiltonian, embed_state, embedded_conjugation_expectation,
};
use crate::error::Result;
use crate::monotones::{monotone_direct, monotone_embedded};
use crate::qcore::dense::{self, DenseMatrix};
use crate::qcore::{evolve, Pauli, PauliString, PauliSum, StateVector};

pub const TOLERANCE: f64 = 1e-9;
const SEED: u64 = 0x5eed_2015;

/// Deliberate defects for exercising the failure path of the checker.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Fault {
    /// Flip the sign relating `Im⟨AK⟩` to `⟨XA⟩`.
    ImaginarySign,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SuiteReport {
    pub name: &'static str,
    pub cases: usize,
    pub max_error: f64,
    pub tolerance: f64,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.max_error.is_finite() && self.max_error < self.tolerance
    }
}

pub fn random_pauli_string<R: Rng + ?Sized>(n: usize, rng: &mut R) -> PauliString {
    const ALL: [Pauli; 4] = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];
    PauliString::new((0..n).map(|_| *ALL.choose(rng).expect("nonempty")).collect()).expect("n >= 1")
}

pub fn random_pauli_sum<R: Rng + ?Sized>(n: usize, n_terms: usize, rng: &mut R) -> PauliSum {
    let terms: Vec<_> = (0..n_terms)
        .map(|_| (rng.random_range(-1.0..1.0), random_pauli_string(n, rng)))
        .collect();
    PauliSum::new(n, terms).expect("terms share a length")
}

/// `exp(M)` by Taylor series on `M/2^s` followed by `s` squarings.
fn dense_expm(m: &DenseMatrix) -> DenseMatrix {
    let norm: f64 = (0..m.ncols())
        .map(|j| m.column(j).iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max);
    let squarings = if norm > 0.5 { (norm / 0.5).log2().ceil() as i32 } else { 0 };
    let scaled = m.mapv(|z| z / 2f64.powi(squarings));
    let dim = m.nrows();
    let mut result = Array2::<Complex64>::eye(dim);
    let mut term = Array2::<Complex64>::eye(dim);
    for k in 1..40 {
        term = term.dot(&scaled).mapv(|z| z / k as f64);
        result += &term;
    }
    for _ in 0..squarings {
        result = result.dot(&result);
    }
    result
}

/// Reference `exp(−iHt)|s⟩` through a dense matrix exponential.
pub fn dense_evolve(h: &PauliSum, s: &StateVector, t: f64) -> Result<Vec<Complex64>> {
    let m = dense::dense_matrix(h)?.mapv(|z| z * Complex64::new(0.0, -t));
    Ok(dense::matvec(&dense_expm(&m), s))
}

fn max_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

struct Suite {
    name: &'static str,
    cases: usize,
    max_error: f64,
}

impl Suite {
    fn new(name: &'static str) -> Self {
        Self {
            name,
            cases: 0,
            max_error: 0.0,
        }
    }

    fn record(&mut self, err: f64) {
        self.cases += 1;
        // NaN must register as a failure
        if err.is_nan() || err > self.max_error {
            self.max_error = err;
        }
    }

    fn report(self) -> SuiteReport {
        SuiteReport {
            name: self.name,
            cases: self.cases,
            max_error: self.max_error,
            tolerance: TOLERANCE,
        }
    }
}

/// Run every suite; `fault` injects a known defect.
pub fn run(fault: Option<Fault>) -> Result<Vec<SuiteReport>> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut reports = Vec::new();

    let mut apply = Suite::new("Pauli action vs dense matrix");
    let mut expect = Suite::new("expectation vs dense sandwich");
    for _ in 0..120 {
        let n = rng.random_range(1..=6);
        let p = random_pauli_string(n, &mut rng);
        let s = StateVector::random(n, &mut rng);
        let m = dense::pauli_string_matrix(&p)?;
        apply.record(max_diff(p.apply(&s)?.amplitudes(), &dense::matvec(&m, &s)));
        let d = dense::sandwich(&m, &s);
        expect.record((p.expectation(&s)? - d.re).abs().max(d.im.abs()));
    }
    reports.push(apply.report());
    reports.push(expect.report());

    let mut re = Suite::new("Re⟨AK⟩ = ⟨ZA⟩");
    let mut im = Suite::new("Im⟨AK⟩ = −⟨XA⟩");
    for _ in 0..400 {
        let n = rng.random_range(2..=5);
        let a = random_pauli_string(n, &mut rng);
        let psi = StateVector::random(n, &mut rng);
        let direct = conjugation_expectation(&a, &psi)?;
        let mut embedded = embedded_conjugation_expectation(&a, &embed_state(&psi))?;
        if fault == Some(Fault::ImaginarySign) {
            embedded = embedded.conj();
        }
        re.record((direct.re - embedded.re).abs());
        im.record((direct.im - embedded.im).abs());
    }
    reports.push(re.report());
    reports.push(im.report());

    let mut block = Suite::new("embedded Hamiltonian vs block form");
    for _ in 0..40 {
        let n = rng.random_range(1..=4);
        let k = rng.random_range(1..=6);
        let h = random_pauli_sum(n, k, &mut rng);
        let got = dense::dense_matrix(&embed_hamiltonian(&h))?;
        let want = block_embedding_matrix(&h)?;
        block.record(dense::max_abs_diff(&got, &want).max(dense::hermiticity_defect(&got)));
    }
    reports.push(block.report());

    let mut evo = Suite::new("evolution vs dense exponential");
    for _ in 0..30 {
        let n = rng.random_range(1..=4);
        let h = random_pauli_sum(n, rng.random_range(1..=5), &mut rng);
        let s = StateVector::random(n, &mut rng);
        let t = rng.random_range(-3.0..3.0);
        let got = evolve(&h, &s, t)?;
        evo.record(max_diff(got.amplitudes(), &dense_evolve(&h, &s, t)?));
    }
    reports.push(evo.report());

    let mut diagram = Suite::new("embed∘evolve = evolve∘embed");
    for case in 0..30 {
        let n = rng.random_range(2..=4);
        let h = random_pauli_sum(n, rng.random_range(1..=5), &mut rng);
        let psi0 = if case % 2 == 0 {
            StateVector::random_real(n, &mut rng)
        } else {
            StateVector::random(n, &mut rng)
        };
        let h_tilde = embed_hamiltonian(&h);
        for t in [0.1, 0.7, 2.3] {
            let lhs = embed_state(&evolve(&h, &psi0, t)?);
            let rhs = evolve(&h_tilde, &embed_state(&psi0), t)?;
            diagram.record(lhs.max_abs_diff(&rhs));
        }
    }
    reports.push(diagram.report());

    let mut mono = Suite::new("monotone direct vs embedded");
    for _ in 0..200 {
        let n = rng.random_range(2..=5);
        let psi = StateVector::random(n, &mut rng);
        let direct = monotone_direct(&psi)?.value;
        let embedded = monotone_embedded(&embed_state(&psi))?.value;
        mono.record((direct - embedded).abs());
    }
    reports.push(mono.report());

    Ok(reports)
}
