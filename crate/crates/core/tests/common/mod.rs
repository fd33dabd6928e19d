//! Independent reference formulas shared by the integration tests.
#![allow(dead_code)]

use eqsim::StateVector;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Wootters pure-state concurrence `2|a₀₀a₁₁ − a₀₁a₁₀|`.
pub fn concurrence_2q(s: &StateVector) -> f64 {
    let a = s.amplitudes();
    2.0 * (a[0] * a[3] - a[1] * a[2]).norm()
}

/// Three-tangle `4|d₁ − 2d₂ + 4d₃|` from Cayley's hyperdeterminant.
pub fn tangle_3q(s: &StateVector) -> f64 {
    let a = |i: usize| s.amplitudes()[i];
    let d1 = a(0).powi(2) * a(7).powi(2)
        + a(1).powi(2) * a(6).powi(2)
        + a(2).powi(2) * a(5).powi(2)
        + a(4).powi(2) * a(3).powi(2);
    let d2 = a(0) * a(7) * a(3) * a(4)
        + a(0) * a(7) * a(5) * a(2)
        + a(0) * a(7) * a(6) * a(1)
        + a(3) * a(4) * a(5) * a(2)
        + a(3) * a(4) * a(6) * a(1)
        + a(5) * a(2) * a(6) * a(1);
    let d3 = a(0) * a(6) * a(5) * a(3) + a(7) * a(1) * a(2) * a(4);
    4.0 * (d1 - 2.0 * d2 + 4.0 * d3).norm()
}

/// `(|011⟩ − |101⟩ + |110⟩)/√3`.
pub fn w_type() -> StateVector {
    let s = 1.0 / 3f64.sqrt();
    let mut amps = vec![0.0; 8];
    amps[0b011] = s;
    amps[0b101] = -s;
    amps[0b110] = s;
    StateVector::from_real(&amps).unwrap()
}

/// `cos(√2t)|000⟩ + sin(√2t)/√2 |011⟩ − sin(√2t)/√2 |110⟩`.
pub fn printed_concurrence_state(t: f64) -> Vec<f64> {
    let (co, si) = ((2f64.sqrt() * t).cos(), (2f64.sqrt() * t).sin() / 2f64.sqrt());
    let mut v = vec![0.0; 8];
    v[0b000] = co;
    v[0b011] = si;
    v[0b110] = -si;
    v
}

/// `cos(t)|0000⟩ − sin(t)|1111⟩`.
pub fn printed_tangle_state(t: f64) -> Vec<f64> {
    let mut v = vec![0.0; 16];
    v[0] = t.cos();
    v[15] = -t.sin();
    v
}

/// Sample mean and (n−1) standard deviation.
pub fn mean_std(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}
