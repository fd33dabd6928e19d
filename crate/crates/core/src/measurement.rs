//! Simulated laboratory readout: visibility degradation and finite-shot
//! sampling of ±1-valued Pauli observables.

use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rand_distr::{Binomial, Distribution};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qcore::{PauliString, StateVector};

/// One `(time, setting)` cell of a simulated experiment.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MeasurementRecord {
    pub t: f64,
    pub setting: PauliString,
    pub ideal: f64,
    pub noisy: f64,
    pub sampled: Option<f64>,
    pub stderr: Option<f64>,
    pub shots: Option<u64>,
}

/// Single visibility factor applied to every correlation expectation.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NoiseModel {
    alpha: f64,
}

impl NoiseModel {
    pub fn new(alpha: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&alpha) {
            return Err(Error::config("alpha", format!("visibility must lie in [0, 1], got {alpha}")));
        }
        Ok(Self { alpha })
    }

    pub fn ideal() -> Self {
        Self { alpha: 1.0 }
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }
}

/// `α·value` for non-identity settings; the identity is left untouched.
pub fn apply_visibility(value: f64, setting: &PauliString, model: NoiseModel) -> f64 {
    if setting.is_identity() {
        value
    } else {
        model.alpha * value
    }
}

/// An expectation estimate with its standard error.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub stderr: f64,
}

/// Standard error of `E = (n₊ − n₋)/n` for `k = n₊` successes out of `n`:
/// `2·sqrt(k(n−k)/n)/n`, floored at `2/n` when `k ∈ {0, n}`.
fn binomial_stderr(k: u64, n: u64) -> f64 {
    let (k, n) = (k as f64, n as f64);
    let se = 2.0 * (k * (n - k) / n).sqrt() / n;
    if se == 0.0 {
        2.0 / n
    } else {
        se
    }
}

/// Draw `shots` ±1 outcomes with mean `expectation` from a generator seeded
/// by `seed`.
pub fn sample_from_expectation(expectation: f64, shots: u64, seed: u64) -> Result<Estimate> {
    if shots < 1 {
        return Err(Error::Domain("shots must be at least 1".into()));
    }
    let p = ((1.0 + expectation) / 2.0).clamp(0.0, 1.0);
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let k = Binomial::new(shots, p)
        .map_err(|e| Error::Domain(format!("binomial parameters: {e}")))?
        .sample(&mut rng);
    Ok(Estimate {
        value: 2.0 * k as f64 / shots as f64 - 1.0,
        stderr: binomial_stderr(k, shots),
    })
}

/// Finite-shot estimate of `⟨s|P|s⟩`.
pub fn sample_expectation(p: &PauliString, s: &StateVector, shots: u64, seed: u64) -> Result<Estimate> {
    if p.is_identity() {
        return Err(Error::Domain("the identity string has expectation 1; nothing to sample".into()));
    }
    if shots < 1 {
        return Err(Error::Domain("shots must be at least 1".into()));
    }
    sample_from_expectation(p.expectation(s)?, shots, seed)
}

/// Expectation and propagated Poisson error from raw ±1 outcome counts.
pub fn poisson_counting_stderr(n_plus: u64, n_minus: u64) -> Result<Estimate> {
    let n = n_plus + n_minus;
    if n == 0 {
        return Err(Error::Domain("all counts are zero".into()));
    }
    let (p, m, nf) = (n_plus as f64, n_minus as f64, n as f64);
    let se = 2.0 * (p * m / (nf * nf * nf)).sqrt();
    Ok(Estimate {
        value: (p - m) / nf,
        stderr: if se == 0.0 { 2.0 / nf } else { se },
    })
}

/// Per-record seed `seed ⊕ hash(t_index, setting)`, stable across platforms
/// and independent of evaluation order.
pub fn substream_seed(seed: u64, t_index: usize, setting: &PauliString) -> u64 {
    // FNV-1a followed by a splitmix64 finalizer
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    let mut eat = |b: u8| {
        h ^= b as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    };
    (t_index as u64).to_le_bytes().into_iter().for_each(&mut eat);
    eat(b':');
    setting.to_string().bytes().for_each(&mut eat);
    h ^= h >> 30;
    h = h.wrapping_mul(0xbf58_476d_1ce4_e5b9);
    h ^= h >> 27;
    h = h.wrapping_mul(0x94d0_49bb_1331_11eb);
    h ^= h >> 31;
    seed ^ h
}
