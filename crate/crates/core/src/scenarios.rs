//! End-to-end runs: evolve, embed, measure and form monotones over a time
//! grid, then fit a single visibility amplitude.

use std::f64::consts::{PI, SQRT_2};

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::embedding::{embed_state, EmbeddedSystem};
use crate::error::{Error, Result};
use crate::measurement::{apply_visibility, sample_from_expectation, substream_seed, MeasurementRecord, NoiseModel};
use crate::monotones::{combine_expectations, required_settings, Parity, CLAMP_LIMIT};
use crate::qcore::{evolve, PauliSum, StateVector};

pub const DEFAULT_STEPS: usize = 12;
pub const MAX_SYSTEM_QUBITS: usize = 20;

/// How `|ψ̃(t)⟩` is produced. Both must agree; that agreement is the
/// embedding identity exercised end to end.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EvolutionMode {
    /// Evolve the enlarged state under `H̃`.
    #[default]
    Embedded,
    /// Evolve `|ψ⟩` under `H`, then embed.
    Direct,
}

impl std::str::FromStr for EvolutionMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "embedded" => Ok(Self::Embedded),
            "direct" => Ok(Self::Direct),
            other => Err(Error::config("evolution_mode", format!("unknown mode {other:?}"))),
        }
    }
}

fn default_steps() -> usize {
    DEFAULT_STEPS
}

fn default_alpha() -> f64 {
    1.0
}

/// On-disk form of a [`ScenarioConfig`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioDoc {
    pub name: String,
    pub n_system: usize,
    pub hamiltonian: String,
    #[serde(default)]
    pub initial_state: Option<Vec<[f64; 2]>>,
    pub dt: f64,
    #[serde(default = "default_steps")]
    pub steps: usize,
    #[serde(default)]
    pub shots: Option<u64>,
    #[serde(default = "default_alpha")]
    pub alpha: f64,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub evolution_mode: EvolutionMode,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ScenarioDoc", into = "ScenarioDoc")]
pub struct ScenarioConfig {
    pub name: String,
    pub n_system: usize,
    pub hamiltonian: PauliSum,
    pub initial_state: StateVector,
    pub dt: f64,
    pub steps: usize,
    pub shots: Option<u64>,
    pub alpha: f64,
    pub seed: u64,
    pub evolution_mode: EvolutionMode,
}

impl TryFrom<ScenarioDoc> for ScenarioConfig {
    type Error = Error;

    fn try_from(doc: ScenarioDoc) -> Result<Self> {
        if doc.name.trim().is_empty() {
            return Err(Error::config("name", "must not be empty"));
        }
        if !(2..=MAX_SYSTEM_QUBITS).contains(&doc.n_system) {
            return Err(Error::config(
                "n_system",
                format!("must lie in 2..={MAX_SYSTEM_QUBITS}, got {}", doc.n_system),
            ));
        }
        let hamiltonian: PauliSum = doc
            .hamiltonian
            .parse()
            .map_err(|e: Error| Error::config("hamiltonian", e.to_string()))?;
        if hamiltonian.n_qubits() != doc.n_system {
            return Err(Error::config(
                "hamiltonian",
                format!("acts on {} qubits but n_system is {}", hamiltonian.n_qubits(), doc.n_system),
            ));
        }
        let initial_state = match doc.initial_state {
            None => StateVector::zero(doc.n_system)?,
            Some(pairs) => {
                let amps = pairs.iter().map(|&[re, im]| Complex64::new(re, im)).collect();
                let s = StateVector::new(amps).map_err(|e| Error::config("initial_state", e.to_string()))?;
                if s.n_qubits() != doc.n_system {
                    return Err(Error::config(
                        "initial_state",
                        format!("has {} qubits but n_system is {}", s.n_qubits(), doc.n_system),
                    ));
                }
                s
            }
        };
        if !(doc.dt.is_finite() && doc.dt > 0.0) {
            return Err(Error::config("dt", format!("must be positive and finite, got {}", doc.dt)));
        }
        if doc.steps < 1 {
            return Err(Error::config("steps", "must be at least 1"));
        }
        if doc.shots == Some(0) {
            return Err(Error::config("shots", "must be at least 1 when given"));
        }
        NoiseModel::new(doc.alpha)?;
        Ok(Self {
            name: doc.name,
            n_system: doc.n_system,
            hamiltonian,
            initial_state,
            dt: doc.dt,
            steps: doc.steps,
            shots: doc.shots,
            alpha: doc.alpha,
            seed: doc.seed,
            evolution_mode: doc.evolution_mode,
        })
    }
}

impl From<ScenarioConfig> for ScenarioDoc {
    fn from(c: ScenarioConfig) -> Self {
        ScenarioDoc {
            name: c.name,
            n_system: c.n_system,
            hamiltonian: c.hamiltonian.to_string(),
            initial_state: Some(c.initial_state.amplitudes().iter().map(|a| [a.re, a.im]).collect()),
            dt: c.dt,
            steps: c.steps,
            shots: c.shots,
            alpha: c.alpha,
            seed: c.seed,
            evolution_mode: c.evolution_mode,
        }
    }
}

impl ScenarioConfig {
    pub fn noise_model(&self) -> NoiseModel {
        NoiseModel::new(self.alpha).expect("alpha validated at construction")
    }

    pub fn parity(&self) -> Parity {
        Parity::of(self.n_system)
    }

    pub fn embedded_system(&self) -> Result<EmbeddedSystem> {
        EmbeddedSystem::new(&self.hamiltonian, &self.initial_state)
    }

    pub fn times(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.steps).map(|k| k as f64 * self.dt)
    }
}

/// Two-qubit concurrence experiment: `H = XY + XZ` from `|00⟩`, `Δt = π/(12√2)`.
pub fn builtin_concurrence_scenario() -> ScenarioConfig {
    ScenarioConfig {
        name: "concurrence".into(),
        n_system: 2,
        hamiltonian: "XY + XZ".parse().expect("static Hamiltonian"),
        initial_state: StateVector::zero(2).expect("two qubits"),
        dt: PI / (12.0 * SQRT_2),
        steps: DEFAULT_STEPS,
        shots: None,
        alpha: 1.0,
        seed: 0,
        evolution_mode: EvolutionMode::Embedded,
    }
}

/// Three-qubit three-tangle experiment: `H = XXX` from `|000⟩`, `Δt = π/12`.
pub fn builtin_tangle_scenario() -> ScenarioConfig {
    ScenarioConfig {
        name: "tangle".into(),
        n_system: 3,
        hamiltonian: "XXX".parse().expect("static Hamiltonian"),
        initial_state: StateVector::zero(3).expect("three qubits"),
        dt: PI / 12.0,
        steps: DEFAULT_STEPS,
        shots: None,
        alpha: 1.0,
        seed: 0,
        evolution_mode: EvolutionMode::Embedded,
    }
}

pub fn builtin(name: &str) -> Option<ScenarioConfig> {
    match name {
        "concurrence" => Some(builtin_concurrence_scenario()),
        "tangle" => Some(builtin_tangle_scenario()),
        _ => None,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TimePoint {
    pub t_index: usize,
    pub t: f64,
    pub records: Vec<MeasurementRecord>,
    pub monotone_ideal: f64,
    pub monotone_noisy: f64,
    pub monotone_sampled: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TimeSeries {
    pub config: ScenarioConfig,
    pub points: Vec<TimePoint>,
}

impl TimeSeries {
    pub fn monotone_ideal(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.monotone_ideal).collect()
    }

    pub fn monotone_noisy(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.monotone_noisy).collect()
    }
}

fn clamp_unit(raw: f64) -> Result<f64> {
    if raw - 1.0 > CLAMP_LIMIT {
        return Err(Error::MonotoneOverflow(raw - 1.0));
    }
    Ok(raw.min(1.0))
}

/// Enlarged state at time `t` under the configured evolution mode.
pub fn enlarged_state(config: &ScenarioConfig, system: &EmbeddedSystem, t: f64) -> Result<StateVector> {
    match config.evolution_mode {
        EvolutionMode::Embedded => system.state_at(t),
        EvolutionMode::Direct => Ok(embed_state(&evolve(&config.hamiltonian, &config.initial_state, t)?)),
    }
}

/// Run the configured experiment over `t = k·dt`, `k = 0..steps`.
///
/// Grid points are evaluated in parallel, each evolved from `t = 0`; sampling
/// seeds depend only on `(seed, k, setting)`, so output does not depend on
/// scheduling.
pub fn run_scenario(config: &ScenarioConfig) -> Result<TimeSeries> {
    let settings = required_settings(config.n_system)?;
    let system = config.embedded_system()?;
    let noise = config.noise_model();

    let points = (0..config.steps)
        .into_par_iter()
        .map(|k| {
            let t = k as f64 * config.dt;
            let state = enlarged_state(config, &system, t)?;
            let records = settings
                .iter()
                .map(|setting| {
                    let ideal = setting.expectation(&state)?;
                    let noisy = apply_visibility(ideal, setting, noise);
                    let (sampled, stderr) = match config.shots {
                        Some(shots) => {
                            let e = sample_from_expectation(noisy, shots, substream_seed(config.seed, k, setting))?;
                            (Some(e.value), Some(e.stderr))
                        }
                        None => (None, None),
                    };
                    Ok(MeasurementRecord {
                        t,
                        setting: setting.clone(),
                        ideal,
                        noisy,
                        sampled,
                        stderr,
                        shots: config.shots,
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            let ideal: Vec<f64> = records.iter().map(|r| r.ideal).collect();
            let noisy: Vec<f64> = records.iter().map(|r| r.noisy).collect();
            let sampled: Option<Vec<f64>> = records.iter().map(|r| r.sampled).collect();
            Ok(TimePoint {
                t_index: k,
                t,
                monotone_ideal: clamp_unit(combine_expectations(config.n_system, &ideal)?)?,
                monotone_noisy: clamp_unit(combine_expectations(config.n_system, &noisy)?)?,
                monotone_sampled: sampled
                    .map(|s| combine_expectations(config.n_system, &s))
                    .transpose()?,
                records,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    Ok(TimeSeries {
        config: config.clone(),
        points,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FitModel {
    /// `m = α·m_ideal`
    EvenLinear,
    /// `m = α²·m_ideal`
    OddQuadratic,
}

impl FitModel {
    pub fn for_parity(parity: Parity) -> Self {
        match parity {
            Parity::Even => FitModel::EvenLinear,
            Parity::Odd => FitModel::OddQuadratic,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FitSource {
    Sampled,
    Noisy,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AmplitudeFit {
    pub model: FitModel,
    pub source: FitSource,
    pub alpha_hat: f64,
    /// RMS of `m_k − g(α̂, t_k)` over all points.
    pub residual: f64,
    pub n_points: usize,
}

/// Least-squares visibility amplitude.
///
/// The model is linear in `β = α` (even) or `β = α²` (odd), so the optimum is
/// regression through the origin, `β = Σ m·g / Σ g²`, clipped at 0 for the
/// quadratic model. Uses sampled monotones when every point has one, noisy
/// monotones otherwise.
pub fn fit_amplitude(series: &TimeSeries, model: FitModel) -> Result<AmplitudeFit> {
    let nonzero = series.points.iter().filter(|p| p.monotone_ideal > 1e-12).count();
    if nonzero < 3 {
        return Err(Error::Unfittable(format!(
            "need at least 3 points with nonzero ideal monotone, found {nonzero}"
        )));
    }
    let sampled: Option<Vec<f64>> = series.points.iter().map(|p| p.monotone_sampled).collect();
    let (source, data) = match sampled {
        Some(s) => (FitSource::Sampled, s),
        None => (FitSource::Noisy, series.monotone_noisy()),
    };
    let ideal = series.monotone_ideal();
    let sxy: f64 = ideal.iter().zip(&data).map(|(g, m)| g * m).sum();
    let sxx: f64 = ideal.iter().map(|g| g * g).sum();
    let beta = sxy / sxx;
    let (alpha_hat, scale) = match model {
        FitModel::EvenLinear => (beta, beta),
        FitModel::OddQuadratic => {
            let b = beta.max(0.0);
            (b.sqrt(), b)
        }
    };
    let sse: f64 = ideal.iter().zip(&data).map(|(g, m)| (m - scale * g).powi(2)).sum();
    Ok(AmplitudeFit {
        model,
        source,
        alpha_hat,
        residual: (sse / ideal.len() as f64).sqrt(),
        n_points: ideal.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::embedding::embed_hamiltonian;

    #[test]
    fn builtin_concurrence() {
        let c = builtin_concurrence_scenario();
        assert_eq!(embed_hamiltonian(&c.hamiltonian).to_string(), "1*IXY − 1*YXZ");
        assert_eq!(c.initial_state, StateVector::zero(2).unwrap());
        assert!((c.dt - 0.185_12).abs() < 5e-6);
    }

    #[test]
    fn builtin_tangle() {
        let c = builtin_tangle_scenario();
        let sys = c.embedded_system().unwrap();
        assert_eq!(sys.h_tilde.to_string(), "−1*YXXX");
        assert_eq!(sys.psi_tilde_0, StateVector::zero(4).unwrap());
        assert_eq!(required_settings(c.n_system).unwrap().len(), 6);
    }

    #[test]
    fn config_validation_names_fields() {
        let good = ScenarioDoc::from(builtin_concurrence_scenario());
        let field_of = |doc: ScenarioDoc| match ScenarioConfig::try_from(doc) {
            Err(Error::InvalidConfig { field, .. }) => field,
            other => panic!("expected config error, got {other:?}"),
        };
        assert_eq!(field_of(ScenarioDoc { dt: 0.0, ..good.clone() }), "dt");
        assert_eq!(field_of(ScenarioDoc { steps: 0, ..good.clone() }), "steps");
        assert_eq!(field_of(ScenarioDoc { alpha: 1.5, ..good.clone() }), "alpha");
        assert_eq!(field_of(ScenarioDoc { n_system: 1, ..good.clone() }), "n_system");
        assert_eq!(field_of(ScenarioDoc { shots: Some(0), ..good.clone() }), "shots");
        assert_eq!(
            field_of(ScenarioDoc {
                hamiltonian: "XXX".into(),
                ..good.clone()
            }),
            "hamiltonian"
        );
        assert_eq!(
            field_of(ScenarioDoc {
                initial_state: Some(vec![[1.0, 0.0], [1.0, 0.0], [0.0, 0.0], [0.0, 0.0]]),
                ..good.clone()
            }),
            "initial_state"
        );
        assert!(ScenarioConfig::try_from(good).is_ok());
    }

    #[test]
    fn config_json_defaults() {
        let json = r#"{"name":"x","n_system":2,"hamiltonian":"XY + XZ","dt":0.1}"#;
        let c: ScenarioConfig = serde_json::from_str(json).unwrap();
        assert_eq!(c.steps, DEFAULT_STEPS);
        assert_eq!(c.alpha, 1.0);
        assert_eq!(c.shots, None);
        assert_eq!(c.evolution_mode, EvolutionMode::Embedded);
        assert_eq!(c.initial_state, StateVector::zero(2).unwrap());
        let err = serde_json::from_str::<ScenarioConfig>(r#"{"name":"x","n_system":2,"hamiltonian":"XY","dt":0}"#)
            .unwrap_err();
        assert!(err.to_string().contains("dt"), "{err}");
    }

    #[test]
    fn ideal_tangle_series() {
        let series = run_scenario(&builtin_tangle_scenario()).unwrap();
        assert_eq!(series.points.len(), 12);
        for p in &series.points {
            let want = (2.0 * p.t).sin().powi(2);
            assert!((p.monotone_ideal - want).abs() < 1e-9);
            assert!(p.monotone_sampled.is_none());
        }
    }

    #[test]
    fn fit_needs_nonzero_points() {
        let mut c = builtin_tangle_scenario();
        c.steps = 1;
        let series = run_scenario(&c).unwrap();
        assert!(matches!(
            fit_amplitude(&series, FitModel::OddQuadratic),
            Err(Error::Unfittable(_))
        ));
    }

    #[test]
    fn fit_recovers_alpha_exactly_without_shots() {
        let mut c = builtin_concurrence_scenario();
        c.alpha = 0.59;
        let fit = fit_amplitude(&run_scenario(&c).unwrap(), FitModel::EvenLinear).unwrap();
        assert!((fit.alpha_hat - 0.59).abs() < 1e-12);
        assert!(fit.residual < 1e-12);
        assert_eq!(fit.source, FitSource::Noisy);

        let c = builtin_tangle_scenario();
        let fit = fit_amplitude(&run_scenario(&c).unwrap(), FitModel::OddQuadratic).unwrap();
        assert!((fit.alpha_hat - 1.0).abs() < 1e-12);
    }
}
