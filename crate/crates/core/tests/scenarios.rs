mod common;

use std::f64::consts::{FRAC_1_SQRT_2, PI, SQRT_2};

use common::{mean_std, printed_concurrence_state, rng};
use eqsim::measurement::{
    apply_visibility, poisson_counting_stderr, sample_expectation, sample_from_expectation, NoiseModel,
};
use eqsim::qcore::{PauliString, StateVector};
use eqsim::scenarios::{
    builtin_concurrence_scenario, builtin_tangle_scenario, fit_amplitude, run_scenario, EvolutionMode, FitModel,
    FitSource, ScenarioConfig, TimeSeries,
};
use proptest::prelude::*;
use rand::Rng;

#[test]
fn evolution_modes_agree_on_custom_systems() {
    let mut r = rng(5);
    for (h, n) in [("0.3*XYZ - 1.1*ZZI + 0.4*YII", 3), ("XY + 0.5*YY - 0.2*ZI", 2), ("XXYY + 0.7*ZIIZ", 4)] {
        let psi0 = StateVector::random(n, &mut r);
        let base = ScenarioConfig {
            name: "custom".into(),
            n_system: n,
            hamiltonian: h.parse().unwrap(),
            initial_state: psi0,
            dt: 0.23,
            steps: 8,
            ..builtin_concurrence_scenario()
        };
        let a = run_scenario(&ScenarioConfig {
            evolution_mode: EvolutionMode::Embedded,
            ..base.clone()
        })
        .unwrap();
        let b = run_scenario(&ScenarioConfig {
            evolution_mode: EvolutionMode::Direct,
            ..base
        })
        .unwrap();
        for (p, q) in a.points.iter().zip(&b.points) {
            assert!((p.monotone_ideal - q.monotone_ideal).abs() < 1e-9);
            for (x, y) in p.records.iter().zip(&q.records) {
                assert!((x.ideal - y.ideal).abs() < 1e-9, "{h}: {} vs {}", x.ideal, y.ideal);
            }
        }
    }
}

#[test]
fn builtin_series_start_separable_and_peak_at_k3() {
    for (cfg, peak) in [(builtin_concurrence_scenario(), FRAC_1_SQRT_2), (builtin_tangle_scenario(), 1.0)] {
        let s = run_scenario(&cfg).unwrap();
        assert_eq!(s.points[0].monotone_ideal, 0.0);
        assert!((s.points[3].monotone_ideal - peak).abs() < 1e-9);
        let max = s.monotone_ideal().into_iter().fold(0.0, f64::max);
        assert!((max - peak).abs() < 1e-9);
        assert!(s.points.windows(2).all(|w| w[0].t < w[1].t));
    }
}

#[test]
fn concurrence_records_match_closed_form() {
    // ⟨ZYY⟩ = −sin(2√2t)/√2, ⟨XYY⟩ = 0
    let s = run_scenario(&builtin_concurrence_scenario()).unwrap();
    for p in &s.points {
        let want = -(2.0 * SQRT_2 * p.t).sin() / SQRT_2;
        assert!((p.records[0].ideal - want).abs() < 1e-9);
        assert!(p.records[1].ideal.abs() < 1e-12);
    }
    // at √2t = π/4, ⟨ZYY⟩ = −0.70711
    let state = StateVector::from_real(&printed_concurrence_state(PI / (4.0 * SQRT_2))).unwrap();
    let zyy: PauliString = "ZYY".parse().unwrap();
    assert!((zyy.expectation(&state).unwrap() + FRAC_1_SQRT_2).abs() < 1e-15);
}

#[test]
fn noisy_over_ideal_is_alpha_or_alpha_squared() {
    for (base, power) in [(builtin_concurrence_scenario(), 1), (builtin_tangle_scenario(), 2)] {
        let cfg = ScenarioConfig { alpha: 0.7, ..base };
        for p in run_scenario(&cfg).unwrap().points {
            if p.monotone_ideal > 1e-9 {
                assert!((p.monotone_noisy / p.monotone_ideal - 0.7f64.powi(power)).abs() < 1e-12);
            }
            for r in &p.records {
                assert_eq!(r.noisy, 0.7 * r.ideal);
            }
        }
    }
}

#[test]
fn time_series_json_roundtrip() {
    let cfg = ScenarioConfig {
        shots: Some(250),
        alpha: 0.83,
        seed: 99,
        ..builtin_tangle_scenario()
    };
    let series = run_scenario(&cfg).unwrap();
    let text = serde_json::to_string(&series).unwrap();
    let back: TimeSeries = serde_json::from_str(&text).unwrap();
    assert_eq!(back, series);
    assert_eq!(serde_json::to_string(&back).unwrap(), text);
}

#[test]
fn sampled_fit_on_single_seed() {
    let cfg = ScenarioConfig {
        alpha: 0.70,
        shots: Some(10_000),
        seed: 1,
        ..builtin_tangle_scenario()
    };
    let fit = fit_amplitude(&run_scenario(&cfg).unwrap(), FitModel::OddQuadratic).unwrap();
    assert_eq!(fit.source, FitSource::Sampled);
    assert!((fit.alpha_hat - 0.70).abs() < 0.02, "{}", fit.alpha_hat);
}

#[test]
fn fit_identity_case() {
    let fit = fit_amplitude(&run_scenario(&builtin_concurrence_scenario()).unwrap(), FitModel::EvenLinear).unwrap();
    assert!((fit.alpha_hat - 1.0).abs() < 1e-12);
}

#[test]
fn high_shot_estimate_is_within_five_sigma() {
    let state = StateVector::from_real(&printed_concurrence_state(PI / (4.0 * SQRT_2))).unwrap();
    let e = sample_expectation(&"ZYY".parse().unwrap(), &state, 1_000_000, 7).unwrap();
    assert!((e.value + FRAC_1_SQRT_2).abs() < 0.004, "{}", e.value);
    assert!((e.stderr - 0.000_707).abs() < 5e-5);
}

#[test]
fn poisson_stderr_matches_resampling() {
    // bootstrap the 72/28 outcome record
    let mut r = rng(17);
    let draws: Vec<f64> = (0..20_000)
        .map(|_| {
            let plus = (0..100).filter(|_| r.random_range(0..100) < 72).count() as f64;
            (2.0 * plus - 100.0) / 100.0
        })
        .collect();
    let (_, sd) = mean_std(&draws);
    let e = poisson_counting_stderr(72, 28).unwrap();
    assert!((e.stderr - sd).abs() < 0.003, "{} vs {sd}", e.stderr);
}

#[test]
fn sampled_stderr_shrinks_as_inverse_root_shots() {
    let spread = |shots| {
        let xs: Vec<f64> = (0..300)
            .map(|seed| sample_from_expectation(0.3, shots, seed).unwrap().value)
            .collect();
        mean_std(&xs).1
    };
    let ratio = spread(100) / spread(10_000);
    assert!((ratio - 10.0).abs() <= 2.0, "{ratio}");
}

proptest! {
    #[test]
    fn sampling_is_deterministic(seed in any::<u64>(), shots in 1u64..5000, e in -1.0f64..=1.0) {
        let a = sample_from_expectation(e, shots, seed).unwrap();
        let b = sample_from_expectation(e, shots, seed).unwrap();
        prop_assert_eq!(a.value.to_bits(), b.value.to_bits());
        prop_assert_eq!(a.stderr.to_bits(), b.stderr.to_bits());
        prop_assert!((-1.0..=1.0).contains(&a.value));
        prop_assert!(a.stderr > 0.0);
    }

    #[test]
    fn visibility_is_linear_and_monotone(v in -1.0f64..=1.0, w in -1.0f64..=1.0, a1 in 0.0f64..=1.0, a2 in 0.0f64..=1.0) {
        let p: PauliString = "XZ".parse().unwrap();
        let m = NoiseModel::new(a1).unwrap();
        let lin = apply_visibility(0.5 * v + 0.5 * w, &p, m);
        prop_assert!((lin - 0.5 * apply_visibility(v, &p, m) - 0.5 * apply_visibility(w, &p, m)).abs() < 1e-15);
        let (lo, hi) = if a1 <= a2 { (a1, a2) } else { (a2, a1) };
        let (lo_v, hi_v) = (
            apply_visibility(v.abs(), &p, NoiseModel::new(lo).unwrap()),
            apply_visibility(v.abs(), &p, NoiseModel::new(hi).unwrap()),
        );
        prop_assert!(lo_v <= hi_v);
        prop_assert_eq!(apply_visibility(v, &"II".parse().unwrap(), m), v);
    }
}
