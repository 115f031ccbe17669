use core::f64::consts::{FRAC_PI_2, PI};

use alloc::vec;

use proptest::prelude::*;

use super::*;
use crate::optics::{
    p_classical, p_quantum, AncillaOutcome, Diagonal, ExperimentSetting, NoiseModel, Outcome,
    QrngBit,
};
use crate::qcore::Polarization::{self, H, V};
use crate::Error;

fn close(a: f64, b: f64, tol: f64) {
    assert!((a - b).abs() <= tol, "{a} vs {b} (tol {tol})");
}

fn perp(s: Polarization, c: Diagonal, bit: QrngBit) -> BinKey {
    BinKey::new(Outcome::new(s, c, AncillaOutcome::AlphaPerp), bit)
}

fn record_with(entries: &[(BinKey, u64)]) -> CountRecord {
    let mut counts = [0; 16];
    for &(k, n) in entries {
        counts[k.index()] = n;
    }
    let total = counts.iter().sum();
    CountRecord::new(ExperimentSetting::new(0.0, 0.0, 0.0), counts, total).unwrap()
}

#[test]
fn bin_key_round_trip() {
    for (i, k) in BinKey::all().enumerate() {
        assert_eq!(k.index(), i);
        let [s, c, a, b] = k.codes();
        assert_eq!(BinKey::from_codes(s, c, a, b), Some(k));
    }
    assert_eq!(BinKey::from_codes("H", "X", "A", "0"), None);
}

#[test]
fn quantum_estimator_examples() {
    let rec = record_with(&[
        (perp(H, Diagonal::Minus, QrngBit::Zero), 85),
        (perp(V, Diagonal::Minus, QrngBit::Zero), 15),
    ]);
    let (h, v) = estimate_quantum(&rec.to_bins(), QrngBit::Zero).unwrap();
    close(h.value, 0.85, 1e-15);
    close(h.error, 0.0357, 1e-4);
    close(v.value, 0.15, 1e-15);
    close(v.error, h.error, 1e-15);

    let rec = record_with(&[
        (perp(H, Diagonal::Minus, QrngBit::Zero), 50),
        (perp(V, Diagonal::Minus, QrngBit::Zero), 50),
    ]);
    let est = estimate_probabilities(&rec).unwrap();
    close(est.quantum_h.value, 0.5, 1e-15);
    close(est.quantum_h.error, 0.05, 1e-15);
}

#[test]
fn empty_classical_bins_are_named() {
    let rec = record_with(&[(
        BinKey::new(
            Outcome::new(H, Diagonal::Plus, AncillaOutcome::Alpha),
            QrngBit::Zero,
        ),
        10,
    )]);
    match estimate_probabilities(&rec) {
        Err(Error::InsufficientCounts(names)) => {
            assert_eq!(names.len(), 4);
            assert!(names.iter().any(|n| n == "HPAP/bit0"), "{names:?}");
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn record_rejects_overfull_bins() {
    let s = ExperimentSetting::new(0.0, 0.0, 0.0);
    assert!(CountRecord::new(s, [1; 16], 15).is_err());
    assert!(CountRecord::new(s, [1; 16], 20).is_ok());
}

#[test]
fn expected_bins_reproduce_ideal_formulas() {
    for k in 0..12 {
        let phi = k as f64 * PI / 6.0;
        for j in 0..9 {
            let alpha = j as f64 * FRAC_PI_2 / 8.0;
            let delta = -0.7;
            let bins = BinTable::expected(
                &ExperimentSetting::new(phi, alpha, delta),
                &NoiseModel::IDEAL,
                1e5,
            );
            close(bins.total(), 1e5, 1e-6);
            let est = estimate_branch(&bins, QrngBit::Zero).unwrap();
            close(est.classical_h.value, p_classical(phi, alpha), 1e-12);
            close(
                est.quantum_h.value,
                p_quantum(phi, alpha, delta).unwrap(),
                1e-12,
            );
        }
    }
}

#[test]
fn simulation_is_deterministic_and_conserves_bins() {
    let s = ExperimentSetting::new(1.0, 0.6, 0.2);
    let a = simulate_counts(&s, &NoiseModel::MEASURED, 20_000, 9).unwrap();
    let b = simulate_counts(&s, &NoiseModel::MEASURED, 20_000, 9).unwrap();
    assert_eq!(a, b);
    assert_eq!(a.total_counts(), 20_000);
    assert_ne!(
        a,
        simulate_counts(&s, &NoiseModel::MEASURED, 20_000, 10).unwrap()
    );
    assert!(simulate_counts(&s, &NoiseModel::MEASURED, 0, 9).is_err());
}

#[test]
fn losses_drop_counts() {
    let s = ExperimentSetting::new(1.0, 0.6, 0.2);
    let opts = SimulationOptions {
        detection_probability: 0.5,
    };
    let r = simulate_counts_with(&s, &NoiseModel::MEASURED, 40_000, 3, &opts).unwrap();
    assert_eq!(r.total_trials(), 40_000);
    let kept = r.total_counts() as f64;
    assert!((kept - 20_000.0).abs() < 5.0 * 100.0, "{kept}");
}

#[test]
fn wave_maximum_gives_certain_h() {
    let s = ExperimentSetting::new(PI, FRAC_PI_2, 0.0);
    let r = simulate_counts(&s, &NoiseModel::IDEAL, 1_000_000, 42).unwrap();
    let (h, _) = estimate_quantum(&r.to_bins(), QrngBit::Zero).unwrap();
    // Exact limit: the V bin never fills, so the error bar is 0.
    assert!((h.value - 1.0).abs() <= 5.0 * h.error.max(1e-12), "{h:?}");
}

#[test]
fn bit_balance_in_simulation() {
    let s = ExperimentSetting::new(0.3, 0.4, 0.0);
    let r = simulate_counts(&s, &NoiseModel::MEASURED, 100_000, 5).unwrap();
    let ones: u64 = (8..16).map(|i| r.counts()[i]).sum();
    let sigma = (100_000f64).sqrt() / 2.0;
    assert!((ones as f64 - 50_000.0).abs() < 4.0 * sigma);
}

#[test]
fn merge_adds_bins() {
    let s = ExperimentSetting::new(1.0, 0.6, 0.2);
    let a = simulate_counts(&s, &NoiseModel::MEASURED, 1000, 1).unwrap();
    let b = simulate_counts(&s, &NoiseModel::MEASURED, 500, 2).unwrap();
    let m = a.merge(&b).unwrap();
    assert_eq!(m.total_trials(), 1500);
    assert_eq!(m.total_counts(), 1500);
    let other = CountRecord::empty(ExperimentSetting::new(0.0, 0.0, 0.0));
    assert!(a.merge(&other).is_err());
}

fn aligned() -> SwitchTimeline {
    SwitchSynth::default().build().unwrap()
}

#[test]
fn aligned_classifier_contrast_follows_leakage() {
    let perfect = classify_pulses(&aligned(), ELECTRONICS_LAG_NS);
    assert_eq!(perfect.h_bit0 + perfect.v_bit1, 0);
    assert!(perfect.bit0_contrast().is_infinite());

    // 1/19 leakage is an 18:1 extinction.
    let leaky = SwitchSynth {
        leakage: 1.0 / 19.0,
        ..SwitchSynth::default()
    }
    .build()
    .unwrap();
    let c = classify_pulses(&leaky, ELECTRONICS_LAG_NS).bit0_contrast();
    assert!((15.0..22.0).contains(&c), "{c}");
}

#[test]
fn half_period_offset_scrambles_alternating_stream() {
    let t = SwitchSynth {
        pattern: BitPattern::Alternating,
        ..SwitchSynth::default()
    }
    .build()
    .unwrap();
    let c = classify_pulses(&t, ELECTRONICS_LAG_NS + 100.0).contrast();
    assert!((c - 1.0).abs() < 0.1, "{c}");
}

#[test]
fn offsets_on_random_stream() {
    let t = aligned();
    // A half-period shift still agrees with the true level 3/4 of the time.
    let half = classify_pulses(&t, ELECTRONICS_LAG_NS + 100.0).contrast();
    assert!((half - 3.0).abs() < 0.2, "{half}");
    let full = classify_pulses(&t, ELECTRONICS_LAG_NS + 200.0).contrast();
    assert!((full - 1.0).abs() < 0.1, "{full}");
}

#[test]
fn empty_stream_tallies_zero() {
    let t = SwitchTimeline::new(QrngBit::Zero, vec![100.0], vec![], 0.0).unwrap();
    assert_eq!(classify_pulses(&t, 0.0), Tallies::default());
    assert!(SwitchTimeline::new(QrngBit::Zero, vec![100.0, 100.0], vec![], 0.0).is_err());
}

#[test]
fn calibration_finds_lag() {
    let cal = calibrate_delay(&aligned(), (0.0, 200.0), 2.0).unwrap();
    assert!(
        (cal.best_delay_ns - ELECTRONICS_LAG_NS).abs() <= 2.0,
        "{}",
        cal.best_delay_ns
    );
    assert!(!cal.degenerate);
    assert_eq!(cal.curve.len(), 101);
}

#[test]
fn two_point_scan_matches_direct_evaluation() {
    let t = aligned();
    let a = classify_pulses(&t, 60.0).contrast();
    let b = classify_pulses(&t, 90.0).contrast();
    let cal = calibrate_delay(&t, (60.0, 90.0), 30.0).unwrap();
    assert_eq!(cal.curve, vec![(60.0, a), (90.0, b)]);
    assert!(b > a);
    assert_eq!(cal.best_delay_ns, 90.0);
}

#[test]
fn constant_level_is_degenerate() {
    let t = SwitchSynth {
        pattern: BitPattern::Constant(QrngBit::Zero),
        periods: 2000,
        ..SwitchSynth::default()
    }
    .build()
    .unwrap();
    let cal = calibrate_delay(&t, (0.0, 200.0), 10.0).unwrap();
    assert!(cal.degenerate);
    assert_eq!(cal.best_delay_ns, 0.0);
}

#[test]
fn calibration_rejects_bad_scan() {
    let t = aligned();
    assert!(calibrate_delay(&t, (0.0, 10.0), 0.0).is_err());
    assert!(calibrate_delay(&t, (10.0, 0.0), 1.0).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn ratio_error_matches_binomial(a in 1u32..10_000, b in 1u32..10_000) {
        let (a, b) = (a as f64, b as f64);
        let e = ratio_estimate(a, b).unwrap();
        let n = a + b;
        let binomial = (e.value * (1.0 - e.value) / n).sqrt();
        prop_assert!((e.error - binomial).abs() <= 1e-12);
    }

    #[test]
    fn level_lookup_matches_linear_scan(
        mut edges in proptest::collection::vec(0.0..1000.0f64, 0..20),
        t in -10.0..1010.0f64,
    ) {
        edges.sort_by(f64::total_cmp);
        edges.dedup();
        let tl = SwitchTimeline::new(QrngBit::One, edges.clone(), vec![], 0.0).unwrap();
        let flips = edges.iter().filter(|&&e| e <= t).count();
        let expected = if flips % 2 == 0 { QrngBit::One } else { QrngBit::Zero };
        prop_assert_eq!(tl.level_at(t), expected);
    }
}
