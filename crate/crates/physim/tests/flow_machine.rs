//! Flow-machine invariants at their full tested ranges: exhaustive
//! zero-noise exactness through n = 4 and safe-threshold matvec trials.

use physim::flow::{build_flow_machine, correctness_threshold, flow_matvec};
use physim::matrix::{int_matvec, BinaryMatrix, BinaryVector};
use physim::seeded_rng;

#[test]
fn zero_noise_exact_for_all_4x4_instances() {
    // All 2^16 matrices times all 2^4 vectors.
    let n = 4usize;
    for amask in 0u32..(1 << (n * n)) {
        let rows: Vec<Vec<u8>> = (0..n)
            .map(|i| (0..n).map(|j| ((amask >> (i * n + j)) & 1) as u8).collect())
            .collect();
        let a = BinaryMatrix::from_rows(&rows).unwrap();
        let machine = build_flow_machine(&a, 0.0, 0).unwrap();
        for bmask in 0u32..(1 << n) {
            let bits: Vec<u8> = (0..n).map(|j| ((bmask >> j) & 1) as u8).collect();
            let b = BinaryVector::from_bits(bits).unwrap();
            let r = flow_matvec(&machine, &b, 0.0, 0).unwrap();
            assert_eq!(
                r.c,
                int_matvec(&a, &b).unwrap(),
                "a={amask:016b} b={bmask:04b}"
            );
        }
    }
}

#[test]
fn safe_threshold_matvec_trials_all_exact() {
    // 1000 randomized matvec trials at each size, fresh machine per trial.
    let mut rng = seeded_rng(0xF10);
    for &n in &[4usize, 8, 16, 32, 64] {
        let (delta, eps) = correctness_threshold(n).unwrap();
        for trial in 0..1000u64 {
            let a = BinaryMatrix::random(n, n, 0.5, &mut rng).unwrap();
            let b = BinaryVector::random(n, 0.5, &mut rng).unwrap();
            let machine = build_flow_machine(&a, delta, trial).unwrap();
            let r = flow_matvec(&machine, &b, eps, trial.wrapping_add(500_000)).unwrap();
            assert_eq!(r.c, int_matvec(&a, &b).unwrap(), "n={n} trial={trial}");
        }
    }
}

#[test]
fn certified_thresholds_hold_even_for_worst_case_splitters() {
    // The safe bound is a worst-case argument: with every splitter pinned
    // at 1/2 + delta_safe (the adversary the certificate covers), rounding
    // must still be exact on every trial.
    use physim::flow::{build_flow_machine_with, SplitterPerturbation};
    let mut rng = seeded_rng(0xF12);
    for &n in &[2usize, 4, 8, 16, 32, 64] {
        let (delta, eps) = correctness_threshold(n).unwrap();
        for trial in 0..50u64 {
            let a = BinaryMatrix::random(n, n, 0.5, &mut rng).unwrap();
            let b = BinaryVector::random(n, 0.5, &mut rng).unwrap();
            let machine =
                build_flow_machine_with(&a, delta, trial, SplitterPerturbation::WorstCase)
                    .unwrap();
            let r = flow_matvec(&machine, &b, eps, trial.wrapping_add(9_000)).unwrap();
            assert_eq!(r.c, int_matvec(&a, &b).unwrap(), "n={n} trial={trial}");
        }
    }
}

#[test]
fn material_conservation_across_sizes() {
    // With exact measurement, channels plus garbage account for every unit
    // poured in, even with heavily perturbed splitters.
    let mut rng = seeded_rng(0xF11);
    for &n in &[1usize, 2, 5, 16, 33, 64, 100] {
        let a = BinaryMatrix::random(n, n, 0.5, &mut rng).unwrap();
        let machine = build_flow_machine(&a, 0.4, n as u64).unwrap();
        let b = BinaryVector::random(n, 0.5, &mut rng).unwrap();
        let r = flow_matvec(&machine, &b, 0.0, 7).unwrap();
        let collected: f64 = r.channel_totals.iter().sum::<f64>() + r.garbage_total;
        let poured = b.count_ones() as f64;
        assert!(
            (collected - poured).abs() <= 1e-9 * poured.max(1.0),
            "n={n}: collected {collected} vs poured {poured}"
        );
    }
}
