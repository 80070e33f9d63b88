//! Empirical scaling check across every simulator: sweep n, fit log-log
//! slopes of the ledger totals, and compare with the intended exponents.

use physim::scaling::{fit_exponent, sweep, SweepParams, SweepTarget};

fn main() {
    let rows: Vec<(SweepTarget, Vec<usize>, SweepParams, &str)> = vec![
        (
            SweepTarget::FlowMatmul,
            vec![8, 16, 32, 64],
            SweepParams::default(),
            "~2 + log factor",
        ),
        (
            SweepTarget::KineticMatmul,
            vec![8, 16, 32, 64],
            SweepParams::default(),
            "~2 + log factor",
        ),
        (
            SweepTarget::AlphaCopy,
            (10..=16).map(|k| 1usize << k).collect(),
            SweepParams {
                alpha: 1.0,
                s: 1.0 / 3.0,
                ..SweepParams::default()
            },
            "2/3",
        ),
        (
            SweepTarget::AlphaCopy,
            (10..=16).map(|k| 1usize << k).collect(),
            SweepParams {
                alpha: 2.0,
                s: 0.2,
                ..SweepParams::default()
            },
            "3/5",
        ),
        (
            SweepTarget::AlphaMatmul,
            vec![16, 32, 64, 128, 256],
            SweepParams {
                alpha: 1.0,
                ..SweepParams::default()
            },
            "2 (energy)",
        ),
        (
            SweepTarget::Diffusion,
            vec![16, 64, 256, 1024],
            SweepParams::default(),
            "~1 (time)",
        ),
    ];

    println!(
        "{:<16} {:>7} {:>12} {:>12} {:>9} {:>16}",
        "target", "points", "time exp", "energy exp", "R^2(t)", "expected"
    );
    for (target, ns, params, expected) in rows {
        let samples = sweep(target, &ns, &params, 1).unwrap();
        let tf = fit_exponent(&samples.iter().map(|s| (s.n, s.time)).collect::<Vec<_>>()).unwrap();
        let ef =
            fit_exponent(&samples.iter().map(|s| (s.n, s.energy)).collect::<Vec<_>>()).unwrap();
        println!(
            "{:<16} {:>7} {:>12.4} {:>12.4} {:>9.5} {:>16}",
            target.label(),
            samples.len(),
            tf.exponent,
            ef.exponent,
            tf.r_squared,
            expected
        );
    }
    println!("\nflow and kinetic sweeps verify every product against the plain oracle as they run");
}
