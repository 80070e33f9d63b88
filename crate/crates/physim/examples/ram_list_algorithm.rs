//! The naive RAM algorithm the kinetic machine implements physically:
//! column lists of 1-positions, traversed per set entry of B, with hit rows
//! removed from later lists and everything rebuilt after each column.
//!
//! On a RAM this is NOT quadratic: every hit removes its row from up to n
//! later lists and every column pass undoes those removals, so list
//! operations grow roughly like n^3. The kinetic machine exists to make
//! exactly those two steps free enough - clears ride on slack time at
//! 1/d^2 energy, resets on a weak parallel restoring force - that the same
//! algorithm runs in near-quadratic time and energy.

use physim::kinetic::{brute_boolean_matmul, ram_boolean_matmul};
use physim::matrix::BinaryMatrix;
use physim::scaling::fit_exponent;
use physim::seeded_rng;

fn main() {
    println!("{:>5} {:>12} {:>12} {:>10}", "n", "list ops", "ops/n^2", "correct");
    let mut samples = Vec::new();
    for n in [4usize, 8, 16, 32, 64, 128] {
        let mut rng = seeded_rng(n as u64);
        let a = BinaryMatrix::random(n, n, 0.5, &mut rng).unwrap();
        let b = BinaryMatrix::random(n, n, 0.5, &mut rng).unwrap();
        let (c, ops) = ram_boolean_matmul(&a, &b).unwrap();
        let ok = c == brute_boolean_matmul(&a, &b).unwrap();
        println!(
            "{n:>5} {ops:>12} {:>12.3} {:>10}",
            ops as f64 / (n * n) as f64,
            if ok { "yes" } else { "NO" }
        );
        samples.push((n, ops as f64));
    }
    let fit = fit_exponent(&samples).unwrap();
    println!(
        "\nRAM list operations ~ n^{:.3} (R^2 = {:.4}): removals and resets dominate.",
        fit.exponent, fit.r_squared
    );
    println!("Compare kinetic_matmul, whose ledger stays near n^2 for the same algorithm.");
}
