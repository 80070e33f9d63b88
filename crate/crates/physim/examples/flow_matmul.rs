//! Full n x n product on the flow machine: build once, run n matvecs, and
//! amortize the construction cost across them.

use physim::flow::{correctness_threshold, flow_matmul};
use physim::matrix::{int_matmul, BinaryMatrix};
use physim::seeded_rng;

fn main() {
    println!(
        "{:>5} {:>14} {:>14} {:>16} {:>12}",
        "n", "total time", "total energy", "energy/(n^2 lg n)", "verified"
    );
    for n in [8usize, 16, 32, 64] {
        let seed = n as u64;
        let mut rng = seeded_rng(seed);
        let a = BinaryMatrix::random(n, n, 0.5, &mut rng).unwrap();
        let b = BinaryMatrix::random(n, n, 0.5, &mut rng).unwrap();
        let (delta, eps) = correctness_threshold(n).unwrap();
        let r = flow_matmul(&a, &b, delta, eps, seed).unwrap();
        let ok = r.c.entries() == int_matmul(&a, &b).unwrap().entries();
        let nf = n as f64;
        println!(
            "{n:>5} {:>14.0} {:>14.0} {:>16.3} {:>12}",
            r.ledger.total_time(),
            r.ledger.total_energy(),
            r.ledger.total_energy() / (nf * nf * nf.log2()),
            if ok { "yes" } else { "NO" }
        );
    }
    println!("\nthe normalized column is bounded: total cost tracks n^2 log n");

    // Ledger breakdown for one size.
    let n = 16usize;
    let mut rng = seeded_rng(1);
    let a = BinaryMatrix::random(n, n, 0.5, &mut rng).unwrap();
    let b = BinaryMatrix::random(n, n, 0.5, &mut rng).unwrap();
    let (delta, eps) = correctness_threshold(n).unwrap();
    let r = flow_matmul(&a, &b, delta, eps, 1).unwrap();
    println!("\nn = {n} cost groups:");
    for prefix in [
        "calibrate",
        "fabricate",
        "connect",
        "lift",
        "measure inputs",
        "gravity",
        "measure channel",
    ] {
        let (t, e) = r.ledger.subtotal(prefix);
        println!("  {prefix:<18} time {t:>10.2}  energy {e:>10.2}");
    }
}
