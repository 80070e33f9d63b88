//! One matrix-vector product on the flow machine, shown end to end:
//! leaf fractions, channel readings, rounding, and the cost ledger.

use physim::flow::{build_flow_machine, correctness_threshold, flow_matvec};
use physim::matrix::{int_matvec, BinaryMatrix, BinaryVector};
use physim::seeded_rng;

fn main() {
    let n = 8usize;
    let seed = 42;
    let mut rng = seeded_rng(seed);
    let a = BinaryMatrix::random(n, n, 0.5, &mut rng).unwrap();
    let b = BinaryVector::random(n, 0.5, &mut rng).unwrap();

    let (delta, eps) = correctness_threshold(n).unwrap();
    println!("n = {n}: safe splitter tolerance delta = {delta:e}, measurement noise eps = {eps:e}");

    let machine = build_flow_machine(&a, delta, seed).unwrap();
    println!(
        "machine: {} trees, {} leaves each, construction cost {:.0} time / {:.0} energy",
        n,
        machine.padded_leaves(),
        machine.construction_ledger().total_time(),
        machine.construction_ledger().total_energy()
    );
    let fractions = machine.trees()[0].leaf_fractions();
    println!("tree 0 leaf fractions (should be ~1/{}):", machine.padded_leaves());
    println!("  {:?}", fractions);

    let r = flow_matvec(&machine, &b, eps, seed + 1).unwrap();
    let oracle = int_matvec(&a, &b).unwrap();
    println!("\nb = {:?}", b.bits());
    println!("{:>4} {:>16} {:>10} {:>8}", "i", "measured", "rounded", "exact");
    for (i, measured) in r.raw_measurements.iter().enumerate() {
        println!("{i:>4} {measured:>16.9} {:>10} {:>8}", r.c[i], oracle[i]);
    }
    println!(
        "\nexact product recovered: {}",
        if r.c == oracle { "yes" } else { "NO" }
    );
    println!("garbage channels absorbed {:.6} units", r.garbage_total);

    println!("\nmatvec ledger:");
    for e in r.ledger.entries() {
        println!("  {:<42} time {:>9.3}  energy {:>9.3}", e.label, e.time, e.energy);
    }
    println!(
        "  {:<42} time {:>9.3}  energy {:>9.3}",
        "TOTAL",
        r.ledger.total_time(),
        r.ledger.total_energy()
    );
}
