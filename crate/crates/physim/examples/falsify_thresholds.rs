//! The safe thresholds are load-bearing: scale the splitter tolerance past
//! them (with every splitter pinned to the worst side) and rounding starts
//! to fail.

use physim::flow::{
    build_flow_machine_with, correctness_threshold, flow_matvec, SplitterPerturbation,
};
use physim::matrix::{int_matvec, BinaryMatrix, BinaryVector};
use physim::seeded_rng;

fn main() {
    let n = 64usize;
    let trials = 100u64;
    let (delta_safe, eps_safe) = correctness_threshold(n).unwrap();
    println!("n = {n}, safe delta = {delta_safe:e}, worst-case splitters, {trials} matvec trials per row\n");
    println!("{:>10} {:>14} {:>12}", "delta/safe", "delta", "misrounds");
    for mult in [1.0, 2.0, 4.0, 10.0, 30.0] {
        let delta = mult * delta_safe;
        let mut rng = seeded_rng(0xFA15);
        let mut misrounds = 0;
        for trial in 0..trials {
            let a = BinaryMatrix::random(n, n, 0.5, &mut rng).unwrap();
            let b = BinaryVector::random(n, 0.5, &mut rng).unwrap();
            let machine =
                build_flow_machine_with(&a, delta, trial, SplitterPerturbation::WorstCase).unwrap();
            let r = flow_matvec(&machine, &b, eps_safe, trial + 1).unwrap();
            if r.c != int_matvec(&a, &b).unwrap() {
                misrounds += 1;
            }
        }
        println!("{mult:>10.1} {delta:>14.6e} {misrounds:>9}/{trials}");
    }
    println!("\nat the certified tolerance every trial rounds exactly; past it, errors pile up");
}
