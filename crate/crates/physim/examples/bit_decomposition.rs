//! Integer matrices with r-bit entries multiply via r^2 binary products:
//! decompose both factors into bit planes, run each pair through the flow
//! machine, and recombine with powers of two.

use physim::flow::{correctness_threshold, int_matmul_bitdecomp};
use physim::matrix::{int_matmul_general, IntMatrix};
use physim::seeded_rng;

fn main() {
    let n = 4usize;
    let bits = 3u32;
    let mut rng = seeded_rng(7);
    let a = IntMatrix::random_nonneg(n, bits, &mut rng).unwrap();
    let b = IntMatrix::random_nonneg(n, bits, &mut rng).unwrap();

    println!("A ({bits}-bit entries):");
    print!("{}", a.to_text());
    println!("B:");
    print!("{}", b.to_text());

    let (delta, eps) = correctness_threshold(n).unwrap();
    let (c, ledger) = int_matmul_bitdecomp(&a, &b, delta, eps, 99).unwrap();
    println!("A*B via {}x{} binary products:", bits, bits);
    print!("{}", c.to_text());

    let oracle = int_matmul_general(&a, &b).unwrap();
    println!(
        "matches direct integer product: {}",
        if c.entries() == oracle.entries() { "yes" } else { "NO" }
    );
    println!(
        "total cost: {:.0} time, {:.0} energy across {} ledger entries",
        ledger.total_time(),
        ledger.total_energy(),
        ledger.entries().len()
    );
}
