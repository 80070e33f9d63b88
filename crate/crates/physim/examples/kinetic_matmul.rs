//! Boolean matrix multiplication on the kinetic grid: agents sweep the
//! columns, collisions set answer bits and broadcast slow row-clears, and a
//! weak restoring force resets the grid between matvecs.

use physim::kinetic::{
    brute_boolean_matmul, kinetic_matmul, EnergyModel, CLEAR_ENERGY_LIMIT,
};
use physim::matrix::BinaryMatrix;
use physim::seeded_rng;

fn main() {
    let n = 16usize;
    let mut rng = seeded_rng(3);
    let a = BinaryMatrix::random(n, n, 0.5, &mut rng).unwrap();
    let b = BinaryMatrix::random(n, n, 0.5, &mut rng).unwrap();
    let oracle = brute_boolean_matmul(&a, &b).unwrap();

    for model in [EnergyModel::Kinetic, EnergyModel::optical_for(n)] {
        let r = kinetic_matmul(&a, &b, model).unwrap();
        println!("== {} energy model ==", model.name());
        println!("  product matches oracle: {}", if r.c == oracle { "yes" } else { "NO" });
        println!("  collisions: {}   cells cleared: {}", r.collisions, r.cells_cleared);
        match model {
            EnergyModel::Kinetic => println!(
                "  max clearing energy per collision: {:.6} (bound pi^2/6 = {:.6}, margin {:.6})",
                r.max_clear_energy_per_collision,
                CLEAR_ENERGY_LIMIT,
                CLEAR_ENERGY_LIMIT - r.max_clear_energy_per_collision
            ),
            EnergyModel::Optical { channel_count } => println!(
                "  clearing charges {channel_count} channel units per collision (one per opacity scale)",
            ),
        }
        for prefix in ["place", "agent", "answer", "velocity", "row clearing", "reset"] {
            let (t, e) = r.ledger.subtotal(prefix);
            println!("  {prefix:<24} time {t:>9.2}  energy {e:>9.3}");
        }
        println!(
            "  {:<24} time {:>9.2}  energy {:>9.3}\n",
            "TOTAL",
            r.ledger.total_time(),
            r.ledger.total_energy()
        );
    }

    println!("scaling of the total ledger (kinetic model):");
    println!("{:>5} {:>12} {:>12} {:>18}", "n", "time", "energy", "energy/(n^2 lg n)");
    for n in [8usize, 16, 32, 64, 128] {
        let mut rng = seeded_rng(n as u64);
        let a = BinaryMatrix::random(n, n, 0.5, &mut rng).unwrap();
        let b = BinaryMatrix::random(n, n, 0.5, &mut rng).unwrap();
        let r = kinetic_matmul(&a, &b, EnergyModel::Kinetic).unwrap();
        let nf = n as f64;
        println!(
            "{n:>5} {:>12.0} {:>12.1} {:>18.3}",
            r.ledger.total_time(),
            r.ledger.total_energy(),
            r.ledger.total_energy() / (nf * nf * nf.log2())
        );
    }
}
