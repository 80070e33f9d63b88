//! The frictionless-track OR gadget: a probe slides past n possible blocks
//! and the observer checks a single deadline. Energy is v^2, time (n+1)/v,
//! a smooth sublinear tradeoff for v <= sqrt(n).

use physim::gadgets::or_track;

fn main() {
    let bits = [0u8, 0, 0, 1, 0, 0, 0, 0];
    let r = or_track(&bits, 1.0).unwrap();
    println!("bits {:?} -> OR = {}", bits, r.result);
    for e in r.ledger.entries() {
        println!("  {:<45} time {:>8.3}  energy {:>8.3}", e.label, e.time, e.energy);
    }

    let n = 1024usize;
    let zeros = vec![0u8; n];
    println!("\ntime/energy tradeoff on an all-zero track, n = {n}:");
    println!("{:>8} {:>12} {:>12} {:>14}", "v", "time", "energy", "time*sqrt(E)");
    let mut v = 1.0f64;
    while v <= (n as f64).sqrt() {
        let r = or_track(&zeros, v).unwrap();
        let (t, e) = (r.ledger.total_time(), r.ledger.total_energy());
        println!("{v:>8.1} {t:>12.2} {e:>12.2} {:>14.2}", t * e.sqrt());
        v *= 2.0;
    }
    println!("(time falls as 1/v while energy grows as v^2; the product time*sqrt(energy) is invariant)");
}
