//! The rate/energy process model: schedules that trade clock speed for
//! energy, with collision-checked memory access patterns.

use physim::alpha::{
    check_collisions, copy_list_cost, copy_list_schedule, matmul_cost, matmul_schedule,
    matmul_schedule_broken, schedule_cost, subquadratic_matmul_cost, subquadratic_matmul_schedule,
    CollisionCheck,
};

fn main() {
    // Copying a list: n^q processes at rate n^s, each copying n^(1-q) items.
    let n = 4096usize;
    println!("copy-list tradeoff at n = {n} (q balanced to 1 - alpha*s):");
    println!(
        "{:>7} {:>7} {:>10} {:>12} {:>12} {:>10}",
        "alpha", "s", "processes", "time", "energy", "clean"
    );
    for &(alpha, s) in &[(1.0f64, 0.0f64), (1.0, 1.0 / 3.0), (1.0, 0.5), (2.0, 0.2), (2.0, 0.4)] {
        let q = (1.0 - alpha * s).clamp(0.0, 1.0);
        let schedule = copy_list_schedule(n, q, s).unwrap();
        let cost = copy_list_cost(n, q, s, alpha).unwrap();
        assert_eq!(cost, schedule_cost(&schedule, alpha).unwrap());
        println!(
            "{alpha:>7.1} {s:>7.3} {:>10} {:>12.1} {:>12.1} {:>10}",
            cost.process_count,
            cost.time,
            cost.energy,
            if check_collisions(&schedule).is_ok() { "yes" } else { "NO" }
        );
    }

    // Matrix multiplication with the rotating access pattern.
    println!("\nmatmul schedule, n^2 processes at rate n, rotation (i+j+t) mod n:");
    println!("{:>5} {:>12} {:>14} {:>14} {:>8}", "n", "time", "energy(a=1)", "energy(a=2)", "clean");
    for n in [4usize, 16, 64] {
        let schedule = matmul_schedule(n).unwrap();
        let e1 = matmul_cost(n, 1.0).unwrap();
        let e2 = matmul_cost(n, 2.0).unwrap();
        println!(
            "{n:>5} {:>12.0} {:>14.0} {:>14.0} {:>8}",
            e1.time,
            e1.energy,
            e2.energy,
            if check_collisions(&schedule).is_ok() { "yes" } else { "NO" }
        );
    }

    // Negative control: drop the rotation and the very first block collides.
    let broken = matmul_schedule_broken(4).unwrap();
    match check_collisions(&broken) {
        CollisionCheck::Conflict(c) => println!(
            "\nwithout rotation: processes {} and {} clash on location {} during [{}, {})",
            c.process_a, c.process_b, c.location, c.overlap_start, c.overlap_end
        ),
        CollisionCheck::Ok => println!("\nunexpected: broken schedule passed"),
    }

    // Subquadratic regime at alpha = 2: init energy dominates, so use fewer,
    // slower processes covering more entries each.
    println!("\nsubquadratic alpha=2 schedule (n = m^5):");
    println!(
        "{:>6} {:>10} {:>8} {:>12} {:>12} {:>14} {:>8}",
        "n", "processes", "rate", "time", "energy", "cost/n^(9/5)", "clean"
    );
    for n in [32usize, 243] {
        let schedule = subquadratic_matmul_schedule(n).unwrap();
        let cost = subquadratic_matmul_cost(n).unwrap();
        let n95 = (n as f64).powf(1.8);
        println!(
            "{n:>6} {:>10} {:>8.0} {:>12.0} {:>12.0} {:>14.3} {:>8}",
            cost.process_count,
            schedule.processes[0].rate,
            cost.time,
            cost.energy,
            cost.time / n95,
            if check_collisions(&schedule).is_ok() { "yes" } else { "NO" }
        );
    }
    let c1024 = subquadratic_matmul_cost(1024).unwrap();
    println!(
        "{:>6} {:>10} {:>8} {:>12.0} {:>12.0} {:>14.3} {:>8}",
        1024,
        c1024.process_count,
        "64",
        c1024.time,
        c1024.energy,
        c1024.time / (1024f64).powf(1.8),
        "(closed)"
    );
}
