//! Averaging by diffusion: n heat sources on a sqrt(n) x sqrt(n) insulated
//! plate relax to the mean with no energy input; time scales linearly in n.

use physim::gadgets::{diffuse_average, HeatGrid, DIFFUSION_DEFAULT_MAX_STEPS};
use physim::scaling::fit_exponent;

fn main() {
    let eps = 1e-6;
    println!("hot-corner grids, eps = {eps}:");
    println!(
        "{:>6} {:>8} {:>10} {:>14} {:>12}",
        "side", "cells", "steps", "mean", "heat drift"
    );
    let mut samples = Vec::new();
    for side in [4usize, 8, 16, 32, 64] {
        let grid = HeatGrid::hot_corner(side, 1.0).unwrap();
        let r = diffuse_average(&grid, eps, DIFFUSION_DEFAULT_MAX_STEPS).unwrap();
        println!(
            "{side:>6} {:>8} {:>10} {:>14.9} {:>12.2e}",
            side * side,
            r.steps_used,
            r.mean_estimate,
            r.max_conservation_drift
        );
        samples.push((side * side, r.steps_used as f64));
    }
    let fit = fit_exponent(&samples).unwrap();
    println!(
        "\nsteps ~ n^{:.3} (R^2 = {:.4}); the mean is read from any single cell",
        fit.exponent, fit.r_squared
    );
}
