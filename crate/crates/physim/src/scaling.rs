//! Parameter sweeps and log-log exponent fits.
//!
//! Asymptotic claims are checked empirically: run a simulator across a
//! range of `n`, collect ledger totals, and fit `log2(cost)` against
//! `log2(n)` by ordinary least squares. Polylog factors are not modelled
//! separately; acceptance tolerances absorb them.

use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::alpha::{copy_list_cost, matmul_cost};
use crate::cost::measure_cost;
use crate::error::{Error, Result};
use crate::flow::{build_flow_machine, correctness_threshold, flow_matmul_with_machine};
use crate::gadgets::{diffuse_average, DiffusionStatus, HeatGrid, DIFFUSION_DEFAULT_MAX_STEPS};
use crate::kinetic::{brute_boolean_matmul, kinetic_matmul, EnergyModel};
use crate::matrix::{int_matmul, BinaryMatrix};

/// One (n, time, energy) observation from a sweep.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScalingSample {
    pub label: String,
    pub n: usize,
    pub seed: u64,
    pub time: f64,
    pub energy: f64,
}

/// Least-squares fit of `log2(cost) = exponent * log2(n) + intercept`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExponentFit {
    pub exponent: f64,
    pub intercept: f64,
    pub r_squared: f64,
    pub sample_count: usize,
}

/// OLS on `(log2 n, log2 cost)`. Requires at least two samples with
/// distinct `n` and strictly positive costs.
pub fn fit_exponent(samples: &[(usize, f64)]) -> Result<ExponentFit> {
    if samples.len() < 2 {
        return Err(Error::InvalidInput(format!(
            "need at least 2 samples to fit, got {}",
            samples.len()
        )));
    }
    let mut seen = std::collections::BTreeSet::new();
    for &(n, cost) in samples {
        if n == 0 {
            return Err(Error::InvalidInput("sample n must be >= 1".into()));
        }
        if !seen.insert(n) {
            return Err(Error::InvalidInput(format!("duplicate sample n={n}")));
        }
        if !(cost > 0.0) {
            return Err(Error::InvalidInput(format!(
                "cost must be positive to fit a power law, got {cost} at n={n}"
            )));
        }
    }

    let pts: Vec<(f64, f64)> = samples
        .iter()
        .map(|&(n, c)| ((n as f64).log2(), c.log2()))
        .collect();
    let count = pts.len() as f64;
    let mean_x = pts.iter().map(|p| p.0).sum::<f64>() / count;
    let mean_y = pts.iter().map(|p| p.1).sum::<f64>() / count;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mean_x).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mean_x) * (p.1 - mean_y)).sum();
    let slope = sxy / sxx;
    let intercept = mean_y - slope * mean_x;

    let ss_tot: f64 = pts.iter().map(|p| (p.1 - mean_y).powi(2)).sum();
    let ss_res: f64 = pts
        .iter()
        .map(|p| (p.1 - (slope * p.0 + intercept)).powi(2))
        .sum();
    let r_squared = if ss_tot == 0.0 {
        1.0
    } else {
        (1.0 - ss_res / ss_tot).clamp(0.0, 1.0)
    };

    Ok(ExponentFit {
        exponent: slope,
        intercept,
        r_squared,
        sample_count: samples.len(),
    })
}

/// Which simulator a sweep drives.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepTarget {
    FlowMatmul,
    KineticMatmul,
    AlphaCopy,
    AlphaMatmul,
    Diffusion,
}

impl SweepTarget {
    pub fn label(&self) -> &'static str {
        match self {
            SweepTarget::FlowMatmul => "flow-matmul",
            SweepTarget::KineticMatmul => "kinetic-matmul",
            SweepTarget::AlphaCopy => "alpha-copy",
            SweepTarget::AlphaMatmul => "alpha-matmul",
            SweepTarget::Diffusion => "diffusion",
        }
    }

    pub const ALL: [SweepTarget; 5] = [
        SweepTarget::FlowMatmul,
        SweepTarget::KineticMatmul,
        SweepTarget::AlphaCopy,
        SweepTarget::AlphaMatmul,
        SweepTarget::Diffusion,
    ];
}

impl FromStr for SweepTarget {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SweepTarget::ALL
            .into_iter()
            .find(|t| t.label() == s)
            .ok_or_else(|| {
                Error::InvalidParameter(format!(
                    "unknown sweep target {s:?}; expected one of {}",
                    SweepTarget::ALL.map(|t| t.label()).join(", ")
                ))
            })
    }
}

/// Which clearing-energy model kinetic sweeps use.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KineticModelKind {
    Kinetic,
    Optical,
}

impl KineticModelKind {
    pub fn for_n(self, n: usize) -> EnergyModel {
        match self {
            KineticModelKind::Kinetic => EnergyModel::Kinetic,
            KineticModelKind::Optical => EnergyModel::optical_for(n),
        }
    }
}

/// Per-family knobs for a sweep; unset thresholds default to the certified
/// safe values for each n.
#[derive(Debug, Clone)]
pub struct SweepParams {
    pub delta: Option<f64>,
    pub eps_meas: Option<f64>,
    pub density: f64,
    pub model: KineticModelKind,
    pub alpha: f64,
    pub s: f64,
    /// Process-count exponent for the copy family; `None` picks the
    /// balanced `q = 1 - alpha * s`.
    pub q: Option<f64>,
    pub diffusion_eps: f64,
}

impl Default for SweepParams {
    fn default() -> Self {
        Self {
            delta: None,
            eps_meas: None,
            density: 0.5,
            model: KineticModelKind::Kinetic,
            alpha: 1.0,
            s: 1.0 / 3.0,
            q: None,
            diffusion_eps: 1e-6,
        }
    }
}

impl SweepParams {
    pub fn copy_q(&self) -> f64 {
        self.q.unwrap_or((1.0 - self.alpha * self.s).clamp(0.0, 1.0))
    }
}

/// Run `target` at each `n`, deterministically: run `i` uses seed
/// `seed + i`. Flow and kinetic runs are verified against their oracles;
/// a mismatch aborts the sweep with the offending `n` attached.
pub fn sweep(
    target: SweepTarget,
    n_values: &[usize],
    params: &SweepParams,
    seed: u64,
) -> Result<Vec<ScalingSample>> {
    if n_values.is_empty() {
        return Err(Error::InvalidInput("n_values must be nonempty".into()));
    }
    if n_values.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidInput(
            "n_values must be strictly ascending".into(),
        ));
    }
    let mut samples = Vec::with_capacity(n_values.len());
    for (idx, &n) in n_values.iter().enumerate() {
        let run_seed = seed.wrapping_add(idx as u64);
        let (time, energy) = run_one(target, n, params, run_seed).map_err(|e| e.at_n(n))?;
        samples.push(ScalingSample {
            label: target.label().to_string(),
            n,
            seed: run_seed,
            time,
            energy,
        });
    }
    Ok(samples)
}

fn run_one(
    target: SweepTarget,
    n: usize,
    params: &SweepParams,
    run_seed: u64,
) -> Result<(f64, f64)> {
    match target {
        SweepTarget::FlowMatmul => {
            let mut rng = ChaCha8Rng::seed_from_u64(run_seed);
            let a = BinaryMatrix::random(n, n, params.density, &mut rng)?;
            let b = BinaryMatrix::random(n, n, params.density, &mut rng)?;
            let (safe_delta, safe_eps) = correctness_threshold(n)?;
            let delta = params.delta.unwrap_or(safe_delta);
            let eps = params.eps_meas.unwrap_or(safe_eps);
            let machine = build_flow_machine(&a, delta, run_seed)?;
            let (c, matvec_ledger) =
                flow_matmul_with_machine(&machine, &b, eps, run_seed.wrapping_add(1))?;
            let oracle = int_matmul(&a, &b)?;
            if c.entries() != oracle.entries() {
                return Err(Error::SimulationFault(
                    "flow product disagrees with integer oracle".into(),
                ));
            }
            let time = machine.construction_ledger().total_time() + matvec_ledger.total_time();
            let energy =
                machine.construction_ledger().total_energy() + matvec_ledger.total_energy();
            Ok((time, energy))
        }
        SweepTarget::KineticMatmul => {
            let mut rng = ChaCha8Rng::seed_from_u64(run_seed);
            let a = BinaryMatrix::random(n, n, params.density, &mut rng)?;
            let b = BinaryMatrix::random(n, n, params.density, &mut rng)?;
            let r = kinetic_matmul(&a, &b, params.model.for_n(n))?;
            if r.c != brute_boolean_matmul(&a, &b)? {
                return Err(Error::SimulationFault(
                    "kinetic product disagrees with Boolean oracle".into(),
                ));
            }
            Ok((r.ledger.total_time(), r.ledger.total_energy()))
        }
        SweepTarget::AlphaCopy => {
            let report = copy_list_cost(n, params.copy_q(), params.s, params.alpha)?;
            Ok((report.time, report.energy))
        }
        SweepTarget::AlphaMatmul => {
            let report = matmul_cost(n, params.alpha)?;
            Ok((report.time, report.energy))
        }
        SweepTarget::Diffusion => {
            let side = (n as f64).sqrt().round() as usize;
            if side * side != n {
                return Err(Error::InvalidParameter(format!(
                    "diffusion sweep needs square cell counts, got n={n}"
                )));
            }
            let grid = HeatGrid::hot_corner(side, 1.0)?;
            let r = diffuse_average(&grid, params.diffusion_eps, DIFFUSION_DEFAULT_MAX_STEPS)?;
            if r.status != DiffusionStatus::Converged {
                return Err(Error::SimulationFault(format!(
                    "diffusion did not converge within {DIFFUSION_DEFAULT_MAX_STEPS} steps"
                )));
            }
            // Diffusion itself is free; reading out the answer is a
            // measurement at the requested accuracy.
            let readout = measure_cost(r.mean_estimate, params.diffusion_eps)?;
            Ok((r.steps_used as f64 + readout.time, readout.energy))
        }
    }
}
