//! Sublinear aggregation gadgets: the frictionless-track OR and
//! heat-diffusion averaging.
//!
//! Both gadgets compute an aggregate of `n` values for less time or energy
//! than touching each value serially. The OR track trades energy `v^2`
//! against deadline `(n+1)/v`; the diffusion plate averages `n` heat
//! sources in `O(n log(1/eps))` steps with no energy beyond readout.

use crate::error::{Error, Result};
use crate::ledger::CostLedger;

/// Outcome of one OR-track run.
#[derive(Debug, Clone)]
pub struct OrTrackResult {
    /// OR of the input bits.
    pub result: u8,
    pub ledger: CostLedger,
}

/// Slide a unit-mass probe at velocity `v` along a length-`n` track on
/// which bit `i` is a block at location `i+1`. The observer waits until the
/// deadline `(n+1)/v` and reads whether the probe was first to reach
/// location `n+1` (all bits zero) or was stopped by a block (some bit set).
///
/// The deadline is charged in full even when a collision happens early;
/// the measurement is a deadline test, not a collision detector.
pub fn or_track(bits: &[u8], v: f64) -> Result<OrTrackResult> {
    let n = bits.len();
    if n == 0 {
        return Err(Error::InvalidParameter("track must hold >= 1 bit".into()));
    }
    if bits.iter().any(|&b| b > 1) {
        return Err(Error::InvalidParameter("track bits must be 0 or 1".into()));
    }
    if !(v > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "probe velocity must be positive, got {v}"
        )));
    }
    let mut ledger = CostLedger::new();
    if v > (n as f64).sqrt() {
        // The smooth time/energy tradeoff only holds for v <= sqrt(n);
        // faster probes leave the modelled regime. Recorded, not fatal.
        ledger.add(
            format!("warning: out-of-model velocity v={v} > sqrt(n={n})"),
            0.0,
            0.0,
        )?;
    }
    // The probe stops at the first occupied location; reaching n+1 by the
    // deadline means every location was empty.
    let first_block = bits.iter().position(|&b| b == 1);
    let result = u8::from(first_block.is_some());
    ledger.add("or-track probe (deadline wait, kinetic energy)", (n as f64 + 1.0) / v, v * v)?;
    Ok(OrTrackResult { result, ledger })
}

/// Square plate of heat sources, side `s`, insulated from the outside.
///
/// Only the 2D plate is simulated. Packing the same sources into a
/// cube-root-sided 3D block would equalize in `O(n^(2/3) log(1/eps))`
/// steps, sublinear in the source count; that variant is noted here for
/// the record and not modelled.
#[derive(Debug, Clone, PartialEq)]
pub struct HeatGrid {
    side: usize,
    temps: Vec<f64>,
}

impl HeatGrid {
    pub fn new(side: usize, temps: Vec<f64>) -> Result<Self> {
        if side == 0 {
            return Err(Error::InvalidParameter("grid side must be >= 1".into()));
        }
        if temps.len() != side * side {
            return Err(Error::DimensionMismatch(format!(
                "expected {} temperatures, got {}",
                side * side,
                temps.len()
            )));
        }
        if temps.iter().any(|t| !t.is_finite() || *t < 0.0) {
            return Err(Error::InvalidParameter(
                "temperatures must be finite and nonnegative".into(),
            ));
        }
        Ok(Self { side, temps })
    }

    pub fn uniform(side: usize, t: f64) -> Result<Self> {
        Self::new(side, vec![t; side * side])
    }

    /// All heat concentrated in one corner cell; total heat equals `total`.
    pub fn hot_corner(side: usize, total: f64) -> Result<Self> {
        let mut temps = vec![0.0; side * side];
        temps[0] = total;
        Self::new(side, temps)
    }

    pub fn side(&self) -> usize {
        self.side
    }

    pub fn cells(&self) -> usize {
        self.side * self.side
    }

    pub fn temps(&self) -> &[f64] {
        &self.temps
    }

    pub fn total_heat(&self) -> f64 {
        self.temps.iter().sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DiffusionStatus {
    Converged,
    /// `max_steps` elapsed before every cell was within `eps` of the mean;
    /// the estimate carried is the best available, not a converged one.
    MaxStepsExhausted,
}

#[derive(Debug, Clone)]
pub struct DiffusionResult {
    pub mean_estimate: f64,
    pub steps_used: usize,
    pub status: DiffusionStatus,
    pub grid: HeatGrid,
    /// Largest relative drift of total heat observed over all steps.
    pub max_conservation_drift: f64,
}

pub const DIFFUSION_DEFAULT_MAX_STEPS: usize = 10_000_000;

/// Relax the plate with synchronous Jacobi steps
/// `T'_c = T_c + (1/4) * sum_over_neighbors(T_nb - T_c)`
/// (insulated boundary: missing neighbors mirror the cell itself) until
/// every cell is within `eps` of the mean, then read any cell.
pub fn diffuse_average(grid: &HeatGrid, eps: f64, max_steps: usize) -> Result<DiffusionResult> {
    if !(eps > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "eps must be positive, got {eps}"
        )));
    }
    if max_steps == 0 {
        return Err(Error::InvalidParameter("max_steps must be >= 1".into()));
    }
    let s = grid.side();
    let cells = grid.cells();
    let initial_heat = grid.total_heat();
    let mean = initial_heat / cells as f64;

    let mut cur = grid.temps().to_vec();
    let mut next = vec![0.0; cells];
    let mut max_drift: f64 = 0.0;
    let mut steps = 0usize;

    let deviation = |t: &[f64]| -> f64 {
        t.iter().fold(0.0f64, |acc, &x| acc.max((x - mean).abs()))
    };

    while deviation(&cur) >= eps && steps < max_steps {
        for i in 0..s {
            for j in 0..s {
                let c = cur[i * s + j];
                let mut delta = 0.0;
                if i > 0 {
                    delta += cur[(i - 1) * s + j] - c;
                }
                if i + 1 < s {
                    delta += cur[(i + 1) * s + j] - c;
                }
                if j > 0 {
                    delta += cur[i * s + j - 1] - c;
                }
                if j + 1 < s {
                    delta += cur[i * s + j + 1] - c;
                }
                next[i * s + j] = c + 0.25 * delta;
            }
        }
        std::mem::swap(&mut cur, &mut next);
        steps += 1;

        let heat: f64 = cur.iter().sum();
        let drift = if initial_heat != 0.0 {
            ((heat - initial_heat) / initial_heat).abs()
        } else {
            heat.abs()
        };
        max_drift = max_drift.max(drift);
    }

    let status = if deviation(&cur) < eps {
        DiffusionStatus::Converged
    } else {
        DiffusionStatus::MaxStepsExhausted
    };
    Ok(DiffusionResult {
        mean_estimate: cur[0],
        steps_used: steps,
        status,
        grid: HeatGrid { side: s, temps: cur },
        max_conservation_drift: max_drift,
    })
}
