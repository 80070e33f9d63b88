//! Kinetic grid machine for Boolean matrix multiplication, plus the naive
//! linked-list RAM algorithm it implements physically.
//!
//! The matrix `A` is laid out as an `n x n` grid of cells, each holding a
//! unit-mass block in the 0 or 1 position. A matvec sends a unit-mass agent
//! at unit velocity down every column `k` with `b[k] = 1`; agent `k` reaches
//! row `i` at time `i + k`. Colliding with a 1-block, the agent records the
//! answer bit and broadcasts clearing energy rightward along the row: the
//! cell `d` columns over has `d` timesteps before the next agent can arrive,
//! so it can be cleared slowly using energy that shrinks with distance.
//! After each matvec a weak restoring force resets the grid in parallel.

use crate::error::{Error, Result};
use crate::ledger::CostLedger;
use crate::matrix::{BinaryMatrix, BinaryVector};

/// Strict upper bound on the clearing energy of one collision in the
/// kinetic model: the full series `sum 1/d^2 = pi^2/6`.
pub const CLEAR_ENERGY_LIMIT: f64 = std::f64::consts::PI * std::f64::consts::PI / 6.0;

/// How clearing energy reaches downstream cells.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EnergyModel {
    /// Direct kinetic transfer: the cell at distance `d` receives `1/d^2`,
    /// enough to move its unit mass one cell in the `d` timesteps available.
    Kinetic,
    /// `channel_count` optical channels run along each row, channel `l`
    /// absorbing a `1/2^l` fraction per cell; the sender charges one unit
    /// per channel and absorption falls out of the opacities.
    Optical { channel_count: u32 },
}

pub fn ceil_log2(n: usize) -> u32 {
    debug_assert!(n >= 1);
    usize::BITS - (n - 1).leading_zeros()
}

impl EnergyModel {
    /// Optical model sized for an `n x n` grid: `ceil(log2 n)` channels.
    pub fn optical_for(n: usize) -> Self {
        EnergyModel::Optical {
            channel_count: ceil_log2(n),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            EnergyModel::Kinetic => "kinetic",
            EnergyModel::Optical { .. } => "optical",
        }
    }
}

/// Fraction of one unit sent down channel `channel` that is absorbed by the
/// cell at distance `d >= 1`: `(1/2^l) * (1 - 1/2^l)^(d-1)`.
pub fn optical_channel_absorption(channel: u32, d: usize) -> f64 {
    let opacity = 0.5f64.powi(channel as i32);
    opacity * (1.0 - opacity).powi(d as i32 - 1)
}

/// Energy delivered to (kinetic) or absorbed by (optical) the cell at
/// distance `d` from the collision.
pub fn clear_energy(model: EnergyModel, d: usize) -> Result<f64> {
    if d < 1 {
        return Err(Error::InvalidParameter(format!(
            "clear distance must be >= 1, got {d}"
        )));
    }
    Ok(match model {
        EnergyModel::Kinetic => 1.0 / (d as f64 * d as f64),
        EnergyModel::Optical { channel_count } => (1..=channel_count)
            .map(|l| optical_channel_absorption(l, d))
            .sum(),
    })
}

/// Unit-mass probe assigned to one column. It is launched at time equal to
/// its column index and moves one row per timestep, so agents in later
/// columns trail by exactly the column gap: the slack the clears rely on.
#[derive(Debug, Clone, Copy)]
pub struct Agent {
    pub column: usize,
}

impl Agent {
    pub fn launch_time(&self) -> usize {
        self.column
    }

    pub fn arrival_time(&self, row: usize) -> usize {
        row + self.column
    }
}

/// One scheduled clear; its completion time is the index of the bucket
/// holding it.
#[derive(Debug, Clone, Copy)]
struct PendingClear {
    cell: usize,
    delivered_energy: f64,
}

/// Grid state for one encoded matrix.
#[derive(Debug, Clone)]
pub struct KineticGrid {
    n: usize,
    original: BinaryMatrix,
    cell_state: Vec<u8>,
    /// Clearing budget stored at each 1-cell, spent at collisions and
    /// refreshed by reset.
    stored_energy: Vec<f64>,
    /// Completion times are integers bounded by 2n, so the event queue is a
    /// bucket per timestep; `next_bucket` marks the first unapplied one.
    pending_clears: Vec<Vec<PendingClear>>,
    next_bucket: usize,
    pending_total: usize,
    pending_per_cell: Vec<u32>,
    collisions_since_reset: usize,
    cells_cleared_since_reset: usize,
    energy_delivered_since_reset: f64,
    build_ledger: CostLedger,
}

impl KineticGrid {
    /// Lay out the grid for square `a`; each of the `n^2` cells costs one
    /// unit of time and energy to place.
    pub fn new(a: &BinaryMatrix) -> Result<Self> {
        if !a.is_square() {
            return Err(Error::DimensionMismatch(format!(
                "kinetic grid needs a square matrix, got {}x{}",
                a.n_rows(),
                a.n_cols()
            )));
        }
        let n = a.n_rows();
        let budget = (n as f64).log2().max(0.0);
        let stored_energy = a
            .entries()
            .iter()
            .map(|&v| if v == 1 { budget } else { 0.0 })
            .collect();
        let mut build_ledger = CostLedger::new();
        let cells = (n * n) as f64;
        build_ledger.add("place grid cells", cells, cells)?;
        Ok(Self {
            n,
            original: a.clone(),
            cell_state: a.entries().to_vec(),
            stored_energy,
            pending_clears: vec![Vec::new(); 2 * n],
            next_bucket: 0,
            pending_total: 0,
            pending_per_cell: vec![0; n * n],
            collisions_since_reset: 0,
            cells_cleared_since_reset: 0,
            energy_delivered_since_reset: 0.0,
            build_ledger,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn build_ledger(&self) -> &CostLedger {
        &self.build_ledger
    }

    pub fn is_reset(&self) -> bool {
        self.pending_total == 0 && self.cell_state == self.original.entries()
    }

    pub fn cell_state(&self, i: usize, k: usize) -> u8 {
        self.cell_state[i * self.n + k]
    }

    pub fn stored_energy(&self, i: usize, k: usize) -> f64 {
        self.stored_energy[i * self.n + k]
    }

    /// Total clearing energy actually delivered to cells since the last
    /// reset (informational; the sender is charged at broadcast time).
    pub fn energy_delivered_since_reset(&self) -> f64 {
        self.energy_delivered_since_reset
    }

    fn apply_clears_up_to(&mut self, now: usize) {
        let end = now.min(self.pending_clears.len() - 1);
        while self.next_bucket <= end {
            let mut bucket = std::mem::take(&mut self.pending_clears[self.next_bucket]);
            for ev in bucket.drain(..) {
                self.pending_total -= 1;
                self.pending_per_cell[ev.cell] -= 1;
                self.energy_delivered_since_reset += ev.delivered_energy;
                if self.cell_state[ev.cell] == 1 {
                    self.cell_state[ev.cell] = 0;
                    self.cells_cleared_since_reset += 1;
                }
            }
            // Hand the (empty) allocation back to keep bucket capacity.
            self.pending_clears[self.next_bucket] = bucket;
            self.next_bucket += 1;
        }
    }

    fn schedule_clear(&mut self, cell: usize, completion_time: usize, delivered_energy: f64) {
        debug_assert!(completion_time >= self.next_bucket);
        self.pending_clears[completion_time].push(PendingClear {
            cell,
            delivered_energy,
        });
        self.pending_total += 1;
        self.pending_per_cell[cell] += 1;
    }

    /// Restore every cell, drop pending events, refresh stored energy.
    ///
    /// Cells restore in parallel over `n` timesteps; each cleared cell needs
    /// only `1/n^2` energy (unit mass accelerated to velocity `1/n`), and
    /// each collision site has its `log2 n` clearing budget refilled.
    pub fn reset(&mut self) -> Result<CostLedger> {
        let n = self.n as f64;
        let energy = self.cells_cleared_since_reset as f64 / (n * n)
            + self.collisions_since_reset as f64 * n.log2().max(0.0);
        let mut ledger = CostLedger::new();
        ledger.add("reset grid (parallel restore + recharge)", n, energy)?;

        self.cell_state.copy_from_slice(self.original.entries());
        for bucket in &mut self.pending_clears {
            bucket.clear();
        }
        self.next_bucket = 0;
        self.pending_total = 0;
        self.pending_per_cell.fill(0);
        let budget = n.log2().max(0.0);
        for (e, &v) in self.stored_energy.iter_mut().zip(self.original.entries()) {
            *e = if v == 1 { budget } else { 0.0 };
        }
        self.collisions_since_reset = 0;
        self.cells_cleared_since_reset = 0;
        self.energy_delivered_since_reset = 0.0;
        Ok(ledger)
    }
}

/// Outcome of one matvec on the grid.
#[derive(Debug, Clone)]
pub struct MatvecResult {
    pub c: BinaryVector,
    pub ledger: CostLedger,
    pub collisions: usize,
    pub cells_cleared: usize,
    /// Largest clearing broadcast charged to a single collision.
    pub max_clear_energy_per_collision: f64,
}

/// Compute one column of the Boolean product by discrete-event simulation.
///
/// The grid must be freshly reset. Every scheduled clear completes exactly
/// when the trailing agent of its target column would arrive, and ties
/// resolve clear-before-read; the simulation checks this deadline invariant
/// at every read and faults if it is ever violated.
pub fn kinetic_matvec(
    grid: &mut KineticGrid,
    b_col: &BinaryVector,
    model: EnergyModel,
) -> Result<MatvecResult> {
    let n = grid.n;
    if b_col.len() != n {
        return Err(Error::DimensionMismatch(format!(
            "grid is {}x{}, vector has length {}",
            n,
            n,
            b_col.len()
        )));
    }
    if !grid.is_reset() {
        return Err(Error::InvalidParameter(
            "kinetic_matvec requires a freshly reset grid".into(),
        ));
    }

    let agents: Vec<Agent> = (0..n)
        .filter(|&k| b_col.get(k) == 1)
        .map(|column| Agent { column })
        .collect();

    let mut c = vec![0u8; n];
    let mut row_hit = vec![false; n];
    let mut collisions = 0usize;
    let mut clear_broadcast_energy = 0.0f64;
    let mut max_clear = 0.0f64;

    if let Some(last) = agents.last() {
        let t_max = last.arrival_time(n - 1);
        // Agents are sorted by column, so the ones on the grid at time t
        // form a contiguous window: launched (column <= t) and not yet
        // exited (t - column < n).
        let mut lo = 0usize;
        let mut hi = 0usize;
        for t in 0..=t_max {
            grid.apply_clears_up_to(t);
            while hi < agents.len() && agents[hi].column <= t {
                hi += 1;
            }
            while lo < hi && t - agents[lo].column >= n {
                lo += 1;
            }
            for agent in &agents[lo..hi] {
                let k = agent.column;
                let i = t - k;
                debug_assert_eq!(agent.arrival_time(i), t);
                let cell = i * n + k;
                // Deadline invariant: every clear aimed at this cell must
                // already have been applied. Anything still pending
                // completes strictly later than now, which would mean the
                // agent reads a stale 1.
                if grid.pending_per_cell[cell] > 0 {
                    return Err(Error::SimulationFault(format!(
                        "clear for cell ({i},{k}) still pending at read time {t}"
                    )));
                }
                if grid.cell_state[cell] == 1 {
                    if row_hit[i] {
                        return Err(Error::SimulationFault(format!(
                            "second collision in row {i}; row clearing failed"
                        )));
                    }
                    row_hit[i] = true;
                    collisions += 1;
                    c[i] = 1;

                    // Broadcast clears to every downstream cell of the row,
                    // whether or not it currently holds a 1; the sender
                    // cannot see downstream state, so energy is charged for
                    // the full broadcast either way.
                    let mut delivered_sum = 0.0;
                    for d in 1..=(n - 1 - k) {
                        let delivered = clear_energy(model, d)?;
                        delivered_sum += delivered;
                        grid.schedule_clear(i * n + (k + d), t + d, delivered);
                    }
                    let charged = match model {
                        EnergyModel::Kinetic => delivered_sum,
                        // The sender puts one full unit into each channel;
                        // what cells absorb is informational.
                        EnergyModel::Optical { channel_count } => f64::from(channel_count),
                    };
                    clear_broadcast_energy += charged;
                    max_clear = max_clear.max(charged);
                    grid.stored_energy[cell] = (grid.stored_energy[cell] - charged).max(0.0);
                }
            }
        }
        // Material keeps moving after the last agent leaves; let every
        // scheduled clear finish so the grid state is well defined.
        grid.apply_clears_up_to(usize::MAX);
        // The queue is empty, so rewind the cursor; a matvec that changed
        // nothing leaves the grid usable without an explicit reset.
        debug_assert_eq!(grid.pending_total, 0);
        grid.next_bucket = 0;
    }

    grid.collisions_since_reset += collisions;
    debug_assert!(collisions <= n);

    let m = agents.len() as f64;
    let makespan = agents
        .last()
        .map(|a| (n + a.column) as f64)
        .unwrap_or(0.0);
    let mut ledger = CostLedger::new();
    ledger.add("agent launches", 0.0, m)?;
    ledger.add("agent traversal window", makespan, 0.0)?;
    ledger.add("answer registers", 0.0, collisions as f64)?;
    ledger.add("velocity adjustments", 0.0, collisions as f64)?;
    ledger.add("row clearing broadcasts", 0.0, clear_broadcast_energy)?;

    Ok(MatvecResult {
        c: BinaryVector::from_bits(c)?,
        ledger,
        collisions,
        cells_cleared: grid.cells_cleared_since_reset,
        max_clear_energy_per_collision: max_clear,
    })
}

/// Defining triple loop: `C[i][j] = OR_k (A[i][k] AND B[k][j])`.
pub fn brute_boolean_matmul(a: &BinaryMatrix, b: &BinaryMatrix) -> Result<BinaryMatrix> {
    check_square_pair(a, b)?;
    let n = a.n_rows();
    let mut c = BinaryMatrix::zeros(n, n)?;
    for i in 0..n {
        for j in 0..n {
            let mut v = 0u8;
            for k in 0..n {
                v |= a.get(i, k) & b.get(k, j);
            }
            c.set(i, j, v);
        }
    }
    Ok(c)
}

/// The naive RAM list algorithm, implemented literally: column lists of the
/// 1-positions of `A`, traversed per set entry of each `B` column, with hit
/// rows removed from all later lists and the lists rebuilt after every
/// column. Returns the product and the count of list operations performed
/// (node visits + removals + reset reinsertions).
pub fn ram_boolean_matmul(a: &BinaryMatrix, b: &BinaryMatrix) -> Result<(BinaryMatrix, u64)> {
    check_square_pair(a, b)?;
    let n = a.n_rows();
    const NONE: usize = usize::MAX;

    // Doubly linked list per column over node ids i*n + k, unlinked and
    // relinked dancing-links style so resets restore the exact structure.
    let mut head = vec![NONE; n];
    let mut next = vec![NONE; n * n];
    let mut prev = vec![NONE; n * n];
    for (k, head_k) in head.iter_mut().enumerate() {
        let mut last = NONE;
        for i in 0..n {
            if a.get(i, k) == 1 {
                let id = i * n + k;
                if last == NONE {
                    *head_k = id;
                } else {
                    next[last] = id;
                }
                prev[id] = last;
                last = id;
            }
        }
    }
    // Columns holding a 1 in each row, for the rightward removals.
    let row_cols: Vec<Vec<usize>> = (0..n)
        .map(|i| (0..n).filter(|&k| a.get(i, k) == 1).collect())
        .collect();

    let mut c = BinaryMatrix::zeros(n, n)?;
    let mut ops: u64 = 0;
    let mut undo: Vec<usize> = Vec::new();

    for j in 0..n {
        undo.clear();
        for k in 0..n {
            if b.get(k, j) == 0 {
                continue;
            }
            let mut cur = head[k];
            while cur != NONE {
                ops += 1; // list-node visit
                let i = cur / n;
                c.set(i, j, 1);
                for &kp in row_cols[i].iter().rev() {
                    if kp <= k {
                        break;
                    }
                    // Unlink i from list kp.
                    let id = i * n + kp;
                    let (p, nx) = (prev[id], next[id]);
                    if p == NONE {
                        head[kp] = nx;
                    } else {
                        next[p] = nx;
                    }
                    if nx != NONE {
                        prev[nx] = p;
                    }
                    undo.push(id);
                    ops += 1; // removal
                }
                cur = next[cur];
            }
        }
        // Reset: relink in reverse order restores every list exactly.
        for &id in undo.iter().rev() {
            let kp = id % n;
            let (p, nx) = (prev[id], next[id]);
            if p == NONE {
                head[kp] = id;
            } else {
                next[p] = id;
            }
            if nx != NONE {
                prev[nx] = id;
            }
            ops += 1; // reset reinsertion
        }
    }
    Ok((c, ops))
}

/// Full product and merged ledger for a run of the kinetic machine.
#[derive(Debug, Clone)]
pub struct KineticMatmulResult {
    pub c: BinaryMatrix,
    pub ledger: CostLedger,
    pub collisions: usize,
    pub cells_cleared: usize,
    pub max_clear_energy_per_collision: f64,
}

/// Boolean product via the grid: one matvec plus reset per column of `b`.
pub fn kinetic_matmul(
    a: &BinaryMatrix,
    b: &BinaryMatrix,
    model: EnergyModel,
) -> Result<KineticMatmulResult> {
    check_square_pair(a, b)?;
    let n = a.n_rows();
    let mut grid = KineticGrid::new(a)?;
    let mut ledger = grid.build_ledger().clone();
    let mut c = BinaryMatrix::zeros(n, n)?;
    let mut collisions = 0;
    let mut cells_cleared = 0;
    let mut max_clear = 0.0f64;

    for j in 0..n {
        let col = b.column(j);
        let r = kinetic_matvec(&mut grid, &col, model)?;
        for i in 0..n {
            c.set(i, j, r.c.get(i));
        }
        collisions += r.collisions;
        cells_cleared += r.cells_cleared;
        max_clear = max_clear.max(r.max_clear_energy_per_collision);
        ledger.merge(r.ledger);
        ledger.merge(grid.reset()?);
    }

    Ok(KineticMatmulResult {
        c,
        ledger,
        collisions,
        cells_cleared,
        max_clear_energy_per_collision: max_clear,
    })
}

fn check_square_pair(a: &BinaryMatrix, b: &BinaryMatrix) -> Result<()> {
    if !a.is_square() || !b.is_square() || a.n_rows() != b.n_rows() {
        return Err(Error::DimensionMismatch(format!(
            "need equal square matrices, got {}x{} and {}x{}",
            a.n_rows(),
            a.n_cols(),
            b.n_rows(),
            b.n_cols()
        )));
    }
    Ok(())
}
