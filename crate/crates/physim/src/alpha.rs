//! Abstract rate/energy computational model.
//!
//! Processes run at a chosen rate `r >= 1`: each operation takes `r` time
//! and costs `1/r^alpha` energy, plus one unit of energy to initialize the
//! process. `alpha = 2` matches kinetic-energy scaling, `alpha = 1` is the
//! conservative variant, `alpha = 0` recovers the unit-cost baseline. No
//! two processes may touch the same memory location at overlapping times
//! (reads included), which is what the schedule generators here must prove
//! via [`check_collisions`].
//!
//! Two schedule families are provided: block-copying a list across `n^q`
//! processes, and dense matrix multiplication under the rotating access
//! pattern `(i + j + t) mod n`, in both its quadratic (`n^2` processes) and
//! subquadratic (`n^(9/5)` processes, `alpha = 2`) forms.

use serde::Serialize;

use crate::error::{Error, Result};

/// Rate/energy tradeoff exponent, restricted to `[0, 2]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Alpha(f64);

impl Alpha {
    pub fn new(value: f64) -> Result<Self> {
        if !(0.0..=2.0).contains(&value) {
            return Err(Error::InvalidParameter(format!(
                "alpha must lie in [0,2], got {value}"
            )));
        }
        Ok(Alpha(value))
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum AccessMode {
    Read,
    Write,
}

/// One memory access: a half-open interval `[start, end)` on a location.
/// `end - start` equals the owning process's rate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Access {
    pub start: f64,
    pub end: f64,
    pub location: u64,
    pub mode: AccessMode,
}

/// A process with a fixed rate and its timed access trace. Non-access
/// operations (arithmetic between reads) occupy time and ops but produce no
/// trace entries.
#[derive(Debug, Clone)]
pub struct Process {
    pub id: u32,
    pub rate: f64,
    pub op_count: u64,
    pub access_trace: Vec<Access>,
}

#[derive(Debug, Clone)]
pub struct ProcessSchedule {
    pub processes: Vec<Process>,
    pub makespan: f64,
}

impl ProcessSchedule {
    pub fn access_count(&self) -> usize {
        self.processes.iter().map(|p| p.access_trace.len()).sum()
    }
}

/// Aggregate cost of a schedule under a given alpha.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CostReport {
    pub time: f64,
    pub energy: f64,
    pub process_count: usize,
}

fn rate_power(rate: f64, alpha: f64) -> f64 {
    // Exact fast paths for the three canonical exponents keep closed forms
    // and hand arithmetic in bit-for-bit agreement.
    if alpha == 0.0 {
        1.0
    } else if alpha == 1.0 {
        rate
    } else if alpha == 2.0 {
        rate * rate
    } else {
        rate.powf(alpha)
    }
}

/// Time and energy for one process executing `op_count` operations at
/// `rate`: time `op_count * rate`, energy `1 + op_count / rate^alpha`
/// (the 1 is initialization).
pub fn process_cost(op_count: u64, rate: f64, alpha: f64) -> Result<(f64, f64)> {
    if !(rate >= 1.0) {
        return Err(Error::InvalidParameter(format!(
            "process rate must be >= 1, got {rate}"
        )));
    }
    let alpha = Alpha::new(alpha)?.value();
    let ops = op_count as f64;
    Ok((ops * rate, 1.0 + ops / rate_power(rate, alpha)))
}

/// Sum of [`process_cost`] over a schedule; time is the makespan.
pub fn schedule_cost(schedule: &ProcessSchedule, alpha: f64) -> Result<CostReport> {
    let mut energy = 0.0;
    for p in &schedule.processes {
        let (_, e) = process_cost(p.op_count, p.rate, alpha)?;
        energy += e;
    }
    Ok(CostReport {
        time: schedule.makespan,
        energy,
        process_count: schedule.processes.len(),
    })
}

/// A detected access conflict.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Conflict {
    pub process_a: u32,
    pub process_b: u32,
    pub location: u64,
    pub overlap_start: f64,
    pub overlap_end: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CollisionCheck {
    Ok,
    Conflict(Conflict),
}

impl CollisionCheck {
    pub fn is_ok(&self) -> bool {
        matches!(self, CollisionCheck::Ok)
    }
}

/// Exhaustively search for two processes whose accesses to the same
/// location overlap in time (open-interval intersection, so back-to-back
/// accesses are legal). Sort by location then start time, then sweep each
/// location run keeping the two latest-ending accesses from distinct
/// processes, which suffices to witness any cross-process overlap.
pub fn check_collisions(schedule: &ProcessSchedule) -> CollisionCheck {
    let mut flat: Vec<(u64, f64, f64, u32)> = Vec::with_capacity(schedule.access_count());
    for p in &schedule.processes {
        for a in &p.access_trace {
            flat.push((a.location, a.start, a.end, p.id));
        }
    }
    // Starts are nonnegative, so the bit pattern orders them correctly.
    flat.sort_unstable_by_key(|&(loc, start, _, _)| (loc, start.to_bits()));

    let mut cur_loc = u64::MAX;
    // Latest-ending seen access, and latest-ending with a different pid.
    let mut best: Option<(f64, u32)> = None;
    let mut second: Option<(f64, u32)> = None;

    for &(loc, start, end, pid) in &flat {
        if loc != cur_loc {
            cur_loc = loc;
            best = None;
            second = None;
        }
        for &cand in [&best, &second].into_iter().flatten() {
            let (cand_end, cand_pid) = cand;
            if cand_pid != pid && start < cand_end {
                return CollisionCheck::Conflict(Conflict {
                    process_a: cand_pid,
                    process_b: pid,
                    location: loc,
                    overlap_start: start,
                    overlap_end: cand_end.min(end),
                });
            }
        }
        match best {
            None => best = Some((end, pid)),
            Some((bend, bpid)) => {
                if end > bend {
                    if bpid != pid {
                        second = Some((bend, bpid));
                    }
                    best = Some((end, pid));
                } else if bpid != pid && second.is_none_or(|(send, _)| end > send) {
                    second = Some((end, pid));
                }
            }
        }
    }
    CollisionCheck::Ok
}

fn validate_unit_interval(name: &str, v: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&v) {
        return Err(Error::InvalidParameter(format!(
            "{name} must lie in [0,1], got {v}"
        )));
    }
    Ok(v)
}

/// Integer process/item counts for the copy family: `ceil(n^q)` processes
/// copying `ceil(n^(1-q))` items each at rate `n^s`.
fn copy_counts(n: usize, q: f64, s: f64) -> Result<(usize, usize, f64)> {
    if n == 0 {
        return Err(Error::InvalidParameter("n must be >= 1".into()));
    }
    let q = validate_unit_interval("q", q)?;
    let s = validate_unit_interval("s", s)?;
    let nf = n as f64;
    let procs = (nf.powf(q).ceil() as usize).max(1);
    let items = (nf.powf(1.0 - q).ceil() as usize).max(1);
    let rate = nf.powf(s).max(1.0);
    Ok((procs, items, rate))
}

pub const COPY_OPS_PER_ITEM: u64 = 2; // read source, write destination

/// Copy a list of `n` numbers with `ceil(n^q)` processes at rate `n^s`.
/// Process `p` copies the contiguous block of `ceil(n^(1-q))` items
/// starting at `p * ceil(n^(1-q))`; blocks are disjoint, so the schedule is
/// collision-free by construction (the final block may pad past `n`, which
/// only touches otherwise-unused addresses).
pub fn copy_list_schedule(n: usize, q: f64, s: f64) -> Result<ProcessSchedule> {
    let (procs, items, rate) = copy_counts(n, q, s)?;
    // Sources at [0, procs*items), destinations offset past them.
    let dst_base = (procs * items) as u64;
    let mut processes = Vec::with_capacity(procs);
    for p in 0..procs {
        let mut trace = Vec::with_capacity(2 * items);
        for t in 0..items {
            let item = (p * items + t) as u64;
            let read_idx = (2 * t) as f64;
            trace.push(Access {
                start: read_idx * rate,
                end: (read_idx + 1.0) * rate,
                location: item,
                mode: AccessMode::Read,
            });
            trace.push(Access {
                start: (read_idx + 1.0) * rate,
                end: (read_idx + 2.0) * rate,
                location: dst_base + item,
                mode: AccessMode::Write,
            });
        }
        processes.push(Process {
            id: p as u32,
            rate,
            op_count: COPY_OPS_PER_ITEM * items as u64,
            access_trace: trace,
        });
    }
    Ok(ProcessSchedule {
        makespan: (COPY_OPS_PER_ITEM * items as u64) as f64 * rate,
        processes,
    })
}

/// Closed-form cost of the copy schedule. Computed with the same integer
/// counts and the same per-process formula as the generated schedule, so
/// [`schedule_cost`] over [`copy_list_schedule`] agrees exactly.
pub fn copy_list_cost(n: usize, q: f64, s: f64, alpha: f64) -> Result<CostReport> {
    let (procs, items, rate) = copy_counts(n, q, s)?;
    let ops = COPY_OPS_PER_ITEM * items as u64;
    let time = ops as f64 * rate;
    let mut energy = 0.0;
    for _ in 0..procs {
        energy += process_cost(ops, rate, alpha)?.1;
    }
    Ok(CostReport {
        time,
        energy,
        process_count: procs,
    })
}

pub const MATMUL_OPS_PER_BLOCK: u64 = 3; // read A, read B, accumulate

// Disjoint address spaces for the matmul schedules.
fn a_loc(n: usize, i: usize, k: usize) -> u64 {
    (i * n + k) as u64
}
fn b_loc(n: usize, k: usize, j: usize) -> u64 {
    (n * n + k * n + j) as u64
}
fn out_loc(n: usize, i: usize, j: usize) -> u64 {
    (2 * n * n + i * n + j) as u64
}

/// `n^2` processes at rate `n`, process `(i,j)` owning output entry `(i,j)`.
/// Time splits into `n` blocks of `3n`; in block `t` the process reads
/// `A[i][(i+j+t) mod n]`, then `B[(i+j+t) mod n][j]`, then accumulates
/// (the final block's third op writes the output instead). The `i + j`
/// rotation staggers processes sharing a row or column so no location is
/// ever read twice at once.
pub fn matmul_schedule(n: usize) -> Result<ProcessSchedule> {
    matmul_schedule_impl(n, true)
}

/// Negative control: the same schedule without the rotation (every process
/// of row `i` reads `A[i][t]` in block `t`), which collides immediately.
pub fn matmul_schedule_broken(n: usize) -> Result<ProcessSchedule> {
    matmul_schedule_impl(n, false)
}

fn matmul_schedule_impl(n: usize, rotate: bool) -> Result<ProcessSchedule> {
    if n == 0 {
        return Err(Error::InvalidParameter("n must be >= 1".into()));
    }
    let rate = n as f64;
    let block = (MATMUL_OPS_PER_BLOCK as usize) * n; // exact integer times
    let mut processes = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let mut trace = Vec::with_capacity(2 * n + 1);
            for t in 0..n {
                let k = if rotate { (i + j + t) % n } else { t };
                let base = (t * block) as f64;
                trace.push(Access {
                    start: base,
                    end: base + rate,
                    location: a_loc(n, i, k),
                    mode: AccessMode::Read,
                });
                trace.push(Access {
                    start: base + rate,
                    end: base + 2.0 * rate,
                    location: b_loc(n, k, j),
                    mode: AccessMode::Read,
                });
                if t == n - 1 {
                    // Final block: the accumulate slot doubles as the
                    // output write; each entry has a single owner.
                    trace.push(Access {
                        start: base + 2.0 * rate,
                        end: base + 3.0 * rate,
                        location: out_loc(n, i, j),
                        mode: AccessMode::Write,
                    });
                }
            }
            processes.push(Process {
                id: (i * n + j) as u32,
                rate,
                op_count: MATMUL_OPS_PER_BLOCK * n as u64,
                access_trace: trace,
            });
        }
    }
    Ok(ProcessSchedule {
        makespan: (MATMUL_OPS_PER_BLOCK * (n * n) as u64) as f64,
        processes,
    })
}

/// Closed-form cost of the quadratic matmul schedule.
pub fn matmul_cost(n: usize, alpha: f64) -> Result<CostReport> {
    if n == 0 {
        return Err(Error::InvalidParameter("n must be >= 1".into()));
    }
    let rate = n as f64;
    let ops = MATMUL_OPS_PER_BLOCK * n as u64;
    let time = (MATMUL_OPS_PER_BLOCK * (n * n) as u64) as f64;
    let mut energy = 0.0;
    for _ in 0..n * n {
        energy += process_cost(ops, rate, alpha)?.1;
    }
    Ok(CostReport {
        time,
        energy,
        process_count: n * n,
    })
}

/// Fifth root of `n`, required exact.
fn fifth_root_exact(n: usize) -> Result<usize> {
    let m = (n as f64).powf(0.2).round() as usize;
    if m >= 1 && m.pow(5) == n {
        Ok(m)
    } else {
        Err(Error::InvalidParameter(format!(
            "n must be a perfect fifth power for the subquadratic schedule, got {n}"
        )))
    }
}

/// Subquadratic schedule for the `alpha = 2` regime: `n^(9/5)` processes,
/// each computing `n^(1/5)` entries of one output row (contiguous in `j`)
/// at rate `n^(3/5)`. Requires `n = m^5` so all counts are integral.
///
/// Entries are computed one after another, each as `n` rotated k-steps of
/// (read A, read B, accumulate). All processes share rate and phase, so
/// simultaneous accesses happen only at equal (entry, k-step) positions,
/// where the rotation `(i + j + t) mod n` separates processes sharing a row
/// (distinct `j`) and the row index separates processes sharing a column.
pub fn subquadratic_matmul_schedule(n: usize) -> Result<ProcessSchedule> {
    let m = fifth_root_exact(n)?;
    let rate = (m * m * m) as f64;
    let entries_per_process = m;
    let groups = m * m * m * m; // column groups per row
    let mut processes = Vec::with_capacity(m.pow(9));
    for i in 0..n {
        for g in 0..groups {
            let id = (i * groups + g) as u32;
            let mut trace = Vec::with_capacity(2 * entries_per_process * n + entries_per_process);
            for e in 0..entries_per_process {
                let j = g * entries_per_process + e;
                for t in 0..n {
                    let k = (i + j + t) % n;
                    let step = e * n + t;
                    let base = (step * 3) as f64 * rate;
                    trace.push(Access {
                        start: base,
                        end: base + rate,
                        location: a_loc(n, i, k),
                        mode: AccessMode::Read,
                    });
                    trace.push(Access {
                        start: base + rate,
                        end: base + 2.0 * rate,
                        location: b_loc(n, k, j),
                        mode: AccessMode::Read,
                    });
                    if t == n - 1 {
                        trace.push(Access {
                            start: base + 2.0 * rate,
                            end: base + 3.0 * rate,
                            location: out_loc(n, i, j),
                            mode: AccessMode::Write,
                        });
                    }
                }
            }
            processes.push(Process {
                id,
                rate,
                op_count: MATMUL_OPS_PER_BLOCK * (entries_per_process * n) as u64,
                access_trace: trace,
            });
        }
    }
    Ok(ProcessSchedule {
        makespan: (MATMUL_OPS_PER_BLOCK * (entries_per_process * n) as u64) as f64 * rate,
        processes,
    })
}

/// Closed-form cost of the subquadratic schedule in its `alpha = 2` regime:
/// time `3 n^(9/5)` and energy `(1 + 3) n^(9/5)`.
pub fn subquadratic_matmul_cost(n: usize) -> Result<CostReport> {
    let m = fifth_root_exact(n)?;
    let rate = (m * m * m) as f64;
    let ops = MATMUL_OPS_PER_BLOCK * (m * n) as u64;
    let procs = m.pow(9);
    let time = ops as f64 * rate;
    let mut energy = 0.0;
    for _ in 0..procs {
        energy += process_cost(ops, rate, 2.0)?.1;
    }
    Ok(CostReport {
        time,
        energy,
        process_count: procs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    // All-pairs reference for the sweep-based checker.
    fn brute_has_conflict(schedule: &ProcessSchedule) -> bool {
        let mut flat: Vec<(u64, f64, f64, u32)> = Vec::new();
        for p in &schedule.processes {
            for a in &p.access_trace {
                flat.push((a.location, a.start, a.end, p.id));
            }
        }
        for (i, &(loc1, s1, e1, pid1)) in flat.iter().enumerate() {
            for &(loc2, s2, e2, pid2) in &flat[i + 1..] {
                if loc1 == loc2 && pid1 != pid2 && s1 < e2 && s2 < e1 {
                    return true;
                }
            }
        }
        false
    }

    proptest! {
        // The sorted sweep agrees with the quadratic all-pairs check on
        // arbitrary (dense, collision-prone) schedules.
        #[test]
        fn collision_sweep_matches_all_pairs_oracle(
            specs in proptest::collection::vec(
                proptest::collection::vec((0u64..5, 0u8..12, 1u8..4), 0..8),
                1..6,
            ),
        ) {
            let processes: Vec<Process> = specs
                .iter()
                .enumerate()
                .map(|(pid, accesses)| {
                    let mut trace: Vec<Access> = accesses
                        .iter()
                        .map(|&(loc, start, len)| Access {
                            start: f64::from(start),
                            end: f64::from(start) + f64::from(len),
                            location: loc,
                            mode: AccessMode::Read,
                        })
                        .collect();
                    trace.sort_by(|a, b| a.start.total_cmp(&b.start));
                    Process {
                        id: pid as u32,
                        rate: 1.0,
                        op_count: trace.len() as u64,
                        access_trace: trace,
                    }
                })
                .collect();
            let schedule = ProcessSchedule {
                makespan: 16.0,
                processes,
            };
            let swept = !check_collisions(&schedule).is_ok();
            prop_assert_eq!(swept, brute_has_conflict(&schedule));
        }
    }

    #[test]
    fn process_cost_examples() {
        for alpha in [0.0, 0.7, 1.0, 2.0] {
            assert_eq!(process_cost(10, 1.0, alpha).unwrap(), (10.0, 11.0));
        }
        assert_eq!(process_cost(100, 10.0, 1.0).unwrap(), (1000.0, 11.0));
        assert_eq!(process_cost(100, 10.0, 2.0).unwrap(), (1000.0, 2.0));
    }

    #[test]
    fn process_cost_rejects_bad_params() {
        assert!(process_cost(1, 0.5, 1.0).is_err());
        assert!(process_cost(1, 1.0, -0.1).is_err());
        assert!(process_cost(1, 1.0, 2.1).is_err());
    }

    #[test]
    fn energy_monotone_in_alpha() {
        // For rate >= 1, larger alpha never costs more energy.
        for ops in [1u64, 10, 1000] {
            for rate in [1.0, 1.5, 4.0, 100.0] {
                let e0 = process_cost(ops, rate, 0.0).unwrap().1;
                let e1 = process_cost(ops, rate, 1.0).unwrap().1;
                let e2 = process_cost(ops, rate, 2.0).unwrap().1;
                assert!(e2 <= e1 && e1 <= e0, "ops={ops} rate={rate}");
            }
        }
    }

    #[test]
    fn collision_check_disjoint_ok() {
        let p0 = Process {
            id: 0,
            rate: 1.0,
            op_count: 1,
            access_trace: vec![Access {
                start: 0.0,
                end: 1.0,
                location: 1,
                mode: AccessMode::Read,
            }],
        };
        let p1 = Process {
            id: 1,
            rate: 1.0,
            op_count: 1,
            access_trace: vec![Access {
                start: 0.0,
                end: 1.0,
                location: 2,
                mode: AccessMode::Read,
            }],
        };
        let s = ProcessSchedule {
            processes: vec![p0, p1],
            makespan: 1.0,
        };
        assert!(check_collisions(&s).is_ok());
    }

    #[test]
    fn collision_check_detects_overlap() {
        let mk = |id, start: f64, end: f64| Process {
            id,
            rate: 1.0,
            op_count: 1,
            access_trace: vec![Access {
                start,
                end,
                location: 7,
                mode: AccessMode::Write,
            }],
        };
        let s = ProcessSchedule {
            processes: vec![mk(0, 0.0, 1.0), mk(1, 0.5, 1.5)],
            makespan: 1.5,
        };
        match check_collisions(&s) {
            CollisionCheck::Conflict(c) => {
                assert_eq!(c.location, 7);
                assert_eq!(c.overlap_start, 0.5);
                assert_eq!(c.overlap_end, 1.0);
            }
            CollisionCheck::Ok => panic!("overlap not detected"),
        }
    }

    #[test]
    fn collision_check_back_to_back_legal() {
        let mk = |id, start: f64, end: f64| Process {
            id,
            rate: 1.0,
            op_count: 1,
            access_trace: vec![Access {
                start,
                end,
                location: 3,
                mode: AccessMode::Read,
            }],
        };
        let s = ProcessSchedule {
            processes: vec![mk(0, 0.0, 1.0), mk(1, 1.0, 2.0)],
            makespan: 2.0,
        };
        assert!(check_collisions(&s).is_ok());
    }

    #[test]
    fn copy_serial_baseline() {
        // q = s = 0: one process, 16 items, 2 ops each.
        let report = copy_list_cost(16, 0.0, 0.0, 1.0).unwrap();
        assert_eq!(report.time, 32.0);
        assert_eq!(report.energy, 33.0);
        assert_eq!(report.process_count, 1);

        let schedule = copy_list_schedule(16, 0.0, 0.0).unwrap();
        assert_eq!(schedule.processes.len(), 1);
        assert_eq!(schedule.processes[0].op_count, 32);
    }

    #[test]
    fn copy_full_parallelism() {
        let schedule = copy_list_schedule(16, 1.0, 0.0).unwrap();
        assert_eq!(schedule.processes.len(), 16);
        assert!(schedule.processes.iter().all(|p| p.op_count == 2));
        assert!(check_collisions(&schedule).is_ok());
    }

    #[test]
    fn copy_schedules_collision_free() {
        for &n in &[1usize, 7, 64, 1000, 4096] {
            for &(q, s) in &[(0.0, 0.0), (0.5, 0.5), (1.0, 1.0), (2.0 / 3.0, 1.0 / 3.0), (0.6, 0.2)] {
                let schedule = copy_list_schedule(n, q, s).unwrap();
                assert!(
                    check_collisions(&schedule).is_ok(),
                    "conflict at n={n} q={q} s={s}"
                );
            }
        }
    }

    #[test]
    fn copy_closed_form_matches_schedule_exactly() {
        for &n in &[1usize, 5, 16, 100, 999] {
            for &(q, s) in &[(0.0, 0.0), (0.5, 0.25), (1.0, 0.0), (2.0 / 3.0, 1.0 / 3.0)] {
                for alpha in [0.0, 1.0, 1.5, 2.0] {
                    let closed = copy_list_cost(n, q, s, alpha).unwrap();
                    let sim = schedule_cost(&copy_list_schedule(n, q, s).unwrap(), alpha).unwrap();
                    assert_eq!(closed, sim, "n={n} q={q} s={s} alpha={alpha}");
                }
            }
        }
    }

    #[test]
    fn copy_broken_variant_detected() {
        // Negative control: point the second process at the first block.
        let mut schedule = copy_list_schedule(16, 0.5, 0.0).unwrap();
        let stolen = schedule.processes[0].access_trace.clone();
        schedule.processes[1].access_trace = stolen;
        match check_collisions(&schedule) {
            CollisionCheck::Conflict(c) => assert_ne!(c.process_a, c.process_b),
            CollisionCheck::Ok => panic!("duplicated block not detected"),
        }
    }

    #[test]
    fn matmul_single_process() {
        let s = matmul_schedule(1).unwrap();
        assert_eq!(s.processes.len(), 1);
        assert_eq!(s.processes[0].op_count, 3);
        assert!(check_collisions(&s).is_ok());
    }

    #[test]
    fn matmul_rotation_collision_free_small() {
        for n in 2..=16 {
            let s = matmul_schedule(n).unwrap();
            assert!(check_collisions(&s).is_ok(), "conflict at n={n}");
        }
    }

    #[test]
    fn matmul_without_rotation_collides() {
        let s = matmul_schedule_broken(2).unwrap();
        match check_collisions(&s) {
            CollisionCheck::Conflict(c) => {
                // Both readers of A[i][t] live in the same row.
                assert_ne!(c.process_a, c.process_b);
            }
            CollisionCheck::Ok => panic!("broken rotation passed"),
        }
    }

    #[test]
    fn matmul_closed_form_matches_schedule_exactly() {
        for n in [1usize, 2, 4, 8, 16] {
            for alpha in [0.0, 1.0, 2.0] {
                let closed = matmul_cost(n, alpha).unwrap();
                let sim = schedule_cost(&matmul_schedule(n).unwrap(), alpha).unwrap();
                assert_eq!(closed, sim, "n={n} alpha={alpha}");
            }
        }
    }

    #[test]
    fn matmul_energy_regimes() {
        // alpha = 1: energy/n^2 is the constant 1 + kappa.
        for n in [8usize, 64, 256] {
            let r = matmul_cost(n, 1.0).unwrap();
            assert_eq!(r.energy / (n * n) as f64, 4.0);
        }
        // alpha = 0: cubic blowup.
        let r0 = matmul_cost(8, 0.0).unwrap();
        assert_eq!(r0.energy, 64.0 * (1.0 + 24.0));
        // alpha = 2: init-dominated.
        let r2 = matmul_cost(64, 2.0).unwrap();
        assert!(r2.energy < 2.0 * (64.0 * 64.0));
    }

    #[test]
    fn subquadratic_counts_for_m2() {
        let s = subquadratic_matmul_schedule(32).unwrap();
        assert_eq!(s.processes.len(), 512);
        assert!(s.processes.iter().all(|p| p.rate == 8.0));
        // Two entries per process, 3 ops per k-step.
        assert!(s.processes.iter().all(|p| p.op_count == 3 * 2 * 32));
        assert!(check_collisions(&s).is_ok());
    }

    #[test]
    fn subquadratic_cost_closed_form() {
        let r = subquadratic_matmul_cost(32).unwrap();
        // time = 3 * n^(9/5) = 3 * 512, energy = 4 * 512.
        assert_eq!(r.time, 1536.0);
        assert_eq!(r.energy, 2048.0);
        assert_eq!(r.process_count, 512);
    }

    #[test]
    fn subquadratic_matches_schedule_cost() {
        let closed = subquadratic_matmul_cost(32).unwrap();
        let sim = schedule_cost(&subquadratic_matmul_schedule(32).unwrap(), 2.0).unwrap();
        assert_eq!(closed, sim);
    }

    #[test]
    fn subquadratic_rejects_non_fifth_powers() {
        for n in [2usize, 16, 31, 33, 100] {
            assert!(subquadratic_matmul_schedule(n).is_err(), "n={n}");
        }
        assert!(subquadratic_matmul_schedule(243).is_ok());
    }

    #[test]
    fn subquadratic_broken_variant_detected() {
        // Negative control: collapse two processes onto the same output row
        // and columns so their A reads coincide.
        let mut s = subquadratic_matmul_schedule(32).unwrap();
        let stolen = s.processes[0].access_trace.clone();
        s.processes[1].access_trace = stolen;
        assert!(!check_collisions(&s).is_ok());
    }

    #[test]
    fn schedules_satisfy_structural_invariants() {
        // Makespan equals the latest access end, and every trace is ordered
        // with non-overlapping intervals.
        let schedules = [
            copy_list_schedule(100, 0.5, 0.25).unwrap(),
            matmul_schedule(6).unwrap(),
            subquadratic_matmul_schedule(32).unwrap(),
        ];
        for s in &schedules {
            let max_end = s
                .processes
                .iter()
                .flat_map(|p| p.access_trace.iter().map(|a| a.end))
                .fold(0.0f64, f64::max);
            assert_eq!(s.makespan, max_end);
            for p in &s.processes {
                for w in p.access_trace.windows(2) {
                    assert!(w[0].start < w[0].end);
                    assert!(w[0].end <= w[1].start, "trace out of order for process {}", p.id);
                }
            }
        }
    }

    #[test]
    fn copy_doubling_ratios_match_claimed_exponents() {
        // alpha = 1, s = 1/3, q = 2/3: time and energy scale as n^(2/3);
        // alpha = 2, s = 1/5, q = 3/5: both scale as n^(3/5). Integer
        // rounding wobbles fade at large n.
        let big = 1usize << 18;
        let r1 = copy_list_cost(big, 2.0 / 3.0, 1.0 / 3.0, 1.0).unwrap();
        let r2 = copy_list_cost(2 * big, 2.0 / 3.0, 1.0 / 3.0, 1.0).unwrap();
        let want = 2f64.powf(2.0 / 3.0);
        assert!((r2.time / r1.time / want - 1.0).abs() < 0.02);
        assert!((r2.energy / r1.energy / want - 1.0).abs() < 0.02);

        let r1 = copy_list_cost(big, 3.0 / 5.0, 1.0 / 5.0, 2.0).unwrap();
        let r2 = copy_list_cost(2 * big, 3.0 / 5.0, 1.0 / 5.0, 2.0).unwrap();
        let want = 2f64.powf(3.0 / 5.0);
        assert!((r2.time / r1.time / want - 1.0).abs() < 0.02);
        assert!((r2.energy / r1.energy / want - 1.0).abs() < 0.02);
    }
}
