//! Splitter-tree flow machine for integer matrix multiplication.
//!
//! A binary matrix `A` is compiled into `n` binary trees of tubing, one per
//! column. Pouring one unit of material into tree `j` delivers `~1/N` to
//! each of its `N` leaves (`N` = `n` padded to a power of two); leaf `i` is
//! routed into output channel `i` when `A[i][j] = 1` and into a garbage
//! channel otherwise. Measuring channel `i` and rounding to the nearest
//! multiple of `1/N` recovers the `i`th entry of `A*b`.
//!
//! Splitters are imperfect (each splits within `1/2 ± delta`) and
//! measurements are noisy (`± eps_meas`); [`correctness_threshold`] returns
//! tolerances certified to keep the rounding exact.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cost::measure_cost;
use crate::error::{Error, Result};
use crate::ledger::CostLedger;
use crate::matrix::{BinaryMatrix, BinaryVector, IntMatrix};

/// How split fractions are drawn at build time.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SplitterPerturbation {
    /// Independent uniform draws from `[1/2 - delta, 1/2 + delta]`.
    Uniform,
    /// Every splitter fixed at `1/2 + delta`: the deterministic adversary
    /// used to demonstrate that the safe thresholds are load-bearing.
    WorstCase,
}

/// Complete binary tree of flow splitters with `N = 2^depth` leaves.
///
/// Node `k` of the heap-ordered `splits` array sends fraction `splits[k]`
/// of its inflow to the left child and the remainder to the right child.
#[derive(Debug, Clone)]
pub struct SplitterTree {
    depth: u32,
    leaves: usize,
    splits: Vec<f64>,
}

impl SplitterTree {
    pub fn from_splits(leaves: usize, splits: Vec<f64>) -> Result<Self> {
        if !leaves.is_power_of_two() {
            return Err(Error::InvalidParameter(format!(
                "leaf count must be a power of two, got {leaves}"
            )));
        }
        if splits.len() != leaves - 1 {
            return Err(Error::InvalidParameter(format!(
                "need {} splitters for {leaves} leaves, got {}",
                leaves - 1,
                splits.len()
            )));
        }
        if splits.iter().any(|&f| !(f > 0.0 && f < 1.0)) {
            return Err(Error::InvalidParameter(
                "split fractions must lie in (0,1)".into(),
            ));
        }
        Ok(Self {
            depth: leaves.trailing_zeros(),
            leaves,
            splits,
        })
    }

    fn build(leaves: usize, delta: f64, mode: SplitterPerturbation, rng: &mut ChaCha8Rng) -> Self {
        let splits = (0..leaves - 1)
            .map(|_| match mode {
                _ if delta == 0.0 => 0.5,
                SplitterPerturbation::Uniform => 0.5 + rng.random_range(-delta..=delta),
                SplitterPerturbation::WorstCase => 0.5 + delta,
            })
            .collect();
        Self {
            depth: leaves.trailing_zeros(),
            leaves,
            splits,
        }
    }

    pub fn depth(&self) -> u32 {
        self.depth
    }

    pub fn leaves(&self) -> usize {
        self.leaves
    }

    pub fn splits(&self) -> &[f64] {
        &self.splits
    }

    /// Fraction of one input unit arriving at each leaf: the product of the
    /// branch fractions along the root-to-leaf path. Sums to 1; no material
    /// is lost in splitters.
    pub fn leaf_fractions(&self) -> Vec<f64> {
        let mut fracs = vec![1.0f64];
        for level in 0..self.depth {
            let first = (1usize << level) - 1;
            let mut next = Vec::with_capacity(fracs.len() * 2);
            for (k, parent) in fracs.iter().enumerate() {
                let f = self.splits[first + k];
                next.push(parent * f);
                next.push(parent * (1.0 - f));
            }
            fracs = next;
        }
        fracs
    }
}

/// Calibrated network of splitter trees encoding a binary matrix.
#[derive(Debug, Clone)]
pub struct FlowMachine {
    n: usize,
    padded: usize,
    delta: f64,
    a: BinaryMatrix,
    trees: Vec<SplitterTree>,
    leaf_fractions: Vec<Vec<f64>>,
    construction_ledger: CostLedger,
}

fn padded_leaves(n: usize) -> usize {
    n.next_power_of_two()
}

/// Build the machine for square binary `a` with splitter tolerance `delta`,
/// drawing splitter perturbations from the seeded generator.
///
/// Construction costs, all constants 1, `L = log2(N)`:
/// calibrating `n*(N-1)` splitters at `L` each, fabricating `N*L` tubing per
/// tree for `n` trees, making `n*(N-1)` tubing-splitter connections at `L`
/// each, and fabricating `2n` channels (output + interleaved garbage) of
/// length `n`.
pub fn build_flow_machine(a: &BinaryMatrix, delta: f64, seed: u64) -> Result<FlowMachine> {
    build_flow_machine_with(a, delta, seed, SplitterPerturbation::Uniform)
}

pub fn build_flow_machine_with(
    a: &BinaryMatrix,
    delta: f64,
    seed: u64,
    mode: SplitterPerturbation,
) -> Result<FlowMachine> {
    if !a.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "flow machine needs a square matrix, got {}x{}",
            a.n_rows(),
            a.n_cols()
        )));
    }
    if !(0.0..0.5).contains(&delta) {
        return Err(Error::InvalidParameter(format!(
            "splitter tolerance must satisfy 0 <= delta < 1/2, got {delta}"
        )));
    }
    let n = a.n_rows();
    let padded = padded_leaves(n);
    let depth = padded.trailing_zeros() as f64;

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let trees: Vec<SplitterTree> = (0..n)
        .map(|_| SplitterTree::build(padded, delta, mode, &mut rng))
        .collect();
    let leaf_fractions = trees.iter().map(|t| t.leaf_fractions()).collect();

    let nf = n as f64;
    let splitters = nf * (padded as f64 - 1.0);
    let mut ledger = CostLedger::new();
    ledger.add("calibrate splitters", splitters * depth, splitters * depth)?;
    let tubing = nf * padded as f64 * depth;
    ledger.add("fabricate tubing", tubing, tubing)?;
    ledger.add(
        "connect tubing to splitters",
        splitters * depth,
        splitters * depth,
    )?;
    ledger.add("fabricate channels", 2.0 * nf * nf, 2.0 * nf * nf)?;

    Ok(FlowMachine {
        n,
        padded,
        delta,
        a: a.clone(),
        trees,
        leaf_fractions,
        construction_ledger: ledger,
    })
}

impl FlowMachine {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn padded_leaves(&self) -> usize {
        self.padded
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn trees(&self) -> &[SplitterTree] {
        &self.trees
    }

    pub fn construction_ledger(&self) -> &CostLedger {
        &self.construction_ledger
    }

    pub fn matrix(&self) -> &BinaryMatrix {
        &self.a
    }
}

/// Result of pushing one vector through the machine.
#[derive(Debug, Clone)]
pub struct FlowMatvecResult {
    /// Rounded integer outputs, `c[i] = round(N * measured[i])`.
    pub c: Vec<i64>,
    pub ledger: CostLedger,
    /// Noisy channel readings before rounding.
    pub raw_measurements: Vec<f64>,
    /// Material per output channel before measurement noise.
    pub channel_totals: Vec<f64>,
    /// Material routed to garbage channels.
    pub garbage_total: f64,
}

fn uniform_noise(rng: &mut ChaCha8Rng, eps: f64) -> f64 {
    if eps == 0.0 {
        0.0
    } else {
        rng.random_range(-eps..=eps)
    }
}

/// Multiply the encoded matrix by binary `b`.
///
/// One unit of material (measured with error up to `eps_meas`) is poured
/// into tree `j` for each `b[j] = 1`; channel readings (again within
/// `eps_meas`) are rounded to the nearest multiple of `1/N`.
///
/// Ledger, mirroring the machine's operating procedure: lifting the active
/// units to the tree tops (height `log2 N`), sequentially measuring out each
/// input unit, gravity flow along the length-`n` incline, and sequentially
/// measuring the `n` channel outputs. With `eps_meas = 0` the run is the
/// idealized diagnostic mode and measurement entries charge zero.
pub fn flow_matvec(
    machine: &FlowMachine,
    b: &BinaryVector,
    eps_meas: f64,
    seed: u64,
) -> Result<FlowMatvecResult> {
    let n = machine.n;
    if b.len() != n {
        return Err(Error::DimensionMismatch(format!(
            "machine encodes {}x{}, vector has length {}",
            n,
            n,
            b.len()
        )));
    }
    if !(eps_meas >= 0.0) {
        return Err(Error::InvalidParameter(format!(
            "measurement noise must be nonnegative, got {eps_meas}"
        )));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let padded = machine.padded;
    let mut channels = vec![0.0f64; n];
    let mut garbage = 0.0f64;
    let active: Vec<usize> = (0..n).filter(|&j| b.get(j) == 1).collect();

    for &j in &active {
        let input = 1.0 + uniform_noise(&mut rng, eps_meas);
        let fractions = &machine.leaf_fractions[j];
        for (i, &lf) in fractions.iter().enumerate().take(padded) {
            let x = input * lf;
            if i < n && machine.a.get(i, j) == 1 {
                channels[i] += x;
            } else {
                garbage += x;
            }
        }
    }

    let mut raw = Vec::with_capacity(n);
    let mut c = Vec::with_capacity(n);
    for &total in &channels {
        let measured = total + uniform_noise(&mut rng, eps_meas);
        raw.push(measured);
        c.push((measured * padded as f64).round() as i64);
    }

    let m = active.len() as f64;
    let depth = padded.trailing_zeros() as f64;
    let ideal = eps_meas == 0.0;
    let mc = if ideal {
        crate::cost::CostDelta::ZERO
    } else {
        measure_cost(1.0, eps_meas)?
    };
    let mut ledger = CostLedger::new();
    ledger.add("lift material to tree tops", m * depth, m * depth)?;
    ledger.add(
        if ideal { "measure inputs (ideal, eps=0)" } else { "measure inputs (sequential)" },
        m * mc.time,
        m * mc.energy,
    )?;
    ledger.add("gravity flow through tubing and channel", n as f64, 0.0)?;
    ledger.add(
        if ideal {
            "measure channel outputs (ideal, eps=0)"
        } else {
            "measure channel outputs (sequential)"
        },
        n as f64 * mc.time,
        n as f64 * mc.energy,
    )?;

    Ok(FlowMatvecResult {
        c,
        ledger,
        raw_measurements: raw,
        channel_totals: channels,
        garbage_total: garbage,
    })
}

/// Result of a full matrix product on the machine.
#[derive(Debug, Clone)]
pub struct FlowMatmulResult {
    pub c: IntMatrix,
    /// Construction ledger merged with the `n` per-column matvec ledgers.
    pub ledger: CostLedger,
}

/// Multiply two square binary matrices: build the machine for `a` once,
/// then push each column of `b` through it.
pub fn flow_matmul(
    a: &BinaryMatrix,
    b: &BinaryMatrix,
    delta: f64,
    eps_meas: f64,
    seed: u64,
) -> Result<FlowMatmulResult> {
    let machine = build_flow_machine(a, delta, seed)?;
    let (c, matvec_ledger) = flow_matmul_with_machine(&machine, b, eps_meas, seed.wrapping_add(1))?;
    let mut ledger = machine.construction_ledger.clone();
    ledger.merge(matvec_ledger);
    Ok(FlowMatmulResult { c, ledger })
}

/// Run all columns of `b` through an existing machine. The returned ledger
/// covers only the matvecs; construction is paid once by the machine owner.
pub fn flow_matmul_with_machine(
    machine: &FlowMachine,
    b: &BinaryMatrix,
    eps_meas: f64,
    seed: u64,
) -> Result<(IntMatrix, CostLedger)> {
    let n = machine.n;
    if !b.is_square() || b.n_rows() != n {
        return Err(Error::DimensionMismatch(format!(
            "machine encodes {}x{}, got right factor {}x{}",
            n,
            n,
            b.n_rows(),
            b.n_cols()
        )));
    }
    let mut entries = vec![0i64; n * n];
    let mut ledger = CostLedger::new();
    for j in 0..n {
        let col = b.column(j);
        let r = flow_matvec(machine, &col, eps_meas, seed.wrapping_add(j as u64))?;
        for i in 0..n {
            entries[i * n + j] = r.c[i];
        }
        ledger.merge(r.ledger);
    }
    Ok((IntMatrix::from_entries(n, n, entries)?, ledger))
}

/// Multiply square integer matrices with nonnegative `r`-bit entries by
/// decomposing both factors into bit planes and combining the `r^2` binary
/// products, one machine per left-factor plane.
pub fn int_matmul_bitdecomp(
    a: &IntMatrix,
    b: &IntMatrix,
    delta: f64,
    eps_meas: f64,
    seed: u64,
) -> Result<(IntMatrix, CostLedger)> {
    if a.n_rows() != a.n_cols() || b.n_rows() != b.n_cols() || a.n_rows() != b.n_rows() {
        return Err(Error::DimensionMismatch(
            "bit-decomposed product needs equal square matrices".into(),
        ));
    }
    if a.entries().iter().any(|&v| v < 0) || b.entries().iter().any(|&v| v < 0) {
        return Err(Error::UnsupportedInput(
            "bit decomposition handles nonnegative entries only".into(),
        ));
    }
    let n = a.n_rows();
    let ra = a.bit_width();
    let rb = b.bit_width();

    let plane = |m: &IntMatrix, p: u32| -> Result<BinaryMatrix> {
        let rows: Vec<Vec<u8>> = (0..n)
            .map(|i| (0..n).map(|j| ((m.get(i, j) >> p) & 1) as u8).collect())
            .collect();
        BinaryMatrix::from_rows(&rows)
    };

    let b_planes: Vec<BinaryMatrix> = (0..rb).map(|q| plane(b, q)).collect::<Result<_>>()?;
    let mut acc = vec![0i64; n * n];
    let mut ledger = CostLedger::new();
    for p in 0..ra {
        let a_plane = plane(a, p)?;
        let machine = build_flow_machine(
            &a_plane,
            delta,
            seed.wrapping_add(u64::from(p).wrapping_mul(0x9E37_79B9)),
        )?;
        ledger.merge(machine.construction_ledger.clone());
        for (q, b_plane) in b_planes.iter().enumerate() {
            let (c_pq, l) = flow_matmul_with_machine(
                &machine,
                b_plane,
                eps_meas,
                seed.wrapping_add(1 + (u64::from(p) * rb as u64 + q as u64)),
            )?;
            ledger.merge(l);
            let scale = 1i64 << (p + q as u32);
            for (dst, src) in acc.iter_mut().zip(c_pq.entries()) {
                *dst += scale * src;
            }
        }
    }
    Ok((IntMatrix::from_entries(n, n, acc)?, ledger))
}

/// Splitter and measurement tolerances under which nearest-multiple rounding
/// provably recovers the exact integer output.
///
/// With `delta = 1/(8*N*L)` every root-to-leaf product lies within
/// `(1/N)(1 + 2*delta)^L <= (1/N) e^(1/(4N))`, so each of the at most `N`
/// contributions to a channel errs by at most `(e^(1/(4N)) - 1)/N`.
/// Adding input noise `eps*(1+2*delta)^L/N` per contribution and `eps`
/// on the channel reading, `eps = 1/(8*N^2)` keeps the total channel error
/// strictly below `1/(2N)`, which makes rounding `N*measured` exact.
pub fn correctness_threshold(n: usize) -> Result<(f64, f64)> {
    if n == 0 {
        return Err(Error::InvalidParameter("n must be >= 1".into()));
    }
    let padded = padded_leaves(n) as f64;
    let log_term = padded.max(2.0).log2();
    let delta_safe = 1.0 / (8.0 * padded * log_term);
    let eps_safe = 1.0 / (8.0 * padded * padded);
    Ok((delta_safe, eps_safe))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::{int_matmul, int_matmul_general, int_matvec};
    use proptest::prelude::*;

    #[test]
    fn single_entry_machine() {
        let a = BinaryMatrix::from_rows(&[vec![1]]).unwrap();
        let m = build_flow_machine(&a, 0.0, 0).unwrap();
        assert_eq!(m.trees().len(), 1);
        assert_eq!(m.trees()[0].depth(), 0);
        assert_eq!(m.trees()[0].leaf_fractions(), vec![1.0]);

        let b = BinaryVector::from_bits(vec![1]).unwrap();
        let r = flow_matvec(&m, &b, 0.0, 0).unwrap();
        assert_eq!(r.c, vec![1]);
    }

    #[test]
    fn perfect_splitters_give_exact_quarters() {
        let a = BinaryMatrix::identity(4).unwrap();
        let m = build_flow_machine(&a, 0.0, 7).unwrap();
        for tree in m.trees() {
            for lf in tree.leaf_fractions() {
                assert_eq!(lf, 0.25);
            }
        }
    }

    #[test]
    fn perturbed_splits_stay_in_band_and_ledger_matches_closed_form() {
        let n = 4usize;
        let a = BinaryMatrix::identity(n).unwrap();
        let delta = 0.01;
        let m = build_flow_machine(&a, delta, 12345).unwrap();
        for tree in m.trees() {
            for &f in tree.splits() {
                assert!((0.49..=0.51).contains(&f), "split {f} out of band");
            }
        }
        // Independent recomputation of the construction ledger.
        let big_n = n.next_power_of_two() as f64;
        let l = big_n.log2();
        let nf = n as f64;
        let expected =
            nf * (big_n - 1.0) * l + nf * big_n * l + nf * (big_n - 1.0) * l + 2.0 * nf * nf;
        assert_eq!(m.construction_ledger().total_time(), expected);
        assert_eq!(m.construction_ledger().total_energy(), expected);
    }

    #[test]
    fn explicit_single_splitter_fractions() {
        let t = SplitterTree::from_splits(2, vec![0.6]).unwrap();
        assert_eq!(t.leaf_fractions(), vec![0.6, 0.4]);
    }

    #[test]
    fn build_rejects_bad_inputs() {
        let a = BinaryMatrix::zeros(2, 3).unwrap();
        assert!(build_flow_machine(&a, 0.0, 0).is_err());
        let sq = BinaryMatrix::zeros(2, 2).unwrap();
        assert!(build_flow_machine(&sq, 0.5, 0).is_err());
        assert!(build_flow_machine(&sq, -0.1, 0).is_err());
    }

    #[test]
    fn identity_matvec_passthrough() {
        let a = BinaryMatrix::identity(4).unwrap();
        let m = build_flow_machine(&a, 0.0, 0).unwrap();
        let b = BinaryVector::from_bits(vec![1, 0, 1, 0]).unwrap();
        let r = flow_matvec(&m, &b, 0.0, 0).unwrap();
        assert_eq!(r.c, vec![1, 0, 1, 0]);
    }

    #[test]
    fn all_ones_matvec_row_sums() {
        let a = BinaryMatrix::ones(4, 4).unwrap();
        let m = build_flow_machine(&a, 0.0, 0).unwrap();
        let b = BinaryVector::from_bits(vec![1, 1, 1, 1]).unwrap();
        let r = flow_matvec(&m, &b, 0.0, 0).unwrap();
        assert_eq!(r.c, vec![4, 4, 4, 4]);
    }

    #[test]
    fn zero_noise_exhaustive_small() {
        // Every (A, b) pair for n <= 3 at delta = 0, eps = 0.
        for n in 1usize..=3 {
            let cells = n * n;
            for amask in 0u32..(1 << cells) {
                let rows: Vec<Vec<u8>> = (0..n)
                    .map(|i| (0..n).map(|j| ((amask >> (i * n + j)) & 1) as u8).collect())
                    .collect();
                let a = BinaryMatrix::from_rows(&rows).unwrap();
                let machine = build_flow_machine(&a, 0.0, 1).unwrap();
                for bmask in 0u32..(1 << n) {
                    let bits: Vec<u8> = (0..n).map(|j| ((bmask >> j) & 1) as u8).collect();
                    let b = BinaryVector::from_bits(bits).unwrap();
                    let r = flow_matvec(&machine, &b, 0.0, 0).unwrap();
                    assert_eq!(r.c, int_matvec(&a, &b).unwrap(), "n={n} a={amask:b} b={bmask:b}");
                }
            }
        }
    }

    #[test]
    fn zero_noise_randomized_large() {
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        for &n in &[5usize, 16, 33, 64, 128] {
            let a = BinaryMatrix::random(n, n, 0.5, &mut rng).unwrap();
            let machine = build_flow_machine(&a, 0.0, 2).unwrap();
            for trial in 0..5 {
                let b = BinaryVector::random(n, 0.5, &mut rng).unwrap();
                let r = flow_matvec(&machine, &b, 0.0, trial).unwrap();
                assert_eq!(r.c, int_matvec(&a, &b).unwrap(), "n={n} trial={trial}");
            }
        }
    }

    #[test]
    fn safe_thresholds_recover_exact_products() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for &n in &[4usize, 8, 16, 32] {
            let (delta, eps) = correctness_threshold(n).unwrap();
            for trial in 0..20u64 {
                let a = BinaryMatrix::random(n, n, 0.5, &mut rng).unwrap();
                let b = BinaryVector::random(n, 0.5, &mut rng).unwrap();
                let machine = build_flow_machine(&a, delta, trial).unwrap();
                let r = flow_matvec(&machine, &b, eps, trial.wrapping_add(1000)).unwrap();
                assert_eq!(r.c, int_matvec(&a, &b).unwrap(), "n={n} trial={trial}");
            }
        }
    }

    #[test]
    fn material_conserved_at_zero_noise() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for &n in &[3usize, 7, 16, 33] {
            let a = BinaryMatrix::random(n, n, 0.5, &mut rng).unwrap();
            let (delta, _) = correctness_threshold(n).unwrap();
            let machine = build_flow_machine(&a, delta, 5).unwrap();
            let b = BinaryVector::random(n, 0.5, &mut rng).unwrap();
            let r = flow_matvec(&machine, &b, 0.0, 0).unwrap();
            let collected: f64 = r.channel_totals.iter().sum::<f64>() + r.garbage_total;
            let poured = b.count_ones() as f64;
            assert!(
                (collected - poured).abs() <= 1e-9 * poured.max(1.0),
                "n={n}: collected {collected}, poured {poured}"
            );
        }
    }

    #[test]
    fn matmul_identity_left_factor() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let a = BinaryMatrix::identity(8).unwrap();
        let b = BinaryMatrix::random(8, 8, 0.5, &mut rng).unwrap();
        let r = flow_matmul(&a, &b, 0.0, 0.0, 0).unwrap();
        for i in 0..8 {
            for j in 0..8 {
                assert_eq!(r.c.get(i, j), b.get(i, j) as i64);
            }
        }
    }

    #[test]
    fn matmul_matches_oracle_at_safe_thresholds() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let n = 8;
        let (delta, eps) = correctness_threshold(n).unwrap();
        let a = BinaryMatrix::random(n, n, 0.5, &mut rng).unwrap();
        let b = BinaryMatrix::random(n, n, 0.5, &mut rng).unwrap();
        let r = flow_matmul(&a, &b, delta, eps, 77).unwrap();
        assert_eq!(r.c.entries(), int_matmul(&a, &b).unwrap().entries());
    }

    #[test]
    fn bitdecomp_degenerate_width_one_matches_flow_matmul() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        let n = 4;
        let a = BinaryMatrix::random(n, n, 0.5, &mut rng).unwrap();
        let b = BinaryMatrix::random(n, n, 0.5, &mut rng).unwrap();
        let ai = IntMatrix::new(
            n,
            n,
            a.entries().iter().map(|&v| v as i64).collect(),
            1,
        )
        .unwrap();
        let bi = IntMatrix::new(
            n,
            n,
            b.entries().iter().map(|&v| v as i64).collect(),
            1,
        )
        .unwrap();
        let (c, _) = int_matmul_bitdecomp(&ai, &bi, 0.0, 0.0, 9).unwrap();
        let direct = flow_matmul(&a, &b, 0.0, 0.0, 9).unwrap();
        assert_eq!(c.entries(), direct.c.entries());
    }

    #[test]
    fn bitdecomp_scalar_square() {
        let two = IntMatrix::new(1, 1, vec![2], 2).unwrap();
        let (c, _) = int_matmul_bitdecomp(&two, &two, 0.0, 0.0, 0).unwrap();
        assert_eq!(c.get(0, 0), 4);
    }

    #[test]
    fn bitdecomp_random_matches_direct_product() {
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        let n = 4;
        let (delta, eps) = correctness_threshold(n).unwrap();
        let a = IntMatrix::random_nonneg(n, 3, &mut rng).unwrap();
        let b = IntMatrix::random_nonneg(n, 3, &mut rng).unwrap();
        let (c, _) = int_matmul_bitdecomp(&a, &b, delta, eps, 17).unwrap();
        let oracle = int_matmul_general(&a, &b).unwrap();
        assert_eq!(c.entries(), oracle.entries());
    }

    #[test]
    fn bitdecomp_rejects_negative_entries() {
        let neg = IntMatrix::new(1, 1, vec![-1], 2).unwrap();
        assert!(matches!(
            int_matmul_bitdecomp(&neg, &neg, 0.0, 0.0, 0),
            Err(Error::UnsupportedInput(_))
        ));
    }

    #[test]
    fn threshold_values() {
        let (d1, e1) = correctness_threshold(1).unwrap();
        assert_eq!(d1, 0.125);
        assert_eq!(e1, 0.125);
        let (d4, e4) = correctness_threshold(4).unwrap();
        assert_eq!(d4, 1.0 / 64.0);
        assert_eq!(e4, 1.0 / 128.0);
    }

    #[test]
    fn worst_case_mode_pins_all_splitters_high() {
        let a = BinaryMatrix::identity(4).unwrap();
        let m =
            build_flow_machine_with(&a, 0.02, 3, SplitterPerturbation::WorstCase).unwrap();
        for tree in m.trees() {
            for &f in tree.splits() {
                assert_eq!(f, 0.52);
            }
        }
    }

    #[test]
    fn matvec_rejects_length_mismatch() {
        let a = BinaryMatrix::identity(4).unwrap();
        let m = build_flow_machine(&a, 0.0, 0).unwrap();
        let b = BinaryVector::from_bits(vec![1, 0]).unwrap();
        assert!(flow_matvec(&m, &b, 0.0, 0).is_err());
    }

    #[test]
    fn matvec_is_deterministic_per_seed() {
        let mut rng = ChaCha8Rng::seed_from_u64(55);
        let a = BinaryMatrix::random(16, 16, 0.5, &mut rng).unwrap();
        let b = BinaryVector::random(16, 0.5, &mut rng).unwrap();
        let (delta, eps) = correctness_threshold(16).unwrap();
        let m = build_flow_machine(&a, delta, 8).unwrap();
        let r1 = flow_matvec(&m, &b, eps, 42).unwrap();
        let r2 = flow_matvec(&m, &b, eps, 42).unwrap();
        assert_eq!(r1.raw_measurements, r2.raw_measurements);
        assert_eq!(r1.c, r2.c);
    }

    proptest! {
        // Leaf fractions always sum to one: no material is lost.
        #[test]
        fn leaf_fractions_sum_to_one(
            depth in 0u32..7,
            seed in proptest::num::u64::ANY,
            delta in 0.0f64..0.49,
        ) {
            let leaves = 1usize << depth;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let t = SplitterTree::build(leaves, delta, SplitterPerturbation::Uniform, &mut rng);
            let sum: f64 = t.leaf_fractions().iter().sum();
            prop_assert!((sum - 1.0).abs() < 1e-12, "sum = {}", sum);
        }
    }
}
