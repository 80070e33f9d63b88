//! Dense binary and small-integer matrices.
//!
//! These are deliberately plain row-major buffers: instance sizes are desk
//! scale and every simulator wants predictable iteration order. The text
//! format (`n` on the first line, then `n` rows of `n` space-separated
//! entries) is shared with the CLI's `--matrix-a/--matrix-b` loaders.

use rand::Rng;

use crate::error::{Error, Result};

/// Dense 0/1 matrix, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinaryMatrix {
    n_rows: usize,
    n_cols: usize,
    entries: Vec<u8>,
}

impl BinaryMatrix {
    pub fn zeros(n_rows: usize, n_cols: usize) -> Result<Self> {
        if n_rows == 0 || n_cols == 0 {
            return Err(Error::InvalidParameter(
                "matrix dimensions must be >= 1".into(),
            ));
        }
        Ok(Self {
            n_rows,
            n_cols,
            entries: vec![0; n_rows * n_cols],
        })
    }

    pub fn identity(n: usize) -> Result<Self> {
        let mut m = Self::zeros(n, n)?;
        for i in 0..n {
            m.set(i, i, 1);
        }
        Ok(m)
    }

    pub fn ones(n_rows: usize, n_cols: usize) -> Result<Self> {
        let mut m = Self::zeros(n_rows, n_cols)?;
        m.entries.fill(1);
        Ok(m)
    }

    pub fn from_rows(rows: &[Vec<u8>]) -> Result<Self> {
        if rows.is_empty() || rows[0].is_empty() {
            return Err(Error::InvalidParameter(
                "matrix dimensions must be >= 1".into(),
            ));
        }
        let n_cols = rows[0].len();
        let mut entries = Vec::with_capacity(rows.len() * n_cols);
        for row in rows {
            if row.len() != n_cols {
                return Err(Error::DimensionMismatch("ragged rows".into()));
            }
            for &v in row {
                if v > 1 {
                    return Err(Error::InvalidParameter(format!(
                        "binary matrix entry must be 0 or 1, got {v}"
                    )));
                }
                entries.push(v);
            }
        }
        Ok(Self {
            n_rows: rows.len(),
            n_cols,
            entries,
        })
    }

    /// i.i.d. Bernoulli(p) entries.
    pub fn random(n_rows: usize, n_cols: usize, p: f64, rng: &mut impl Rng) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidParameter(format!(
                "density must be in [0,1], got {p}"
            )));
        }
        let mut m = Self::zeros(n_rows, n_cols)?;
        for e in &mut m.entries {
            *e = u8::from(rng.random_bool(p));
        }
        Ok(m)
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u8 {
        self.entries[i * self.n_cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: u8) {
        debug_assert!(v <= 1);
        self.entries[i * self.n_cols + j] = v;
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    pub fn is_square(&self) -> bool {
        self.n_rows == self.n_cols
    }

    pub fn column(&self, j: usize) -> BinaryVector {
        BinaryVector((0..self.n_rows).map(|i| self.get(i, j)).collect())
    }

    pub fn entries(&self) -> &[u8] {
        &self.entries
    }

    /// Parse the plain text format: first line `n`, then `n` lines of `n`
    /// space-separated 0/1 entries.
    pub fn from_text(text: &str) -> Result<Self> {
        let rows = parse_square_rows(text)?;
        let bin: Vec<Vec<u8>> = rows
            .iter()
            .map(|r| {
                r.iter()
                    .map(|&v| {
                        if v == 0 || v == 1 {
                            Ok(v as u8)
                        } else {
                            Err(Error::Parse(format!("entry {v} is not 0/1")))
                        }
                    })
                    .collect()
            })
            .collect::<Result<_>>()?;
        Self::from_rows(&bin)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{}\n", self.n_rows);
        for i in 0..self.n_rows {
            let row: Vec<String> = (0..self.n_cols).map(|j| self.get(i, j).to_string()).collect();
            out.push_str(&row.join(" "));
            out.push('\n');
        }
        out
    }
}

/// Dense 0/1 vector.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinaryVector(Vec<u8>);

impl BinaryVector {
    pub fn from_bits(bits: Vec<u8>) -> Result<Self> {
        if bits.is_empty() {
            return Err(Error::InvalidParameter("vector length must be >= 1".into()));
        }
        if bits.iter().any(|&b| b > 1) {
            return Err(Error::InvalidParameter("vector entries must be 0 or 1".into()));
        }
        Ok(Self(bits))
    }

    pub fn zeros(n: usize) -> Result<Self> {
        Self::from_bits(vec![0; n.max(1)])
    }

    pub fn random(n: usize, p: f64, rng: &mut impl Rng) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidParameter(format!(
                "density must be in [0,1], got {p}"
            )));
        }
        Self::from_bits((0..n).map(|_| u8::from(rng.random_bool(p))).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    #[inline]
    pub fn get(&self, i: usize) -> u8 {
        self.0[i]
    }

    pub fn bits(&self) -> &[u8] {
        &self.0
    }

    pub fn count_ones(&self) -> usize {
        self.0.iter().filter(|&&b| b == 1).count()
    }
}

/// Dense signed-integer matrix with a declared bit width `r`:
/// every entry satisfies `|entry| < 2^r`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMatrix {
    n_rows: usize,
    n_cols: usize,
    bit_width: u32,
    entries: Vec<i64>,
}

impl IntMatrix {
    pub fn new(n_rows: usize, n_cols: usize, entries: Vec<i64>, bit_width: u32) -> Result<Self> {
        if n_rows == 0 || n_cols == 0 {
            return Err(Error::InvalidParameter(
                "matrix dimensions must be >= 1".into(),
            ));
        }
        if entries.len() != n_rows * n_cols {
            return Err(Error::DimensionMismatch(format!(
                "expected {} entries, got {}",
                n_rows * n_cols,
                entries.len()
            )));
        }
        if bit_width == 0 || bit_width > 62 {
            return Err(Error::InvalidParameter(format!(
                "bit width must be in [1,62], got {bit_width}"
            )));
        }
        let bound = 1i64 << bit_width;
        if let Some(bad) = entries.iter().find(|&&v| v.abs() >= bound) {
            return Err(Error::InvalidParameter(format!(
                "entry {bad} exceeds declared {bit_width}-bit width"
            )));
        }
        Ok(Self {
            n_rows,
            n_cols,
            bit_width,
            entries,
        })
    }

    /// Construct with the smallest width that fits the entries.
    pub fn from_entries(n_rows: usize, n_cols: usize, entries: Vec<i64>) -> Result<Self> {
        let max_abs = entries.iter().map(|v| v.unsigned_abs()).max().unwrap_or(0);
        let width = (64 - max_abs.leading_zeros()).clamp(1, 62) + u32::from(max_abs >= (1 << 62));
        Self::new(n_rows, n_cols, entries, width)
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Result<Self> {
        if rows.is_empty() || rows[0].is_empty() {
            return Err(Error::InvalidParameter(
                "matrix dimensions must be >= 1".into(),
            ));
        }
        let n_cols = rows[0].len();
        if rows.iter().any(|r| r.len() != n_cols) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        Self::from_entries(
            rows.len(),
            n_cols,
            rows.iter().flatten().copied().collect(),
        )
    }

    pub fn random_nonneg(
        n: usize,
        bit_width: u32,
        rng: &mut impl Rng,
    ) -> Result<Self> {
        if bit_width == 0 || bit_width > 31 {
            return Err(Error::InvalidParameter(format!(
                "random bit width must be in [1,31], got {bit_width}"
            )));
        }
        let bound = 1i64 << bit_width;
        let entries = (0..n * n).map(|_| rng.random_range(0..bound)).collect();
        Self::new(n, n, entries, bit_width)
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.entries[i * self.n_cols + j]
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    pub fn bit_width(&self) -> u32 {
        self.bit_width
    }

    pub fn entries(&self) -> &[i64] {
        &self.entries
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let rows = parse_square_rows(text)?;
        Self::from_rows(&rows)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{}\n", self.n_rows);
        for i in 0..self.n_rows {
            let row: Vec<String> = (0..self.n_cols).map(|j| self.get(i, j).to_string()).collect();
            out.push_str(&row.join(" "));
            out.push('\n');
        }
        out
    }
}

fn parse_square_rows(text: &str) -> Result<Vec<Vec<i64>>> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let n: usize = lines
        .next()
        .ok_or_else(|| Error::Parse("empty matrix file".into()))?
        .trim()
        .parse()
        .map_err(|e| Error::Parse(format!("bad size line: {e}")))?;
    if n == 0 {
        return Err(Error::Parse("matrix size must be >= 1".into()));
    }
    let mut rows = Vec::with_capacity(n);
    for i in 0..n {
        let line = lines
            .next()
            .ok_or_else(|| Error::Parse(format!("expected {n} rows, got {i}")))?;
        let row: Vec<i64> = line
            .split_whitespace()
            .map(|tok| {
                tok.parse()
                    .map_err(|e| Error::Parse(format!("bad entry {tok:?}: {e}")))
            })
            .collect::<Result<_>>()?;
        if row.len() != n {
            return Err(Error::Parse(format!(
                "row {i} has {} entries, expected {n}",
                row.len()
            )));
        }
        rows.push(row);
    }
    Ok(rows)
}

/// Plain integer matrix-vector product, the reference for the flow machine.
pub fn int_matvec(a: &BinaryMatrix, b: &BinaryVector) -> Result<Vec<i64>> {
    if a.n_cols() != b.len() {
        return Err(Error::DimensionMismatch(format!(
            "matrix is {}x{}, vector has length {}",
            a.n_rows(),
            a.n_cols(),
            b.len()
        )));
    }
    Ok((0..a.n_rows())
        .map(|i| (0..a.n_cols()).map(|j| (a.get(i, j) * b.get(j)) as i64).sum())
        .collect())
}

/// Plain triple-loop integer matrix product over binary inputs.
pub fn int_matmul(a: &BinaryMatrix, b: &BinaryMatrix) -> Result<IntMatrix> {
    if a.n_cols() != b.n_rows() {
        return Err(Error::DimensionMismatch(format!(
            "cannot multiply {}x{} by {}x{}",
            a.n_rows(),
            a.n_cols(),
            b.n_rows(),
            b.n_cols()
        )));
    }
    let mut entries = vec![0i64; a.n_rows() * b.n_cols()];
    for i in 0..a.n_rows() {
        for k in 0..a.n_cols() {
            if a.get(i, k) == 1 {
                for j in 0..b.n_cols() {
                    entries[i * b.n_cols() + j] += b.get(k, j) as i64;
                }
            }
        }
    }
    IntMatrix::from_entries(a.n_rows(), b.n_cols(), entries)
}

/// Plain triple-loop product for general integer matrices.
pub fn int_matmul_general(a: &IntMatrix, b: &IntMatrix) -> Result<IntMatrix> {
    if a.n_cols() != b.n_rows() {
        return Err(Error::DimensionMismatch(format!(
            "cannot multiply {}x{} by {}x{}",
            a.n_rows(),
            a.n_cols(),
            b.n_rows(),
            b.n_cols()
        )));
    }
    let mut entries = vec![0i64; a.n_rows() * b.n_cols()];
    for i in 0..a.n_rows() {
        for k in 0..a.n_cols() {
            let aik = a.get(i, k);
            if aik != 0 {
                for j in 0..b.n_cols() {
                    entries[i * b.n_cols() + j] += aik * b.get(k, j);
                }
            }
        }
    }
    IntMatrix::from_entries(a.n_rows(), b.n_cols(), entries)
}
