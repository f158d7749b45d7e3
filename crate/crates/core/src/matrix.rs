//! Dense matrices over `F_q`, row reduction, kernels and exhaustive enumeration.
//!
//! Row reduction always pivots on the first nonzero entry, scanning columns left
//! to right, so kernels and complements come out the same on every run.

use std::fmt;

use crate::error::{HallError, Result};
use crate::field::{Fq, GaloisField};

/// Default cap on the number of candidates a single enumeration may visit.
pub const DEFAULT_BUDGET: u64 = 1 << 24;

/// Per-enumeration candidate budget.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget(pub u64);

impl Default for Budget {
    fn default() -> Self {
        Budget(DEFAULT_BUDGET)
    }
}

impl Budget {
    /// `q^exponent`, checked against the budget.
    pub fn check_power(&self, what: impl FnOnce() -> String, q: u32, exponent: usize) -> Result<u64> {
        let size = (q as u128).checked_pow(exponent as u32).unwrap_or(u128::MAX);
        if size > self.0 as u128 {
            return Err(HallError::budget(what(), size, self.0));
        }
        Ok(size as u64)
    }
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Fq>,
}

impl fmt::Debug for FieldMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for r in 0..self.rows {
            if r > 0 {
                write!(f, "; ")?;
            }
            let row: Vec<String> = self.row(r).iter().map(|x| x.0.to_string()).collect();
            write!(f, "{}", row.join(" "))?;
        }
        write!(f, "]({}x{})", self.rows, self.cols)
    }
}

/// Reduced row echelon form together with its pivot columns.
#[derive(Clone, Debug)]
pub struct Rref {
    pub matrix: FieldMatrix,
    pub pivots: Vec<usize>,
}

impl Rref {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }
}

/// Solution set `particular + span(kernel)` of a linear system.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Solution {
    pub particular: Vec<Fq>,
    pub kernel: Vec<Vec<Fq>>,
}

impl FieldMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<Fq>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(HallError::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(FieldMatrix { rows, cols, data })
    }

    /// Entries in row-major order.
    pub fn data(&self) -> &[Fq] {
        &self.data
    }

    /// Build from small integers, reduced into the prime field.
    pub fn from_ints(f: &GaloisField, rows: usize, cols: usize, entries: &[i64]) -> Result<Self> {
        Self::new(rows, cols, entries.iter().map(|&x| f.from_int(x)).collect())
    }

    /// Build from raw element indices (no reduction).
    pub fn from_indices(rows: usize, cols: usize, entries: &[u8]) -> Result<Self> {
        Self::new(rows, cols, entries.iter().map(|&x| Fq(x)).collect())
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        FieldMatrix { rows, cols, data: vec![Fq::ZERO; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Fq::ONE);
        }
        m
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> Fq {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, x: Fq) {
        self.data[r * self.cols + c] = x;
    }

    pub fn entries(&self) -> &[Fq] {
        &self.data
    }

    pub fn row(&self, r: usize) -> &[Fq] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<Fq> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn from_columns(rows: usize, columns: &[Vec<Fq>]) -> Self {
        let mut m = Self::zeros(rows, columns.len());
        for (c, col) in columns.iter().enumerate() {
            debug_assert_eq!(col.len(), rows);
            for (r, &x) in col.iter().enumerate() {
                m.set(r, c, x);
            }
        }
        m
    }

    pub fn from_rows(cols: usize, rows: &[Vec<Fq>]) -> Self {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for row in rows {
            debug_assert_eq!(row.len(), cols);
            data.extend_from_slice(row);
        }
        FieldMatrix { rows: rows.len(), cols, data }
    }

    pub fn transpose(&self) -> Self {
        let mut m = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                m.set(c, r, self.get(r, c));
            }
        }
        m
    }

    pub fn add(&self, f: &GaloisField, other: &Self) -> Self {
        assert_eq!(self.shape(), other.shape(), "matrix add shape mismatch");
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| f.add(a, b)).collect();
        FieldMatrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn sub(&self, f: &GaloisField, other: &Self) -> Self {
        assert_eq!(self.shape(), other.shape(), "matrix sub shape mismatch");
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| f.sub(a, b)).collect();
        FieldMatrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn neg(&self, f: &GaloisField) -> Self {
        let data = self.data.iter().map(|&a| f.neg(a)).collect();
        FieldMatrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn scale(&self, f: &GaloisField, s: Fq) -> Self {
        let data = self.data.iter().map(|&a| f.mul(a, s)).collect();
        FieldMatrix { rows: self.rows, cols: self.cols, data }
    }

    /// In-place `self += s * other`.
    pub fn axpy(&mut self, f: &GaloisField, s: Fq, other: &Self) {
        assert_eq!(self.shape(), other.shape(), "matrix axpy shape mismatch");
        if s.is_zero() {
            return;
        }
        for (a, &b) in self.data.iter_mut().zip(&other.data) {
            *a = f.add(*a, f.mul(s, b));
        }
    }

    pub fn mul(&self, f: &GaloisField, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "matrix product shape mismatch");
        let mut m = Self::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let idx = r * other.cols + c;
                    m.data[idx] = f.add(m.data[idx], f.mul(a, other.get(k, c)));
                }
            }
        }
        m
    }

    pub fn mul_vec(&self, f: &GaloisField, v: &[Fq]) -> Vec<Fq> {
        assert_eq!(self.cols, v.len(), "matrix-vector shape mismatch");
        (0..self.rows)
            .map(|r| {
                self.row(r).iter().zip(v).fold(Fq::ZERO, |acc, (&a, &b)| f.add(acc, f.mul(a, b)))
            })
            .collect()
    }

    /// `[[tl, tr], [bl, br]]`; blocks must have compatible shapes.
    pub fn block(tl: &Self, tr: &Self, bl: &Self, br: &Self) -> Self {
        assert_eq!(tl.rows, tr.rows);
        assert_eq!(bl.rows, br.rows);
        assert_eq!(tl.cols, bl.cols);
        assert_eq!(tr.cols, br.cols);
        let rows = tl.rows + bl.rows;
        let cols = tl.cols + tr.cols;
        let mut m = Self::zeros(rows, cols);
        for (src, r0, c0) in [(tl, 0, 0), (tr, 0, tl.cols), (bl, tl.rows, 0), (br, tl.rows, tl.cols)] {
            for r in 0..src.rows {
                for c in 0..src.cols {
                    m.set(r0 + r, c0 + c, src.get(r, c));
                }
            }
        }
        m
    }

    pub fn block_diag(a: &Self, b: &Self) -> Self {
        Self::block(a, &Self::zeros(a.rows, b.cols), &Self::zeros(b.rows, a.cols), b)
    }

    pub fn hstack(a: &Self, b: &Self) -> Self {
        assert_eq!(a.rows, b.rows);
        let mut m = Self::zeros(a.rows, a.cols + b.cols);
        for r in 0..a.rows {
            for c in 0..a.cols {
                m.set(r, c, a.get(r, c));
            }
            for c in 0..b.cols {
                m.set(r, a.cols + c, b.get(r, c));
            }
        }
        m
    }

    /// Permute rows and columns: `out[i][j] = self[row_src[i]][col_src[j]]`.
    pub fn permuted(&self, row_src: &[usize], col_src: &[usize]) -> Self {
        let mut m = Self::zeros(row_src.len(), col_src.len());
        for (i, &ri) in row_src.iter().enumerate() {
            for (j, &cj) in col_src.iter().enumerate() {
                m.set(i, j, self.get(ri, cj));
            }
        }
        m
    }

    pub fn rref(&self, f: &GaloisField) -> Rref {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(p) = (row..m.rows).find(|&r| !m.get(r, col).is_zero()) else {
                continue;
            };
            if p != row {
                for c in 0..m.cols {
                    m.data.swap(p * m.cols + c, row * m.cols + c);
                }
            }
            let inv = f.inv(m.get(row, col)).expect("pivot is nonzero");
            for c in 0..m.cols {
                let idx = row * m.cols + c;
                m.data[idx] = f.mul(m.data[idx], inv);
            }
            for r in 0..m.rows {
                if r == row {
                    continue;
                }
                let factor = m.get(r, col);
                if factor.is_zero() {
                    continue;
                }
                let neg = f.neg(factor);
                for c in 0..m.cols {
                    let pv = m.get(row, c);
                    let idx = r * m.cols + c;
                    m.data[idx] = f.add(m.data[idx], f.mul(neg, pv));
                }
            }
            pivots.push(col);
            row += 1;
        }
        Rref { matrix: m, pivots }
    }

    pub fn rank(&self, f: &GaloisField) -> usize {
        self.rref(f).rank()
    }

    /// Rank and a kernel basis, the latter itself in reduced echelon form.
    pub fn rank_and_kernel(&self, f: &GaloisField) -> (usize, Vec<Vec<Fq>>) {
        let rref = self.rref(f);
        let raw = kernel_from_rref(f, &rref, self.cols);
        if raw.is_empty() {
            return (rref.rank(), raw);
        }
        let k = FieldMatrix::from_rows(self.cols, &raw).rref(f);
        let basis = (0..k.rank()).map(|r| k.matrix.row(r).to_vec()).collect();
        (rref.rank(), basis)
    }

    pub fn kernel(&self, f: &GaloisField) -> Vec<Vec<Fq>> {
        self.rank_and_kernel(f).1
    }

    /// Solve `self * x = b`; `Ok(None)` when inconsistent.
    pub fn solve(&self, f: &GaloisField, b: &[Fq]) -> Result<Option<Solution>> {
        if b.len() != self.rows {
            return Err(HallError::DimensionMismatch(format!(
                "right-hand side of length {} for {} rows",
                b.len(),
                self.rows
            )));
        }
        let aug = Self::hstack(self, &Self::from_columns(self.rows, &[b.to_vec()]));
        let rref = aug.rref(f);
        if rref.pivots.last() == Some(&self.cols) {
            return Ok(None);
        }
        let mut particular = vec![Fq::ZERO; self.cols];
        for (r, &pc) in rref.pivots.iter().enumerate() {
            particular[pc] = rref.matrix.get(r, self.cols);
        }
        Ok(Some(Solution { particular, kernel: self.kernel(f) }))
    }

    /// Solve `self * X = rhs` column by column; `None` if any column is inconsistent.
    pub fn solve_matrix(&self, f: &GaloisField, rhs: &Self) -> Option<Self> {
        assert_eq!(self.rows, rhs.rows, "solve_matrix shape mismatch");
        let aug = Self::hstack(self, rhs);
        let rref = aug.rref(f);
        if rref.pivots.iter().any(|&p| p >= self.cols) {
            return None;
        }
        let mut x = Self::zeros(self.cols, rhs.cols);
        for (r, &pc) in rref.pivots.iter().enumerate() {
            for c in 0..rhs.cols {
                x.set(pc, c, rref.matrix.get(r, self.cols + c));
            }
        }
        Some(x)
    }

    pub fn is_invertible(&self, f: &GaloisField) -> bool {
        self.rows == self.cols && self.rank(f) == self.rows
    }

    pub fn inverse(&self, f: &GaloisField) -> Option<Self> {
        if self.rows != self.cols {
            return None;
        }
        self.solve_matrix(f, &Self::identity(self.rows)).filter(|_| self.is_invertible(f))
    }

    /// Independent columns (those at pivot positions), spanning the column space.
    pub fn column_space(&self, f: &GaloisField) -> Self {
        let rref = self.rref(f);
        let cols: Vec<Vec<Fq>> = rref.pivots.iter().map(|&c| self.column(c)).collect();
        Self::from_columns(self.rows, &cols)
    }

    /// Kernel basis as the columns of a matrix.
    pub fn kernel_matrix(&self, f: &GaloisField) -> Self {
        Self::from_columns(self.cols, &self.kernel(f))
    }
}

fn kernel_from_rref(f: &GaloisField, rref: &Rref, cols: usize) -> Vec<Vec<Fq>> {
    let pivot_of_col: Vec<Option<usize>> = {
        let mut v = vec![None; cols];
        for (r, &c) in rref.pivots.iter().enumerate() {
            v[c] = Some(r);
        }
        v
    };
    (0..cols)
        .filter(|&c| pivot_of_col[c].is_none())
        .map(|free| {
            let mut v = vec![Fq::ZERO; cols];
            v[free] = Fq::ONE;
            for (r, &pc) in rref.pivots.iter().enumerate() {
                v[pc] = f.neg(rref.matrix.get(r, free));
            }
            v
        })
        .collect()
}

/// Extend the row space of `rows` (vectors of length `n`) by standard basis
/// vectors: returns the coordinates not hit by a pivot of the echelon form.
pub fn complement_coordinates(f: &GaloisField, n: usize, rows: &[Vec<Fq>]) -> Vec<usize> {
    if rows.is_empty() {
        return (0..n).collect();
    }
    let rref = FieldMatrix::from_rows(n, rows).rref(f);
    (0..n).filter(|c| !rref.pivots.contains(c)).collect()
}

/// Incremental echelon basis used to pick complements inside a subspace.
#[derive(Clone, Debug, Default)]
pub struct EchelonBasis {
    rows: Vec<(usize, Vec<Fq>)>,
}

impl EchelonBasis {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    fn reduce(&self, f: &GaloisField, v: &[Fq]) -> Vec<Fq> {
        let mut v = v.to_vec();
        for (pc, row) in &self.rows {
            let c = v[*pc];
            if !c.is_zero() {
                let neg = f.neg(c);
                for (x, &y) in v.iter_mut().zip(row) {
                    *x = f.add(*x, f.mul(neg, y));
                }
            }
        }
        v
    }

    /// Insert `v`; returns `true` if it was independent of the current rows.
    pub fn insert(&mut self, f: &GaloisField, v: &[Fq]) -> bool {
        let mut r = self.reduce(f, v);
        let Some(pc) = r.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = f.inv(r[pc]).unwrap();
        for x in r.iter_mut() {
            *x = f.mul(*x, inv);
        }
        // keep existing rows reduced at the new pivot
        for (_, row) in self.rows.iter_mut() {
            let c = row[pc];
            if !c.is_zero() {
                let neg = f.neg(c);
                for (x, &y) in row.iter_mut().zip(&r) {
                    *x = f.add(*x, f.mul(neg, y));
                }
            }
        }
        self.rows.push((pc, r));
        true
    }

    pub fn contains(&self, f: &GaloisField, v: &[Fq]) -> bool {
        self.reduce(f, v).iter().all(|x| x.is_zero())
    }
}

/// All `q^dim` vectors of length `dim` in lexicographic order.
pub fn enumerate_vectors(f: &GaloisField, dim: usize, budget: Budget) -> Result<VectorIter> {
    let total = budget.check_power(|| format!("{dim}-dimensional vector space"), f.order(), dim)?;
    Ok(VectorIter { q: f.order() as u8, dim, next: 0, total })
}

pub struct VectorIter {
    q: u8,
    dim: usize,
    next: u64,
    total: u64,
}

impl VectorIter {
    pub fn len(&self) -> u64 {
        self.total
    }

    pub fn is_empty(&self) -> bool {
        self.total == 0
    }
}

impl Iterator for VectorIter {
    type Item = Vec<Fq>;

    fn next(&mut self) -> Option<Vec<Fq>> {
        if self.next >= self.total {
            return None;
        }
        let mut idx = self.next;
        self.next += 1;
        let mut v = vec![Fq::ZERO; self.dim];
        for slot in v.iter_mut().rev() {
            *slot = Fq((idx % self.q as u64) as u8);
            idx /= self.q as u64;
        }
        Some(v)
    }
}

/// `sum_i coeffs[i] * vectors[i]`.
pub fn combine(f: &GaloisField, len: usize, coeffs: &[Fq], vectors: &[Vec<Fq>]) -> Vec<Fq> {
    let mut out = vec![Fq::ZERO; len];
    for (&c, v) in coeffs.iter().zip(vectors) {
        if c.is_zero() {
            continue;
        }
        for (o, &x) in out.iter_mut().zip(v) {
            *o = f.add(*o, f.mul(c, x));
        }
    }
    out
}
