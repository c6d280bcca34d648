//! Dense exact linear algebra over prime fields `F_p` with `p < 2^31`.
//!
//! Matrices are immutable values stored row-major with entries in `[0, p)`.
//! Every operation returns a fresh matrix. Elimination uses positional
//! pivoting (leftmost pivot column, first nonzero row at or below the current
//! row), so results are canonical and reproducible.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use thiserror::Error;

/// Errors raised by checked linear algebra entry points.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("modulus {0} is not a prime below 2^31")]
    NotPrime(u64),
    #[error("modulus mismatch: {0} vs {1}")]
    ModulusMismatch(u64, u64),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
}

/// Deterministic primality test for moduli below 2^31.
pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Checks that `p` is an admissible modulus.
pub fn check_prime(p: u64) -> Result<(), LinalgError> {
    if p < (1u64 << 31) && is_prime(p) {
        Ok(())
    } else {
        Err(LinalgError::NotPrime(p))
    }
}

/// `a^e mod p`.
pub fn pow_mod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1 % p;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = r * a % p;
        }
        a = a * a % p;
        e >>= 1;
    }
    r
}

/// Multiplicative inverse of a nonzero residue modulo the prime `p`.
pub fn inv_mod(a: u64, p: u64) -> u64 {
    assert!(!a.is_multiple_of(p), "inverse of zero modulo {p}");
    pow_mod(a, p - 2, p)
}

/// Reduces a signed integer into `[0, p)`.
pub fn reduce_i64(x: i64, p: u64) -> u64 {
    x.rem_euclid(p as i64) as u64
}

/// An element of `F_p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FieldElem {
    value: u64,
    p: u64,
}

impl FieldElem {
    /// Builds `value mod p`, checking that `p` is prime.
    pub fn new(value: i64, p: u64) -> Result<Self, LinalgError> {
        check_prime(p)?;
        Ok(Self { value: reduce_i64(value, p), p })
    }

    pub fn value(self) -> u64 {
        self.value
    }

    pub fn modulus(self) -> u64 {
        self.p
    }

    pub fn is_zero(self) -> bool {
        self.value == 0
    }

    /// Multiplicative inverse, `None` for zero.
    pub fn inv(self) -> Option<Self> {
        (self.value != 0).then(|| Self { value: inv_mod(self.value, self.p), p: self.p })
    }

    fn same_field(self, other: Self) {
        assert_eq!(self.p, other.p, "modulus mismatch between field elements");
    }
}

impl Add for FieldElem {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        self.same_field(o);
        Self { value: (self.value + o.value) % self.p, p: self.p }
    }
}

impl Sub for FieldElem {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        self.same_field(o);
        Self { value: (self.value + self.p - o.value) % self.p, p: self.p }
    }
}

impl Mul for FieldElem {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        self.same_field(o);
        Self { value: self.value * o.value % self.p, p: self.p }
    }
}

impl Neg for FieldElem {
    type Output = Self;
    fn neg(self) -> Self {
        Self { value: (self.p - self.value) % self.p, p: self.p }
    }
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

/// A dense matrix over `F_p`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Mat {
    p: u64,
    rows: usize,
    cols: usize,
    data: Vec<u64>,
}

/// Result of [`Mat::rref`]: `t * m = r` with `t` invertible.
#[derive(Clone, Debug)]
pub struct Rref {
    pub r: Mat,
    pub t: Mat,
    pub rank: usize,
    pub pivots: Vec<usize>,
}

impl fmt::Debug for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Mat {}x{} over F_{}", self.rows, self.cols, self.p)?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|v| v.to_string()).collect();
            writeln!(f, "  [{}]", row.join(" "))?;
        }
        Ok(())
    }
}

impl Mat {
    /// The zero matrix.
    pub fn zeros(p: u64, rows: usize, cols: usize) -> Self {
        Self { p, rows, cols, data: vec![0; rows * cols] }
    }

    /// The identity matrix.
    pub fn identity(p: u64, n: usize) -> Self {
        let mut m = Self::zeros(p, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1 % p;
        }
        m
    }

    /// Builds a matrix from row-major data, reducing entries mod `p`.
    pub fn from_vec(p: u64, rows: usize, cols: usize, data: Vec<u64>) -> Self {
        assert_eq!(data.len(), rows * cols, "entry count does not match shape");
        let data = data.into_iter().map(|v| v % p).collect();
        Self { p, rows, cols, data }
    }

    /// Builds a matrix from signed row-major data.
    pub fn from_i64(p: u64, rows: usize, cols: usize, data: &[i64]) -> Self {
        assert_eq!(data.len(), rows * cols, "entry count does not match shape");
        Self { p, rows, cols, data: data.iter().map(|&v| reduce_i64(v, p)).collect() }
    }

    /// Builds a matrix from a list of rows.
    pub fn from_rows(p: u64, rows: &[Vec<i64>]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged rows");
            data.extend(r.iter().map(|&v| reduce_i64(v, p)));
        }
        Self { p, rows: rows.len(), cols, data }
    }

    /// Builds a matrix whose columns are the given vectors.
    pub fn from_cols(p: u64, rows: usize, cols: &[Vec<u64>]) -> Self {
        let mut m = Self::zeros(p, rows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            assert_eq!(c.len(), rows, "column length mismatch");
            for (i, &v) in c.iter().enumerate() {
                m.data[i * m.cols + j] = v % p;
            }
        }
        m
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Row-major entries.
    pub fn data(&self) -> &[u64] {
        &self.data
    }

    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.data[i * self.cols + j]
    }

    /// Returns a copy with entry `(i, j)` replaced.
    pub fn with(&self, i: usize, j: usize, v: u64) -> Self {
        let mut m = self.clone();
        m.set(i, j, v);
        m
    }

    pub(crate) fn set(&mut self, i: usize, j: usize, v: u64) {
        self.data[i * self.cols + j] = v % self.p;
    }

    pub fn row(&self, i: usize) -> &[u64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<u64> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    /// All columns as vectors.
    pub fn columns(&self) -> Vec<Vec<u64>> {
        (0..self.cols).map(|j| self.col(j)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    fn check_same_field(&self, other: &Mat) {
        assert_eq!(self.p, other.p, "modulus mismatch: {} vs {}", self.p, other.p);
    }

    /// Matrix product, panicking on shape or modulus mismatch.
    pub fn mul(&self, other: &Mat) -> Mat {
        self.check_same_field(other);
        assert_eq!(self.cols, other.rows, "dimension mismatch in product: {}x{} * {}x{}", self.rows, self.cols, other.rows, other.cols);
        let p = self.p;
        let mut out = vec![0u64; self.rows * other.cols];
        // Accumulate without reduction while the sum stays below 2^63.
        let bound = (u64::MAX >> 1) / ((p - 1).max(1) * (p - 1).max(1));
        for i in 0..self.rows {
            let orow = &mut out[i * other.cols..(i + 1) * other.cols];
            let mut pending = 0u64;
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a == 0 {
                    continue;
                }
                let brow = &other.data[k * other.cols..(k + 1) * other.cols];
                for (o, &b) in orow.iter_mut().zip(brow) {
                    *o += a * b;
                }
                pending += 1;
                if pending >= bound {
                    for o in orow.iter_mut() {
                        *o %= p;
                    }
                    pending = 0;
                }
            }
            for o in orow.iter_mut() {
                *o %= p;
            }
        }
        Mat { p, rows: self.rows, cols: other.cols, data: out }
    }

    /// Checked matrix product.
    pub fn try_mul(&self, other: &Mat) -> Result<Mat, LinalgError> {
        if self.p != other.p {
            return Err(LinalgError::ModulusMismatch(self.p, other.p));
        }
        if self.cols != other.rows {
            return Err(LinalgError::DimensionMismatch(format!("{}x{} * {}x{}", self.rows, self.cols, other.rows, other.cols)));
        }
        Ok(self.mul(other))
    }

    /// Matrix times column vector.
    pub fn mul_vec(&self, v: &[u64]) -> Vec<u64> {
        assert_eq!(self.cols, v.len(), "dimension mismatch in matrix-vector product");
        (0..self.rows)
            .map(|i| {
                let mut s = 0u64;
                for (a, b) in self.row(i).iter().zip(v) {
                    s = (s + a * b) % self.p;
                }
                s
            })
            .collect()
    }

    pub fn add(&self, other: &Mat) -> Mat {
        self.check_same_field(other);
        assert!(self.rows == other.rows && self.cols == other.cols, "dimension mismatch in sum");
        let p = self.p;
        let data = self.data.iter().zip(&other.data).map(|(a, b)| (a + b) % p).collect();
        Mat { p, rows: self.rows, cols: self.cols, data }
    }

    pub fn sub(&self, other: &Mat) -> Mat {
        self.check_same_field(other);
        assert!(self.rows == other.rows && self.cols == other.cols, "dimension mismatch in difference");
        let p = self.p;
        let data = self.data.iter().zip(&other.data).map(|(a, b)| (a + p - b) % p).collect();
        Mat { p, rows: self.rows, cols: self.cols, data }
    }

    pub fn scale(&self, c: u64) -> Mat {
        let p = self.p;
        let c = c % p;
        Mat { p, rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| a * c % p).collect() }
    }

    pub fn neg(&self) -> Mat {
        self.scale(self.p - 1)
    }

    pub fn transpose(&self) -> Mat {
        let mut m = Mat::zeros(self.p, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.data[j * self.rows + i] = self.data[i * self.cols + j];
            }
        }
        m
    }

    /// `self^e` for a square matrix.
    pub fn pow(&self, mut e: u64) -> Mat {
        assert!(self.is_square(), "power of a non-square matrix");
        let mut result = Mat::identity(self.p, self.rows);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        result
    }

    /// Horizontal concatenation `[self | other]`.
    pub fn hstack(&self, other: &Mat) -> Mat {
        self.check_same_field(other);
        assert_eq!(self.rows, other.rows, "row count mismatch in hstack");
        let mut m = Mat::zeros(self.p, self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            m.data[i * m.cols..i * m.cols + self.cols].copy_from_slice(self.row(i));
            m.data[i * m.cols + self.cols..(i + 1) * m.cols].copy_from_slice(other.row(i));
        }
        m
    }

    /// Vertical concatenation.
    pub fn vstack(&self, other: &Mat) -> Mat {
        self.check_same_field(other);
        assert_eq!(self.cols, other.cols, "column count mismatch in vstack");
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Mat { p: self.p, rows: self.rows + other.rows, cols: self.cols, data }
    }

    /// Block diagonal matrix `diag(self, other)`.
    pub fn block_diag(&self, other: &Mat) -> Mat {
        self.check_same_field(other);
        let mut m = Mat::zeros(self.p, self.rows + other.rows, self.cols + other.cols);
        m.paste(0, 0, self);
        m.paste(self.rows, self.cols, other);
        m
    }

    pub(crate) fn paste(&mut self, r0: usize, c0: usize, block: &Mat) {
        for i in 0..block.rows {
            let dst = (r0 + i) * self.cols + c0;
            self.data[dst..dst + block.cols].copy_from_slice(block.row(i));
        }
    }

    /// Returns a copy with `block` written at offset `(r0, c0)`.
    pub fn with_block(&self, r0: usize, c0: usize, block: &Mat) -> Mat {
        assert!(r0 + block.rows <= self.rows && c0 + block.cols <= self.cols, "block out of range");
        let mut m = self.clone();
        m.paste(r0, c0, block);
        m
    }

    /// Submatrix with the given row and column ranges.
    pub fn block(&self, r0: usize, rows: usize, c0: usize, cols: usize) -> Mat {
        let mut m = Mat::zeros(self.p, rows, cols);
        for i in 0..rows {
            let src = (r0 + i) * self.cols + c0;
            m.data[i * cols..(i + 1) * cols].copy_from_slice(&self.data[src..src + cols]);
        }
        m
    }

    /// Selects columns by index.
    pub fn select_cols(&self, idx: &[usize]) -> Mat {
        let mut m = Mat::zeros(self.p, self.rows, idx.len());
        for i in 0..self.rows {
            for (k, &j) in idx.iter().enumerate() {
                m.data[i * idx.len() + k] = self.get(i, j);
            }
        }
        m
    }

    /// Selects rows by index.
    pub fn select_rows(&self, idx: &[usize]) -> Mat {
        let mut data = Vec::with_capacity(idx.len() * self.cols);
        for &i in idx {
            data.extend_from_slice(self.row(i));
        }
        Mat { p: self.p, rows: idx.len(), cols: self.cols, data }
    }

    /// Column-major flattening, the `vec` operator.
    pub fn vec_cols(&self) -> Vec<u64> {
        let mut v = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                v.push(self.get(i, j));
            }
        }
        v
    }

    /// Reduced row-echelon form with transformation matrix.
    pub fn rref(&self) -> Rref {
        let p = self.p;
        let (rows, cols) = (self.rows, self.cols);
        let mut r = self.data.clone();
        let mut t = Mat::identity(p, rows).data;
        let mut pivots = Vec::new();
        let mut prow = 0;
        for c in 0..cols {
            if prow == rows {
                break;
            }
            let Some(piv) = (prow..rows).find(|&i| r[i * cols + c] != 0) else {
                continue;
            };
            if piv != prow {
                for k in 0..cols {
                    r.swap(piv * cols + k, prow * cols + k);
                }
                for k in 0..rows {
                    t.swap(piv * rows + k, prow * rows + k);
                }
            }
            let inv = inv_mod(r[prow * cols + c], p);
            for k in 0..cols {
                r[prow * cols + k] = r[prow * cols + k] * inv % p;
            }
            for k in 0..rows {
                t[prow * rows + k] = t[prow * rows + k] * inv % p;
            }
            for i in 0..rows {
                if i == prow {
                    continue;
                }
                let f = r[i * cols + c];
                if f == 0 {
                    continue;
                }
                let nf = p - f;
                for k in c..cols {
                    let v = r[prow * cols + k];
                    if v != 0 {
                        r[i * cols + k] = (r[i * cols + k] + nf * v) % p;
                    }
                }
                for k in 0..rows {
                    let v = t[prow * rows + k];
                    if v != 0 {
                        t[i * rows + k] = (t[i * rows + k] + nf * v) % p;
                    }
                }
            }
            pivots.push(c);
            prow += 1;
        }
        Rref { r: Mat { p, rows, cols, data: r }, t: Mat { p, rows, cols: rows, data: t }, rank: pivots.len(), pivots }
    }

    /// Reduced row-echelon form without the transformation matrix.
    pub fn echelon(&self) -> (Mat, Vec<usize>) {
        let mut e = Echelon::new(self.p, self.cols);
        for i in 0..self.rows {
            e.insert(self.row(i).to_vec());
        }
        let (m, piv) = e.to_rref();
        (m, piv)
    }

    pub fn rank(&self) -> usize {
        let mut e = Echelon::new(self.p, self.cols);
        for i in 0..self.rows {
            e.insert(self.row(i).to_vec());
        }
        e.rank()
    }

    /// Basis of the kernel, as columns.
    pub fn nullspace(&self) -> Mat {
        let (r, pivots) = self.echelon();
        let p = self.p;
        let mut is_pivot = vec![false; self.cols];
        for &c in &pivots {
            is_pivot[c] = true;
        }
        let free: Vec<usize> = (0..self.cols).filter(|&c| !is_pivot[c]).collect();
        let mut n = Mat::zeros(p, self.cols, free.len());
        for (k, &f) in free.iter().enumerate() {
            n.data[f * free.len() + k] = 1;
            for (i, &pc) in pivots.iter().enumerate() {
                let v = r.get(i, f);
                if v != 0 {
                    n.data[pc * free.len() + k] = (p - v) % p;
                }
            }
        }
        n
    }

    /// Solves `self * X = b`; returns `Ok(None)` when inconsistent.
    ///
    /// The particular solution sets all free variables to zero.
    pub fn solve(&self, b: &Mat) -> Result<Option<Mat>, LinalgError> {
        if self.p != b.p {
            return Err(LinalgError::ModulusMismatch(self.p, b.p));
        }
        if self.rows != b.rows {
            return Err(LinalgError::DimensionMismatch(format!("system has {} rows but right-hand side has {}", self.rows, b.rows)));
        }
        let aug = self.hstack(b);
        let (r, pivots) = aug.echelon();
        let mut x = Mat::zeros(self.p, self.cols, b.cols);
        for (i, &pc) in pivots.iter().enumerate() {
            if pc >= self.cols {
                return Ok(None);
            }
            for j in 0..b.cols {
                x.data[pc * b.cols + j] = r.get(i, self.cols + j);
            }
        }
        Ok(Some(x))
    }

    /// Inverse of a square matrix, `None` if singular.
    pub fn inverse(&self) -> Option<Mat> {
        assert!(self.is_square(), "inverse of a non-square matrix");
        let rr = self.rref();
        (rr.rank == self.rows).then_some(rr.t)
    }

    pub fn is_invertible(&self) -> bool {
        self.is_square() && self.rank() == self.rows
    }

    /// Basis (as columns) of the column space, chosen from the columns themselves.
    pub fn column_space(&self) -> Mat {
        let mut e = Echelon::new(self.p, self.rows);
        let mut keep = Vec::new();
        for j in 0..self.cols {
            if e.insert(self.col(j)) {
                keep.push(j);
            }
        }
        self.select_cols(&keep)
    }

    /// Bases of `U + W` and `U ∩ W` for column spans `U = span(self)`, `W = span(w)`.
    pub fn sum_and_intersect(&self, w: &Mat) -> Result<(Mat, Mat), LinalgError> {
        if self.p != w.p {
            return Err(LinalgError::ModulusMismatch(self.p, w.p));
        }
        if self.rows != w.rows {
            return Err(LinalgError::DimensionMismatch(format!("ambient dimensions {} and {}", self.rows, w.rows)));
        }
        let u = self.column_space();
        let wb = w.column_space();
        let sum = u.hstack(&wb).column_space();
        // Kernel of [U | -W] gives pairs (a, b) with U a = W b.
        let k = u.hstack(&wb.neg()).nullspace();
        let a = k.block(0, u.cols, 0, k.cols);
        let inter = u.mul(&a).column_space();
        Ok((sum, inter))
    }
}

/// An incrementally built reduced row-echelon basis of a subspace of `F_p^n`.
#[derive(Clone, Debug)]
pub struct Echelon {
    p: u64,
    n: usize,
    rows: Vec<Vec<u64>>,
    pivots: Vec<usize>,
}

impl Echelon {
    pub fn new(p: u64, n: usize) -> Self {
        Self { p, n, rows: Vec::new(), pivots: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn ambient(&self) -> usize {
        self.n
    }

    /// Reduces `v` against the stored rows, returning the remainder.
    pub fn reduce(&self, mut v: Vec<u64>) -> Vec<u64> {
        let p = self.p;
        for (row, &pc) in self.rows.iter().zip(&self.pivots) {
            let f = v[pc];
            if f != 0 {
                let nf = p - f;
                for k in pc..self.n {
                    if row[k] != 0 {
                        v[k] = (v[k] + nf * row[k]) % p;
                    }
                }
            }
        }
        v
    }

    pub fn contains(&self, v: &[u64]) -> bool {
        self.reduce(v.to_vec()).iter().all(|&x| x == 0)
    }

    /// Inserts `v`; returns whether it enlarged the span.
    pub fn insert(&mut self, v: Vec<u64>) -> bool {
        assert_eq!(v.len(), self.n, "vector length mismatch");
        let p = self.p;
        let mut v: Vec<u64> = v.into_iter().map(|x| x % p).collect();
        v = self.reduce(v);
        let Some(pc) = v.iter().position(|&x| x != 0) else {
            return false;
        };
        let inv = inv_mod(v[pc], p);
        for x in v.iter_mut() {
            *x = *x * inv % p;
        }
        // Clear the new pivot column from existing rows.
        for row in self.rows.iter_mut() {
            let f = row[pc];
            if f != 0 {
                let nf = p - f;
                for k in pc..self.n {
                    if v[k] != 0 {
                        row[k] = (row[k] + nf * v[k]) % p;
                    }
                }
            }
        }
        let pos = self.pivots.partition_point(|&c| c < pc);
        self.pivots.insert(pos, pc);
        self.rows.insert(pos, v);
        true
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn basis_rows(&self) -> &[Vec<u64>] {
        &self.rows
    }

    /// The reduced row-echelon matrix of the span and its pivot columns.
    pub fn to_rref(&self) -> (Mat, Vec<usize>) {
        let mut m = Mat::zeros(self.p, self.rows.len(), self.n);
        for (i, r) in self.rows.iter().enumerate() {
            m.data[i * self.n..(i + 1) * self.n].copy_from_slice(r);
        }
        (m, self.pivots.clone())
    }

    /// The basis as matrix columns.
    pub fn to_cols(&self) -> Mat {
        Mat::from_cols(self.p, self.n, &self.rows)
    }
}

/// Coordinates with respect to a fixed set of independent vectors.
///
/// Stores the pivot positions of the basis and the inverse of the basis
/// restricted to those positions, so coordinates of a vector known to lie in
/// the span cost one small matrix-vector product.
#[derive(Clone, Debug)]
pub struct Coords {
    p: u64,
    positions: Vec<usize>,
    inv: Mat,
    basis: Mat,
}

impl Coords {
    /// `basis` holds independent column vectors.
    pub fn new(basis: &Mat) -> Self {
        let p = basis.modulus();
        let (_, pivots) = basis.transpose().echelon();
        assert_eq!(pivots.len(), basis.cols(), "coordinate basis is not independent");
        let restricted = basis.select_rows(&pivots);
        let inv = restricted.inverse().expect("restricted basis is invertible");
        Self { p, positions: pivots, inv, basis: basis.clone() }
    }

    pub fn dim(&self) -> usize {
        self.positions.len()
    }

    /// Entries of the ambient vector that determine a span element.
    pub fn positions(&self) -> &[usize] {
        &self.positions
    }

    /// Coordinates of the span element whose entries at [`Coords::positions`] are `r`.
    pub fn coords_from_positions(&self, r: &[u64]) -> Vec<u64> {
        self.inv.mul_vec(r)
    }

    /// Coordinates of `v`, assuming it lies in the span.
    pub fn coords_unchecked(&self, v: &[u64]) -> Vec<u64> {
        let r: Vec<u64> = self.positions.iter().map(|&i| v[i] % self.p).collect();
        self.inv.mul_vec(&r)
    }

    /// Coordinates of `v`, or `None` if `v` is outside the span.
    pub fn coords(&self, v: &[u64]) -> Option<Vec<u64>> {
        let c = self.coords_unchecked(v);
        let back = self.basis.mul_vec(&c);
        (back.iter().zip(v).all(|(a, b)| *a == b % self.p)).then_some(c)
    }
}

impl Add for &Mat {
    type Output = Mat;
    fn add(self, o: &Mat) -> Mat {
        Mat::add(self, o)
    }
}

impl Sub for &Mat {
    type Output = Mat;
    fn sub(self, o: &Mat) -> Mat {
        Mat::sub(self, o)
    }
}

impl Mul for &Mat {
    type Output = Mat;
    fn mul(self, o: &Mat) -> Mat {
        Mat::mul(self, o)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_xoshiro::SplitMix64;

    fn random_mat(rng: &mut SplitMix64, p: u64, r: usize, c: usize) -> Mat {
        Mat::from_vec(p, r, c, (0..r * c).map(|_| rng.gen_range(0..p)).collect())
    }

    /// Plain Gaussian elimination on `i64` rows, written independently.
    fn oracle_rank(m: &Mat) -> usize {
        let p = m.modulus() as i64;
        let mut a: Vec<Vec<i64>> = (0..m.rows()).map(|i| m.row(i).iter().map(|&v| v as i64).collect()).collect();
        let mut rank = 0;
        for c in 0..m.cols() {
            let Some(r) = (rank..a.len()).find(|&r| a[r][c] != 0) else { continue };
            a.swap(rank, r);
            let inv = (1..p).find(|x| x * a[rank][c] % p == 1).unwrap();
            for r in 0..a.len() {
                if r != rank && a[r][c] != 0 {
                    let f = a[r][c] * inv % p;
                    for k in 0..m.cols() {
                        a[r][k] = (a[r][k] - f * a[rank][k]).rem_euclid(p);
                    }
                }
            }
            rank += 1;
        }
        rank
    }

    fn is_rref(r: &Mat, pivots: &[usize]) -> bool {
        for (i, &pc) in pivots.iter().enumerate() {
            if r.get(i, pc) != 1 || (0..pc).any(|k| r.get(i, k) != 0) {
                return false;
            }
            if (0..r.rows()).any(|k| k != i && r.get(k, pc) != 0) {
                return false;
            }
        }
        (pivots.len()..r.rows()).all(|i| r.row(i).iter().all(|&v| v == 0)) && pivots.windows(2).all(|w| w[0] < w[1])
    }

    #[test]
    fn identity_rref() {
        let rr = Mat::identity(2, 3).rref();
        assert_eq!(rr.rank, 3);
        assert_eq!(rr.r, Mat::identity(2, 3));
    }

    #[test]
    fn zero_rref() {
        let rr = Mat::zeros(5, 2, 4).rref();
        assert_eq!(rr.rank, 0);
        assert!(rr.r.is_zero());
    }

    #[test]
    fn rank_matches_independent_oracle() {
        let mut rng = SplitMix64::seed_from_u64(11);
        for _ in 0..200 {
            let m = random_mat(&mut rng, 3, 6, 6);
            // Lower the rank now and then.
            let m = if rng.gen_bool(0.5) { m.mul(&random_mat(&mut rng, 3, 6, 3)).mul(&random_mat(&mut rng, 3, 3, 6)) } else { m };
            let rr = m.rref();
            assert_eq!(rr.rank, oracle_rank(&m));
            assert_eq!(rr.t.mul(&m), rr.r);
            assert!(rr.t.is_invertible());
            assert!(is_rref(&rr.r, &rr.pivots));
            assert_eq!(m.rank(), m.transpose().rank());
            assert_eq!(rr.r.rref().r, rr.r);
        }
    }

    #[test]
    fn nullspace_properties() {
        assert_eq!(Mat::identity(7, 4).nullspace().cols(), 0);
        let mut j = Mat::zeros(3, 5, 5);
        for i in 0..4 {
            j.set(i + 1, i, 1);
        }
        assert_eq!(j.nullspace().cols(), 1);
        let mut rng = SplitMix64::seed_from_u64(5);
        for _ in 0..100 {
            let m = random_mat(&mut rng, 5, 5, 7);
            let n = m.nullspace();
            assert!(m.mul(&n).is_zero());
            assert_eq!(m.rank() + n.cols(), 7);
            assert_eq!(n.rank(), n.cols());
        }
    }

    #[test]
    fn solve_cases() {
        let mut rng = SplitMix64::seed_from_u64(9);
        let b = random_mat(&mut rng, 3, 4, 2);
        assert_eq!(Mat::identity(3, 4).solve(&b).unwrap().unwrap(), b);
        let nz = Mat::identity(3, 4).select_cols(&[0, 1]);
        assert!(Mat::zeros(3, 4, 4).solve(&nz).unwrap().is_none());
        for _ in 0..50 {
            let a = random_mat(&mut rng, 3, 5, 4);
            let x0 = random_mat(&mut rng, 3, 4, 2);
            let b = a.mul(&x0);
            let x = a.solve(&b).unwrap().unwrap();
            assert!(a.mul(&x).sub(&b).is_zero());
        }
        assert!(Mat::identity(3, 2).solve(&Mat::zeros(3, 3, 1)).is_err());
        assert!(Mat::identity(3, 2).solve(&Mat::zeros(5, 2, 1)).is_err());
    }

    #[test]
    fn sum_and_intersection() {
        let u = Mat::identity(2, 4).select_cols(&[0, 1]);
        let w = Mat::identity(2, 4).select_cols(&[2, 3]);
        let (s, i) = u.sum_and_intersect(&w).unwrap();
        assert_eq!((s.cols(), i.cols()), (4, 0));
        let (s, i) = u.sum_and_intersect(&u).unwrap();
        assert_eq!((s.cols(), i.cols()), (2, 2));
        let mut rng = SplitMix64::seed_from_u64(3);
        for _ in 0..100 {
            let (ka, kb) = (rng.gen_range(0..5), rng.gen_range(0..5));
            let a = random_mat(&mut rng, 5, 6, ka);
            let b = random_mat(&mut rng, 5, 6, kb);
            let (s, i) = a.sum_and_intersect(&b).unwrap();
            assert_eq!(s.cols() + i.cols(), a.rank() + b.rank());
            for c in i.columns() {
                let ci = Mat::from_cols(5, 6, &[c]);
                assert_eq!(a.hstack(&ci).rank(), a.rank());
                assert_eq!(b.hstack(&ci).rank(), b.rank());
            }
        }
    }

    #[test]
    fn determinism_and_checks() {
        let mut rng = SplitMix64::seed_from_u64(1);
        let m = random_mat(&mut rng, 7, 5, 5);
        assert_eq!(m.rref().r, m.rref().r);
        assert!(check_prime(4).is_err());
        assert!(check_prime(2147483647).is_ok());
        assert!(Mat::identity(2, 2).try_mul(&Mat::identity(3, 2)).is_err());
        let a = FieldElem::new(-1, 5).unwrap();
        assert_eq!((a * a).value(), 1);
        assert_eq!(a.inv().unwrap().value(), 4);
    }

    #[test]
    fn coords_roundtrip() {
        let mut rng = SplitMix64::seed_from_u64(2);
        let b = random_mat(&mut rng, 7, 8, 3).column_space();
        let c = Coords::new(&b);
        let x = [3, 0, 5];
        let v = b.select_cols(&(0..b.cols()).collect::<Vec<_>>()).mul_vec(&x[..b.cols()]);
        assert_eq!(c.coords(&v).unwrap(), x[..b.cols()].to_vec());
    }
}
