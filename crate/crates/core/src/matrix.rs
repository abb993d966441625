//! Dense exact matrices and the elimination toolkit built on them.
//!
//! Indices are 0-based throughout the API. Jordan blocks follow the
//! subdiagonal convention: `J_k(0) e_i = e_{i+1}`.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::field::{FieldScalar, FieldSpec};

/// A column vector over a field.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ColumnVector {
    field: FieldSpec,
    entries: Vec<FieldScalar>,
}

impl ColumnVector {
    pub fn zeros(field: FieldSpec, dim: usize) -> Self {
        Self {
            field,
            entries: vec![field.zero(); dim],
        }
    }

    /// `e_i` (0-based).
    pub fn standard(field: FieldSpec, dim: usize, i: usize) -> Self {
        let mut v = Self::zeros(field, dim);
        v.entries[i] = field.one();
        v
    }

    pub fn from_entries(field: FieldSpec, entries: Vec<FieldScalar>) -> Result<Self> {
        if let Some(bad) = entries.iter().find(|e| e.field() != field) {
            return Err(Error::FieldMismatch(field, bad.field()));
        }
        Ok(Self { field, entries })
    }

    pub fn from_i64(field: FieldSpec, values: &[i64]) -> Self {
        Self {
            field,
            entries: values.iter().map(|&v| field.from_i64(v)).collect(),
        }
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[FieldScalar] {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(FieldScalar::is_zero)
    }

    pub fn scale(&self, s: &FieldScalar) -> Self {
        Self {
            field: self.field,
            entries: self.entries.iter().map(|e| e * s).collect(),
        }
    }

    pub fn to_matrix(&self) -> ExactMatrix {
        ExactMatrix {
            field: self.field,
            rows: self.dim(),
            cols: 1,
            data: self.entries.clone(),
        }
    }
}

impl Index<usize> for ColumnVector {
    type Output = FieldScalar;
    fn index(&self, i: usize) -> &FieldScalar {
        &self.entries[i]
    }
}

impl Add for &ColumnVector {
    type Output = ColumnVector;
    fn add(self, rhs: &ColumnVector) -> ColumnVector {
        assert_eq!(self.dim(), rhs.dim(), "vector dimensions differ");
        ColumnVector {
            field: self.field,
            entries: self
                .entries
                .iter()
                .zip(&rhs.entries)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Sub for &ColumnVector {
    type Output = ColumnVector;
    fn sub(self, rhs: &ColumnVector) -> ColumnVector {
        assert_eq!(self.dim(), rhs.dim(), "vector dimensions differ");
        ColumnVector {
            field: self.field,
            entries: self
                .entries
                .iter()
                .zip(&rhs.entries)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

/// Dense row-major matrix with exact entries.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ExactMatrix {
    field: FieldSpec,
    rows: usize,
    cols: usize,
    data: Vec<FieldScalar>,
}

/// Reduced row echelon form plus its pivot columns.
#[derive(Debug, Clone)]
pub struct Echelon {
    pub reduced: ExactMatrix,
    pub pivots: Vec<usize>,
}

impl ExactMatrix {
    pub fn zeros(field: FieldSpec, rows: usize, cols: usize) -> Self {
        Self {
            field,
            rows,
            cols,
            data: vec![field.zero(); rows * cols],
        }
    }

    pub fn identity(field: FieldSpec, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m[(i, i)] = field.one();
        }
        m
    }

    pub fn scalar(field: FieldSpec, n: usize, s: &FieldScalar) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m[(i, i)] = s.clone();
        }
        m
    }

    pub fn from_entries(
        field: FieldSpec,
        rows: usize,
        cols: usize,
        data: Vec<FieldScalar>,
    ) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                op: "from_entries",
                left: (rows, cols),
                right: (data.len(), 1),
            });
        }
        if let Some(bad) = data.iter().find(|e| e.field() != field) {
            return Err(Error::FieldMismatch(field, bad.field()));
        }
        Ok(Self {
            field,
            rows,
            cols,
            data,
        })
    }

    /// Builds a matrix from integer rows; all rows must have equal length.
    pub fn from_i64_rows(field: FieldSpec, rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        let data = rows
            .iter()
            .flat_map(|row| row.iter().map(|&v| field.from_i64(v)))
            .collect();
        Self {
            field,
            rows: r,
            cols: c,
            data,
        }
    }

    /// `E_(i,j)`: a single one at `(i, j)` (0-based).
    pub fn unit(field: FieldSpec, rows: usize, cols: usize, i: usize, j: usize) -> Self {
        let mut m = Self::zeros(field, rows, cols);
        m[(i, j)] = field.one();
        m
    }

    /// `J_k(0)` with ones on the subdiagonal.
    pub fn jordan_block(field: FieldSpec, k: usize) -> Self {
        let mut m = Self::zeros(field, k, k);
        for i in 1..k {
            m[(i, i - 1)] = field.one();
        }
        m
    }

    /// `Dg[J_{s_1}(0), J_{s_2}(0), ...]` in the given order.
    pub fn jordan_matrix(field: FieldSpec, sizes: &[usize]) -> Self {
        let blocks: Vec<_> = sizes
            .iter()
            .map(|&k| Self::jordan_block(field, k))
            .collect();
        Self::block_diag(field, &blocks)
    }

    /// The permutation matrix `[e_{c_0}, e_{c_1}, ...]` (0-based column targets).
    pub fn permutation(field: FieldSpec, columns: &[usize]) -> Self {
        let n = columns.len();
        let mut m = Self::zeros(field, n, n);
        for (j, &i) in columns.iter().enumerate() {
            m[(i, j)] = field.one();
        }
        m
    }

    pub fn from_columns(field: FieldSpec, rows: usize, columns: &[ColumnVector]) -> Result<Self> {
        let mut m = Self::zeros(field, rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            if c.dim() != rows {
                return Err(Error::DimensionMismatch {
                    op: "from_columns",
                    left: (rows, columns.len()),
                    right: (c.dim(), 1),
                });
            }
            if c.field() != field {
                return Err(Error::FieldMismatch(field, c.field()));
            }
            for i in 0..rows {
                m[(i, j)] = c[i].clone();
            }
        }
        Ok(m)
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[FieldScalar] {
        &self.data
    }

    pub fn column(&self, j: usize) -> ColumnVector {
        ColumnVector {
            field: self.field,
            entries: (0..self.rows).map(|i| self[(i, j)].clone()).collect(),
        }
    }

    pub fn row(&self, i: usize) -> Vec<FieldScalar> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(FieldScalar::is_zero)
    }

    pub fn row_is_zero(&self, i: usize) -> bool {
        (0..self.cols).all(|j| self[(i, j)].is_zero())
    }

    pub fn column_is_zero(&self, j: usize) -> bool {
        (0..self.rows).all(|i| self[(i, j)].is_zero())
    }

    fn require_square(&self) -> Result<usize> {
        if !self.is_square() {
            return Err(Error::NotSquare(self.rows, self.cols));
        }
        Ok(self.rows)
    }

    fn require_same_field(&self, other: &Self) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch(self.field, other.field));
        }
        Ok(())
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.require_same_field(other)?;
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                op: "mul",
                left: self.shape(),
                right: other.shape(),
            });
        }
        if self.field == FieldSpec::Rationals {
            return Ok(self.mul_rational(other));
        }
        let mut out = Self::zeros(self.field, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if b.is_zero() {
                        continue;
                    }
                    let idx = i * out.cols + j;
                    out.data[idx] = &out.data[idx] + &(a * b);
                }
            }
        }
        Ok(out)
    }

    /// Rational product with one reduction per entry: rows of `self` and
    /// columns of `other` are brought to integer numerators over a common
    /// denominator first.
    fn mul_rational(&self, other: &Self) -> Self {
        fn parts(x: &FieldScalar) -> (&BigInt, &BigInt) {
            match x {
                FieldScalar::Rational(q) => (q.numer(), q.denom()),
                FieldScalar::Residue { .. } => unreachable!("rational matrix"),
            }
        }
        let common = |entries: &mut dyn Iterator<Item = &FieldScalar>| {
            entries.fold(BigInt::one(), |acc, x| acc.lcm(parts(x).1))
        };
        let scaled = |x: &FieldScalar, den: &BigInt| {
            let (p, q) = parts(x);
            p * (den / q)
        };
        let (m, inner, c) = (self.rows, self.cols, other.cols);
        let row_den: Vec<BigInt> = (0..m)
            .map(|i| common(&mut (0..inner).map(|t| &self[(i, t)])))
            .collect();
        let col_den: Vec<BigInt> = (0..c)
            .map(|j| common(&mut (0..inner).map(|t| &other[(t, j)])))
            .collect();
        let a: Vec<BigInt> = (0..m * inner)
            .map(|idx| scaled(&self.data[idx], &row_den[idx / inner]))
            .collect();
        let b: Vec<BigInt> = (0..inner * c)
            .map(|idx| scaled(&other.data[idx], &col_den[idx % c]))
            .collect();
        let mut data = Vec::with_capacity(m * c);
        for i in 0..m {
            for j in 0..c {
                let mut acc = BigInt::zero();
                for t in 0..inner {
                    let x = &a[i * inner + t];
                    if !x.is_zero() {
                        acc += x * &b[t * c + j];
                    }
                }
                let den = &row_den[i] * &col_den[j];
                data.push(FieldScalar::Rational(BigRational::new(acc, den)));
            }
        }
        Self {
            field: self.field,
            rows: m,
            cols: c,
            data,
        }
    }

    pub fn mul_vec(&self, v: &ColumnVector) -> Result<ColumnVector> {
        let m = self.try_mul(&v.to_matrix())?;
        Ok(m.column(0))
    }

    fn zip_with(
        &self,
        other: &Self,
        op: &'static str,
        f: impl Fn(&FieldScalar, &FieldScalar) -> FieldScalar,
    ) -> Result<Self> {
        self.require_same_field(other)?;
        if self.shape() != other.shape() {
            return Err(Error::DimensionMismatch {
                op,
                left: self.shape(),
                right: other.shape(),
            });
        }
        Ok(Self {
            field: self.field,
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| f(a, b)).collect(),
        })
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, "add", |a, b| a + b)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, "sub", |a, b| a - b)
    }

    pub fn scale(&self, s: &FieldScalar) -> Self {
        Self {
            field: self.field,
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|e| e * s).collect(),
        }
    }

    /// `A^e` by repeated squaring.
    pub fn pow(&self, mut e: u64) -> Result<Self> {
        let n = self.require_square()?;
        let mut result = Self::identity(self.field, n);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        Ok(result)
    }

    /// True iff `A^n = 0`. Squares until the exponent reaches `n`.
    pub fn is_nilpotent(&self) -> Result<bool> {
        let n = self.require_square()?;
        if n == 0 {
            return Ok(true);
        }
        let mut p = self.clone();
        let mut e = 1usize;
        while e < n && !p.is_zero() {
            p = &p * &p;
            e *= 2;
        }
        Ok(p.is_zero())
    }

    /// Smallest `m` with `A^m = 0`, or `None` when `A` is not nilpotent.
    pub fn nilpotency_index(&self) -> Result<Option<usize>> {
        let n = self.require_square()?;
        let mut p = Self::identity(self.field, n);
        for m in 0..=n {
            if p.is_zero() {
                return Ok(Some(m));
            }
            p = &p * self;
        }
        Ok(None)
    }

    pub fn is_square_zero(&self) -> Result<bool> {
        self.require_square()?;
        Ok((self * self).is_zero())
    }

    /// Returns the scalar `c` when `A = cI`.
    pub fn as_scalar(&self) -> Option<FieldScalar> {
        if !self.is_square() || self.rows == 0 {
            return None;
        }
        let c = self[(0, 0)].clone();
        for i in 0..self.rows {
            for j in 0..self.cols {
                let e = &self[(i, j)];
                let ok = if i == j { *e == c } else { e.is_zero() };
                if !ok {
                    return None;
                }
            }
        }
        Some(c)
    }

    /// Gauss-Jordan elimination; pivots are the first nonzero entry in
    /// column order, so the result is deterministic.
    pub fn echelon(&self) -> Echelon {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m[(i, c)].is_zero()) else {
                continue;
            };
            m.swap_rows(r, p);
            let inv = m[(r, c)].inv();
            for j in c..m.cols {
                m[(r, j)] = &m[(r, j)] * &inv;
            }
            for i in 0..m.rows {
                if i == r || m[(i, c)].is_zero() {
                    continue;
                }
                let factor = m[(i, c)].clone();
                for j in c..m.cols {
                    let sub = &factor * &m[(r, j)];
                    m[(i, j)] = &m[(i, j)] - &sub;
                }
            }
            pivots.push(c);
            r += 1;
        }
        Echelon { reduced: m, pivots }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn rank(&self) -> usize {
        self.echelon().pivots.len()
    }

    /// Basis of the null space in reduced-echelon parameterization: one
    /// vector per free column, with a one in that column.
    pub fn kernel_basis(&self) -> Vec<ColumnVector> {
        let Echelon { reduced, pivots } = self.echelon();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = ColumnVector::zeros(self.field, self.cols);
                v.entries[f] = self.field.one();
                for (r, &p) in pivots.iter().enumerate() {
                    v.entries[p] = -&reduced[(r, f)];
                }
                v
            })
            .collect()
    }

    /// Some `x` with `Ax = b`, or `None` when the system is inconsistent.
    pub fn solve(&self, b: &ColumnVector) -> Result<Option<ColumnVector>> {
        if b.field() != self.field {
            return Err(Error::FieldMismatch(self.field, b.field()));
        }
        if b.dim() != self.rows {
            return Err(Error::DimensionMismatch {
                op: "solve",
                left: self.shape(),
                right: (b.dim(), 1),
            });
        }
        let aug = self.hstack(&b.to_matrix())?;
        let Echelon { reduced, pivots } = aug.echelon();
        if pivots.last() == Some(&self.cols) {
            return Ok(None);
        }
        let mut x = ColumnVector::zeros(self.field, self.cols);
        for (r, &p) in pivots.iter().enumerate() {
            x.entries[p] = reduced[(r, self.cols)].clone();
        }
        Ok(Some(x))
    }

    pub fn inverse(&self) -> Result<Self> {
        let n = self.require_square()?;
        let aug = self.hstack(&Self::identity(self.field, n))?;
        let Echelon { reduced, pivots } = aug.echelon();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return Err(Error::Singular);
        }
        Ok(reduced.submatrix(0, n, n, n))
    }

    /// `Q^{-1} A Q`.
    pub fn conjugate(&self, q: &Self) -> Result<Self> {
        self.require_same_field(q)?;
        self.require_square()?;
        if q.shape() != self.shape() {
            return Err(Error::DimensionMismatch {
                op: "conjugate",
                left: self.shape(),
                right: q.shape(),
            });
        }
        let qi = q.inverse()?;
        Ok(&(&qi * self) * q)
    }

    pub fn determinant(&self) -> Result<FieldScalar> {
        let n = self.require_square()?;
        let mut m = self.clone();
        let mut det = self.field.one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !m[(i, c)].is_zero()) else {
                return Ok(self.field.zero());
            };
            if p != c {
                m.swap_rows(p, c);
                det = -det;
            }
            let pivot = m[(c, c)].clone();
            det = &det * &pivot;
            let inv = pivot.inv();
            for i in c + 1..n {
                if m[(i, c)].is_zero() {
                    continue;
                }
                let factor = &m[(i, c)] * &inv;
                for j in c..n {
                    let sub = &factor * &m[(c, j)];
                    m[(i, j)] = &m[(i, j)] - &sub;
                }
            }
        }
        Ok(det)
    }

    /// Determinants of the leading `1x1, 2x2, ...` submatrices.
    pub fn leading_principal_minors(&self) -> Result<Vec<FieldScalar>> {
        let n = self.require_square()?;
        (1..=n)
            .map(|k| self.submatrix(0, 0, k, k).determinant())
            .collect()
    }

    pub fn submatrix(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Self {
        assert!(r0 + rows <= self.rows && c0 + cols <= self.cols, "submatrix out of range");
        let mut m = Self::zeros(self.field, rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m[(i, j)] = self[(r0 + i, c0 + j)].clone();
            }
        }
        m
    }

    /// Copies `block` into `self` with its top-left corner at `(r0, c0)`.
    pub fn set_block(&mut self, r0: usize, c0: usize, block: &Self) {
        assert!(
            r0 + block.rows <= self.rows && c0 + block.cols <= self.cols,
            "block out of range"
        );
        for i in 0..block.rows {
            for j in 0..block.cols {
                self[(r0 + i, c0 + j)] = block[(i, j)].clone();
            }
        }
    }

    pub fn hstack(&self, other: &Self) -> Result<Self> {
        self.require_same_field(other)?;
        if self.rows != other.rows {
            return Err(Error::DimensionMismatch {
                op: "hstack",
                left: self.shape(),
                right: other.shape(),
            });
        }
        let mut m = Self::zeros(self.field, self.rows, self.cols + other.cols);
        m.set_block(0, 0, self);
        m.set_block(0, self.cols, other);
        Ok(m)
    }

    /// `Dg[B_1, B_2, ...]`. Blocks need not be square.
    pub fn block_diag(field: FieldSpec, blocks: &[Self]) -> Self {
        let rows = blocks.iter().map(|b| b.rows).sum();
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut m = Self::zeros(field, rows, cols);
        let (mut r, mut c) = (0, 0);
        for b in blocks {
            m.set_block(r, c, b);
            r += b.rows;
            c += b.cols;
        }
        m
    }

    /// Assembles a block grid. Every block in a grid row must share its row
    /// count and every block in a grid column its column count.
    pub fn assemble(grid: &[Vec<Self>]) -> Result<Self> {
        let Some(first) = grid.first().and_then(|r| r.first()) else {
            return Err(Error::UnsupportedSize(0));
        };
        let field = first.field;
        let width = grid[0].len();
        let row_heights: Vec<usize> = grid.iter().map(|r| r[0].rows).collect();
        let col_widths: Vec<usize> = grid[0].iter().map(|b| b.cols).collect();
        for (bi, row) in grid.iter().enumerate() {
            if row.len() != width {
                return Err(Error::DimensionMismatch {
                    op: "assemble",
                    left: (grid.len(), width),
                    right: (bi, row.len()),
                });
            }
            for (bj, b) in row.iter().enumerate() {
                if b.field != field {
                    return Err(Error::FieldMismatch(field, b.field));
                }
                if b.rows != row_heights[bi] || b.cols != col_widths[bj] {
                    return Err(Error::DimensionMismatch {
                        op: "assemble",
                        left: (row_heights[bi], col_widths[bj]),
                        right: b.shape(),
                    });
                }
            }
        }
        let mut m = Self::zeros(field, row_heights.iter().sum(), col_widths.iter().sum());
        let mut r = 0;
        for (bi, row) in grid.iter().enumerate() {
            let mut c = 0;
            for (bj, b) in row.iter().enumerate() {
                m.set_block(r, c, b);
                c += col_widths[bj];
            }
            r += row_heights[bi];
        }
        Ok(m)
    }

    /// True when the matrix is a permutation matrix.
    pub fn is_permutation(&self) -> bool {
        if !self.is_square() {
            return false;
        }
        let ok_line = |it: &mut dyn Iterator<Item = &FieldScalar>| {
            let mut ones = 0;
            for e in it {
                if e.is_one() {
                    ones += 1;
                } else if !e.is_zero() {
                    return false;
                }
            }
            ones == 1
        };
        (0..self.rows).all(|i| ok_line(&mut (0..self.cols).map(|j| &self[(i, j)])))
            && (0..self.cols).all(|j| ok_line(&mut (0..self.rows).map(|i| &self[(i, j)])))
    }

    pub fn is_strictly_lower(&self) -> bool {
        (0..self.rows).all(|i| (i..self.cols).all(|j| self[(i, j)].is_zero()))
    }

    pub fn is_strictly_upper(&self) -> bool {
        (0..self.rows).all(|i| (0..self.cols.min(i + 1)).all(|j| self[(i, j)].is_zero()))
    }

    /// Entries as strings, row by row.
    pub fn to_string_rows(&self) -> Vec<Vec<String>> {
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self[(i, j)].to_string()).collect())
            .collect()
    }
}

impl Index<(usize, usize)> for ExactMatrix {
    type Output = FieldScalar;
    fn index(&self, (i, j): (usize, usize)) -> &FieldScalar {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for ExactMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut FieldScalar {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl Mul for &ExactMatrix {
    type Output = ExactMatrix;
    fn mul(self, rhs: &ExactMatrix) -> ExactMatrix {
        self.try_mul(rhs).expect("incompatible matrix product")
    }
}

impl Add for &ExactMatrix {
    type Output = ExactMatrix;
    fn add(self, rhs: &ExactMatrix) -> ExactMatrix {
        self.try_add(rhs).expect("incompatible matrix sum")
    }
}

impl Sub for &ExactMatrix {
    type Output = ExactMatrix;
    fn sub(self, rhs: &ExactMatrix) -> ExactMatrix {
        self.try_sub(rhs).expect("incompatible matrix difference")
    }
}

impl Neg for &ExactMatrix {
    type Output = ExactMatrix;
    fn neg(self) -> ExactMatrix {
        ExactMatrix {
            field: self.field,
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|e| -e).collect(),
        }
    }
}

impl fmt::Display for ExactMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cells = self.to_string_rows();
        let width = cells.iter().flatten().map(String::len).max().unwrap_or(1);
        for (i, row) in cells.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            let line: Vec<String> = row.iter().map(|c| format!("{c:>width$}")).collect();
            write!(f, "{}", line.join(" "))?;
        }
        Ok(())
    }
}
