//! Explicit nilpotent factorizations of nilpotent Jordan structures.
//!
//! Two families live here:
//!
//! * `Dg[J_k(0), J_2(0)] = N1·N2` for every `k ≥ 1`, with both factors of
//!   rank `k` when `k` is odd, together with the permutations `Q1`, `Q2`
//!   that exhibit the Jordan structure of each factor.
//! * normal-form factorizations of any nilpotent Jordan matrix other than
//!   `J_2(0)`: the left factor has zero first row and zero last column, and
//!   the right factor's last row is either zero or `e_1^T`.
//!
//! Index generators take and return 1-based indices so that they can be
//! compared directly against column lists like `[e_1, e_5, e_3, e_2, e_4]`.

use serde::{Deserialize, Serialize};

use crate::canonical::NilpotentPartition;
use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::matrix::{ColumnVector, ExactMatrix};

/// Shape of the right factor's last row in a normal-form factorization.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum LastRow {
    Zero,
    E1T,
}

/// `similarity^{-1} · target · similarity = left · right`, with the
/// normal-form row/column conditions on the factors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormalFormFactorization {
    pub left: ExactMatrix,
    pub right: ExactMatrix,
    pub right_last_row: LastRow,
    pub similarity: ExactMatrix,
}

impl NormalFormFactorization {
    /// Re-derives every invariant against `target`.
    pub fn verify(&self, target: &ExactMatrix) -> Result<()> {
        let fail = |what: &str| Err(Error::CertificateFailed(what.into()));
        let n = target.rows();
        if target.conjugate(&self.similarity)? != &self.left * &self.right {
            return fail("normal form product");
        }
        if !self.left.is_nilpotent()? || !self.right.is_nilpotent()? {
            return fail("normal form nilpotency");
        }
        if n == 0 {
            return Ok(());
        }
        if !self.left.row_is_zero(0) || !self.left.column_is_zero(n - 1) {
            return fail("left factor first row / last column");
        }
        let last = self.right.row(n - 1);
        let expected = match self.right_last_row {
            LastRow::Zero => ColumnVector::zeros(target.field(), n),
            LastRow::E1T => ColumnVector::standard(target.field(), n, 0),
        };
        if last != expected.entries() {
            return fail("right factor last row");
        }
        Ok(())
    }
}

fn put(m: &mut ExactMatrix, i: usize, j: usize, v: i64) {
    let f = m.field();
    m[(i - 1, j - 1)] = f.from_i64(v);
}

fn perm_1based(field: FieldSpec, columns: &[usize]) -> ExactMatrix {
    let zero_based: Vec<usize> = columns.iter().map(|c| c - 1).collect();
    ExactMatrix::permutation(field, &zero_based)
}

fn columns_matrix(field: FieldSpec, dim: usize, cols: &[Option<usize>]) -> ExactMatrix {
    let vs: Vec<ColumnVector> = cols
        .iter()
        .map(|c| match c {
            Some(i) => ColumnVector::standard(field, dim, i - 1),
            None => ColumnVector::zeros(field, dim),
        })
        .collect();
    ExactMatrix::from_columns(field, dim, &vs).expect("consistent dimensions")
}

fn require_odd_at_least_3(k: usize) -> Result<()> {
    if k < 3 || k % 2 == 0 {
        return Err(Error::InvalidK(k));
    }
    Ok(())
}

/// Sign `(-1)^((k-3)/2)` for odd `k ≥ 3`.
fn wu_sign(k: usize) -> i64 {
    if ((k - 3) / 2) % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Columns of the `k x k` upper-right block of the left factor:
/// `[e_2, 0, e_4, e_3, e_6, e_5, ..., e_{k-1}, e_{k-2}, e_k]`.
pub fn wu_left_columns(k: usize) -> Result<Vec<Option<usize>>> {
    require_odd_at_least_3(k)?;
    let mut cols = vec![Some(2), None];
    for i in (3..k - 1).step_by(2) {
        cols.extend([Some(i + 1), Some(i)]);
    }
    cols.push(Some(k));
    Ok(cols)
}

/// Columns of the `k x k` lower-left block of the right factor:
/// `[e_1, e_4, e_3, e_6, e_5, ..., e_{k-1}, e_{k-2}, e_k, 0]`.
pub fn wu_right_columns(k: usize) -> Result<Vec<Option<usize>>> {
    require_odd_at_least_3(k)?;
    let mut cols = vec![Some(1)];
    for i in (3..k - 1).step_by(2) {
        cols.extend([Some(i + 1), Some(i)]);
    }
    cols.extend([Some(k), None]);
    Ok(cols)
}

/// `Dg[J_k(0), J_2(0)] = N1·N2`.
///
/// * `k = 1`: `E_(3,1)·E_(1,2)`.
/// * odd `k ≥ 3`: `[[0, A1], [J_2, 0]]·[[0, E_(1,1)], [A2, 0]]`, both of rank `k`.
/// * even `k`: `[[0, J_k], [E_(2,2), 0]]·[[0, 0, J_2], [I_{k-1}, 0, 0], [0, 0, 0]]`.
pub fn factor_jk_j2(k: usize, field: FieldSpec) -> Result<(ExactMatrix, ExactMatrix)> {
    if k == 0 {
        return Err(Error::InvalidK(k));
    }
    if k == 1 {
        return Ok((
            ExactMatrix::unit(field, 3, 3, 2, 0),
            ExactMatrix::unit(field, 3, 3, 0, 1),
        ));
    }
    let z = |r, c| ExactMatrix::zeros(field, r, c);
    if k % 2 == 1 {
        let a1 = columns_matrix(field, k, &wu_left_columns(k)?);
        let a2 = columns_matrix(field, k, &wu_right_columns(k)?);
        let left = ExactMatrix::assemble(&[
            vec![z(k, 2), a1],
            vec![ExactMatrix::jordan_block(field, 2), z(2, k)],
        ])?;
        let right = ExactMatrix::assemble(&[
            vec![z(2, k), ExactMatrix::unit(field, 2, 2, 0, 0)],
            vec![a2, z(k, 2)],
        ])?;
        return Ok((left, right));
    }
    let n = k + 2;
    let mut left = ExactMatrix::zeros(field, n, n);
    left.set_block(0, 2, &ExactMatrix::jordan_block(field, k));
    put(&mut left, k + 2, 2, 1);
    let mut right = ExactMatrix::zeros(field, n, n);
    right.set_block(0, k, &ExactMatrix::jordan_block(field, 2));
    right.set_block(2, 0, &ExactMatrix::identity(field, k - 1));
    Ok((left, right))
}

/// Jordan block sizes `(a, b)` of the left factor for odd `k ≥ 3`:
/// `a = k - 2⌊(k-3)/4⌋ + (-1)^((k-3)/2)`, `b = k - 2(1 + ⌊(k-3)/4⌋)`.
pub fn q1_block_sizes(k: usize) -> Result<(usize, usize)> {
    require_odd_at_least_3(k)?;
    let q = ((k - 3) / 4) as i64;
    let k = k as i64;
    Ok(((k - 2 * q + wu_sign(k as usize)) as usize, (k - 2 * (1 + q)) as usize))
}

/// Jordan block sizes of the right factor for odd `k ≥ 3`:
/// `(k - ⌊(k-3)/4⌋, 2 + ⌊(k-3)/4⌋)`.
pub fn q2_block_sizes(k: usize) -> Result<(usize, usize)> {
    require_odd_at_least_3(k)?;
    let q = (k - 3) / 4;
    Ok((k - q, 2 + q))
}

/// Walks `x, x-1, x-4, x-5, x-8, ...` until `end` has been emitted.
fn stride_down(start: i64, end: i64, out: &mut Vec<usize>) {
    let mut x = start;
    loop {
        assert!(x >= end, "index pattern overshot its end");
        out.push(x as usize);
        if x == end {
            return;
        }
        out.push((x - 1) as usize);
        if x - 1 == end {
            return;
        }
        x -= 4;
    }
}

/// `Q1 = [e_1, e_{k+2}, e_k, e_{k-1}, e_{k-4}, e_{k-5}, ..., e_{3-s},
///        e_{k+1}, e_{k-2}, e_{k-3}, ..., e_{3+s}]` with `s = (-1)^((k-3)/2)`.
pub fn q1_columns(k: usize) -> Result<Vec<usize>> {
    require_odd_at_least_3(k)?;
    let s = wu_sign(k);
    let k = k as i64;
    let mut cols = vec![1, (k + 2) as usize];
    stride_down(k, 3 - s, &mut cols);
    cols.push((k + 1) as usize);
    if k + 1 != 3 + s {
        stride_down(k - 2, 3 + s, &mut cols);
    }
    Ok(cols)
}

/// `Q2`: a stride-4 run ending at `e_{k+1}`, the odd indices `e_1, e_3, ..., e_k`,
/// a stride-4 run ending at `e_{k-1}`, then `e_{k+2}`. The first run starts
/// at `e_4` when `(k-3)/2` is even and at `e_2` when it is odd.
pub fn q2_columns(k: usize) -> Result<Vec<usize>> {
    require_odd_at_least_3(k)?;
    let (first, third) = if wu_sign(k) == 1 { (4, 2) } else { (2, 4) };
    let mut cols: Vec<usize> = (first..=k + 1).step_by(4).collect();
    cols.extend((1..=k).step_by(2));
    cols.extend((third..k).step_by(4));
    cols.push(k + 2);
    Ok(cols)
}

pub fn q1_matrix(k: usize, field: FieldSpec) -> Result<ExactMatrix> {
    Ok(perm_1based(field, &q1_columns(k)?))
}

pub fn q2_matrix(k: usize, field: FieldSpec) -> Result<ExactMatrix> {
    Ok(perm_1based(field, &q2_columns(k)?))
}

/// `J_k(0) = N3·N4` (any `k ≥ 3`; used directly for odd `k`).
pub fn single_block_odd_factors(k: usize, field: FieldSpec) -> Result<(ExactMatrix, ExactMatrix)> {
    if k < 3 {
        return Err(Error::InvalidK(k));
    }
    let mut n3 = ExactMatrix::zeros(field, k, k);
    put(&mut n3, 2, k, 1);
    n3.set_block(2, 0, &ExactMatrix::identity(field, k - 2));
    let mut n4 = ExactMatrix::zeros(field, k, k);
    n4.set_block(0, 1, &ExactMatrix::identity(field, k - 2));
    put(&mut n4, k, 1, 1);
    Ok((n3, n4))
}

/// `J_k(0) = N5·N6` for even `k ≥ 4`, where `N6 = N4 + E_(1,3)`.
pub fn single_block_even_factors(
    k: usize,
    field: FieldSpec,
) -> Result<(ExactMatrix, ExactMatrix)> {
    if k < 4 || k % 2 == 1 {
        return Err(Error::InvalidK(k));
    }
    let mut n5 = ExactMatrix::zeros(field, k, k);
    put(&mut n5, 2, k - 1, 1);
    put(&mut n5, 2, k, 1);
    put(&mut n5, 3, 1, 1);
    put(&mut n5, 3, 2, -1);
    put(&mut n5, 4, 2, 1);
    n5.set_block(4, 2, &ExactMatrix::identity(field, k - 4));
    let (_, mut n6) = single_block_odd_factors(k, field)?;
    put(&mut n6, 1, 3, 1);
    Ok((n5, n6))
}

/// `Q3 = [e_1, e_3, ..., e_k, e_2, e_4, ..., e_{k-1}]` for odd `k`.
pub fn q3_columns(k: usize) -> Result<Vec<usize>> {
    if k % 2 == 0 {
        return Err(Error::InvalidK(k));
    }
    Ok((1..=k).step_by(2).chain((2..k).step_by(2)).collect())
}

/// `Q4 = [e_1, e_3, ..., e_{k-1}, e_2, e_4 - e_3, e_6 - e_5, ..., e_k - e_{k-1}]`
/// for even `k ≥ 4`.
pub fn q4_matrix(k: usize, field: FieldSpec) -> Result<ExactMatrix> {
    if k < 4 || k % 2 == 1 {
        return Err(Error::InvalidK(k));
    }
    let e = |i: usize| ColumnVector::standard(field, k, i - 1);
    let mut cols: Vec<ColumnVector> = (1..k).step_by(2).map(e).collect();
    cols.push(e(2));
    cols.extend((4..=k).step_by(2).map(|j| &e(j) - &e(j - 1)));
    ExactMatrix::from_columns(field, k, &cols)
}

/// `Q5 = [e_1, e_4, e_3, e_6, e_2, e_5]`.
pub const Q5_COLUMNS: [usize; 6] = [1, 4, 3, 6, 2, 5];

/// `Dg[J_2(0), J_2(0), J_2(0)] = N9·N10`.
pub fn triple_j2_factors(field: FieldSpec) -> (ExactMatrix, ExactMatrix) {
    let mut n9 = ExactMatrix::zeros(field, 6, 6);
    put(&mut n9, 2, 6, 1);
    put(&mut n9, 4, 1, 1);
    put(&mut n9, 6, 3, 1);
    let mut n10 = ExactMatrix::zeros(field, 6, 6);
    put(&mut n10, 1, 3, 1);
    put(&mut n10, 3, 5, 1);
    put(&mut n10, 6, 1, 1);
    (n9, n10)
}

fn conjugated(
    left: &ExactMatrix,
    right: &ExactMatrix,
    q: ExactMatrix,
    right_last_row: LastRow,
) -> Result<NormalFormFactorization> {
    Ok(NormalFormFactorization {
        left: left.conjugate(&q)?,
        right: right.conjugate(&q)?,
        right_last_row,
        similarity: q,
    })
}

/// Normal form for a single block `J_k(0)`, `k ≠ 2`: `Q3` for odd `k`
/// (zero last row), `Q4` for even `k` (last row `e_1^T`).
pub fn factor_single_block(k: usize, field: FieldSpec) -> Result<NormalFormFactorization> {
    match k {
        0 => Err(Error::InvalidK(0)),
        1 => Ok(NormalFormFactorization {
            left: ExactMatrix::zeros(field, 1, 1),
            right: ExactMatrix::zeros(field, 1, 1),
            right_last_row: LastRow::Zero,
            similarity: ExactMatrix::identity(field, 1),
        }),
        2 => Err(Error::UnsupportedSize(2)),
        _ if k % 2 == 1 => {
            let (n3, n4) = single_block_odd_factors(k, field)?;
            conjugated(&n3, &n4, perm_1based(field, &q3_columns(k)?), LastRow::Zero)
        }
        _ => {
            let (n5, n6) = single_block_even_factors(k, field)?;
            conjugated(&n5, &n6, q4_matrix(k, field)?, LastRow::E1T)
        }
    }
}

/// Normal form for `Dg[J_2(0), J_2(0), J_2(0)]` via `Q5`.
pub fn factor_triple_j2(field: FieldSpec) -> Result<NormalFormFactorization> {
    let (n9, n10) = triple_j2_factors(field);
    conjugated(&n9, &n10, perm_1based(field, &Q5_COLUMNS), LastRow::Zero)
}

/// Normal form for `Dg[J_k(0), J_2(0)]`: no conjugation for `k = 1` or even
/// `k`, `Q1` for odd `k ≥ 3`. The right factor's last row is always zero.
pub fn factor_pair_with_j2(k: usize, field: FieldSpec) -> Result<NormalFormFactorization> {
    let (left, right) = factor_jk_j2(k, field)?;
    let q = if k >= 3 && k % 2 == 1 {
        q1_matrix(k, field)?
    } else {
        ExactMatrix::identity(field, k + 2)
    };
    conjugated(&left, &right, q, LastRow::Zero)
}

/// One group of Jordan blocks factored together.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BlockGroup {
    /// `J_k(0)` on its own (`k ≠ 2`).
    Single(usize),
    /// `Dg[J_k(0), J_2(0)]`.
    WithJ2(usize),
    /// `Dg[J_2(0), J_2(0), J_2(0)]`.
    TripleJ2,
}

impl BlockGroup {
    pub fn sizes(&self) -> Vec<usize> {
        match *self {
            BlockGroup::Single(k) => vec![k],
            BlockGroup::WithJ2(k) => vec![k, 2],
            BlockGroup::TripleJ2 => vec![2, 2, 2],
        }
    }

    fn factor(&self, field: FieldSpec) -> Result<NormalFormFactorization> {
        match *self {
            BlockGroup::Single(k) => factor_single_block(k, field),
            BlockGroup::WithJ2(k) => factor_pair_with_j2(k, field),
            BlockGroup::TripleJ2 => factor_triple_j2(field),
        }
    }
}

/// Splits a partition into factorable groups.
///
/// Size-2 blocks pair up among themselves. An odd one out is attached to the
/// largest block of another size, or, when there is none, three of them form
/// a triple. Remaining blocks stand alone. Groups whose right factor ends in
/// `e_1^T` (even singles) are placed first so a zero last row wins whenever
/// any other group exists.
pub fn group_blocks(partition: &NilpotentPartition) -> Result<Vec<BlockGroup>> {
    let mut twos = partition.sizes().iter().filter(|&&s| s == 2).count();
    let mut others: Vec<usize> = partition.sizes().iter().copied().filter(|&s| s != 2).collect();
    let mut with_j2 = Vec::new();
    let mut triple = false;
    if twos % 2 == 1 {
        if !others.is_empty() {
            with_j2.push(BlockGroup::WithJ2(others.remove(0)));
            twos -= 1;
        } else if twos >= 3 {
            triple = true;
            twos -= 3;
        } else {
            return Err(Error::ExceptionalCase);
        }
    }
    let mut groups: Vec<BlockGroup> = others
        .iter()
        .filter(|&&k| k % 2 == 0)
        .map(|&k| BlockGroup::Single(k))
        .collect();
    groups.extend(with_j2);
    groups.extend(std::iter::repeat(BlockGroup::WithJ2(2)).take(twos / 2));
    if triple {
        groups.push(BlockGroup::TripleJ2);
    }
    groups.extend(others.iter().filter(|&&k| k % 2 == 1).map(|&k| BlockGroup::Single(k)));
    Ok(groups)
}

/// Permutation `R` with `R^{-1} · Dg[J_{canonical}] · R = Dg[J_{ordered}]`.
pub fn block_reordering(field: FieldSpec, canonical: &[usize], ordered: &[usize]) -> Result<ExactMatrix> {
    let mut offsets = Vec::with_capacity(canonical.len());
    let mut acc = 0;
    for &s in canonical {
        offsets.push(acc);
        acc += s;
    }
    let mut used = vec![false; canonical.len()];
    let mut columns = Vec::with_capacity(acc);
    for &s in ordered {
        let idx = (0..canonical.len())
            .find(|&i| !used[i] && canonical[i] == s)
            .ok_or_else(|| Error::CertificateFailed("block reordering".into()))?;
        used[idx] = true;
        columns.extend(offsets[idx]..offsets[idx] + s);
    }
    if columns.len() != acc {
        return Err(Error::CertificateFailed("block reordering".into()));
    }
    Ok(ExactMatrix::permutation(field, &columns))
}

/// Normal-form factorization of the Jordan matrix of `partition` (blocks in
/// canonical descending order).
///
/// Blocks are regrouped (the reordering permutation is folded into
/// `similarity`), each group is factored, and the factors are assembled
/// block-diagonally. When the last group ends in `e_1^T` at a block offset
/// `o > 0`, a final transposition of coordinates `1` and `o + 1` moves that
/// row entry to the first column; the transposition keeps the left factor's
/// first row and last column zero because the group's own first row is zero.
pub fn factor_nilpotent_normal_form(
    partition: &NilpotentPartition,
    field: FieldSpec,
) -> Result<NormalFormFactorization> {
    let groups = group_blocks(partition)?;
    let n = partition.n();
    let ordered: Vec<usize> = groups.iter().flat_map(BlockGroup::sizes).collect();
    let reorder = block_reordering(field, partition.sizes(), &ordered)?;

    let parts = groups
        .iter()
        .map(|g| g.factor(field))
        .collect::<Result<Vec<_>>>()?;
    let lefts: Vec<ExactMatrix> = parts.iter().map(|p| p.left.clone()).collect();
    let rights: Vec<ExactMatrix> = parts.iter().map(|p| p.right.clone()).collect();
    let sims: Vec<ExactMatrix> = parts.iter().map(|p| p.similarity.clone()).collect();
    let mut left = ExactMatrix::block_diag(field, &lefts);
    let mut right = ExactMatrix::block_diag(field, &rights);
    let mut similarity = &reorder * &ExactMatrix::block_diag(field, &sims);

    let last_row = parts.last().map_or(LastRow::Zero, |p| p.right_last_row);
    if last_row == LastRow::E1T {
        let offset = n - parts.last().expect("nonempty").left.rows();
        if offset > 0 {
            let mut swap: Vec<usize> = (0..n).collect();
            swap.swap(0, offset);
            let t = ExactMatrix::permutation(field, &swap);
            left = left.conjugate(&t)?;
            right = right.conjugate(&t)?;
            similarity = &similarity * &t;
        }
    }
    let nf = NormalFormFactorization {
        left,
        right,
        right_last_row: last_row,
        similarity,
    };
    nf.verify(&partition.jordan_matrix(field))?;
    Ok(nf)
}
