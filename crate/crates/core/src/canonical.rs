//! Jordan form of nilpotent matrices and the Fitting split of an arbitrary
//! square matrix into nilpotent and invertible parts.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{ColumnVector, ExactMatrix};

/// Jordan block sizes of a nilpotent matrix, largest first.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct NilpotentPartition(Vec<usize>);

impl NilpotentPartition {
    /// Sorts the sizes descending. Zero sizes are rejected.
    pub fn new(mut sizes: Vec<usize>) -> Result<Self> {
        if sizes.contains(&0) {
            return Err(Error::UnsupportedSize(0));
        }
        sizes.sort_unstable_by(|a, b| b.cmp(a));
        Ok(Self(sizes))
    }

    pub fn sizes(&self) -> &[usize] {
        &self.0
    }

    pub fn n(&self) -> usize {
        self.0.iter().sum()
    }

    /// Jordan matrix `Dg[J_{s_1}(0), ...]` in canonical order.
    pub fn jordan_matrix(&self, field: crate::FieldSpec) -> ExactMatrix {
        ExactMatrix::jordan_matrix(field, &self.0)
    }

    /// All partitions of `n`, each listed largest part first.
    pub fn all_of(n: usize) -> Vec<Self> {
        fn go(rem: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<NilpotentPartition>) {
            if rem == 0 {
                out.push(NilpotentPartition(cur.clone()));
                return;
            }
            for part in (1..=max.min(rem)).rev() {
                cur.push(part);
                go(rem - part, part, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        go(n, n, &mut Vec::new(), &mut out);
        out
    }
}

/// `S^{-1} A S = Dg[A0, A1]` with `A0` nilpotent and `A1` invertible.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FittingSplit {
    pub s: ExactMatrix,
    pub a0: ExactMatrix,
    pub a1: ExactMatrix,
    pub n0: usize,
}

fn span_rank(vectors: &[ColumnVector], dim: usize, field: crate::FieldSpec) -> usize {
    if vectors.is_empty() {
        return 0;
    }
    ExactMatrix::from_columns(field, dim, vectors)
        .expect("vectors share dimension")
        .rank()
}

/// Returns `(S, partition)` with `S^{-1} N S` equal to the Jordan matrix of
/// the partition.
///
/// Chains are built from the top level down. At level `j` the images of
/// longer chains are kept, and new chain heads are drawn from `N(N^j)`,
/// trying standard basis vectors first and then the echelon kernel basis.
pub fn nilpotent_jcf(n_mat: &ExactMatrix) -> Result<(ExactMatrix, NilpotentPartition)> {
    if !n_mat.is_square() {
        return Err(Error::NotSquare(n_mat.rows(), n_mat.cols()));
    }
    let field = n_mat.field();
    let n = n_mat.rows();
    let index = n_mat.nilpotency_index()?.ok_or(Error::NotNilpotent)?;

    let mut powers = vec![ExactMatrix::identity(field, n)];
    for j in 1..=index {
        powers.push(&powers[j - 1] * n_mat);
    }
    let kernels: Vec<Vec<ColumnVector>> = powers.iter().map(ExactMatrix::kernel_basis).collect();

    // (chain length, head vector)
    let mut heads: Vec<(usize, ColumnVector)> = Vec::new();
    for level in (1..=index).rev() {
        let target = kernels[level].len();
        let mut span: Vec<ColumnVector> = kernels[level - 1].clone();
        for (len, head) in &heads {
            span.push(powers[len - level].mul_vec(head)?);
        }
        let mut rank = span_rank(&span, n, field);
        let standard = (0..n)
            .map(|i| ColumnVector::standard(field, n, i))
            .filter(|e| powers[level].mul_vec(e).map(|v| v.is_zero()).unwrap_or(false));
        let candidates: Vec<ColumnVector> = standard.chain(kernels[level].iter().cloned()).collect();
        for cand in candidates {
            if rank == target {
                break;
            }
            span.push(cand.clone());
            let r = span_rank(&span, n, field);
            if r > rank {
                rank = r;
                heads.push((level, cand));
            } else {
                span.pop();
            }
        }
        if rank != target {
            return Err(Error::DependentSystem);
        }
    }

    let mut columns = Vec::with_capacity(n);
    for (len, head) in &heads {
        let mut v = head.clone();
        for _ in 0..*len {
            let next = n_mat.mul_vec(&v)?;
            columns.push(v);
            v = next;
        }
    }
    let s = ExactMatrix::from_columns(field, n, &columns)?;
    let partition = NilpotentPartition::new(heads.iter().map(|(len, _)| *len).collect())?;
    Ok((s, partition))
}

/// Block sizes read off the kernel dimensions of successive powers:
/// the number of blocks of size at least `j` is
/// `dim N(N^j) - dim N(N^{j-1})`.
pub fn partition_from_kernel_dims(n_mat: &ExactMatrix) -> Result<NilpotentPartition> {
    let n = n_mat.rows();
    if !n_mat.is_nilpotent()? {
        return Err(Error::NotNilpotent);
    }
    let mut dims = vec![0usize];
    let mut p = ExactMatrix::identity(n_mat.field(), n);
    while *dims.last().unwrap() < n {
        p = &p * n_mat;
        dims.push(n - p.rank());
    }
    let at_least: Vec<usize> = dims.windows(2).map(|w| w[1] - w[0]).collect();
    let mut sizes = Vec::new();
    for (j, &count) in at_least.iter().enumerate() {
        let next = at_least.get(j + 1).copied().unwrap_or(0);
        sizes.extend(std::iter::repeat(j + 1).take(count - next));
    }
    NilpotentPartition::new(sizes)
}

/// Fitting decomposition. With `j` the first exponent where the ranks of
/// `A^j` stop dropping, the columns of `S` are the echelon basis of
/// `N(A^j)` followed by the reduced echelon basis of `R(A^j)`. These are the
/// same subspaces as for `A^n`, with much smaller rational entries.
pub fn fitting_split(a: &ExactMatrix) -> Result<FittingSplit> {
    if !a.is_square() {
        return Err(Error::NotSquare(a.rows(), a.cols()));
    }
    let field = a.field();
    let n = a.rows();
    let mut p = ExactMatrix::identity(field, n);
    let mut rank = n;
    loop {
        let next = &p * a;
        let r = next.rank();
        p = next;
        if r == rank {
            break;
        }
        rank = r;
    }
    let mut columns = p.kernel_basis();
    let n0 = columns.len();
    let reduced = p.transpose().echelon();
    for i in 0..reduced.pivots.len() {
        columns.push(ColumnVector::from_entries(field, reduced.reduced.row(i))?);
    }
    let s = ExactMatrix::from_columns(field, n, &columns)?;
    let m = a.conjugate(&s)?;
    let k = n - n0;
    let off_diagonal_zero =
        m.submatrix(0, n0, n0, k).is_zero() && m.submatrix(n0, 0, k, n0).is_zero();
    let a0 = m.submatrix(0, 0, n0, n0);
    let a1 = m.submatrix(n0, n0, k, k);
    if !off_diagonal_zero || !a0.is_nilpotent()? || a1.rank() != k {
        return Err(Error::CertificateFailed("Fitting split".into()));
    }
    Ok(FittingSplit { s, a0, a1, n0 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldSpec;
    use crate::testing::random_invertible;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    const Q: FieldSpec = FieldSpec::Rationals;

    #[test]
    fn jcf_of_zero_and_canonical_block() {
        let (s, p) = nilpotent_jcf(&ExactMatrix::zeros(Q, 3, 3)).unwrap();
        assert_eq!(p.sizes(), &[1, 1, 1]);
        assert_eq!(s, ExactMatrix::identity(Q, 3));
        let (s, p) = nilpotent_jcf(&ExactMatrix::jordan_block(Q, 3)).unwrap();
        assert_eq!(p.sizes(), &[3]);
        assert_eq!(s, ExactMatrix::identity(Q, 3));
    }

    #[test]
    fn jcf_of_conjugated_block_over_gf5() {
        let f5 = FieldSpec::PrimeField(5);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let q = random_invertible(f5, 3, &mut rng);
        let n = ExactMatrix::jordan_block(f5, 3).conjugate(&q.inverse().unwrap()).unwrap();
        let (s, p) = nilpotent_jcf(&n).unwrap();
        assert_eq!(p.sizes(), &[3]);
        assert_eq!(n.conjugate(&s).unwrap(), ExactMatrix::jordan_block(f5, 3));
    }

    #[test]
    fn jcf_rejects_non_nilpotent() {
        assert_eq!(
            nilpotent_jcf(&ExactMatrix::identity(Q, 2)).unwrap_err(),
            Error::NotNilpotent
        );
    }

    #[test]
    fn jcf_mixed_partitions_match_kernel_dims() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for f in [Q, FieldSpec::PrimeField(2), FieldSpec::PrimeField(7)] {
            for n in 1..=7 {
                for part in NilpotentPartition::all_of(n) {
                    let q = random_invertible(f, n, &mut rng);
                    let mut order = part.sizes().to_vec();
                    order.reverse();
                    let nm = ExactMatrix::jordan_matrix(f, &order).conjugate(&q).unwrap();
                    let (s, got) = nilpotent_jcf(&nm).unwrap();
                    assert_eq!(got, part);
                    assert_eq!(partition_from_kernel_dims(&nm).unwrap(), part);
                    assert_eq!(nm.conjugate(&s).unwrap(), part.jordan_matrix(f));
                }
            }
        }
    }

    #[test]
    fn partitions_enumerate() {
        assert_eq!(NilpotentPartition::all_of(4).len(), 5);
        assert_eq!(NilpotentPartition::all_of(12).len(), 77);
        assert_eq!(NilpotentPartition::new(vec![1, 3, 2]).unwrap().sizes(), &[3, 2, 1]);
    }

    #[test]
    fn fitting_examples() {
        let a = ExactMatrix::from_i64_rows(Q, &[vec![0, 0], vec![0, 2]]);
        let split = fitting_split(&a).unwrap();
        assert_eq!(split.n0, 1);
        assert_eq!(split.a1, ExactMatrix::from_i64_rows(Q, &[vec![2]]));

        let inv = ExactMatrix::from_i64_rows(Q, &[vec![1, 2], vec![3, 4]]);
        let split = fitting_split(&inv).unwrap();
        assert_eq!(split.n0, 0);
        assert_eq!(inv.conjugate(&split.s).unwrap(), split.a1);

        let f7 = FieldSpec::PrimeField(7);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let q = random_invertible(f7, 3, &mut rng);
        let core = ExactMatrix::block_diag(
            f7,
            &[ExactMatrix::jordan_block(f7, 2), ExactMatrix::from_i64_rows(f7, &[vec![3]])],
        );
        let a = core.conjugate(&q).unwrap();
        let split = fitting_split(&a).unwrap();
        assert_eq!(split.n0, 2);
        assert_eq!(split.a1.determinant().unwrap(), f7.from_i64(3));
        assert!(!split.a0.is_zero());

        let nil = ExactMatrix::jordan_block(Q, 3);
        let split = fitting_split(&nil).unwrap();
        assert_eq!(split.n0, 3);
        assert_eq!(split.a1.shape(), (0, 0));
    }

    #[test]
    fn fitting_reassembles() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for f in [Q, FieldSpec::PrimeField(2), FieldSpec::PrimeField(5)] {
            for n in 1..=6 {
                for _ in 0..10 {
                    let a = crate::testing::random_singular(f, n, &mut rng);
                    let split = fitting_split(&a).unwrap();
                    assert!(split.a0.is_nilpotent().unwrap());
                    assert_eq!(split.a1.rank(), n - split.n0);
                    let dg = ExactMatrix::block_diag(f, &[split.a0.clone(), split.a1.clone()]);
                    let back = dg.conjugate(&split.s.inverse().unwrap()).unwrap();
                    assert_eq!(back, a);
                }
            }
        }
    }
}
