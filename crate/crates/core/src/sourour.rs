//! Bordered similarity form of a matrix that is not square-zero:
//! `S^{-1} A S = [[λ, cᵀ], [b, D]]` with `rank D = rank A - 1`,
//! `b ∈ R(D)` and `c ∈ R(Dᵀ)`.
//!
//! The main branch builds the basis `{x1, x1 - x0, n_1..n_k, u_1..}` from a
//! vector `x0` and reads the form off in that basis. `x0` must keep
//! `span{x0, A x0}` clear of `N(A)`, which holds exactly when `A x0` and
//! `A² x0` are independent. Such a vector fails to exist only when `A` acts
//! as a scalar `μ ≠ 0` on its range, i.e. `A² = μA`; that case (which
//! includes scalar matrices) is handled by splitting along `R(A) ⊕ N(A)`.

use crate::error::{Error, Result};
use crate::field::FieldScalar;
use crate::matrix::{ColumnVector, ExactMatrix};

/// How the similarity was obtained.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SourourBranch {
    Scalar,
    /// `A² = μA`, split along range and kernel.
    ScaledIdempotent,
    /// The `x0` construction; `projection` is `P` along `span{x1}`.
    Alpha1 {
        x0: ColumnVector,
        projection: ExactMatrix,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SourourForm {
    pub s: ExactMatrix,
    pub lambda: FieldScalar,
    pub b: ColumnVector,
    pub c: ColumnVector,
    pub d: ExactMatrix,
    pub branch: SourourBranch,
}

/// The `x0`-basis and its projection.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Alpha1Basis {
    /// Columns `x1, x1 - x0, n_1..n_k, u_1..`.
    pub s: ExactMatrix,
    /// Projection along `span{x1}` onto the span of the other columns.
    pub projection: ExactMatrix,
    pub x1: ColumnVector,
    pub kernel: Vec<ColumnVector>,
}

fn independent(vs: &[ColumnVector], dim: usize) -> bool {
    let field = vs[0].field();
    ExactMatrix::from_columns(field, dim, vs)
        .map(|m| m.rank() == vs.len())
        .unwrap_or(false)
}

/// First vector in the scan `e_1, ..., e_n, e_1 + e_2, e_1 + e_3, ...` with
/// `A x0` and `A² x0` linearly independent (so `{x0, A x0}` is independent
/// and `A² x0 ≠ 0`).
pub fn choose_x0(a: &ExactMatrix) -> Result<ColumnVector> {
    if !a.is_square() {
        return Err(Error::NotSquare(a.rows(), a.cols()));
    }
    let field = a.field();
    let n = a.rows();
    let a2 = a * a;
    if a2.is_zero() {
        return Err(Error::SquareZero);
    }
    if a.as_scalar().is_some() {
        return Err(Error::ScalarMatrix);
    }
    let e = |i| ColumnVector::standard(field, n, i);
    let singles = (0..n).map(e);
    let pairs = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).map(|(i, j)| &e(i) + &e(j));
    for x0 in singles.chain(pairs) {
        let ax = a.mul_vec(&x0)?;
        let a2x = a2.mul_vec(&x0)?;
        if independent(&[ax, a2x], n) {
            return Ok(x0);
        }
    }
    Err(Error::ScaledIdempotent)
}

/// Builds the basis for a valid `x0`, completing greedily with standard
/// basis vectors.
pub fn build_alpha1(a: &ExactMatrix, x0: &ColumnVector) -> Result<Alpha1Basis> {
    let field = a.field();
    let n = a.rows();
    let x1 = a.mul_vec(x0)?;
    let kernel = a.kernel_basis();
    let mut cols = vec![x1.clone(), &x1 - x0];
    cols.extend(kernel.iter().cloned());
    if !independent(&cols, n) {
        return Err(Error::DependentSystem);
    }
    for i in 0..n {
        if cols.len() == n {
            break;
        }
        cols.push(ColumnVector::standard(field, n, i));
        if !independent(&cols, n) {
            cols.pop();
        }
    }
    let s = ExactMatrix::from_columns(field, n, &cols)?;
    let mut keep = ExactMatrix::identity(field, n);
    keep[(0, 0)] = field.zero();
    let projection = &(&s * &keep) * &s.inverse()?;
    Ok(Alpha1Basis {
        s,
        projection,
        x1,
        kernel,
    })
}

/// `(rank PA, rank AP, rank PAP)`.
pub fn projection_ranks(a: &ExactMatrix, p: &ExactMatrix) -> (usize, usize, usize) {
    let pa = p * a;
    let ap = a * p;
    let pap = &pa * p;
    (pa.rank(), ap.rank(), pap.rank())
}

fn split_form(a: &ExactMatrix, s: ExactMatrix, branch: SourourBranch) -> Result<SourourForm> {
    let field = a.field();
    let n = a.rows();
    let m = a.conjugate(&s)?;
    let lambda = m[(0, 0)].clone();
    let b = m.submatrix(1, 0, n - 1, 1).column(0);
    let c = m.submatrix(0, 1, 1, n - 1).transpose().column(0);
    let d = m.submatrix(1, 1, n - 1, n - 1);
    let form = SourourForm {
        s,
        lambda,
        b,
        c,
        d,
        branch,
    };
    form.verify(a)?;
    let _ = field;
    Ok(form)
}

impl SourourForm {
    /// Reassembles `[[λ, cᵀ], [b, D]]`.
    pub fn bordered(&self) -> ExactMatrix {
        let field = self.d.field();
        let n = self.d.rows() + 1;
        let mut m = ExactMatrix::zeros(field, n, n);
        m[(0, 0)] = self.lambda.clone();
        m.set_block(0, 1, &self.c.to_matrix().transpose());
        m.set_block(1, 0, &self.b.to_matrix());
        m.set_block(1, 1, &self.d);
        m
    }

    /// Similarity, rank and membership checks against `a`.
    pub fn verify(&self, a: &ExactMatrix) -> Result<()> {
        let fail = |w: &str| Err(Error::CertificateFailed(w.into()));
        if a.conjugate(&self.s)? != self.bordered() {
            return fail("bordered similarity");
        }
        if self.d.rank() + 1 != a.rank() {
            return fail("rank(D) = rank(A) - 1");
        }
        if self.d.solve(&self.b)?.is_none() {
            return fail("b in R(D)");
        }
        if self.d.transpose().solve(&self.c)?.is_none() {
            return fail("c in R(D^T)");
        }
        Ok(())
    }
}

pub fn sourour_form(a: &ExactMatrix) -> Result<SourourForm> {
    if !a.is_square() {
        return Err(Error::NotSquare(a.rows(), a.cols()));
    }
    let field = a.field();
    let n = a.rows();
    match choose_x0(a) {
        Ok(x0) => {
            let basis = build_alpha1(a, &x0)?;
            let branch = SourourBranch::Alpha1 {
                x0,
                projection: basis.projection,
            };
            split_form(a, basis.s, branch)
        }
        Err(Error::ScalarMatrix) => split_form(a, ExactMatrix::identity(field, n), SourourBranch::Scalar),
        Err(Error::ScaledIdempotent) => {
            let mut cols: Vec<ColumnVector> =
                a.echelon().pivots.iter().map(|&j| a.column(j)).collect();
            cols.extend(a.kernel_basis());
            let s = ExactMatrix::from_columns(field, n, &cols)?;
            split_form(a, s, SourourBranch::ScaledIdempotent)
        }
        Err(e) => Err(e),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldSpec;
    use crate::testing::random_non_square_zero;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    const Q: FieldSpec = FieldSpec::Rationals;

    #[test]
    fn choose_x0_examples() {
        let j3 = ExactMatrix::jordan_block(Q, 3);
        assert_eq!(choose_x0(&j3).unwrap(), ColumnVector::standard(Q, 3, 0));
        let a = ExactMatrix::from_i64_rows(Q, &[vec![1, 1], vec![0, 1]]);
        assert_eq!(choose_x0(&a).unwrap(), ColumnVector::standard(Q, 2, 1));
        let two = ExactMatrix::scalar(Q, 3, &Q.from_i64(2));
        assert_eq!(choose_x0(&two).unwrap_err(), Error::ScalarMatrix);
        assert_eq!(choose_x0(&ExactMatrix::jordan_block(Q, 2)).unwrap_err(), Error::SquareZero);
        let idem = ExactMatrix::from_i64_rows(Q, &[vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 0]]);
        assert_eq!(choose_x0(&idem).unwrap_err(), Error::ScaledIdempotent);
    }

    #[test]
    fn diagonal_nonscalar_needs_a_pair() {
        let a = ExactMatrix::from_i64_rows(Q, &[vec![1, 0], vec![0, 2]]);
        let x0 = choose_x0(&a).unwrap();
        assert_eq!(x0, ColumnVector::from_i64(Q, &[1, 1]));
    }

    #[test]
    fn alpha1_for_j3() {
        let j3 = ExactMatrix::jordan_block(Q, 3);
        let x0 = ColumnVector::standard(Q, 3, 0);
        let basis = build_alpha1(&j3, &x0).unwrap();
        let expected = ExactMatrix::from_i64_rows(Q, &[vec![0, -1, 0], vec![1, 1, 0], vec![0, 0, 1]]);
        assert_eq!(basis.s, expected);
        assert_eq!(projection_ranks(&j3, &basis.projection), (1, 1, 1));
    }

    #[test]
    fn form_examples() {
        let two = ExactMatrix::scalar(Q, 3, &Q.from_i64(2));
        let f = sourour_form(&two).unwrap();
        assert_eq!(f.lambda, Q.from_i64(2));
        assert_eq!(f.d, ExactMatrix::scalar(Q, 2, &Q.from_i64(2)));
        assert!(f.b.is_zero() && f.c.is_zero());
        assert_eq!(f.branch, SourourBranch::Scalar);

        let f = sourour_form(&ExactMatrix::jordan_block(Q, 3)).unwrap();
        assert_eq!(f.d.rank(), 1);

        let idem = ExactMatrix::from_i64_rows(Q, &[vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 0]]);
        let f = sourour_form(&idem).unwrap();
        assert_eq!(f.branch, SourourBranch::ScaledIdempotent);
        assert_eq!(f.d.rank(), 1);

        assert_eq!(
            sourour_form(&ExactMatrix::zeros(Q, 3, 3)).unwrap_err(),
            Error::SquareZero
        );
    }

    #[test]
    fn kernel_and_range_claims_hold() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for f in [Q, FieldSpec::PrimeField(2), FieldSpec::PrimeField(5)] {
            for n in 2..=6 {
                for _ in 0..15 {
                    let a = random_non_square_zero(f, n, &mut rng);
                    let Ok(x0) = choose_x0(&a) else { continue };
                    let basis = build_alpha1(&a, &x0).unwrap();
                    let p = &basis.projection;
                    let r = a.rank();
                    assert_eq!(projection_ranks(&a, p), (r - 1, r - 1, r - 1));
                    let pa = p * &a;
                    let ap = &a * p;
                    assert!(pa.mul_vec(&x0).unwrap().is_zero());
                    assert!(ap.mul_vec(&basis.x1).unwrap().is_zero());
                    for v in &basis.kernel {
                        assert!(pa.mul_vec(v).unwrap().is_zero());
                        assert!(ap.mul_vec(v).unwrap().is_zero());
                    }
                    assert_eq!(n - pa.rank(), 1 + basis.kernel.len());
                    assert_eq!(ap.solve(&basis.x1).unwrap(), None);
                }
            }
        }
    }
}
