//! Solutions of `X·A0 - A1·X = B`, which make `[[A0, 0], [B, A1]]` similar to
//! `Dg[A0, A1]` through `[[I, 0], [X, I]]`.
//!
//! The factorizer only uses the two closed forms. The generic solver is an
//! independent route kept for cross-checking them.

use crate::error::{Error, Result};
use crate::field::FieldScalar;
use crate::matrix::{ColumnVector, ExactMatrix};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RothSolution {
    pub x: ExactMatrix,
}

impl RothSolution {
    /// Residual check `X·A0 - A1·X == B`.
    pub fn satisfies(&self, a0: &ExactMatrix, a1: &ExactMatrix, b: &ExactMatrix) -> bool {
        match (self.x.try_mul(a0), a1.try_mul(&self.x)) {
            (Ok(xa), Ok(ax)) => xa.try_sub(&ax).is_ok_and(|d| &d == b),
            _ => false,
        }
    }

    /// `[[I, 0], [X, I]]`; conjugating by it block-diagonalizes the
    /// lower-triangular block matrix.
    pub fn transform(&self) -> ExactMatrix {
        let field = self.x.field();
        let (k, m) = self.x.shape();
        let mut t = ExactMatrix::identity(field, m + k);
        t.set_block(m, 0, &self.x);
        t
    }

    /// `[[I, 0], [-X, I]]`.
    pub fn inverse_transform(&self) -> ExactMatrix {
        RothSolution { x: -&self.x }.transform()
    }
}

/// Solves for the `k·m` entries of `X` as one linear system.
pub fn solve_sylvester_generic(
    a0: &ExactMatrix,
    a1: &ExactMatrix,
    b: &ExactMatrix,
) -> Result<Option<RothSolution>> {
    let field = a0.field();
    let (m, k) = (a0.rows(), a1.rows());
    if !a0.is_square() || !a1.is_square() || b.shape() != (k, m) {
        return Err(Error::DimensionMismatch {
            op: "sylvester",
            left: (k, m),
            right: b.shape(),
        });
    }
    if a1.field() != field || b.field() != field {
        return Err(Error::FieldMismatch(field, a1.field()));
    }
    let var = |i: usize, j: usize| i * m + j;
    let mut sys = ExactMatrix::zeros(field, k * m, k * m);
    let mut rhs = Vec::with_capacity(k * m);
    for r in 0..k {
        for c in 0..m {
            let eq = var(r, c);
            for l in 0..m {
                let v = &sys[(eq, var(r, l))] + &a0[(l, c)];
                sys[(eq, var(r, l))] = v;
            }
            for l in 0..k {
                let v = &sys[(eq, var(l, c))] - &a1[(r, l)];
                sys[(eq, var(l, c))] = v;
            }
            rhs.push(b[(r, c)].clone());
        }
    }
    let rhs = ColumnVector::from_entries(field, rhs)?;
    let Some(sol) = sys.solve(&rhs)? else {
        return Ok(None);
    };
    let x = ExactMatrix::from_entries(field, k, m, sol.entries().to_vec())?;
    Ok(Some(RothSolution { x }))
}

/// `X = [0, x]` with `A1·x = e_k`, solving
/// `X·[[0, 1], [0, 0]] - A1·X = -E_(k,2)`.
pub fn solve_roth_j2case(a1: &ExactMatrix) -> Result<RothSolution> {
    let field = a1.field();
    let k = a1.rows();
    if !a1.is_square() {
        return Err(Error::NotSquare(a1.rows(), a1.cols()));
    }
    if k == 0 {
        return Err(Error::UnsupportedSize(0));
    }
    let x = a1
        .solve(&ColumnVector::standard(field, k, k - 1))?
        .filter(|_| a1.rank() == k)
        .ok_or(Error::Singular)?;
    let mut big_x = ExactMatrix::zeros(field, k, 2);
    big_x.set_block(0, 1, &x.to_matrix());
    Ok(RothSolution { x: big_x })
}

/// `k x n0` matrix with `-1/u11` at `(1, 1)` and zeros elsewhere.
pub fn solve_roth_e11case(u11: &FieldScalar, k: usize, n0: usize) -> Result<RothSolution> {
    let field = u11.field();
    if k == 0 || n0 == 0 {
        return Err(Error::UnsupportedSize(0));
    }
    let mut x = ExactMatrix::zeros(field, k, n0);
    x[(0, 0)] = -u11.try_inv()?;
    Ok(RothSolution { x })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldSpec;
    use crate::testing::random_invertible;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    const Q: FieldSpec = FieldSpec::Rationals;

    fn sup_j2(f: FieldSpec) -> ExactMatrix {
        ExactMatrix::unit(f, 2, 2, 0, 1)
    }

    #[test]
    fn generic_examples() {
        let z = ExactMatrix::zeros(Q, 2, 2);
        let i = ExactMatrix::identity(Q, 2);
        let sol = solve_sylvester_generic(&z, &i, &z).unwrap().unwrap();
        assert!(sol.x.is_zero());
        assert_eq!(solve_sylvester_generic(&i, &i, &i).unwrap(), None);
    }

    #[test]
    fn j2case_examples() {
        let sol = solve_roth_j2case(&ExactMatrix::identity(Q, 2)).unwrap();
        assert_eq!(sol.x, ExactMatrix::unit(Q, 2, 2, 1, 1));
        let d = ExactMatrix::from_i64_rows(Q, &[vec![2, 0], vec![0, 3]]);
        let sol = solve_roth_j2case(&d).unwrap();
        assert_eq!(sol.x.column(1)[1], Q.from_ratio(1, 3).unwrap());
        assert!(sol.x.column(1)[0].is_zero());
        assert_eq!(
            solve_roth_j2case(&ExactMatrix::jordan_block(Q, 2)).unwrap_err(),
            Error::Singular
        );
    }

    #[test]
    fn j2case_matches_generic_over_gf7() {
        let f7 = FieldSpec::PrimeField(7);
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let a1 = random_invertible(f7, 4, &mut rng);
        let b = -&ExactMatrix::unit(f7, 4, 2, 3, 1);
        let sol = solve_roth_j2case(&a1).unwrap();
        assert!(sol.satisfies(&sup_j2(f7), &a1, &b));
        let generic = solve_sylvester_generic(&sup_j2(f7), &a1, &b).unwrap().unwrap();
        assert!(generic.satisfies(&sup_j2(f7), &a1, &b));
        // A1 invertible and A0 nilpotent share no eigenvalue, so X is unique.
        assert_eq!(generic, sol);
    }

    #[test]
    fn e11case_examples() {
        let sol = solve_roth_e11case(&Q.one(), 2, 3).unwrap();
        assert_eq!(sol.x[(0, 0)], Q.from_i64(-1));
        let sol = solve_roth_e11case(&Q.from_i64(2), 1, 1).unwrap();
        assert_eq!(sol.x[(0, 0)], Q.from_ratio(-1, 2).unwrap());
        assert_eq!(solve_roth_e11case(&Q.zero(), 1, 1).unwrap_err(), Error::DivisionByZero);
    }

    #[test]
    fn transform_block_diagonalizes() {
        let f5 = FieldSpec::PrimeField(5);
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let a1 = random_invertible(f5, 3, &mut rng);
        let a0 = sup_j2(f5);
        let b = -&ExactMatrix::unit(f5, 3, 2, 2, 1);
        let sol = solve_roth_j2case(&a1).unwrap();
        let big = ExactMatrix::assemble(&[
            vec![a0.clone(), ExactMatrix::zeros(f5, 2, 3)],
            vec![b, a1.clone()],
        ])
        .unwrap();
        let diag = &(&sol.inverse_transform() * &big) * &sol.transform();
        assert_eq!(diag, ExactMatrix::block_diag(f5, &[a0, a1]));
    }
}
