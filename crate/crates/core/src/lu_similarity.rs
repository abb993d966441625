//! Similarity of an invertible matrix to a product `L·U` of invertible
//! triangular matrices.
//!
//! A matrix has an LU factorization without row exchanges exactly when all
//! of its leading principal minors are nonzero, so the job is to find a
//! similarity that achieves that. Every candidate is certified by exact
//! recomputation before it is returned.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::matrix::ExactMatrix;

/// Seed used when the caller does not supply one.
pub const DEFAULT_SEED: u64 = 0x6e69_6c66;

/// `S^{-1} A1 S = L·U` with `L` lower triangular (nonzero diagonal) and `U`
/// unit upper triangular.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LuSimilarity {
    pub s: ExactMatrix,
    pub l: ExactMatrix,
    pub u: ExactMatrix,
}

fn leading_minors_nonzero(m: &ExactMatrix) -> Result<bool> {
    Ok(m.leading_principal_minors()?.iter().all(|d| !d.is_zero()))
}

/// Crout factorization: `L` carries the pivots, `U` has a unit diagonal.
/// Returns `None` when a pivot vanishes.
pub fn crout(m: &ExactMatrix) -> Option<(ExactMatrix, ExactMatrix)> {
    let field = m.field();
    let n = m.rows();
    let mut l = ExactMatrix::zeros(field, n, n);
    let mut u = ExactMatrix::identity(field, n);
    for j in 0..n {
        for i in j..n {
            let mut acc = m[(i, j)].clone();
            for k in 0..j {
                acc = &acc - &(&l[(i, k)] * &u[(k, j)]);
            }
            l[(i, j)] = acc;
        }
        if l[(j, j)].is_zero() {
            return None;
        }
        let pivot_inv = l[(j, j)].inv();
        for i in j + 1..n {
            let mut acc = m[(j, i)].clone();
            for k in 0..j {
                acc = &acc - &(&l[(j, k)] * &u[(k, i)]);
            }
            u[(j, i)] = &acc * &pivot_inv;
        }
    }
    Some((l, u))
}

/// Sweeps the diagonal; whenever the next leading minor vanishes, conjugates
/// by `I - E_(t,j)` for the first `j > t` that repairs it. Rows and columns
/// before `t` are untouched, so earlier minors survive. With `Σ` the Schur
/// complement of the leading `t x t` block, the new `(t,t)` pivot of `Σ` is
/// `Σ[j,t]`, and since `Σ` is invertible with a zero corner some such entry
/// is nonzero.
fn elementary_sweep(a1: &ExactMatrix) -> Result<Option<ExactMatrix>> {
    let field = a1.field();
    let n = a1.rows();
    let mut m = a1.clone();
    let mut s = ExactMatrix::identity(field, n);
    for t in 0..n {
        if !m.submatrix(0, 0, t + 1, t + 1).determinant()?.is_zero() {
            continue;
        }
        let mut fixed = false;
        for j in t + 1..n {
            let mut g = ExactMatrix::identity(field, n);
            g[(t, j)] = -field.one();
            let mut g_inv = ExactMatrix::identity(field, n);
            g_inv[(t, j)] = field.one();
            let cand = &(&g_inv * &m) * &g;
            if !cand.submatrix(0, 0, t + 1, t + 1).determinant()?.is_zero() {
                m = cand;
                s = &s * &g;
                fixed = true;
                break;
            }
        }
        if !fixed {
            return Ok(None);
        }
    }
    Ok(Some(s))
}

fn random_search(a1: &ExactMatrix, seed: u64) -> Result<Option<ExactMatrix>> {
    let field = a1.field();
    let n = a1.rows();
    if field.order().is_some_and(|q| q < 2 * n as u64) {
        return Ok(None);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..256 {
        let s = crate::testing::random_invertible(field, n, &mut rng);
        if leading_minors_nonzero(&a1.conjugate(&s)?)? {
            return Ok(Some(s));
        }
    }
    Ok(None)
}

pub fn lu_similarity(a1: &ExactMatrix) -> Result<LuSimilarity> {
    lu_similarity_seeded(a1, DEFAULT_SEED)
}

/// Finds the similarity in three stages: the identity, a deterministic
/// elementary sweep, then seeded random conjugations.
pub fn lu_similarity_seeded(a1: &ExactMatrix, seed: u64) -> Result<LuSimilarity> {
    if !a1.is_square() {
        return Err(Error::NotSquare(a1.rows(), a1.cols()));
    }
    let n = a1.rows();
    if a1.rank() < n {
        return Err(Error::Singular);
    }
    let field = a1.field();
    let s = if leading_minors_nonzero(a1)? {
        ExactMatrix::identity(field, n)
    } else if let Some(s) = elementary_sweep(a1)? {
        s
    } else if let Some(s) = random_search(a1, seed)? {
        s
    } else {
        return Err(Error::SearchExhausted);
    };
    let m = a1.conjugate(&s)?;
    let (l, u) = crout(&m).ok_or(Error::SearchExhausted)?;
    if &l * &u != m {
        return Err(Error::CertificateFailed("L·U".into()));
    }
    Ok(LuSimilarity { s, l, u })
}
