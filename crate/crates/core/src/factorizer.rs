//! Factorization of a singular matrix `A = N1·N2` with `N1`, `N2` nilpotent.
//!
//! The input is split as `S^{-1} A S = Dg[A0, A1]` with `A0` nilpotent and
//! `A1` invertible. The block pair is factored according to the shape of
//! `A0`, and every similarity on the way is collected into a single `V` with
//! `A = V·M1·M2·V^{-1}`. The returned factors are `V·Mi·V^{-1}`, checked
//! against `A` before they are handed back.

use serde::{Deserialize, Serialize};

use crate::block_factors::{factor_nilpotent_normal_form, LastRow};
use crate::canonical::{fitting_split, nilpotent_jcf, NilpotentPartition};
use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::lu_similarity::{lu_similarity_seeded, LuSimilarity, DEFAULT_SEED};
use crate::matrix::ExactMatrix;
use crate::roth::{solve_roth_e11case, solve_roth_j2case};

/// Which construction produced the factors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Route {
    /// `A` itself is nilpotent.
    Nilpotent,
    /// The nilpotent part is a zero block.
    CaseZeroBlock,
    /// The nilpotent part is a nonzero `2 x 2` block.
    CaseJ2,
    /// The nilpotent part is nonzero and at least `3 x 3`.
    CaseGeneral,
}

/// Exact evidence recomputed on the final factors.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub product_ok: bool,
    pub nilpotency_index_1: usize,
    pub nilpotency_index_2: usize,
    pub rank_1: usize,
    pub rank_2: usize,
    pub route: Route,
    /// A coupling block had to be removed by a block-triangular similarity.
    pub roth_correction: bool,
    /// Size of the nilpotent part of `A`.
    pub nilpotent_size: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    pub n1: ExactMatrix,
    pub n2: ExactMatrix,
    pub certificate: Certificate,
}

/// `V^{-1} A V = M1·M2`, before conjugating back.
struct Assembled {
    m1: ExactMatrix,
    m2: ExactMatrix,
    v: ExactMatrix,
    route: Route,
    roth_correction: bool,
    nilpotent_size: usize,
}

/// A pair `(M1, M2)` of nilpotent factors of a block-diagonal target,
/// together with the similarity `W` with `W^{-1} · target · W = M1·M2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockPair {
    pub m1: ExactMatrix,
    pub m2: ExactMatrix,
    pub w: ExactMatrix,
    pub roth_correction: bool,
}

pub fn factor(a: &ExactMatrix) -> Result<Factorization> {
    factor_seeded(a, DEFAULT_SEED)
}

/// Same as [`factor`] with the seed forwarded to the LU-similarity search.
pub fn factor_seeded(a: &ExactMatrix, seed: u64) -> Result<Factorization> {
    if !a.is_square() {
        return Err(Error::NotSquare(a.rows(), a.cols()));
    }
    let n = a.rows();
    if a.rank() == n {
        return Err(Error::NotSingular);
    }
    let field = a.field();
    let assembled = if a.is_nilpotent()? {
        let (s, partition) = nilpotent_jcf(a)?;
        let nf = factor_nilpotent_normal_form(&partition, field)?;
        Assembled {
            m1: nf.left,
            m2: nf.right,
            v: &s * &nf.similarity,
            route: Route::Nilpotent,
            roth_correction: false,
            nilpotent_size: n,
        }
    } else {
        let split = fitting_split(a)?;
        let (route, pair) = if split.a0.is_zero() {
            (Route::CaseZeroBlock, factor_case_zero_block_seeded(split.n0, &split.a1, seed)?)
        } else if split.n0 == 2 {
            let (s, _) = nilpotent_jcf(&split.a0)?;
            let swap = ExactMatrix::permutation(field, &[1, 0]);
            let pair = factor_case_j2_seeded(&split.a1, seed)?;
            let outer = ExactMatrix::block_diag(
                field,
                &[&s * &swap, ExactMatrix::identity(field, split.a1.rows())],
            );
            (Route::CaseJ2, BlockPair { w: &outer * &pair.w, ..pair })
        } else {
            let (s, partition) = nilpotent_jcf(&split.a0)?;
            let pair = factor_case_general_seeded(&partition, &split.a1, seed)?;
            let outer =
                ExactMatrix::block_diag(field, &[s, ExactMatrix::identity(field, split.a1.rows())]);
            (Route::CaseGeneral, BlockPair { w: &outer * &pair.w, ..pair })
        };
        Assembled {
            m1: pair.m1,
            m2: pair.m2,
            v: &split.s * &pair.w,
            route,
            roth_correction: pair.roth_correction,
            nilpotent_size: split.n0,
        }
    };
    certify(a, assembled)
}

fn certify(a: &ExactMatrix, asm: Assembled) -> Result<Factorization> {
    let v_inv = asm.v.inverse()?;
    let n1 = &(&asm.v * &asm.m1) * &v_inv;
    let n2 = &(&asm.v * &asm.m2) * &v_inv;
    let fail = |w: &str| Err(Error::CertificateFailed(w.into()));
    if &n1 * &n2 != *a {
        return fail("N1·N2 = A");
    }
    let (Some(i1), Some(i2)) = (n1.nilpotency_index()?, n2.nilpotency_index()?) else {
        return fail("nilpotency");
    };
    let certificate = Certificate {
        product_ok: true,
        nilpotency_index_1: i1,
        nilpotency_index_2: i2,
        rank_1: n1.rank(),
        rank_2: n2.rank(),
        route: asm.route,
        roth_correction: asm.roth_correction,
        nilpotent_size: asm.nilpotent_size,
    };
    Ok(Factorization { n1, n2, certificate })
}

impl Factorization {
    /// Recomputes product and nilpotency against `a` from scratch.
    pub fn verify(&self, a: &ExactMatrix) -> bool {
        let n = a.rows();
        let vanishes = |m: &ExactMatrix| m.pow(n as u64).is_ok_and(|p| p.is_zero());
        self.n1.try_mul(&self.n2).is_ok_and(|p| &p == a) && vanishes(&self.n1) && vanishes(&self.n2)
    }
}

fn lu_for(a1: &ExactMatrix, seed: u64) -> Result<LuSimilarity> {
    lu_similarity_seeded(a1, seed)
}

pub fn factor_case_zero_block(m: usize, a1: &ExactMatrix) -> Result<BlockPair> {
    factor_case_zero_block_seeded(m, a1, DEFAULT_SEED)
}

/// Target `Dg[0_m, A1]`. With `A1 ~ L·U`, `M1` holds `L` shifted down by
/// `m` rows and `M2` holds `U` shifted right by `m` columns; both are
/// strictly triangular.
pub fn factor_case_zero_block_seeded(m: usize, a1: &ExactMatrix, seed: u64) -> Result<BlockPair> {
    if m == 0 {
        return Err(Error::UnsupportedSize(0));
    }
    let field = a1.field();
    let k = a1.rows();
    let n = m + k;
    let lu = lu_for(a1, seed)?;
    let mut m1 = ExactMatrix::zeros(field, n, n);
    m1.set_block(m, 0, &lu.l);
    let mut m2 = ExactMatrix::zeros(field, n, n);
    m2.set_block(0, m, &lu.u);
    let w = ExactMatrix::block_diag(field, &[ExactMatrix::identity(field, m), lu.s]);
    Ok(BlockPair {
        m1,
        m2,
        w,
        roth_correction: false,
    })
}

pub fn factor_case_j2(a1: &ExactMatrix) -> Result<BlockPair> {
    factor_case_j2_seeded(a1, DEFAULT_SEED)
}

/// Target `Dg[[[0, 1], [0, 0]], A1]`.
///
/// The left factor carries `L` in rows `3..n`, columns `2..n-1` with the
/// border `+1` at `(1, 1)`, `(1, n)` and `-1` at `(n, 1)`, `(n, n)`; the
/// right factor carries `1` at `(1, 2)` and `U` in rows `2..n-1`, columns
/// `3..n`. Their product is `[[J, 0], [-E_(k,2), L·U]]`, and the coupling
/// block is cleared by `[[I, 0], [X, I]]`.
pub fn factor_case_j2_seeded(a1: &ExactMatrix, seed: u64) -> Result<BlockPair> {
    let field = a1.field();
    let k = a1.rows();
    if k == 0 {
        return Err(Error::UnsupportedSize(2));
    }
    let n = k + 2;
    let lu = lu_for(a1, seed)?;
    let one = field.one();
    let mut m1 = ExactMatrix::zeros(field, n, n);
    m1[(0, 0)] = one.clone();
    m1[(0, n - 1)] = one.clone();
    m1.set_block(2, 1, &lu.l);
    m1[(n - 1, 0)] = -&one;
    m1[(n - 1, n - 1)] = -&one;
    let mut m2 = ExactMatrix::zeros(field, n, n);
    m2[(0, 1)] = one;
    m2.set_block(1, 2, &lu.u);
    let roth = solve_roth_j2case(&(&lu.l * &lu.u))?;
    let inner = ExactMatrix::block_diag(field, &[ExactMatrix::identity(field, 2), lu.s]);
    Ok(BlockPair {
        m1,
        m2,
        w: &inner * &roth.inverse_transform(),
        roth_correction: true,
    })
}

pub fn factor_case_general(partition: &NilpotentPartition, a1: &ExactMatrix) -> Result<BlockPair> {
    factor_case_general_seeded(partition, a1, DEFAULT_SEED)
}

/// Target `Dg[J, A1]` with `J` the Jordan matrix of `partition`.
///
/// With `J ~ F1·F2` in normal form and `A1 ~ L·U`, the left factor places
/// `L` so that its first column lands in the last (zero) column of `F1`, and
/// the right factor places `U` so that its first row lands in the last row
/// of `F2`. The product is `[[F1·F2, 0], [B, L·U]]` with `B = l·f`, `l` the
/// first column of `L` and `f` the last row of `F2`. When `f = e_1^T`, the
/// first row of `F1·F2` vanishes and `X = -E_11 / u11` removes `B`.
pub fn factor_case_general_seeded(
    partition: &NilpotentPartition,
    a1: &ExactMatrix,
    seed: u64,
) -> Result<BlockPair> {
    let n0 = partition.n();
    if n0 < 3 {
        return Err(Error::UnsupportedSize(n0));
    }
    let field: FieldSpec = a1.field();
    let k = a1.rows();
    if k == 0 {
        return Err(Error::UnsupportedSize(n0));
    }
    let n = n0 + k;
    let nf = factor_nilpotent_normal_form(partition, field)?;
    let lu = lu_for(a1, seed)?;
    let mut m1 = ExactMatrix::zeros(field, n, n);
    m1.set_block(0, 0, &nf.left);
    m1.set_block(n0, n0 - 1, &lu.l);
    let mut m2 = ExactMatrix::zeros(field, n, n);
    m2.set_block(0, 0, &nf.right);
    m2.set_block(n0 - 1, n0, &lu.u);
    let inner = ExactMatrix::block_diag(field, &[nf.similarity, lu.s]);
    match nf.right_last_row {
        LastRow::Zero => Ok(BlockPair {
            m1,
            m2,
            w: inner,
            roth_correction: false,
        }),
        LastRow::E1T => {
            let roth = solve_roth_e11case(&lu.u[(0, 0)], k, n0)?;
            Ok(BlockPair {
                m1,
                m2,
                w: &inner * &roth.inverse_transform(),
                roth_correction: true,
            })
        }
    }
}
