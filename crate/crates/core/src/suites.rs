//! Property suites that recheck the constructions by exact recomputation.
//!
//! Each suite returns a [`SuiteReport`] with one record per identity and
//! field, counting the instances tried and the instances that failed.

use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::block_factors::{
    factor_jk_j2, factor_nilpotent_normal_form, q1_block_sizes, q1_matrix, q2_block_sizes, q2_matrix,
    LastRow,
};
use crate::canonical::{partition_from_kernel_dims, NilpotentPartition};
use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::matrix::ExactMatrix;
use crate::roth::{solve_roth_e11case, solve_roth_j2case, solve_sylvester_generic};
use crate::sourour::{choose_x0, projection_ranks, sourour_form, SourourBranch};
use crate::testing::{random_invertible, random_non_square_zero, random_scalar};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub identity: String,
    pub field: FieldSpec,
    pub instances: usize,
    pub failures: usize,
    /// Description of the first failing instance.
    pub first_failure: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: String,
    pub checks: Vec<CheckRecord>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.failures == 0)
    }

    pub fn instances(&self) -> usize {
        self.checks.iter().map(|c| c.instances).sum()
    }
}

/// Accumulates outcomes keyed by `(identity, field)` in insertion order.
struct Recorder {
    suite: String,
    order: Vec<(String, FieldSpec)>,
    records: BTreeMap<(String, String), CheckRecord>,
}

impl Recorder {
    fn new(suite: &str) -> Self {
        Recorder {
            suite: suite.into(),
            order: Vec::new(),
            records: BTreeMap::new(),
        }
    }

    fn record(&mut self, identity: &str, field: FieldSpec, instance: impl FnOnce() -> String, ok: bool) {
        let key = (identity.to_string(), field.to_string());
        let rec = self.records.entry(key).or_insert_with(|| {
            self.order.push((identity.to_string(), field));
            CheckRecord {
                identity: identity.into(),
                field,
                instances: 0,
                failures: 0,
                first_failure: None,
            }
        });
        rec.instances += 1;
        if !ok {
            rec.failures += 1;
            if rec.first_failure.is_none() {
                rec.first_failure = Some(instance());
            }
        }
    }

    fn finish(mut self) -> SuiteReport {
        let checks = self
            .order
            .iter()
            .map(|(id, f)| self.records.remove(&(id.clone(), f.to_string())).expect("recorded"))
            .collect();
        SuiteReport {
            suite: self.suite,
            checks,
        }
    }
}

/// Factor pairs of `Dg[J_k(0), J_2(0)]` for `k = 1, ..., max_k`.
///
/// Odd `k`: product, nilpotency, both ranks equal to `k`, and the Jordan
/// structure of each factor, both through the permutations `Q1`, `Q2` and
/// through kernel dimensions of powers. Even `k`: product and nilpotency.
pub fn lemma1_suite(max_k: usize, fields: &[FieldSpec]) -> Result<SuiteReport> {
    let mut rec = Recorder::new("lemma1");
    for &f in fields {
        for k in 1..=max_k {
            let inst = || format!("k = {k}");
            let (n1, n2) = factor_jk_j2(k, f)?;
            let target = ExactMatrix::jordan_matrix(f, &[k, 2]);
            rec.record("Dg[J_k, J_2] = N1·N2", f, inst, &n1 * &n2 == target);
            rec.record(
                "N1, N2 nilpotent",
                f,
                inst,
                n1.is_nilpotent()? && n2.is_nilpotent()?,
            );
            if k % 2 == 0 {
                continue;
            }
            rec.record("rank N1 = rank N2 = k", f, inst, n1.rank() == k && n2.rank() == k);
            if k < 3 {
                continue;
            }
            let (a, b) = q1_block_sizes(k)?;
            let q1 = q1_matrix(k, f)?;
            rec.record(
                "Q1^-1 N1 Q1 = Dg[J_a, J_b]",
                f,
                inst,
                q1.is_permutation() && n1.conjugate(&q1)? == ExactMatrix::jordan_matrix(f, &[a, b]),
            );
            rec.record(
                "N1 has Jordan blocks (a, b)",
                f,
                inst,
                partition_from_kernel_dims(&n1)?.sizes() == [a, b],
            );
            let (c, d) = q2_block_sizes(k)?;
            let q2 = q2_matrix(k, f)?;
            rec.record(
                "Q2^-1 N2 Q2 = Dg[J_c, J_d]",
                f,
                inst,
                q2.is_permutation() && n2.conjugate(&q2)? == ExactMatrix::jordan_matrix(f, &[c, d]),
            );
            rec.record(
                "N2 has Jordan blocks (c, d)",
                f,
                inst,
                partition_from_kernel_dims(&n2)?.sizes() == [c, d],
            );
        }
    }
    Ok(rec.finish())
}

/// Normal-form factorizations for every partition of `n` in `sizes`.
/// A partition equal to `[2]` must be refused.
pub fn lemma2_suite(sizes: &[usize], fields: &[FieldSpec]) -> Result<SuiteReport> {
    let mut rec = Recorder::new("lemma2");
    for &f in fields {
        for &n in sizes {
            for p in NilpotentPartition::all_of(n) {
                let inst = || format!("partition {:?}", p.sizes());
                let result = factor_nilpotent_normal_form(&p, f);
                if p.sizes() == [2] {
                    rec.record(
                        "J_2(0) has no normal form",
                        f,
                        inst,
                        result == Err(Error::ExceptionalCase),
                    );
                    continue;
                }
                let nf = match result {
                    Ok(nf) => nf,
                    Err(_) => {
                        rec.record("normal form exists", f, inst, false);
                        continue;
                    }
                };
                let j = p.jordan_matrix(f);
                rec.record(
                    "S^-1 J S = F1·F2",
                    f,
                    inst,
                    j.conjugate(&nf.similarity)? == &nf.left * &nf.right,
                );
                rec.record(
                    "F1, F2 nilpotent",
                    f,
                    inst,
                    nf.left.is_nilpotent()? && nf.right.is_nilpotent()?,
                );
                rec.record(
                    "F1 first row and last column zero",
                    f,
                    inst,
                    nf.left.row_is_zero(0) && nf.left.column_is_zero(n - 1),
                );
                let last = nf.right.row(n - 1);
                let shape_ok = match nf.right_last_row {
                    LastRow::Zero => last.iter().all(|e| e.is_zero()),
                    LastRow::E1T => {
                        last[0].is_one() && last[1..].iter().all(|e| e.is_zero())
                    }
                };
                rec.record("F2 last row is 0 or e_1^T", f, inst, shape_ok);
            }
        }
    }
    Ok(rec.finish())
}

/// Bordered similarity forms of random matrices that are not square-zero,
/// plus the rank equalities of the projection used to build them.
pub fn sourour_suite(
    per_size: usize,
    sizes: &[usize],
    fields: &[FieldSpec],
    seed: u64,
) -> Result<SuiteReport> {
    let mut rec = Recorder::new("sourour");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for &f in fields {
        for &n in sizes {
            for i in 0..per_size {
                let a = random_non_square_zero(f, n, &mut rng);
                let inst = || format!("n = {n}, sample {i}: {a}");
                let form = match sourour_form(&a) {
                    Ok(form) => form,
                    Err(_) => {
                        rec.record("bordered form exists", f, inst, false);
                        continue;
                    }
                };
                rec.record(
                    "S^-1 A S = [[λ, c^T], [b, D]]",
                    f,
                    inst,
                    a.conjugate(&form.s)? == form.bordered(),
                );
                rec.record("rank D = rank A - 1", f, inst, form.d.rank() + 1 == a.rank());
                rec.record("b ∈ R(D)", f, inst, form.d.solve(&form.b)?.is_some());
                rec.record("c ∈ R(D^T)", f, inst, form.d.transpose().solve(&form.c)?.is_some());
                if let SourourBranch::Alpha1 { projection, .. } = &form.branch {
                    let r = a.rank();
                    rec.record(
                        "rank PA = rank AP = rank PAP = rank A - 1",
                        f,
                        inst,
                        projection_ranks(&a, projection) == (r - 1, r - 1, r - 1),
                    );
                }
            }
            let square_zero = ExactMatrix::unit(f, n, n, n - 1, 0);
            rec.record(
                "square-zero input rejected",
                f,
                || format!("E_({n},1)"),
                sourour_form(&square_zero) == Err(Error::SquareZero)
                    && choose_x0(&square_zero) == Err(Error::SquareZero),
            );
        }
    }
    Ok(rec.finish())
}

/// Closed-form Roth solutions against the generic Sylvester solver.
pub fn roth_suite(count: usize, fields: &[FieldSpec], seed: u64) -> Result<SuiteReport> {
    let mut rec = Recorder::new("roth");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for &f in fields {
        for i in 0..count {
            let k = 1 + i % 5;
            let a1 = random_invertible(f, k, &mut rng);
            let shown = a1.to_string();
            let inst = || format!("sample {i}, k = {k}: {shown}");
            let (a0, b, x) = if i % 2 == 0 {
                let a0 = ExactMatrix::unit(f, 2, 2, 0, 1);
                let b = -&ExactMatrix::unit(f, k, 2, k - 1, 1);
                (a0, b, solve_roth_j2case(&a1)?)
            } else {
                // A0 has a zero first row and B = A1·E_11 / u11.
                let n0 = 3 + i % 3;
                let mut a0 = ExactMatrix::jordan_block(f, n0);
                for c in 0..n0 {
                    a0[(0, c)] = f.zero();
                }
                let mut u11 = random_scalar(f, &mut rng);
                if u11.is_zero() {
                    u11 = f.one();
                }
                let mut e11 = ExactMatrix::zeros(f, k, n0);
                e11[(0, 0)] = u11.inv();
                let b = &a1 * &e11;
                (a0, b, solve_roth_e11case(&u11, k, n0)?)
            };
            rec.record("structured X solves X·A0 - A1·X = B", f, inst, x.satisfies(&a0, &a1, &b));
            // A0 nilpotent and A1 invertible share no eigenvalue, so X is unique.
            let generic = solve_sylvester_generic(&a0, &a1, &b)?;
            rec.record(
                "generic solver agrees",
                f,
                inst,
                generic.is_some_and(|g| g == x),
            );
            let big = ExactMatrix::assemble(&[
                vec![a0.clone(), ExactMatrix::zeros(f, a0.rows(), k)],
                vec![b.clone(), a1.clone()],
            ])?;
            rec.record(
                "[[I,0],[X,I]] block-diagonalizes",
                f,
                inst,
                big.conjugate(&x.transform())? == ExactMatrix::block_diag(f, &[a0, a1]),
            );
        }
    }
    Ok(rec.finish())
}
