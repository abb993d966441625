//! Executable checks of two known defects in earlier nilpotent-factorization
//! arguments. Each check computes its verdict from exact arithmetic.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::format::MatrixFile;
use crate::matrix::{ColumnVector, ExactMatrix};
use crate::sourour::{build_alpha1, choose_x0, projection_ranks};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    ConfirmsPaper,
    Contradicts,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ForensicReport {
    pub check_name: String,
    pub claim: String,
    pub verdict: Verdict,
    pub witness: BTreeMap<String, MatrixFile>,
    pub measurements: BTreeMap<String, Value>,
}

impl ForensicReport {
    pub fn confirms(&self) -> bool {
        self.verdict == Verdict::ConfirmsPaper
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }
}

fn verdict(holds: bool) -> Verdict {
    if holds {
        Verdict::ConfirmsPaper
    } else {
        Verdict::Contradicts
    }
}

/// `[[0, J_2(0)], [J_k(0), 0]]` of size `k + 2`.
pub fn wu_right_factor(k: usize, field: FieldSpec) -> ExactMatrix {
    let mut m = ExactMatrix::zeros(field, k + 2, k + 2);
    m.set_block(0, k, &ExactMatrix::jordan_block(field, 2));
    m.set_block(2, 0, &ExactMatrix::jordan_block(field, k));
    m
}

pub fn check_wu_counterexample(k: usize) -> Result<ForensicReport> {
    check_wu_counterexample_over(k, FieldSpec::Rationals)
}

/// Claim: the matrix `[[0, J_2(0)], [J_k(0), 0]]` is not nilpotent.
pub fn check_wu_counterexample_over(k: usize, field: FieldSpec) -> Result<ForensicReport> {
    if k % 2 == 0 {
        return Err(Error::InvalidK(k));
    }
    let m = wu_right_factor(k, field);
    let nilpotent = m.is_nilpotent()?;
    let mut witness = BTreeMap::new();
    witness.insert("right_factor".into(), MatrixFile::from_matrix(&m)?);
    let mut measurements = BTreeMap::new();
    measurements.insert("k".into(), json!(k));
    measurements.insert("field".into(), json!(field.to_string()));
    measurements.insert("nilpotent".into(), json!(nilpotent));
    Ok(ForensicReport {
        check_name: format!("wu_right_factor_k{k}"),
        claim: format!("[[0, J2(0)], [J{k}(0), 0]] is not nilpotent"),
        verdict: verdict(!nilpotent),
        witness,
        measurements,
    })
}

/// Claim: choosing the projection's range to contain `e0` breaks the rank
/// equalities (`rank PAP < rank AP = rank PA` for `A = J_3(0)`), while a
/// projection built from a valid `x0` satisfies
/// `rank PA = rank AP = rank PAP = rank A - 1`.
pub fn check_sourour_projection_flaw() -> Result<ForensicReport> {
    let field = FieldSpec::Rationals;
    let a = ExactMatrix::jordan_block(field, 3);
    let e0 = ColumnVector::standard(field, 3, 0);
    let x1 = a.mul_vec(&e0)?;
    // P projects along span{A e0} onto a complement that contains e0.
    let complement = [e0.clone(), ColumnVector::standard(field, 3, 2)];
    let basis = ExactMatrix::from_columns(field, 3, &[x1, complement[0].clone(), complement[1].clone()])?;
    let mut keep = ExactMatrix::identity(field, 3);
    keep[(0, 0)] = field.zero();
    let flawed_p = &(&basis * &keep) * &basis.inverse()?;
    let (f_pa, f_ap, f_pap) = projection_ranks(&a, &flawed_p);

    let x0 = choose_x0(&a)?;
    let repaired = build_alpha1(&a, &x0)?;
    let (r_pa, r_ap, r_pap) = projection_ranks(&a, &repaired.projection);
    let r = a.rank();

    let flaw_shown = f_pap < f_ap && f_ap == f_pa;
    let repair_holds = r_pa == r - 1 && r_ap == r - 1 && r_pap == r - 1;

    let mut witness = BTreeMap::new();
    witness.insert("A".into(), MatrixFile::from_matrix(&a)?);
    witness.insert("P_flawed".into(), MatrixFile::from_matrix(&flawed_p)?);
    witness.insert("P_repaired".into(), MatrixFile::from_matrix(&repaired.projection)?);
    let mut measurements = BTreeMap::new();
    measurements.insert("rank_A".into(), json!(r));
    measurements.insert("flawed_ranks_PA_AP_PAP".into(), json!([f_pa, f_ap, f_pap]));
    measurements.insert("repaired_ranks_PA_AP_PAP".into(), json!([r_pa, r_ap, r_pap]));
    measurements.insert(
        "repaired_x0".into(),
        json!(x0.entries().iter().map(|e| e.to_string()).collect::<Vec<_>>()),
    );
    Ok(ForensicReport {
        check_name: "projection_rank_flaw".into(),
        claim: "with e0 in R(P), rank(PAP) < rank(AP) = rank(PA) for A = J3(0); \
                with x0 outside R(P), rank(PA) = rank(AP) = rank(PAP) = rank(A) - 1"
            .into(),
        verdict: verdict(flaw_shown && repair_holds),
        witness,
        measurements,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    /// A 0/1 matrix is nilpotent iff its support digraph has no cycle.
    fn support_is_acyclic(m: &ExactMatrix) -> bool {
        let n = m.rows();
        let mut indeg: Vec<usize> = (0..n)
            .map(|j| (0..n).filter(|&i| !m[(i, j)].is_zero()).count())
            .collect();
        let mut stack: Vec<usize> = (0..n).filter(|&j| indeg[j] == 0).collect();
        let mut seen = 0;
        while let Some(i) = stack.pop() {
            seen += 1;
            for j in 0..n {
                if !m[(i, j)].is_zero() {
                    indeg[j] -= 1;
                    if indeg[j] == 0 {
                        stack.push(j);
                    }
                }
            }
        }
        seen == n
    }

    #[test]
    fn k7_is_not_nilpotent_over_every_field() {
        for f in [FieldSpec::Rationals, FieldSpec::PrimeField(2), FieldSpec::PrimeField(7)] {
            let r = check_wu_counterexample_over(7, f).unwrap();
            assert_eq!(r.verdict, Verdict::ConfirmsPaper);
            assert_eq!(r.measurements["nilpotent"], json!(false));
        }
    }

    #[test]
    fn other_k_agree_with_cycle_oracle() {
        for k in (1..=15).step_by(2) {
            let r = check_wu_counterexample(k).unwrap();
            let acyclic = support_is_acyclic(&wu_right_factor(k, FieldSpec::Rationals));
            assert_eq!(r.measurements["nilpotent"], json!(acyclic), "k = {k}");
        }
        assert_eq!(check_wu_counterexample(4).unwrap_err(), Error::InvalidK(4));
    }

    #[test]
    fn projection_flaw_ranks() {
        let r = check_sourour_projection_flaw().unwrap();
        assert!(r.confirms());
        assert_eq!(r.measurements["flawed_ranks_PA_AP_PAP"], json!([1, 1, 0]));
        assert_eq!(r.measurements["repaired_ranks_PA_AP_PAP"], json!([1, 1, 1]));
        let p = r.witness["P_flawed"].to_matrix().unwrap();
        let expected = ExactMatrix::from_i64_rows(
            FieldSpec::Rationals,
            &[vec![1, 0, 0], vec![0, 0, 0], vec![0, 0, 1]],
        );
        assert_eq!(p, expected);
    }

    #[test]
    fn reports_round_trip() {
        for r in [check_wu_counterexample(7).unwrap(), check_sourour_projection_flaw().unwrap()] {
            assert_eq!(ForensicReport::from_json(&r.to_json()).unwrap(), r);
        }
    }
}
