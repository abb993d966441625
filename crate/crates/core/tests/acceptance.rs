//! Acceptance run: eight criteria, one PASS/FAIL line each. All comparisons
//! are exact. Exits nonzero if any criterion fails.

use std::process::ExitCode;
use std::time::Instant;

use nilfactor::block_factors::{
    factor_jk_j2, factor_nilpotent_normal_form, q1_block_sizes, q1_matrix, q2_block_sizes, q2_matrix,
    LastRow,
};
use nilfactor::canonical::NilpotentPartition;
use nilfactor::forensics::{check_sourour_projection_flaw, check_wu_counterexample_over, Verdict};
use nilfactor::roth::{solve_roth_e11case, solve_roth_j2case, solve_sylvester_generic};
use nilfactor::sourour::sourour_form;
use nilfactor::testing::{random_invertible, random_non_square_zero, random_scalar, random_singular};
use nilfactor::{factor, Error, ExactMatrix, FieldScalar, FieldSpec, Route};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const Q: FieldSpec = FieldSpec::Rationals;

/// Outcome of one criterion: `Err` carries the first violation.
type Outcome = std::result::Result<String, String>;

fn ensure(cond: bool, what: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(what())
    }
}

// ---- oracles kept independent of the library's elimination code ----

fn naive_mul(a: &ExactMatrix, b: &ExactMatrix) -> ExactMatrix {
    let f = a.field();
    let mut out = ExactMatrix::zeros(f, a.rows(), b.cols());
    for i in 0..a.rows() {
        for j in 0..b.cols() {
            let mut acc = f.zero();
            for t in 0..a.cols() {
                acc = &acc + &(&a[(i, t)] * &b[(t, j)]);
            }
            out[(i, j)] = acc;
        }
    }
    out
}

/// `M^n = 0`, checked as `M^(2^s) = 0` with `2^s >= n` by repeated squaring.
fn vanishes_at_n(m: &ExactMatrix) -> bool {
    let n = m.rows();
    let mut p = m.clone();
    let mut power = 1;
    while power < n {
        p = naive_mul(&p, &p);
        power *= 2;
    }
    p.is_zero()
}

fn certified(a: &ExactMatrix, n1: &ExactMatrix, n2: &ExactMatrix) -> bool {
    naive_mul(n1, n2) == *a && vanishes_at_n(n1) && vanishes_at_n(n2)
}

/// Determinant by cofactor expansion.
fn cofactor_det(m: &ExactMatrix) -> FieldScalar {
    let n = m.rows();
    let f = m.field();
    if n == 0 {
        return f.one();
    }
    let mut acc = f.zero();
    for j in 0..n {
        let mut minor = ExactMatrix::zeros(f, n - 1, n - 1);
        for r in 1..n {
            let mut cc = 0;
            for c in (0..n).filter(|&c| c != j) {
                minor[(r - 1, cc)] = m[(r, c)].clone();
                cc += 1;
            }
        }
        let term = &m[(0, j)] * &cofactor_det(&minor);
        acc = if j % 2 == 0 { &acc + &term } else { &acc - &term };
    }
    acc
}

/// Jordan block sizes of a nilpotent matrix from the ranks of its powers:
/// the number of blocks of size at least `j` is `r_{j-1} - r_j`.
fn jordan_sizes(m: &ExactMatrix) -> Vec<usize> {
    let n = m.rows();
    let mut ranks = vec![n];
    let mut p = ExactMatrix::identity(m.field(), n);
    for _ in 0..=n {
        p = naive_mul(&p, m);
        ranks.push(p.rank());
    }
    let at_least: Vec<usize> = (1..=n).map(|j| ranks[j - 1] - ranks[j]).collect();
    let mut sizes = Vec::new();
    for j in (1..=n).rev() {
        let exact = at_least[j - 1] - at_least.get(j).copied().unwrap_or(0);
        sizes.extend(std::iter::repeat(j).take(exact));
    }
    sizes
}

fn gf2_matrix(n: usize, bits: u32) -> ExactMatrix {
    let rows: Vec<Vec<i64>> = (0..n)
        .map(|i| (0..n).map(|j| ((bits >> (n * i + j)) & 1) as i64).collect())
        .collect();
    ExactMatrix::from_i64_rows(FieldSpec::PrimeField(2), &rows)
}

// ---- criteria ----

fn criterion_1() -> Outcome {
    let mut total = 0;
    let mut certified_count = 0;
    let mut singular_3 = 0;
    for n in 1..=3usize {
        for bits in 0u32..(1 << (n * n)) {
            total += 1;
            let a = gf2_matrix(n, bits);
            let singular = cofactor_det(&a).is_zero();
            if n == 3 && singular {
                singular_3 += 1;
            }
            let exceptional = n == 2 && !a.is_zero() && singular && {
                // trace zero and determinant zero: nilpotent in size 2
                (&a[(0, 0)] + &a[(1, 1)]).is_zero()
            };
            match factor(&a) {
                Ok(f) => {
                    ensure(singular && !exceptional, || format!("accepted {a}"))?;
                    ensure(certified(&a, &f.n1, &f.n2), || format!("certificate fails for {a}"))?;
                    certified_count += 1;
                }
                Err(Error::NotSingular) => ensure(!singular, || format!("rejected singular {a}"))?,
                Err(Error::ExceptionalCase) => ensure(exceptional, || format!("exceptional {a}"))?,
                Err(e) => return Err(format!("{a}: {e}")),
            }
        }
    }
    ensure(total == 2 + 16 + 512, || format!("enumerated {total}"))?;
    ensure(singular_3 == 512 - 168, || format!("{singular_3} singular 3x3"))?;
    Ok(format!(
        "{total} matrices, {singular_3} singular 3x3, {certified_count} certified"
    ))
}

fn criterion_2() -> Outcome {
    let fields = [
        FieldSpec::PrimeField(2),
        FieldSpec::PrimeField(5),
        FieldSpec::PrimeField(7),
        Q,
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut count = 0;
    for &f in &fields {
        for n in 4..=8 {
            for _ in 0..200 {
                let a = random_singular(f, n, &mut rng);
                let fac = factor(&a).map_err(|e| format!("{f} n={n}: {e} on {a}"))?;
                ensure(certified(&a, &fac.n1, &fac.n2), || format!("certificate fails on {a}"))?;
                count += 1;
            }
        }
    }
    Ok(format!("{count} random singular matrices certified"))
}

fn criterion_3() -> Outcome {
    let mut checked = 0;
    for f in [Q, FieldSpec::PrimeField(2), FieldSpec::PrimeField(3)] {
        for k in [1usize, 3, 5, 7, 9, 11] {
            let (n1, n2) = factor_jk_j2(k, f).map_err(|e| e.to_string())?;
            let target = ExactMatrix::jordan_matrix(f, &[k, 2]);
            ensure(naive_mul(&n1, &n2) == target, || format!("product k={k}"))?;
            ensure(vanishes_at_n(&n1) && vanishes_at_n(&n2), || format!("nilpotency k={k}"))?;
            ensure(n1.rank() == k && n2.rank() == k, || format!("ranks k={k}"))?;
            if k >= 3 {
                let q = ((k - 3) / 4) as i64;
                let sign = if ((k - 3) / 2) % 2 == 0 { 1 } else { -1 };
                let ki = k as i64;
                let (a, b) = ((ki - 2 * q + sign) as usize, (ki - 2 * (1 + q)) as usize);
                let (c, d) = ((ki - q) as usize, (2 + q) as usize);
                ensure(q1_block_sizes(k) == Ok((a, b)), || format!("Q1 sizes k={k}"))?;
                ensure(q2_block_sizes(k) == Ok((c, d)), || format!("Q2 sizes k={k}"))?;
                let q1 = q1_matrix(k, f).map_err(|e| e.to_string())?;
                let q2 = q2_matrix(k, f).map_err(|e| e.to_string())?;
                let q1_inv = q1.transpose();
                let q2_inv = q2.transpose();
                ensure(naive_mul(&q1_inv, &q1) == ExactMatrix::identity(f, k + 2), || "Q1 not a permutation".into())?;
                ensure(
                    naive_mul(&naive_mul(&q1_inv, &n1), &q1) == ExactMatrix::jordan_matrix(f, &[a, b]),
                    || format!("Q1 conjugation k={k}"),
                )?;
                ensure(
                    naive_mul(&naive_mul(&q2_inv, &n2), &q2) == ExactMatrix::jordan_matrix(f, &[c, d]),
                    || format!("Q2 conjugation k={k}"),
                )?;
                ensure(jordan_sizes(&n1) == [a, b], || format!("N1 blocks k={k}"))?;
                ensure(jordan_sizes(&n2) == [c, d], || format!("N2 blocks k={k}"))?;
            }
            checked += 1;
        }
    }
    Ok(format!("{checked} (k, field) instances"))
}

fn criterion_4() -> Outcome {
    let mut checked = 0;
    for f in [Q, FieldSpec::PrimeField(2)] {
        for n in 1..=12usize {
            for p in NilpotentPartition::all_of(n) {
                let result = factor_nilpotent_normal_form(&p, f);
                if p.sizes() == [2] {
                    ensure(result == Err(Error::ExceptionalCase), || "[2] accepted".into())?;
                    continue;
                }
                let nf = result.map_err(|e| format!("{:?}: {e}", p.sizes()))?;
                let s = &nf.similarity;
                let j = ExactMatrix::jordan_matrix(f, p.sizes());
                let lhs = naive_mul(&j, s);
                let rhs = naive_mul(s, &naive_mul(&nf.left, &nf.right));
                let what = || format!("{f} partition {:?}", p.sizes());
                ensure(s.rank() == n && lhs == rhs, what)?;
                ensure(vanishes_at_n(&nf.left) && vanishes_at_n(&nf.right), what)?;
                ensure(
                    (0..n).all(|c| nf.left[(0, c)].is_zero()) && (0..n).all(|r| nf.left[(r, n - 1)].is_zero()),
                    what,
                )?;
                let last: Vec<bool> = (0..n).map(|c| nf.right[(n - 1, c)].is_zero()).collect();
                let shape = if last.iter().all(|&z| z) {
                    Some(LastRow::Zero)
                } else if nf.right[(n - 1, 0)].is_one() && last[1..].iter().all(|&z| z) {
                    Some(LastRow::E1T)
                } else {
                    None
                };
                ensure(shape == Some(nf.right_last_row), what)?;
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} partitions, [2] refused"))
}

fn hide(a: &ExactMatrix, rng: &mut ChaCha8Rng) -> ExactMatrix {
    let s = random_invertible(a.field(), a.rows(), rng);
    naive_mul(&naive_mul(&s, a), &s.inverse().expect("invertible"))
}

fn criterion_5() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let f = Q;
    let a1 = |k: usize, rng: &mut ChaCha8Rng| random_invertible(f, k, rng);
    let z = |m: usize| ExactMatrix::zeros(f, m, m);
    let cases: Vec<(&str, ExactMatrix, Route, Option<bool>)> = vec![
        ("nilpotent", hide(&ExactMatrix::jordan_matrix(f, &[3, 2, 1]), &mut rng), Route::Nilpotent, None),
        ("zero block m=1", hide(&ExactMatrix::block_diag(f, &[z(1), a1(3, &mut rng)]), &mut rng), Route::CaseZeroBlock, Some(false)),
        ("zero block m=2", hide(&ExactMatrix::block_diag(f, &[z(2), a1(3, &mut rng)]), &mut rng), Route::CaseZeroBlock, Some(false)),
        ("J2 block", hide(&ExactMatrix::block_diag(f, &[ExactMatrix::jordan_block(f, 2), a1(3, &mut rng)]), &mut rng), Route::CaseJ2, Some(true)),
        ("general, B = 0", hide(&ExactMatrix::block_diag(f, &[ExactMatrix::jordan_block(f, 3), a1(2, &mut rng)]), &mut rng), Route::CaseGeneral, Some(false)),
        ("general, B != 0", hide(&ExactMatrix::block_diag(f, &[ExactMatrix::jordan_block(f, 4), a1(2, &mut rng)]), &mut rng), Route::CaseGeneral, Some(true)),
    ];
    let mut seen = Vec::new();
    for (name, a, route, roth) in cases {
        let fac = factor(&a).map_err(|e| format!("{name}: {e}"))?;
        ensure(certified(&a, &fac.n1, &fac.n2), || format!("{name}: certificate"))?;
        ensure(fac.certificate.route == route, || format!("{name}: route {:?}", fac.certificate.route))?;
        if let Some(r) = roth {
            ensure(fac.certificate.roth_correction == r, || format!("{name}: coupling flag"))?;
        }
        if name == "zero block m=1" {
            let n = a.rows();
            ensure(
                fac.n1.rank() == n - 1 && fac.n2.rank() == n - 1 && a.rank() == n - 1,
                || format!("{name}: ranks {} {}", fac.n1.rank(), fac.n2.rank()),
            )?;
        }
        seen.push(name);
    }
    Ok(format!("routes: {}", seen.join("; ")))
}

fn criterion_6() -> Outcome {
    for f in [Q, FieldSpec::PrimeField(2), FieldSpec::PrimeField(5)] {
        let r = check_wu_counterexample_over(7, f).map_err(|e| e.to_string())?;
        ensure(r.verdict == Verdict::ConfirmsPaper, || format!("k=7 over {f}"))?;
        let m = r.witness["right_factor"].to_matrix().map_err(|e| e.to_string())?;
        ensure(!vanishes_at_n(&m), || "k=7 witness is nilpotent".into())?;
    }
    let r = check_sourour_projection_flaw().map_err(|e| e.to_string())?;
    ensure(r.verdict == Verdict::ConfirmsPaper, || "projection check".into())?;
    let a = r.witness["A"].to_matrix().map_err(|e| e.to_string())?;
    let ranks = |p: &ExactMatrix| {
        let pa = naive_mul(p, &a);
        let ap = naive_mul(&a, p);
        (pa.rank(), ap.rank(), naive_mul(&pa, p).rank())
    };
    let flawed = ranks(&r.witness["P_flawed"].to_matrix().map_err(|e| e.to_string())?);
    let repaired = ranks(&r.witness["P_repaired"].to_matrix().map_err(|e| e.to_string())?);
    ensure(flawed.2 < flawed.1 && flawed.0 == flawed.1, || format!("flawed ranks {flawed:?}"))?;
    ensure(repaired == (1, 1, 1), || format!("repaired ranks {repaired:?}"))?;
    Ok(format!("k=7 not nilpotent; flawed ranks {flawed:?}, repaired {repaired:?}"))
}

fn random_square_zero(f: FieldSpec, n: usize, rng: &mut ChaCha8Rng) -> ExactMatrix {
    let pairs = rng.gen_range(1..=n / 2);
    let sizes: Vec<usize> = std::iter::repeat(2).take(pairs).chain(std::iter::repeat(1).take(n - 2 * pairs)).collect();
    hide(&ExactMatrix::jordan_matrix(f, &sizes), rng)
}

fn criterion_7() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut count = 0;
    for f in [FieldSpec::PrimeField(5), Q] {
        for n in 3..=6 {
            for _ in 0..100 {
                let a = random_non_square_zero(f, n, &mut rng);
                let form = sourour_form(&a).map_err(|e| format!("{e} on {a}"))?;
                let m = form.bordered();
                ensure(naive_mul(&a, &form.s) == naive_mul(&form.s, &m) && form.s.rank() == n, || format!("similarity on {a}"))?;
                ensure(form.d.rank() + 1 == a.rank(), || format!("rank D on {a}"))?;
                let d_b = ExactMatrix::hstack(&form.d, &form.b.to_matrix()).map_err(|e| e.to_string())?;
                let dt_c = ExactMatrix::hstack(&form.d.transpose(), &form.c.to_matrix()).map_err(|e| e.to_string())?;
                ensure(d_b.rank() == form.d.rank(), || format!("b outside R(D) on {a}"))?;
                ensure(dt_c.rank() == form.d.rank(), || format!("c outside R(D^T) on {a}"))?;
                count += 1;
            }
            for _ in 0..10 {
                let a = random_square_zero(f, n, &mut rng);
                ensure(naive_mul(&a, &a).is_zero(), || "oracle square-zero".into())?;
                ensure(sourour_form(&a) == Err(Error::SquareZero), || format!("accepted square-zero {a}"))?;
            }
        }
    }
    Ok(format!("{count} bordered forms, square-zero inputs rejected"))
}

fn criterion_8() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let fields = [Q, FieldSpec::PrimeField(5), FieldSpec::PrimeField(7)];
    for i in 0..100 {
        let f = fields[i % fields.len()];
        let k = 1 + i % 4;
        let a1 = random_invertible(f, k, &mut rng);
        let (a0, b, x) = if i % 2 == 0 {
            let a0 = ExactMatrix::unit(f, 2, 2, 0, 1);
            let b = -&ExactMatrix::unit(f, k, 2, k - 1, 1);
            (a0, b, solve_roth_j2case(&a1).map_err(|e| e.to_string())?)
        } else {
            let n0 = 3 + i % 3;
            // first row of a Jordan block is zero, so X·A0 = 0
            let a0 = ExactMatrix::jordan_block(f, n0);
            let mut u11 = random_scalar(f, &mut rng);
            if u11.is_zero() {
                u11 = f.one();
            }
            let mut e = ExactMatrix::zeros(f, k, n0);
            e[(0, 0)] = u11.inv();
            (a0, naive_mul(&a1, &e), solve_roth_e11case(&u11, k, n0).map_err(|e| e.to_string())?)
        };
        let generic = solve_sylvester_generic(&a0, &a1, &b)
            .map_err(|e| e.to_string())?
            .ok_or_else(|| format!("generic solver found nothing at {i}"))?;
        ensure(generic == x, || format!("instance {i}: structured X differs"))?;
        let lhs = &naive_mul(&x.x, &a0) - &naive_mul(&a1, &x.x);
        ensure(lhs == b, || format!("instance {i}: residual"))?;
        let m0 = a0.rows();
        let big = ExactMatrix::assemble(&[
            vec![a0.clone(), ExactMatrix::zeros(f, m0, k)],
            vec![b, a1.clone()],
        ])
        .map_err(|e| e.to_string())?;
        let t = x.transform();
        let t_inv = x.inverse_transform();
        ensure(naive_mul(&t, &t_inv) == ExactMatrix::identity(f, m0 + k), || "transform inverse".into())?;
        ensure(
            naive_mul(&naive_mul(&t_inv, &big), &t) == ExactMatrix::block_diag(f, &[a0, a1]),
            || format!("instance {i}: not block diagonal"),
        )?;
    }
    Ok("100 instances agree and block-diagonalize".into())
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("exhaustive GF(2), n <= 3", criterion_1),
        ("random singular, 4 fields, n = 4..8", criterion_2),
        ("Dg[J_k, J_2] factor pairs", criterion_3),
        ("normal forms, all partitions n <= 12", criterion_4),
        ("route coverage", criterion_5),
        ("forensic checks", criterion_6),
        ("bordered similarity forms", criterion_7),
        ("Roth solutions vs generic solver", criterion_8),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(msg) => println!("criterion {}: PASS  {name}: {msg} ({secs:.2}s)", i + 1),
            Err(msg) => {
                failed += 1;
                println!("criterion {}: FAIL  {name}: {msg} ({secs:.2}s)", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
