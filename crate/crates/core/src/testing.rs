//! Seeded random matrix generators shared by tests, the check suites and the
//! bindings.

use rand::Rng;

use crate::field::{FieldScalar, FieldSpec};
use crate::matrix::ExactMatrix;

/// A random scalar. Rationals are small integers in `[-3, 3]` so that exact
/// entries stay readable; residues are uniform.
pub fn random_scalar<R: Rng + ?Sized>(field: FieldSpec, rng: &mut R) -> FieldScalar {
    match field {
        FieldSpec::Rationals => field.from_i64(rng.gen_range(-3..=3)),
        FieldSpec::PrimeField(p) => field.from_i64(rng.gen_range(0..p.min(i64::MAX as u64)) as i64),
    }
}

pub fn random_matrix<R: Rng + ?Sized>(
    field: FieldSpec,
    rows: usize,
    cols: usize,
    rng: &mut R,
) -> ExactMatrix {
    let data = (0..rows * cols).map(|_| random_scalar(field, rng)).collect();
    ExactMatrix::from_entries(field, rows, cols, data).expect("entries match the field")
}

/// Rejection-samples an invertible matrix.
pub fn random_invertible<R: Rng + ?Sized>(field: FieldSpec, n: usize, rng: &mut R) -> ExactMatrix {
    loop {
        let m = random_matrix(field, n, n, rng);
        if m.rank() == n {
            return m;
        }
    }
}

/// `X · D · Y` with random `X`, `Y` and a diagonal core `D` that has at
/// least one zero entry, so the product is always singular.
pub fn random_singular<R: Rng + ?Sized>(field: FieldSpec, n: usize, rng: &mut R) -> ExactMatrix {
    let x = random_matrix(field, n, n, rng);
    let y = random_matrix(field, n, n, rng);
    let mut d = ExactMatrix::zeros(field, n, n);
    let zero_at = rng.gen_range(0..n);
    for i in 0..n {
        if i != zero_at && rng.gen_bool(0.8) {
            let mut s = random_scalar(field, rng);
            if s.is_zero() {
                s = field.one();
            }
            d[(i, i)] = s;
        }
    }
    &(&x * &d) * &y
}

/// Random matrix that is not square-zero.
pub fn random_non_square_zero<R: Rng + ?Sized>(
    field: FieldSpec,
    n: usize,
    rng: &mut R,
) -> ExactMatrix {
    loop {
        let m = if rng.gen_bool(0.5) {
            random_singular(field, n, rng)
        } else {
            random_matrix(field, n, n, rng)
        };
        if !m.is_square_zero().expect("square") {
            return m;
        }
    }
}
