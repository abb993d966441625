//! Exact factorization of singular square matrices into two nilpotent
//! factors over the rationals and prime fields.
//!
//! Every factorization returned by [`factor`] carries a certificate that was
//! recomputed from scratch: the product equals the input exactly and both
//! factors vanish at the `n`-th power.

pub mod block_factors;
pub mod canonical;
pub mod error;
pub mod factorizer;
pub mod field;
pub mod forensics;
pub mod format;
pub mod lu_similarity;
pub mod matrix;
pub mod roth;
pub mod sourour;
pub mod suites;
pub mod testing;

pub use error::{Error, Result};
pub use field::{FieldScalar, FieldSpec};
pub use matrix::{ColumnVector, ExactMatrix};
pub use factorizer::{factor, factor_seeded, Certificate, Factorization, Route};
pub use format::{format_matrix, parse_matrix, MatrixFile};
