//! Dense exact linear algebra over a [`FieldSpec`](crate::fields::FieldSpec).

mod gl;
mod matrix;
mod poly;
mod system;

pub use gl::{gl_order, GlScan, DEFAULT_MAX_CELLS};
pub use matrix::{matrix_with_row_sums, Matrix, Vector};
pub use poly::{Polynomial, MAX_DIVISOR_CANDIDATES};
pub use system::{solve_affine, AffineSubspace, EchelonSystem};

use thiserror::Error;

use crate::fields::{FieldError, FieldSpec};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("expected a square matrix, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("matrix is singular")]
    Singular,
    #[error("entries must all lie in {expected}, found {found}")]
    MixedFields { expected: FieldSpec, found: FieldSpec },
    #[error("matrices and vectors must have at least one entry")]
    Empty,
    #[error("every row sum is zero; no nonsingular matrix has these row sums")]
    ZeroRowSums,
    #[error("the zero polynomial has no finite root set")]
    ZeroPolynomial,
    #[error("rational root search needs more than {limit} trial divisors to factor {value}")]
    RootSearchTooLarge { value: String, limit: u64 },
    #[error("GL({n}, {p}) scan would visit {cells} matrices, above the cap {cap}")]
    ScanTooLarge { n: usize, p: u64, cells: String, cap: u64 },
}
