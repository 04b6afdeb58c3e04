//! Exact analysis of finite-dimensional algebras given by structure constants.
//!
//! An algebra over ℚ or GF(p) is described by its structure constants
//! `γ[i][j][k]`, meaning `e_i·e_j = Σ_k γ[i][j][k]·e_k`. Its weight
//! homomorphisms (nonzero algebra maps `w: A → K`) are exactly the nonzero
//! solutions `x ∈ Kⁿ` of the Etherington system
//!
//! ```text
//! x_i·x_j = Σ_k γ[i][j][k]·x_k      for all i, j
//! ```
//!
//! This crate solves that system completely, certifies whether the weight
//! homomorphism is unique, builds semi-natural bases (bases in which every
//! product's coefficients sum to 1) from solutions, and checks the
//! transition-matrix and coset structure of semi-natural bases by exhaustive
//! enumeration over small prime fields.

pub mod algebra;
pub mod fields;
pub mod io;
pub mod linalg;
pub mod seminat;
pub mod solver;
pub mod selftest;

pub use algebra::{Algebra, AlgebraError, BasisChange, WeightHomomorphism};
pub use fields::{parse_value, FieldError, FieldSpec, FieldValue, Prime};
pub use linalg::{LinalgError, Matrix, Polynomial, Vector};
pub use seminat::{CensusReport, CosetPartition, SemiNaturalBasis};
pub use solver::{certify_unique, certify_unique_with, solve_eigen, solve_exhaustive, FastPath, SolutionSet, SolverError, UniquenessCertificate, Verdict};
