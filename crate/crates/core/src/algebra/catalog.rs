//! Small reference algebras with known weight homomorphisms.

use super::Algebra;
use crate::fields::FieldSpec;

/// Three-dimensional, non-commutative, semi-natural algebra with
/// `e1² = e2, e2² = e2, e3² = e2, e1e2 = e1, e2e1 = e3, e1e3 = e2,
/// e3e1 = e2, e2e3 = e3, e3e2 = e3`.
///
/// Over ℚ its weight homomorphisms are `(1,1,1)` and `(−1,1,−1)`; over GF(2)
/// they coincide.
pub fn two_homomorphisms(field: FieldSpec) -> Algebra {
    Algebra::from_triples(
        field,
        3,
        &[
            (0, 0, 1, 1),
            (1, 1, 1, 1),
            (2, 2, 1, 1),
            (0, 1, 0, 1),
            (1, 0, 2, 1),
            (0, 2, 1, 1),
            (2, 0, 1, 1),
            (1, 2, 2, 1),
            (2, 1, 2, 1),
        ],
    )
}

/// Two-dimensional algebra with `e1² = e1`, `e2² = e2`, `e1e2 = e1 + e2`,
/// `e2e1 = 0`. The constants satisfy `γ121 ≠ γ211`, `γ122 ≠ γ212` and
/// `γ121 + γ122 ≠ γ211 + γ212` in every characteristic, and the algebra has
/// no weight homomorphism over any field.
pub fn no_solution_plane(field: FieldSpec) -> Algebra {
    Algebra::from_triples(field, 2, &[(0, 0, 0, 1), (1, 1, 1, 1), (0, 1, 0, 1), (0, 1, 1, 1)])
}

/// The field itself as a one-dimensional algebra: `e² = e`.
pub fn idempotent_line(field: FieldSpec) -> Algebra {
    Algebra::from_triples(field, 1, &[(0, 0, 0, 1)])
}

/// `no_solution_plane × idempotent_line`. Its only weight homomorphism is the
/// projection `(0,0,1)`, whose kernel contains the idempotent `(e1, 0)`.
pub fn non_nil_kernel_product(field: FieldSpec) -> Algebra {
    no_solution_plane(field)
        .direct_product(&idempotent_line(field))
        .expect("same field")
}

/// `e_i·e_j = e_1` for all `i, j`. Semi-natural, with the unique weight
/// homomorphism `(1, …, 1)`.
pub fn constant_product(field: FieldSpec, n: usize) -> Algebra {
    let triples: Vec<_> = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j, 0, 1)))
        .collect();
    Algebra::from_triples(field, n, &triples)
}
