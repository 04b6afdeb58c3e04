//! Semi-natural bases and the transition matrices between them.
//!
//! Orientation. The algebra is given in a reference basis `f`. A basis `e` is
//! described by its transition matrix `M` from `e` to `f`:
//! `f_i = Σ_k M[i][k]·e_k`. Equivalently the rows of `M⁻¹` are the vectors
//! `e_i` written in `f`-coordinates, so the structure constants in the `e`
//! frame are `algebra.change_basis(M⁻¹)`.
//!
//! With this orientation, `e` is semi-natural exactly when the row sums of `M`
//! solve the Etherington system of `f`; the weight homomorphism attached to `e`
//! (the one sending every `e_i` to 1) has `f`-coordinates `row_sums(M)`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{Algebra, AlgebraError, BasisChange, WeightHomomorphism};
use crate::fields::{FieldError, FieldSpec};
use crate::linalg::{matrix_with_row_sums, GlScan, LinalgError, Matrix, Vector, DEFAULT_MAX_CELLS};
use crate::solver::{solve_exhaustive_with, SolutionSet, SolverError, DEFAULT_MAX_SCAN};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeminatError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Solver(#[from] SolverError),
    #[error("the zero vector does not define a semi-natural basis")]
    ZeroVector,
    #[error("not an Etherington solution: equation ({i},{j}) fails")]
    NotASolution { i: usize, j: usize },
    #[error("basis is not semi-natural: coefficients of e{i}·e{j} do not sum to 1")]
    NotSemiNatural { i: usize, j: usize },
    #[error("algebra has no weight homomorphism")]
    NotBaric,
    #[error("matrices must share one field and dimension")]
    Inconsistent,
}

/// Caps for exhaustive finite-field work.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// Cap on `p^n`, the vectors scanned when solving.
    pub max_scan: u64,
    /// Cap on `p^(n²)`, the matrices scanned when enumerating GL_n.
    pub max_cells: u64,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_scan: DEFAULT_MAX_SCAN,
            max_cells: DEFAULT_MAX_CELLS,
        }
    }
}

/// A semi-natural basis `e` of an algebra given in the basis `f`.
///
/// `transition()` is the transition matrix `M` from `e` to `f`
/// (`f_i = Σ_k M[i][k]·e_k`); the rows of `vectors()` = `M⁻¹` are the `e_i`
/// in `f`-coordinates.
#[derive(Debug, Clone)]
pub struct SemiNaturalBasis<'a> {
    algebra: &'a Algebra,
    transition: Matrix,
    vectors: Matrix,
}

impl<'a> SemiNaturalBasis<'a> {
    /// Checks that `M` is nonsingular and the basis it defines is semi-natural.
    pub fn new(algebra: &'a Algebra, transition: Matrix) -> Result<Self, SeminatError> {
        if transition.rows() != algebra.dim() || transition.field() != algebra.field() {
            return Err(SeminatError::Inconsistent);
        }
        let vectors = transition.inverse()?;
        let basis = SemiNaturalBasis {
            algebra,
            transition,
            vectors,
        };
        let in_frame = basis.structure_constants()?;
        let n = algebra.dim();
        for i in 0..n {
            for j in 0..n {
                if !in_frame.basis_product(i, j).sum().is_one() {
                    return Err(SeminatError::NotSemiNatural { i: i + 1, j: j + 1 });
                }
            }
        }
        Ok(basis)
    }

    pub fn algebra(&self) -> &Algebra {
        self.algebra
    }

    pub fn transition(&self) -> &Matrix {
        &self.transition
    }

    pub fn vectors(&self) -> &Matrix {
        &self.vectors
    }

    /// Structure constants in the semi-natural frame.
    pub fn structure_constants(&self) -> Result<Algebra, SeminatError> {
        let change = BasisChange::new(self.vectors.clone())?;
        Ok(self.algebra.change_basis(&change)?)
    }

    /// The weight homomorphism with value 1 on every basis vector, in
    /// `f`-coordinates: the row sums of the transition matrix.
    pub fn weight_homomorphism(&self) -> WeightHomomorphism {
        let w = self.transition.row_sums();
        debug_assert!(self.algebra.is_weight_homomorphism(&w));
        WeightHomomorphism::new_unchecked(w)
    }
}

/// The semi-natural basis attached to an Etherington solution `alpha`.
///
/// `M = diag(alpha)` when no coordinate vanishes, otherwise the general
/// row-sum construction of [`matrix_with_row_sums`].
pub fn seminat_from_solution<'a>(
    algebra: &'a Algebra,
    alpha: &Vector,
) -> Result<SemiNaturalBasis<'a>, SeminatError> {
    if alpha.len() != algebra.dim() || alpha.field() != algebra.field() {
        return Err(SeminatError::Inconsistent);
    }
    if alpha.is_zero() {
        return Err(SeminatError::ZeroVector);
    }
    if let Some((i, j)) = algebra.etherington_violation(alpha) {
        return Err(SeminatError::NotASolution { i: i + 1, j: j + 1 });
    }
    let m = if alpha.entries().iter().all(|x| !x.is_zero()) {
        Matrix::diagonal(alpha)
    } else {
        matrix_with_row_sums(alpha)?
    };
    SemiNaturalBasis::new(algebra, m)
}

/// Whether "the basis defined by `M` is semi-natural" and "the row sums of `M`
/// solve the Etherington system" agree. Always true; used as a property harness.
pub fn row_sum_solution_check(algebra: &Algebra, m: &Matrix) -> Result<bool, SeminatError> {
    if m.rows() != algebra.dim() || m.field() != algebra.field() {
        return Err(SeminatError::Inconsistent);
    }
    let change = BasisChange::new(m.inverse()?)?;
    let semi_natural = algebra.change_basis(&change)?.is_semi_natural();
    let solves = algebra.etherington_violation(&m.row_sums()).is_none();
    Ok(semi_natural == solves)
}

fn finite_scan(algebra: &Algebra, limits: Limits) -> Result<(GlScan, SolutionSet), SeminatError> {
    if !algebra.field().is_finite() {
        return Err(LinalgError::Field(FieldError::InfiniteField).into());
    }
    let scan = GlScan::new(algebra.dim(), algebra.field(), limits.max_cells)?;
    let eth = solve_exhaustive_with(algebra, limits.max_scan)?;
    Ok((scan, eth))
}

/// Transition matrices (basis → reference basis) of all semi-natural bases,
/// over GF(p): the matrices in GL_n whose row sums lie in the solution set.
/// Each one is re-checked against the definition. Sorted, as produced by the scan.
pub fn enumerate_seminat(algebra: &Algebra, limits: Limits) -> Result<Vec<Matrix>, SeminatError> {
    let (scan, eth) = finite_scan(algebra, limits)?;
    if eth.is_empty() {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    for m in scan.iter() {
        if eth.contains(&m.row_sums()) {
            SemiNaturalBasis::new(algebra, m.clone())?;
            out.push(m);
        }
    }
    Ok(out)
}

/// For every pair of semi-natural bases `e'`, `e''`, whether the transition
/// matrix from `e'` to `e''` is row stochastic. This holds exactly when the
/// weight homomorphism is unique.
///
/// With `M'`, `M''` the transition matrices to the reference basis, the
/// transition from `e'` to `e''` is `M''⁻¹·M'`.
pub fn certify_unique_via_transitions(algebra: &Algebra, limits: Limits) -> Result<bool, SeminatError> {
    let bases = enumerate_seminat(algebra, limits)?;
    if bases.is_empty() {
        return Err(SeminatError::NotBaric);
    }
    let inverses = bases
        .iter()
        .map(Matrix::inverse)
        .collect::<Result<Vec<_>, _>>()?;
    for m1 in &bases {
        for inv2 in &inverses {
            if !inv2.mul(m1)?.is_row_stochastic() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Left cosets `M·RS_n` of the row-stochastic group.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CosetPartition {
    pub classes: Vec<Vec<Matrix>>,
    pub field: FieldSpec,
}

impl CosetPartition {
    pub fn class_sizes(&self) -> Vec<usize> {
        self.classes.iter().map(Vec::len).collect()
    }
}

/// Groups `mats` by `M ~ M'` iff `M'⁻¹·M` is row stochastic. Classes are listed
/// by least member, members in ascending order, so the output does not depend
/// on input order. Duplicates are kept.
pub fn coset_partition(mats: &[Matrix]) -> Result<CosetPartition, SeminatError> {
    let Some(first) = mats.first() else {
        return Err(SeminatError::Inconsistent);
    };
    let field = first.field();
    if mats.iter().any(|m| m.field() != field || m.rows() != first.rows() || !m.is_square()) {
        return Err(SeminatError::Inconsistent);
    }
    let mut sorted = mats.to_vec();
    sorted.sort();
    // Representatives are the least member of each class, with cached inverses.
    let mut reps: Vec<Matrix> = Vec::new();
    let mut classes: Vec<Vec<Matrix>> = Vec::new();
    for m in sorted {
        let mut placed = false;
        for (rep_inv, class) in reps.iter().zip(classes.iter_mut()) {
            if rep_inv.mul(&m)?.is_row_stochastic() {
                class.push(m.clone());
                placed = true;
                break;
            }
        }
        if !placed {
            reps.push(m.inverse()?);
            classes.push(vec![m]);
        }
    }
    Ok(CosetPartition { classes, field })
}

/// Compares the semi-natural bases found by the row-sum filter with those
/// found straight from the definition (every `M ∈ GL_n` whose frame is
/// semi-natural), and checks that row sums of the latter land in the solution
/// set.
pub fn verify_pullback(algebra: &Algebra, limits: Limits) -> Result<bool, SeminatError> {
    let (scan, eth) = finite_scan(algebra, limits)?;
    let via_row_sums = enumerate_seminat(algebra, limits)?;
    let mut by_definition = Vec::new();
    for m in scan.iter() {
        let change = BasisChange::new(m.inverse()?)?;
        if algebra.change_basis(&change)?.is_semi_natural() {
            by_definition.push(m);
        }
    }
    let lands_in_eth = by_definition.iter().all(|m| eth.contains(&m.row_sums()));
    Ok(lands_in_eth && via_row_sums == by_definition)
}

/// Count of row-stochastic matrices in GL_n(GF(p)), by scan.
pub fn row_stochastic_count(n: usize, field: FieldSpec, max_cells: u64) -> Result<u64, SeminatError> {
    let scan = GlScan::new(n, field, max_cells)?;
    Ok(scan.iter().filter(Matrix::is_row_stochastic).count() as u64)
}

/// Census of semi-natural bases over a prime field.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusReport {
    pub dim: usize,
    pub prime: u64,
    pub num_weight_homs: usize,
    pub num_seminat_bases: usize,
    pub rs_group_order: u64,
    pub num_classes: usize,
    pub class_sizes: Vec<usize>,
}

pub fn census(algebra: &Algebra, limits: Limits) -> Result<CensusReport, SeminatError> {
    let (_, eth) = finite_scan(algebra, limits)?;
    let bases = enumerate_seminat(algebra, limits)?;
    let rs_group_order = row_stochastic_count(algebra.dim(), algebra.field(), limits.max_cells)?;
    let class_sizes = if bases.is_empty() {
        Vec::new()
    } else {
        coset_partition(&bases)?.class_sizes()
    };
    Ok(CensusReport {
        dim: algebra.dim(),
        prime: algebra.field().modulus().expect("finite field"),
        num_weight_homs: eth.len(),
        num_seminat_bases: bases.len(),
        rs_group_order,
        num_classes: class_sizes.len(),
        class_sizes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::catalog;
    use crate::linalg::gl_order;
    use crate::solver::{certify_unique, Verdict};
    use num_bigint::BigUint;

    const Q: FieldSpec = FieldSpec::Rationals;

    fn gf(p: u64) -> FieldSpec {
        FieldSpec::prime(p).unwrap()
    }

    fn v(field: FieldSpec, xs: &[i64]) -> Vector {
        Vector::from_i64s(field, xs).unwrap()
    }

    #[test]
    fn seminat_from_solution_examples() {
        let a = catalog::two_homomorphisms(Q);
        let b = seminat_from_solution(&a, &v(Q, &[1, 1, 1])).unwrap();
        assert_eq!(b.transition(), &Matrix::identity(Q, 3));

        let b = seminat_from_solution(&a, &v(Q, &[-1, 1, -1])).unwrap();
        let flip = Matrix::from_i64_rows(Q, &[&[-1, 0, 0], &[0, 1, 0], &[0, 0, -1]]).unwrap();
        assert_eq!(b.transition(), &flip);
        assert_eq!(b.vectors(), &flip);
        let frame = b.structure_constants().unwrap();
        assert!(frame.is_semi_natural());
        // e1² = f1² = f2 = e2
        assert_eq!(frame.basis_product(0, 0), Vector::unit(Q, 3, 1));

        let p = catalog::non_nil_kernel_product(Q);
        let b = seminat_from_solution(&p, &v(Q, &[0, 0, 1])).unwrap();
        assert!(b.structure_constants().unwrap().is_semi_natural());
        assert_eq!(b.transition().row_sums(), v(Q, &[0, 0, 1]));

        assert_eq!(
            seminat_from_solution(&a, &v(Q, &[0, 0, 0])).unwrap_err(),
            SeminatError::ZeroVector
        );
        assert!(matches!(
            seminat_from_solution(&a, &v(Q, &[1, 1, -1])),
            Err(SeminatError::NotASolution { .. })
        ));
    }

    #[test]
    fn row_sum_check_examples() {
        let f = gf(3);
        let a = catalog::two_homomorphisms(f);
        let scan = GlScan::new(3, f, DEFAULT_MAX_CELLS).unwrap();
        for idx in (0..scan.cells()).step_by(97) {
            let m = scan.matrix_at(idx);
            if m.is_nonsingular() {
                assert!(row_sum_solution_check(&a, &m).unwrap());
            }
        }
        let sn = catalog::constant_product(Q, 3);
        assert!(row_sum_solution_check(&sn, &Matrix::identity(Q, 3)).unwrap());
        assert!(row_sum_solution_check(&Algebra::zero(Q, 3), &Matrix::identity(Q, 3)).unwrap());
        let singular = Matrix::zeros(Q, 3, 3);
        assert!(row_sum_solution_check(&sn, &singular).is_err());
    }

    #[test]
    fn transitions_examples() {
        let l = Limits::default();
        let c2 = catalog::constant_product(gf(2), 2);
        assert!(certify_unique_via_transitions(&c2, l).unwrap());
        assert!(!certify_unique_via_transitions(&catalog::two_homomorphisms(gf(3)), l).unwrap());
        assert!(certify_unique_via_transitions(&catalog::two_homomorphisms(gf(2)), l).unwrap());
        assert_eq!(
            certify_unique_via_transitions(&Algebra::zero(gf(2), 2), l),
            Err(SeminatError::NotBaric)
        );
    }

    #[test]
    fn enumerate_examples() {
        let l = Limits::default();
        let f2 = gf(2);
        let s = enumerate_seminat(&catalog::constant_product(f2, 2), l).unwrap();
        let swap = Matrix::from_i64_rows(f2, &[&[0, 1], &[1, 0]]).unwrap();
        let mut expected = vec![Matrix::identity(f2, 2), swap];
        expected.sort();
        assert_eq!(s, expected);
        assert!(enumerate_seminat(&Algebra::zero(f2, 2), l).unwrap().is_empty());
        assert!(enumerate_seminat(&catalog::constant_product(Q, 2), l).is_err());
    }

    #[test]
    fn map_g_examples() {
        let a = catalog::two_homomorphisms(Q);
        let id = SemiNaturalBasis::new(&a, Matrix::identity(Q, 3)).unwrap();
        assert_eq!(id.weight_homomorphism().coords(), &v(Q, &[1, 1, 1]));
        let flip = Matrix::from_i64_rows(Q, &[&[-1, 0, 0], &[0, 1, 0], &[0, 0, -1]]).unwrap();
        let b = SemiNaturalBasis::new(&a, flip).unwrap();
        assert_eq!(b.weight_homomorphism().coords(), &v(Q, &[-1, 1, -1]));
        let f = gf(3);
        let a3 = catalog::two_homomorphisms(f);
        for m in enumerate_seminat(&a3, Limits::default()).unwrap().into_iter().step_by(37) {
            let b = SemiNaturalBasis::new(&a3, m).unwrap();
            assert!(a3.is_weight_homomorphism(b.weight_homomorphism().coords()));
        }
        // A non-semi-natural frame is rejected.
        let not_sn = Matrix::from_i64_rows(Q, &[&[2, 0, 0], &[0, 1, 0], &[0, 0, 1]]).unwrap();
        assert!(matches!(
            SemiNaturalBasis::new(&a, not_sn),
            Err(SeminatError::NotSemiNatural { .. })
        ));
    }

    #[test]
    fn coset_examples() {
        let l = Limits::default();
        let f2 = gf(2);
        let s = enumerate_seminat(&catalog::constant_product(f2, 2), l).unwrap();
        assert_eq!(coset_partition(&s).unwrap().class_sizes(), vec![2]);
        let one = coset_partition(&[Matrix::identity(Q, 2)]).unwrap();
        assert_eq!(one.classes.len(), 1);
        assert!(coset_partition(&[]).is_err());
        assert!(coset_partition(&[Matrix::zeros(Q, 2, 2)]).is_err());
    }

    #[test]
    fn census_two_homomorphisms_mod_3() {
        let f = gf(3);
        let a = catalog::two_homomorphisms(f);
        let bases = enumerate_seminat(&a, Limits::default()).unwrap();
        let part = coset_partition(&bases).unwrap();
        assert_eq!(part.class_sizes(), vec![432, 432]);
        // map_G is constant on classes and differs between them
        let gs: Vec<Vector> = part
            .classes
            .iter()
            .map(|c| {
                let w = c[0].row_sums();
                assert!(c.iter().all(|m| m.row_sums() == w));
                w
            })
            .collect();
        assert_ne!(gs[0], gs[1]);
        let report = census(&a, Limits::default()).unwrap();
        assert_eq!(
            report,
            CensusReport {
                dim: 3,
                prime: 3,
                num_weight_homs: 2,
                num_seminat_bases: 864,
                rs_group_order: 432,
                num_classes: 2,
                class_sizes: vec![432, 432],
            }
        );
    }

    #[test]
    fn census_constant_product_mod_2() {
        let report = census(&catalog::constant_product(gf(2), 2), Limits::default()).unwrap();
        assert_eq!(
            (report.num_weight_homs, report.num_seminat_bases, report.num_classes),
            (1, 2, 1)
        );
        assert!(census(&catalog::constant_product(Q, 2), Limits::default()).is_err());
    }

    #[test]
    fn pullback_examples() {
        let l = Limits::default();
        assert!(verify_pullback(&catalog::two_homomorphisms(gf(2)), l).unwrap());
        assert!(verify_pullback(&catalog::constant_product(gf(2), 2), l).unwrap());
        for seed in 0..10 {
            assert!(verify_pullback(&Algebra::random(2, gf(3), seed, true), l).unwrap());
            assert!(verify_pullback(&Algebra::random(2, gf(3), seed, false), l).unwrap());
        }
    }

    #[test]
    fn row_stochastic_group_orders() {
        for (n, p, expected) in [(2, 2, 2u64), (2, 3, 6), (3, 2, 24)] {
            let count = row_stochastic_count(n, gf(p), DEFAULT_MAX_CELLS).unwrap();
            assert_eq!(count, expected);
            let quotient = gl_order(n, p) / BigUint::from(p.pow(n as u32) - 1);
            assert_eq!(BigUint::from(count), quotient);
        }
    }

    /// Unique weight homomorphism and semi-natural reference basis: the
    /// semi-natural bases are exactly the row-stochastic matrices.
    #[test]
    fn unique_semi_natural_bases_are_row_stochastic() {
        let l = Limits::default();
        let mut checked = 0;
        for seed in 0..40 {
            let f = gf(if seed % 2 == 0 { 2 } else { 3 });
            let a = Algebra::random(2, f, seed, true);
            if certify_unique(&a).unwrap().verdict != Verdict::Unique {
                continue;
            }
            checked += 1;
            let s = enumerate_seminat(&a, l).unwrap();
            let rs: Vec<Matrix> = GlScan::new(2, f, l.max_cells)
                .unwrap()
                .iter()
                .filter(Matrix::is_row_stochastic)
                .collect();
            assert_eq!(s, rs);
        }
        assert!(checked > 10);
    }

    /// Class structure does not depend on the reference basis.
    #[test]
    fn census_is_basis_independent() {
        let f = gf(3);
        let a = catalog::two_homomorphisms(f);
        let scan = GlScan::new(3, f, DEFAULT_MAX_CELLS).unwrap();
        for idx in [5u64, 1234, 9999, 17000] {
            let mut i = idx;
            let p = loop {
                let m = scan.matrix_at(i);
                if m.is_nonsingular() {
                    break m;
                }
                i += 1;
            };
            let b = a.change_basis(&BasisChange::new(p).unwrap()).unwrap();
            let r = census(&b, Limits::default()).unwrap();
            assert_eq!((r.num_weight_homs, r.num_classes), (2, 2));
            assert_eq!(r.class_sizes, vec![432, 432]);
        }
    }
}
