//! Complete solution of the Etherington system `x_i·x_j = Σ_k γ[i][j][k]·x_k`.
//!
//! Two independent solvers are provided:
//!
//! * [`solve_exhaustive`] scans all of GF(p)ⁿ.
//! * [`solve_eigen`] works over any exact field. Fixing `i`, the equations
//!   read `A_i·v = v_i·v` with `A_i[j][k] = γ[i][j][k]`, so for a nonzero
//!   solution every `v_i` is an eigenvalue of `A_i` lying in the field. The
//!   solver walks `i = 1..n`, branches on the in-field roots `λ` of
//!   `det(tI − A_i)`, and accumulates the linear constraints
//!   `(A_i − λI)·v = 0`, `v_i = λ` in an echelon system, pruning inconsistent
//!   branches. At depth `n` every coordinate is pinned, so each surviving leaf
//!   is a single point.
//!
//! The solution set is always finite: on a line `p + t·d` of solutions the
//! equation `v_i² = (linear in v)` forces `d_i² = 0` for every `i`.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::algebra::{Algebra, WeightHomomorphism};
use crate::fields::{FieldSpec, FieldValue};
use crate::linalg::{EchelonSystem, LinalgError, Vector};

/// Default cap on the number of vectors an exhaustive scan may visit.
pub const DEFAULT_MAX_SCAN: u64 = 10_000_000;

/// Below this many candidate vectors [`certify_unique`] prefers the exhaustive scan.
pub const EXHAUSTIVE_PREFERENCE: u64 = 10_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolverError {
    #[error("exhaustive search requires a finite field, got {0}")]
    InfiniteField(FieldSpec),
    #[error("exhaustive search over GF({p})^{n} visits {cells} vectors, above the cap {cap}")]
    ScanTooLarge { p: u64, n: usize, cells: String, cap: u64 },
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("internal error: solver leaf has a {0}-dimensional solution space")]
    PositiveDimensionalLeaf(usize),
    #[error("internal error: solver produced {0}, which does not satisfy the system")]
    Unverified(Vector),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SolverMethod {
    Exhaustive,
    Eigen,
}

/// The nonzero in-field solutions of an Etherington system, sorted
/// lexicographically by coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolutionSet {
    solutions: Vec<Vector>,
    field: FieldSpec,
    complete: bool,
}

impl SolutionSet {
    fn from_set(field: FieldSpec, set: BTreeSet<Vector>) -> Self {
        SolutionSet {
            solutions: set.into_iter().collect(),
            field,
            complete: true,
        }
    }

    pub fn solutions(&self) -> &[Vector] {
        &self.solutions
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn is_complete(&self) -> bool {
        self.complete
    }

    pub fn len(&self) -> usize {
        self.solutions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.solutions.is_empty()
    }

    pub fn contains(&self, v: &Vector) -> bool {
        self.solutions.binary_search(v).is_ok()
    }
}

fn scan_size(a: &Algebra, max_scan: u64) -> Result<u64, SolverError> {
    let field = a.field();
    let p = field.modulus().ok_or(SolverError::InfiniteField(field))?;
    let n = a.dim();
    match p.checked_pow(n as u32) {
        Some(cells) if cells <= max_scan => Ok(cells),
        other => Err(SolverError::ScanTooLarge {
            p,
            n,
            cells: other.map_or_else(|| format!("{p}^{n}"), |c| c.to_string()),
            cap: max_scan,
        }),
    }
}

/// All nonzero solutions in GF(p)ⁿ by direct scan, with the default cap.
pub fn solve_exhaustive(a: &Algebra) -> Result<SolutionSet, SolverError> {
    solve_exhaustive_with(a, DEFAULT_MAX_SCAN)
}

pub fn solve_exhaustive_with(a: &Algebra, max_scan: u64) -> Result<SolutionSet, SolverError> {
    let cells = scan_size(a, max_scan)?;
    let field = a.field();
    let p = field.modulus().expect("finite field");
    let n = a.dim();
    let digits: Vec<FieldValue> = (0..p as i64).map(|x| FieldValue::from_i64(x, field)).collect();
    let mut counter = vec![0usize; n];
    let mut found = BTreeSet::new();
    // Odometer over GF(p)^n, last coordinate fastest; index 0 (the zero vector) skipped.
    for _ in 1..cells {
        for slot in counter.iter_mut().rev() {
            *slot += 1;
            if *slot == p as usize {
                *slot = 0;
            } else {
                break;
            }
        }
        let v = Vector::from_parts(field, counter.iter().map(|&d| digits[d].clone()).collect());
        if a.etherington_violation(&v).is_none() {
            found.insert(v);
        }
    }
    Ok(SolutionSet::from_set(field, found))
}

/// All nonzero solutions over any exact field via simultaneous eigenvalue
/// branching.
pub fn solve_eigen(a: &Algebra) -> Result<SolutionSet, SolverError> {
    let field = a.field();
    let n = a.dim();
    let slices: Vec<_> = (0..n).map(|i| a.slice_matrix(i)).collect();
    let mut eigenvalues = Vec::with_capacity(n);
    for slice in &slices {
        eigenvalues.push(slice.char_poly()?.roots_in_field()?);
    }
    let mut found = BTreeSet::new();
    let mut walker = Walker {
        a,
        slices: &slices,
        eigenvalues: &eigenvalues,
        found: &mut found,
    };
    walker.descend(0, EchelonSystem::new(field, n))?;
    Ok(SolutionSet::from_set(field, found))
}

struct Walker<'a> {
    a: &'a Algebra,
    slices: &'a [crate::linalg::Matrix],
    eigenvalues: &'a [BTreeSet<FieldValue>],
    found: &'a mut BTreeSet<Vector>,
}

impl Walker<'_> {
    fn descend(&mut self, i: usize, system: EchelonSystem) -> Result<(), SolverError> {
        let n = self.a.dim();
        let field = self.a.field();
        if i == n {
            let leaf = system.solution();
            if !leaf.is_point() {
                return Err(SolverError::PositiveDimensionalLeaf(leaf.dimension()));
            }
            let v = leaf.particular;
            if v.is_zero() {
                return Ok(());
            }
            if self.a.etherington_violation(&v).is_some() {
                return Err(SolverError::Unverified(v));
            }
            self.found.insert(v);
            return Ok(());
        }
        let slice = &self.slices[i];
        for lambda in &self.eigenvalues[i] {
            let mut branch = system.clone();
            let mut pin = vec![field.zero(); n];
            pin[i] = field.one();
            if !branch.add_equation(&pin, lambda) {
                continue;
            }
            let mut consistent = true;
            for j in 0..n {
                let mut row = slice.row(j).to_vec();
                row[j] = &row[j] - lambda;
                if !branch.add_equation(&row, &field.zero()) {
                    consistent = false;
                    break;
                }
            }
            if consistent {
                self.descend(i + 1, branch)?;
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    NotBaric,
    Unique,
    Multiple,
}

impl Verdict {
    pub fn from_count(count: usize) -> Verdict {
        match count {
            0 => Verdict::NotBaric,
            1 => Verdict::Unique,
            _ => Verdict::Multiple,
        }
    }
}

/// Structural reasons that already guarantee uniqueness.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FastPath {
    /// Baric with `e_i·e_j` independent of `j`.
    ConstantJColumns,
    /// Some weight homomorphism has a kernel whose products all vanish.
    ZeroSquareKernel,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UniquenessCertificate {
    pub verdict: Verdict,
    pub solutions: SolutionSet,
    pub fast_path: Option<FastPath>,
    pub method: SolverMethod,
}

/// Decides whether `a` has zero, one, or several weight homomorphisms.
///
/// The verdict always comes from a complete solve. Over GF(p) with at most
/// [`EXHAUSTIVE_PREFERENCE`] candidate vectors the exhaustive scan is used,
/// otherwise the eigenvalue solver.
pub fn certify_unique(a: &Algebra) -> Result<UniquenessCertificate, SolverError> {
    certify_unique_with(a, DEFAULT_MAX_SCAN)
}

/// As [`certify_unique`], but the exhaustive scan is also skipped when it
/// would visit more than `max_scan` vectors (`0` forces the eigenvalue solver).
pub fn certify_unique_with(a: &Algebra, max_scan: u64) -> Result<UniquenessCertificate, SolverError> {
    let prefer_scan = scan_size(a, EXHAUSTIVE_PREFERENCE.min(max_scan)).is_ok();
    let (solutions, method) = if prefer_scan {
        (solve_exhaustive_with(a, max_scan)?, SolverMethod::Exhaustive)
    } else {
        (solve_eigen(a)?, SolverMethod::Eigen)
    };
    let verdict = Verdict::from_count(solutions.len());
    let fast_path = if solutions.is_empty() {
        None
    } else if a.has_constant_right_factor_products() {
        Some(FastPath::ConstantJColumns)
    } else if solutions
        .solutions()
        .iter()
        .any(|s| a.kernel_square_zero(&WeightHomomorphism::new_unchecked(s.clone())))
    {
        Some(FastPath::ZeroSquareKernel)
    } else {
        None
    };
    Ok(UniquenessCertificate {
        verdict,
        solutions,
        fast_path,
        method,
    })
}

/// All weight homomorphisms of `a`.
pub fn weight_homomorphisms(a: &Algebra) -> Result<Vec<WeightHomomorphism>, SolverError> {
    Ok(certify_unique(a)?
        .solutions
        .solutions
        .into_iter()
        .map(WeightHomomorphism::new_unchecked)
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::catalog;
    use proptest::prelude::*;

    const Q: FieldSpec = FieldSpec::Rationals;

    fn gf(p: u64) -> FieldSpec {
        FieldSpec::prime(p).unwrap()
    }

    fn vecs(field: FieldSpec, xs: &[&[i64]]) -> Vec<Vector> {
        let mut out: Vec<Vector> = xs.iter().map(|x| Vector::from_i64s(field, x).unwrap()).collect();
        out.sort();
        out
    }

    #[test]
    fn exhaustive_examples() {
        let f2 = gf(2);
        let s = solve_exhaustive(&catalog::two_homomorphisms(f2)).unwrap();
        assert_eq!(s.solutions(), vecs(f2, &[&[1, 1, 1]]));
        let f3 = gf(3);
        let s = solve_exhaustive(&catalog::two_homomorphisms(f3)).unwrap();
        assert_eq!(s.solutions(), vecs(f3, &[&[1, 1, 1], &[2, 1, 2]]));
        assert!(solve_exhaustive(&Algebra::zero(f3, 3)).unwrap().is_empty());
        assert_eq!(
            solve_exhaustive(&Algebra::zero(Q, 2)),
            Err(SolverError::InfiniteField(Q))
        );
        assert!(matches!(
            solve_exhaustive_with(&Algebra::zero(gf(101), 3), 1000),
            Err(SolverError::ScanTooLarge { .. })
        ));
    }

    #[test]
    fn eigen_examples() {
        let s = solve_eigen(&catalog::two_homomorphisms(Q)).unwrap();
        assert_eq!(s.solutions(), vecs(Q, &[&[1, 1, 1], &[-1, 1, -1]]));
        assert!(s.is_complete());
        assert!(solve_eigen(&catalog::no_solution_plane(Q)).unwrap().is_empty());
        let s = solve_eigen(&catalog::non_nil_kernel_product(Q)).unwrap();
        assert_eq!(s.solutions(), vecs(Q, &[&[0, 0, 1]]));
    }

    #[test]
    fn plane_has_no_solutions_in_small_characteristic() {
        for p in [2, 3, 5, 7, 11, 13] {
            let a = catalog::no_solution_plane(gf(p));
            assert!(solve_exhaustive(&a).unwrap().is_empty(), "p = {p}");
            assert!(solve_eigen(&a).unwrap().is_empty(), "p = {p}");
        }
    }

    #[test]
    fn certificates() {
        let c = certify_unique(&catalog::non_nil_kernel_product(Q)).unwrap();
        assert_eq!(c.verdict, Verdict::Unique);
        assert_eq!(c.fast_path, None);
        let c = certify_unique(&catalog::two_homomorphisms(Q)).unwrap();
        assert_eq!(c.verdict, Verdict::Multiple);
        assert_eq!(c.solutions.len(), 2);
        let c = certify_unique(&Algebra::zero(Q, 2)).unwrap();
        assert_eq!(c.verdict, Verdict::NotBaric);
        let c = certify_unique(&catalog::constant_product(gf(2), 2)).unwrap();
        assert_eq!(c.verdict, Verdict::Unique);
        assert_eq!(c.fast_path, Some(FastPath::ConstantJColumns));
        assert_eq!(c.method, SolverMethod::Exhaustive);
    }

    #[test]
    fn weight_homomorphism_listing() {
        assert_eq!(weight_homomorphisms(&catalog::two_homomorphisms(Q)).unwrap().len(), 2);
        assert!(weight_homomorphisms(&Algebra::zero(gf(5), 3)).unwrap().is_empty());
        for seed in 0..10 {
            let a = Algebra::random(3, gf(5), seed, true);
            let ws = weight_homomorphisms(&a).unwrap();
            assert!(!ws.is_empty());
            let ones = Vector::constant(gf(5), 3, gf(5).one());
            assert!(ws.iter().any(|w| w.coords() == &ones));
        }
    }

    /// Constant-sum algebras: γ[i][j][·] is random with its last entry fixed
    /// so each slice sums to `alpha`.
    #[test]
    fn constant_sum_solutions() {
        use rand::SeedableRng;
        for p in [3u64, 5, 7] {
            let f = gf(p);
            for seed in 0..20u64 {
                let alpha = FieldValue::from_i64(1 + (seed % (p - 1)) as i64, f);
                let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
                let n = 2;
                let mut gamma = Vec::new();
                for _ in 0..n * n {
                    let first = crate::algebra::random_scalar(&mut rng, f);
                    gamma.push(first.clone());
                    gamma.push(&alpha - &first);
                }
                let a = Algebra::new(f, n, gamma).unwrap();
                assert_eq!(a.constant_structure_sum(), Some(alpha.clone()));
                let sols = solve_exhaustive(&a).unwrap();
                let diag = Vector::constant(f, n, alpha.clone());
                assert!(sols.contains(&diag));
                let constant: Vec<_> = sols
                    .solutions()
                    .iter()
                    .filter(|s| s.entries().iter().all(|x| x == &s[0]))
                    .collect();
                assert_eq!(constant.len(), 1);
            }
        }
    }

    #[test]
    fn semi_natural_iff_all_ones_solves() {
        for seed in 0..200u64 {
            let f = gf([2, 3, 5][(seed % 3) as usize]);
            let n = 1 + (seed % 3) as usize;
            let a = Algebra::random(n, f, seed, seed % 4 == 0);
            let ones = Vector::constant(f, n, f.one());
            let sols = solve_exhaustive(&a).unwrap();
            assert_eq!(a.is_semi_natural(), sols.contains(&ones), "{a:?}");
        }
    }

    #[test]
    fn zero_square_kernel_implies_unique() {
        for seed in 0..300u64 {
            let f = gf([2, 3, 5][(seed % 3) as usize]);
            let a = Algebra::random(2 + (seed % 2) as usize, f, seed, true);
            let c = certify_unique(&a).unwrap();
            if c.fast_path.is_some() {
                assert_eq!(c.verdict, Verdict::Unique, "{a:?}");
            }
        }
    }

    #[test]
    fn constant_right_factor_products_are_unique() {
        // γ[i][j][k] independent of j, slices summing to 1
        for seed in 0..100u64 {
            let f = gf([3, 5, 7][(seed % 3) as usize]);
            let n = 1 + (seed % 3) as usize;
            let base = Algebra::random(n, f, seed, true);
            let a = Algebra::from_fn(f, n, |i, _, k| base.gamma(i, 0, k).clone()).unwrap();
            assert!(a.has_constant_right_factor_products());
            let c = certify_unique(&a).unwrap();
            assert_eq!(c.verdict, Verdict::Unique);
            assert_eq!(c.fast_path, Some(FastPath::ConstantJColumns));
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]
        #[test]
        fn eigen_matches_exhaustive(
            seed in any::<u64>(),
            n in 1usize..4,
            pi in 0usize..4,
            baric in any::<bool>(),
        ) {
            let f = gf([2, 3, 5, 7][pi]);
            let a = Algebra::random(n, f, seed, baric);
            let lhs = solve_eigen(&a).unwrap();
            let rhs = solve_exhaustive(&a).unwrap();
            prop_assert_eq!(&lhs, &rhs);
            for s in lhs.solutions() {
                prop_assert!(a.is_weight_homomorphism(s));
            }
        }

        #[test]
        fn rational_solutions_reduce_mod_p(seed in any::<u64>(), n in 1usize..4) {
            // Every rational solution with p-integral coordinates reduces to a
            // GF(p) solution.
            let a = Algebra::random(n, Q, seed, seed % 2 == 0);
            let sols = solve_eigen(&a).unwrap();
            for s in sols.solutions() {
                prop_assert!(a.is_weight_homomorphism(s));
                for p in [5u64, 7] {
                    let f = gf(p);
                    let Ok(ap) = a.map_field(f) else { continue };
                    let reduced: Result<Vec<_>, _> = s.entries().iter()
                        .map(|x| FieldValue::from_rational(x.as_rational().unwrap(), f))
                        .collect();
                    if let Ok(r) = reduced {
                        let r = Vector::new(f, r).unwrap();
                        if !r.is_zero() {
                            prop_assert!(solve_exhaustive(&ap).unwrap().contains(&r));
                        }
                    }
                }
            }
        }
    }
}
