//! Built-in acceptance checks over the reference algebras and seeded random
//! samples. Each check reports pass/fail, a one-line detail and its runtime
//! against a fixed budget; a check that overruns its budget fails.

use std::fmt;
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{catalog, random_scalar, Algebra, BasisChange, WeightHomomorphism};
use crate::fields::{FieldSpec, FieldValue};
use crate::linalg::{gl_order, matrix_with_row_sums, Matrix, Vector};
use crate::seminat::{
    census, certify_unique_via_transitions, row_stochastic_count, row_sum_solution_check, Limits,
};
use crate::solver::{certify_unique, solve_eigen, solve_exhaustive, FastPath, Verdict};

pub const DEFAULT_SEED: u64 = 20_240_601;

#[derive(Debug, Clone)]
pub struct CheckResult {
    pub id: u32,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub elapsed: Duration,
    pub budget: Duration,
}

impl fmt::Display for CheckResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}] {:>2} {}: {} ({:.3}s, budget {}s)",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.detail,
            self.elapsed.as_secs_f64(),
            self.budget.as_secs_f64()
        )
    }
}

/// The reference algebras the checks run on. Replace one to confirm that
/// the harness notices.
#[derive(Debug, Clone)]
pub struct ReferenceData {
    /// Three-dimensional algebra over ℚ with weight homomorphisms (1,1,1), (−1,1,−1).
    pub two_homomorphisms: Algebra,
    /// Two-dimensional algebra over ℚ without weight homomorphisms.
    pub no_solution_plane: Algebra,
    /// One-dimensional algebra `e² = e` over ℚ.
    pub idempotent_line: Algebra,
    /// `e_i·e_j = e_1`, dimension 2, over GF(2).
    pub constant_product: Algebra,
}

impl Default for ReferenceData {
    fn default() -> Self {
        let q = FieldSpec::Rationals;
        ReferenceData {
            two_homomorphisms: catalog::two_homomorphisms(q),
            no_solution_plane: catalog::no_solution_plane(q),
            idempotent_line: catalog::idempotent_line(q),
            constant_product: catalog::constant_product(gf(2), 2),
        }
    }
}

fn gf(p: u64) -> FieldSpec {
    FieldSpec::prime(p).expect("prime")
}

fn vec_of(field: FieldSpec, xs: &[i64]) -> Vector {
    Vector::from_i64s(field, xs).expect("nonempty")
}

fn timed(
    id: u32,
    name: &'static str,
    budget_secs: f64,
    body: impl FnOnce() -> Result<String, String>,
) -> CheckResult {
    let start = Instant::now();
    let outcome = body();
    let elapsed = start.elapsed();
    let budget = Duration::from_secs_f64(budget_secs);
    let (mut passed, mut detail) = match outcome {
        Ok(d) => (true, d),
        Err(d) => (false, d),
    };
    if passed && elapsed > budget {
        passed = false;
        detail = format!("{detail}; exceeded time budget");
    }
    CheckResult {
        id,
        name,
        passed,
        detail,
        elapsed,
        budget,
    }
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err_string<E: fmt::Display>(e: E) -> String {
    e.to_string()
}

fn primes_up_to(limit: u64) -> Vec<u64> {
    (2..=limit).filter(|&p| FieldSpec::prime(p).is_ok()).collect()
}

fn random_nonsingular<R: Rng>(rng: &mut R, field: FieldSpec, n: usize) -> Matrix {
    loop {
        let m = Matrix::from_rows(
            field,
            (0..n)
                .map(|_| (0..n).map(|_| random_scalar(rng, field)).collect())
                .collect(),
        )
        .expect("well-formed");
        if m.is_nonsingular() {
            return m;
        }
    }
}

fn random_row_stochastic<R: Rng>(rng: &mut R, field: FieldSpec, n: usize) -> Matrix {
    loop {
        let rows = (0..n)
            .map(|_| {
                let mut row: Vec<FieldValue> = (0..n - 1).map(|_| random_scalar(rng, field)).collect();
                let rest = row.iter().fold(field.zero(), |acc, x| &acc + x);
                row.push(&field.one() - &rest);
                row
            })
            .collect();
        let m = Matrix::from_rows(field, rows).expect("well-formed");
        if m.is_nonsingular() {
            return m;
        }
    }
}

/// Weight homomorphisms of the three-dimensional reference algebra over ℚ.
pub fn check_two_homomorphisms(data: &ReferenceData) -> CheckResult {
    timed(1, "two weight homomorphisms over Q", 0.1, || {
        let q = FieldSpec::Rationals;
        let sols = solve_eigen(&data.two_homomorphisms).map_err(err_string)?;
        let mut expected = vec![vec_of(q, &[1, 1, 1]), vec_of(q, &[-1, 1, -1])];
        expected.sort();
        ensure(sols.solutions() == expected, || {
            format!("expected {{(1,1,1), (-1,1,-1)}}, found {:?}", sols.solutions())
        })?;
        Ok("solutions {(-1, 1, -1), (1, 1, 1)}".into())
    })
}

/// Unique weight homomorphism whose kernel is not nil.
pub fn check_non_nil_kernel(data: &ReferenceData) -> CheckResult {
    timed(2, "unique homomorphism with idempotent in kernel", 0.1, || {
        let q = FieldSpec::Rationals;
        let plane = solve_eigen(&data.no_solution_plane).map_err(err_string)?;
        ensure(plane.is_empty(), || {
            format!("plane should have no solutions, found {:?}", plane.solutions())
        })?;
        let product = data
            .no_solution_plane
            .direct_product(&data.idempotent_line)
            .map_err(err_string)?;
        let sols = solve_eigen(&product).map_err(err_string)?;
        let proj = vec_of(q, &[0, 0, 1]);
        ensure(sols.solutions() == [proj.clone()], || {
            format!("expected {{(0,0,1)}}, found {:?}", sols.solutions())
        })?;
        let w = WeightHomomorphism::new(&product, proj).map_err(err_string)?;
        let e1 = vec_of(q, &[1, 0, 0]);
        ensure(w.apply(&e1).is_zero() && product.multiply(&e1, &e1).map_err(err_string)? == e1, || {
            "(e1, 0) should be an idempotent kernel element".into()
        })?;
        let witness = product.kernel_idempotent_witness(&w, 0);
        ensure(witness.is_some(), || "no idempotent kernel witness found".into())?;
        ensure(!product.kernel_square_zero(&w), || "kernel unexpectedly squares to zero".into())?;
        let cert = certify_unique(&product).map_err(err_string)?;
        ensure(cert.verdict == Verdict::Unique && cert.fast_path.is_none(), || {
            format!("certificate {:?} / {:?}", cert.verdict, cert.fast_path)
        })?;
        Ok(format!(
            "plane: none; product: {{(0, 0, 1)}}; kernel idempotent {}",
            witness.expect("checked")
        ))
    })
}

/// The eigenvalue solver agrees with exhaustive search on random algebras.
pub fn check_solver_equivalence(seed: u64) -> CheckResult {
    timed(3, "eigen solver matches exhaustive search", 60.0, || {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x03);
        let primes = primes_up_to(10_000);
        let eligible: Vec<Vec<u64>> = (1..=3u32)
            .map(|n| primes.iter().copied().filter(|p| p.pow(n) <= 10_000).collect())
            .collect();
        let total = 1200;
        for idx in 0..total {
            let n = 1 + idx % 3;
            let choices = &eligible[n - 1];
            let p = choices[rng.random_range(0..choices.len())];
            let baric = rng.random_bool(0.5);
            let a = Algebra::random_with(&mut rng, n, gf(p), baric);
            let lhs = solve_eigen(&a).map_err(err_string)?;
            let rhs = solve_exhaustive(&a).map_err(err_string)?;
            ensure(lhs == rhs, || format!("mismatch on {a:?}: {lhs:?} vs {rhs:?}"))?;
        }
        Ok(format!("{total} algebras, n in 1..=3, p^n <= 10^4, zero mismatches"))
    })
}

/// Two-dimensional non-commutative baric algebras have exactly one weight homomorphism.
pub fn check_two_dim_noncommutative(seed: u64) -> CheckResult {
    timed(4, "2-dim non-commutative baric algebras are uniquely baric", 30.0, || {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x04);
        let total = 1200;
        for idx in 0..total {
            let p = [3u64, 5, 7, 11][idx % 4];
            let a = loop {
                let a = Algebra::random_with(&mut rng, 2, gf(p), true);
                if !a.is_commutative() {
                    break a;
                }
            };
            let sols = solve_exhaustive(&a).map_err(err_string)?;
            ensure(sols.len() == 1, || format!("{} solutions for {a:?}", sols.len()))?;
        }
        Ok(format!("{total} algebras over GF(3|5|7|11), zero violations"))
    })
}

fn transition_sample(rng: &mut ChaCha8Rng) -> Vec<Algebra> {
    let mut sample = vec![
        catalog::two_homomorphisms(gf(2)),
        catalog::two_homomorphisms(gf(3)),
        catalog::constant_product(gf(2), 2),
        catalog::constant_product(gf(3), 3),
        catalog::non_nil_kernel_product(gf(2)),
        catalog::non_nil_kernel_product(gf(3)),
    ];
    for n in 1..=3 {
        for p in [2u64, 3] {
            let f = gf(p);
            for k in 0..8 {
                let a = Algebra::random_with(rng, n, f, true);
                // Every other one is moved out of its semi-natural frame.
                if k % 2 == 1 {
                    let m = random_nonsingular(rng, f, n);
                    let change = BasisChange::new(m).expect("nonsingular");
                    sample.push(a.change_basis(&change).expect("same field"));
                } else {
                    sample.push(a);
                }
            }
        }
    }
    sample
}

/// Row-stochastic transitions between semi-natural bases ⇔ unique weight homomorphism.
pub fn check_transition_criterion(seed: u64) -> CheckResult {
    timed(5, "row-stochastic transitions iff unique", 300.0, || {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x05);
        let sample = transition_sample(&mut rng);
        let (mut unique, mut multiple) = (0, 0);
        for a in &sample {
            let verdict = certify_unique(a).map_err(err_string)?.verdict;
            let via = certify_unique_via_transitions(a, Limits::default()).map_err(err_string)?;
            ensure(via == (verdict == Verdict::Unique), || {
                format!("transition test says {via}, verdict {verdict:?} for {a:?}")
            })?;
            match verdict {
                Verdict::Unique => unique += 1,
                _ => multiple += 1,
            }
        }
        ensure(unique > 0 && multiple > 0, || {
            format!("sample must contain both verdicts ({unique} unique, {multiple} multiple)")
        })?;
        Ok(format!(
            "{} baric algebras ({unique} unique, {multiple} multiple), zero violations",
            sample.len()
        ))
    })
}

/// Semi-natural basis counts and coset classes.
pub fn check_census(data: &ReferenceData) -> CheckResult {
    timed(6, "semi-natural basis census", 60.0, || {
        let a = data.two_homomorphisms.map_field(gf(3)).map_err(err_string)?;
        let report = census(&a, Limits::default()).map_err(err_string)?;
        let rs_order = gl_order(3, 3) / BigUint::from(26u32);
        ensure(BigUint::from(report.rs_group_order) == rs_order && report.rs_group_order == 432, || {
            format!("|RS_3(F_3)| = {}, expected {rs_order}", report.rs_group_order)
        })?;
        ensure(
            report.num_weight_homs == 2
                && report.num_seminat_bases == 864
                && report.num_seminat_bases == 2 * 432
                && report.num_classes == 2
                && report.class_sizes == [432, 432],
            || format!("GF(3) census {report:?}"),
        )?;
        let small = census(&data.constant_product, Limits::default()).map_err(err_string)?;
        ensure(
            small.num_weight_homs == 1
                && small.num_seminat_bases == 2
                && small.rs_group_order == 2
                && small.class_sizes == [2],
            || format!("GF(2) census {small:?}"),
        )?;
        Ok("GF(3): 864 = 2 x 432 bases in 2 classes of 432; GF(2): 2 = 1 x 2 bases in 1 class".into())
    })
}

/// Nonsingular matrices with prescribed nonzero row sums.
pub fn check_row_sum_constructor(seed: u64) -> CheckResult {
    timed(7, "nonsingular matrix with given row sums", 5.0, || {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x07);
        let fields = [FieldSpec::Rationals, gf(2), gf(3), gf(5), gf(101)];
        let total = 1200;
        let mut lone_nonzero = 0;
        for idx in 0..total {
            let field = fields[idx % fields.len()];
            let n = 1 + rng.random_range(0..6);
            let alpha = if idx % 3 == 0 {
                // a single nonzero coordinate, the rest zero
                let pos = rng.random_range(0..n);
                let mut v = vec![field.zero(); n];
                v[pos] = loop {
                    let x = random_scalar(&mut rng, field);
                    if !x.is_zero() {
                        break x;
                    }
                };
                lone_nonzero += 1;
                Vector::new(field, v).expect("nonempty")
            } else {
                loop {
                    let v = Vector::new(field, (0..n).map(|_| random_scalar(&mut rng, field)).collect())
                        .expect("nonempty");
                    if !v.is_zero() {
                        break v;
                    }
                }
            };
            let m = matrix_with_row_sums(&alpha).map_err(err_string)?;
            let det = m.determinant().map_err(err_string)?;
            ensure(!det.is_zero() && m.row_sums() == alpha, || {
                format!("bad matrix {m:?} for {alpha:?}")
            })?;
        }
        let zero = Vector::zeros(FieldSpec::Rationals, 3);
        ensure(matrix_with_row_sums(&zero).is_err(), || "zero row sums accepted".into())?;
        Ok(format!("{total} vectors ({lone_nonzero} with one nonzero entry), n <= 6; zero vector rejected"))
    })
}

/// Row-stochastic matrices form a group of order |GL_n|/(pⁿ − 1).
pub fn check_row_stochastic_group(seed: u64) -> CheckResult {
    timed(8, "row-stochastic subgroup closure and order", 30.0, || {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x08);
        let fields = [FieldSpec::Rationals, gf(2), gf(3), gf(7)];
        let total = 1000;
        for idx in 0..total {
            let field = fields[idx % fields.len()];
            let n = 1 + rng.random_range(0..4);
            let a = random_row_stochastic(&mut rng, field, n);
            let b = random_row_stochastic(&mut rng, field, n);
            let prod = a.mul(&b).map_err(err_string)?;
            let inv = a.inverse().map_err(err_string)?;
            ensure(prod.is_row_stochastic() && inv.is_row_stochastic(), || {
                format!("closure fails for {a:?}, {b:?}")
            })?;
            let (at, bt) = (a.transpose(), b.transpose());
            ensure(
                at.mul(&bt).map_err(err_string)?.is_column_stochastic()
                    && at.inverse().map_err(err_string)?.is_column_stochastic(),
                || format!("column closure fails for {a:?}, {b:?}"),
            )?;
        }
        let mut orders = Vec::new();
        for (n, p, expected) in [(2usize, 2u64, 2u64), (2, 3, 6), (3, 2, 24)] {
            let count = row_stochastic_count(n, gf(p), Limits::default().max_cells).map_err(err_string)?;
            let quotient = gl_order(n, p) / BigUint::from(p.pow(n as u32) - 1);
            ensure(BigUint::from(count) == quotient && count == expected, || {
                format!("|RS_{n}(F_{p})| = {count}, expected {quotient}")
            })?;
            orders.push(count.to_string());
        }
        Ok(format!("{total} pairs closed; orders {}", orders.join(", ")))
    })
}

/// Semi-natural frame ⇔ row sums solve the system, on random pairs.
pub fn check_row_sum_biconditional(seed: u64) -> CheckResult {
    timed(9, "semi-natural iff row sums solve the system", 60.0, || {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x09);
        let mut both_hold = 0;
        let f3 = gf(3);
        let total_gf = 1000;
        for idx in 0..total_gf {
            let n = 1 + rng.random_range(0..3);
            let baric = rng.random_bool(0.5);
            let a = Algebra::random_with(&mut rng, n, f3, baric);
            let sols = solve_exhaustive(&a).map_err(err_string)?;
            // Half the matrices are aimed at a solution so both sides can hold.
            let m = if idx % 2 == 0 && !sols.is_empty() {
                let alpha = &sols.solutions()[rng.random_range(0..sols.len())];
                let base = matrix_with_row_sums(alpha).map_err(err_string)?;
                base.mul(&random_row_stochastic(&mut rng, f3, n)).map_err(err_string)?
            } else {
                random_nonsingular(&mut rng, f3, n)
            };
            ensure(row_sum_solution_check(&a, &m).map_err(err_string)?, || {
                format!("biconditional fails for {a:?}, {m:?}")
            })?;
            if sols.contains(&m.row_sums()) {
                both_hold += 1;
            }
        }
        let q = FieldSpec::Rationals;
        let total_q = 100;
        for idx in 0..total_q {
            let n = 1 + rng.random_range(0..3);
            let a = Algebra::random_with(&mut rng, n, q, true);
            let m = if idx % 2 == 0 {
                random_row_stochastic(&mut rng, q, n)
            } else {
                random_nonsingular(&mut rng, q, n)
            };
            ensure(row_sum_solution_check(&a, &m).map_err(err_string)?, || {
                format!("biconditional fails for {a:?}, {m:?}")
            })?;
        }
        ensure(both_hold > 0, || "no case with both sides true".into())?;
        Ok(format!(
            "{total_gf} pairs over GF(3) ({both_hold} semi-natural), {total_q} over Q"
        ))
    })
}

/// Over GF(2) the two rational weight homomorphisms coincide.
pub fn check_mod_two_collapse(data: &ReferenceData) -> CheckResult {
    timed(10, "two homomorphisms collapse mod 2", 0.1, || {
        let f2 = gf(2);
        let a = data.two_homomorphisms.map_field(f2).map_err(err_string)?;
        let expected = [vec_of(f2, &[1, 1, 1])];
        let scan = solve_exhaustive(&a).map_err(err_string)?;
        let eigen = solve_eigen(&a).map_err(err_string)?;
        ensure(scan.solutions() == expected && eigen == scan, || {
            format!("found {:?} / {:?}", scan.solutions(), eigen.solutions())
        })?;
        let cert = certify_unique(&a).map_err(err_string)?;
        ensure(cert.verdict == Verdict::Unique, || format!("verdict {:?}", cert.verdict))?;
        ensure(cert.fast_path != Some(FastPath::ConstantJColumns), || "unexpected fast path".into())?;
        Ok("exactly {(1, 1, 1)} over GF(2)".into())
    })
}

/// Runs every check in order.
pub fn run_all(seed: u64) -> Vec<CheckResult> {
    run_all_with(&ReferenceData::default(), seed)
}

pub fn run_all_with(data: &ReferenceData, seed: u64) -> Vec<CheckResult> {
    vec![
        check_two_homomorphisms(data),
        check_non_nil_kernel(data),
        check_solver_equivalence(seed),
        check_two_dim_noncommutative(seed),
        check_transition_criterion(seed),
        check_census(data),
        check_row_sum_constructor(seed),
        check_row_stochastic_group(seed),
        check_row_sum_biconditional(seed),
        check_mod_two_collapse(data),
    ]
}
