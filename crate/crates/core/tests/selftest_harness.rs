use baric_core::algebra::catalog;
use baric_core::selftest::{self, ReferenceData, DEFAULT_SEED};
use baric_core::{Algebra, FieldSpec, FieldValue};

fn corrupt(a: &Algebra, flat_index: usize, value: i64) -> Algebra {
    let mut gamma = a.gamma_flat().to_vec();
    gamma[flat_index] = FieldValue::from_i64(value, a.field());
    Algebra::new(a.field(), a.dim(), gamma).unwrap()
}

#[test]
fn default_data_passes_the_fixed_checks() {
    let data = ReferenceData::default();
    for r in [
        selftest::check_two_homomorphisms(&data),
        selftest::check_non_nil_kernel(&data),
        selftest::check_census(&data),
        selftest::check_mod_two_collapse(&data),
    ] {
        assert!(r.passed, "{r}");
    }
}

#[test]
fn corrupted_constants_fail_the_two_solution_check() {
    let q = FieldSpec::Rationals;
    let good = catalog::two_homomorphisms(q);
    // γ_112: e1·e1 = e2 becomes e1·e1 = 2·e2.
    let data = ReferenceData {
        two_homomorphisms: corrupt(&good, 1, 2),
        ..ReferenceData::default()
    };
    let r = selftest::check_two_homomorphisms(&data);
    assert!(!r.passed, "{r}");
    assert!(r.to_string().starts_with("[FAIL]"));

    // Mod 2 the corrupted product vanishes, forcing w(e1) = 0.
    let r = selftest::check_mod_two_collapse(&data);
    assert!(!r.passed, "{r}");
}

#[test]
fn corrupted_census_algebra_fails() {
    let data = ReferenceData {
        constant_product: Algebra::zero(FieldSpec::prime(2).unwrap(), 2),
        ..ReferenceData::default()
    };
    assert!(!selftest::check_census(&data).passed);
}

#[test]
fn verdicts_are_deterministic_per_seed() {
    for seed in [DEFAULT_SEED, 7] {
        let first = selftest::run_all(seed);
        let second = selftest::run_all(seed);
        assert_eq!(first.len(), 10);
        for (a, b) in first.iter().zip(&second) {
            assert!(a.passed, "seed {seed}: {a}");
            assert_eq!((a.id, a.passed, &a.detail), (b.id, b.passed, &b.detail));
        }
    }
}
