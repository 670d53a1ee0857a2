mod common;

use common::*;
use ising_avn::avn::{self, Constraint, ConstraintSet, Verdict};
use ising_avn::model;
use ising_avn::search;
use ising_avn::{Letter, PauliString, Sign};
use proptest::prelude::*;

/// Greedily keeps the candidates that commute with everything kept so far.
fn commuting_set(n: usize, items: &[(Vec<Letter>, bool, bool)]) -> ConstraintSet {
    let mut set = ConstraintSet::new(n, Vec::new()).unwrap();
    for (ls, neg, minus) in items {
        let obs = PauliString::from_letters(ls, if *neg { Sign::Minus } else { Sign::Plus }).unwrap();
        let c = Constraint::new(obs, if *minus { Sign::Minus } else { Sign::Plus }).unwrap();
        let _ = set.push(c);
    }
    set
}

fn random_set_sized(n: usize) -> impl Strategy<Value = ConstraintSet> {
    prop::collection::vec((letters(n), any::<bool>(), any::<bool>()), 1..=10).prop_map(move |items| commuting_set(n, &items))
}

fn random_set() -> impl Strategy<Value = ConstraintSet> {
    (1usize..=4).prop_flat_map(random_set_sized)
}

/// Independent row oracle: occurrence counts per (site, letter) straight from the letters.
fn occurrences_even(set: &ConstraintSet, rows: &[usize]) -> bool {
    let mut counts = std::collections::HashMap::new();
    for &i in rows {
        for (s, l) in set.constraints()[i].observable.letters().into_iter().enumerate() {
            if l != Letter::I {
                *counts.entry((s, l)).or_insert(0u32) += 1;
            }
        }
    }
    counts.values().all(|c| c % 2 == 0)
}

fn rhs_product(set: &ConstraintSet, rows: &[usize]) -> Sign {
    rows.iter().fold(Sign::Plus, |acc, &i| acc * set.constraints()[i].outcome_product())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn solver_agrees_with_brute_force(set in random_set()) {
        let system = avn::build_lhv_system(&set);
        let fast = avn::is_classically_satisfiable(&system);
        let slow = avn::brute_force_satisfiable(&set).unwrap();
        prop_assert_eq!(fast.is_satisfiable(), slow.verdict.is_satisfiable());
        match (&fast, &slow.verdict) {
            (Verdict::Satisfiable { assignment }, Verdict::Satisfiable { assignment: other }) => {
                prop_assert!(system.is_satisfied_by(assignment));
                prop_assert!(system.is_satisfied_by(other));
            }
            (Verdict::Unsatisfiable { certificate }, Verdict::Unsatisfiable { certificate: other }) => {
                // Both report the smallest, lexicographically first contradiction.
                prop_assert_eq!(certificate, other);
            }
            _ => unreachable!(),
        }
    }

    #[test]
    fn certificates_are_sound(set in random_set()) {
        let system = avn::build_lhv_system(&set);
        if let Verdict::Unsatisfiable { certificate } = avn::is_classically_satisfiable(&system) {
            prop_assert!(system.verifies_certificate(&certificate));
            prop_assert!(occurrences_even(&set, &certificate));
            prop_assert_eq!(rhs_product(&set, &certificate), Sign::Minus);
            // No proper subset obtained by dropping one row is still a certificate.
            for k in 0..certificate.len() {
                let mut smaller = certificate.clone();
                smaller.remove(k);
                prop_assert!(!system.verifies_certificate(&smaller));
            }
        }
    }

    /// Even occurrence of every local letter leaves a multiple of the identity.
    #[test]
    fn certificate_product_is_plus_or_minus_identity(set in random_set()) {
        let system = avn::build_lhv_system(&set);
        if let Some(cert) = avn::is_classically_satisfiable(&system).certificate() {
            let p = avn::operator_product(&set, cert).unwrap();
            prop_assert!(p.is_identity_letters());
            prop_assert!(p.sign().is_some());
        }
    }

    #[test]
    fn sign_flip_covariance(
        (set, state) in (1usize..=4).prop_flat_map(|n| (random_set_sized(n), stabilizer_like_sized(n))),
        k in any::<prop::sample::Index>(),
    ) {
        let i = k.index(set.len());
        let flipped = set.with_flipped(i);
        let a = avn::verify_eigenequations(&set, &state, 1e-10).unwrap();
        let b = avn::verify_eigenequations(&flipped, &state, 1e-10).unwrap();
        for (x, y) in a.residuals.iter().zip(&b.residuals) {
            prop_assert!((x - y).abs() < 1e-14);
        }
        let va = avn::is_classically_satisfiable(&avn::build_lhv_system(&set));
        let vb = avn::is_classically_satisfiable(&avn::build_lhv_system(&flipped));
        prop_assert_eq!(va, vb);
    }

    /// Constraints that all hold on one state commute, and a contradiction
    /// among them multiplies to the eigenvalue product times the identity.
    #[test]
    fn stabilizers_of_a_state_obey_operator_parity(state in stabilizer_like_strategy(3)) {
        let inv = search::enumerate_stabilizers(&state, 1e-9).unwrap();
        let set = ConstraintSet::new(state.n(), (0..inv.len()).map(|i| inv.constraint(i)).collect());
        let set = set.expect("stabilizers of one state commute");
        prop_assert!(avn::verify_eigenequations(&set, &state, 1e-9).unwrap().passed());
        let system = avn::build_lhv_system(&set);
        if set.len() <= 24 {
            if let Some(cert) = avn::is_classically_satisfiable(&system).certificate() {
                let p = avn::operator_product(&set, cert).unwrap();
                let eig = cert.iter().fold(Sign::Plus, |acc, &i| acc * set.constraints()[i].eigenvalue);
                let expected = PauliString::identity(state.n()).unwrap();
                prop_assert_eq!(p, if eig == Sign::Minus { expected.negate() } else { expected });
            }
        }
    }
}

#[test]
fn standard_sets_solver_and_brute_force() {
    for (set, scanned) in [(avn::standard_ghz_set(3).unwrap(), 64), (avn::standard_ghz_set(4).unwrap(), 256)] {
        let bf = avn::brute_force_satisfiable(&set).unwrap();
        assert_eq!(bf.scanned, scanned);
        assert_eq!(bf.verdict, Verdict::Unsatisfiable { certificate: vec![0, 1, 2, 3] });
        assert_eq!(avn::is_classically_satisfiable(&avn::build_lhv_system(&set)), bf.verdict);
        for k in 0..4 {
            let smaller = set.without(k);
            assert!(avn::is_classically_satisfiable(&avn::build_lhv_system(&smaller)).is_satisfiable());
            assert!(avn::brute_force_satisfiable(&smaller).unwrap().verdict.is_satisfiable());
        }
    }
}

#[test]
fn general_sets_hold_on_uniform_states() {
    for n in 3..=12 {
        let set = avn::standard_ghz_set(n).unwrap();
        let state = model::even_parity_uniform_state(n).unwrap();
        let report = avn::verify_eigenequations(&set, &state, 1e-12).unwrap();
        assert!(report.passed() && report.max_residual() < 1e-12, "n={n}");
        // Eigenvalues read off the state agree with the fixed signs.
        let observables: Vec<PauliString> = set.iter().map(|c| c.observable).collect();
        assert_eq!(avn::assign_eigenvalues(&observables, &state, 1e-12).unwrap(), set);
        assert!(avn::certify_avn(&set, &state, 1e-10).unwrap().holds());
    }
}

#[test]
fn excited_set_certifies() {
    let set = avn::excited_ghz_set_4();
    let state = model::first_excited_state_4().unwrap();
    let cert = avn::certify_avn(&set, &state, 1e-10).unwrap();
    assert!(cert.holds());
    assert_eq!(cert.system.num_variables(), 8);
    assert_eq!(cert.system.rhs, [false, false, false, true]);
    let bf = avn::brute_force_satisfiable(&set).unwrap();
    assert_eq!(bf.scanned, 256);
    assert!(!bf.verdict.is_satisfiable());
}

#[test]
fn small_satisfiable_examples() {
    let single: ConstraintSet = ConstraintSet::new(3, vec!["ZZZ = 1".parse().unwrap()]).unwrap();
    let system = avn::build_lhv_system(&single);
    assert_eq!(system.num_variables(), 3);
    assert_eq!(avn::is_classically_satisfiable(&system), Verdict::Satisfiable { assignment: vec![Sign::Plus; 3] });
    let pair = ConstraintSet::new(3, vec!["ZZZ = 1".parse().unwrap(), "YYZ = -1".parse().unwrap()]).unwrap();
    assert!(avn::brute_force_satisfiable(&pair).unwrap().verdict.is_satisfiable());
    assert!(avn::is_classically_satisfiable(&avn::build_lhv_system(&pair)).is_satisfiable());
}

#[test]
fn anticommuting_constraints_are_rejected() {
    let mut set = ConstraintSet::new(2, vec!["XX = 1".parse().unwrap()]).unwrap();
    assert!(set.push("ZI = 1".parse().unwrap()).is_err());
    assert!(set.push("ZZ = 1".parse().unwrap()).is_ok());
}
