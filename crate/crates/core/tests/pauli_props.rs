mod common;

use common::*;
use ising_avn::model::{self, IsingParams};
use ising_avn::pauli::{PauliString, DEFAULT_DENSE_CAP};
use ising_avn::StateVector;
use proptest::prelude::*;

fn sized_pair() -> impl Strategy<Value = (PauliString, PauliString)> {
    (1usize..=6).prop_flat_map(|n| (pauli(n), pauli(n)))
}

proptest! {
    #[test]
    fn to_matrix_matches_kronecker(p in (1usize..=5).prop_flat_map(pauli)) {
        let m = p.to_matrix(DEFAULT_DENSE_CAP).unwrap();
        prop_assert_eq!(m, kron_matrix(&p));
    }

    #[test]
    fn commutation_matches_dense((a, b) in sized_pair()) {
        let ma = a.to_matrix(DEFAULT_DENSE_CAP).unwrap();
        let mb = b.to_matrix(DEFAULT_DENSE_CAP).unwrap();
        prop_assert_eq!(a.commutes(&b).unwrap(), &ma * &mb == &mb * &ma);
    }

    #[test]
    fn multiply_matches_dense((a, b) in sized_pair()) {
        let prod = a.multiply(&b).unwrap().to_matrix(DEFAULT_DENSE_CAP).unwrap();
        let dense = kron_matrix(&a) * kron_matrix(&b);
        prop_assert!(max_abs_diff(&prod, &dense) <= 1e-13);
    }

    #[test]
    fn multiply_is_associative(
        (a, b, c) in (1usize..=8).prop_flat_map(|n| (pauli(n), pauli(n), pauli(n)))
    ) {
        let left = a.multiply(&b).unwrap().multiply(&c).unwrap();
        let right = a.multiply(&b.multiply(&c).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn swapped_product_picks_up_commutator_sign((a, b) in sized_pair()) {
        let ab = a.multiply(&b).unwrap();
        let ba = b.multiply(&a).unwrap();
        if a.commutes(&b).unwrap() {
            prop_assert_eq!(ab, ba);
        } else {
            prop_assert_eq!(ab, ba.negate());
        }
    }

    #[test]
    fn apply_matches_dense((p, v) in (1usize..=6).prop_flat_map(|n| (pauli(n), complex_vec(1 << n)))) {
        let fast = p.apply_amplitudes(&v).unwrap();
        let slow = dense_apply(&kron_matrix(&p), &v);
        let err = fast.iter().zip(&slow).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
        prop_assert!(err <= 1e-13);
    }

    #[test]
    fn hermiticity_matches_adjoint(p in (1usize..=5).prop_flat_map(pauli)) {
        let m = kron_matrix(&p);
        prop_assert_eq!(p.is_hermitian(), m.adjoint() == m);
    }

    #[test]
    fn hermitian_strings_square_to_identity(ls in (1usize..=12).prop_flat_map(letters), neg in any::<bool>()) {
        let sign = if neg { ising_avn::Sign::Minus } else { ising_avn::Sign::Plus };
        let p = PauliString::from_letters(&ls, sign).unwrap();
        let sq = p.multiply(&p).unwrap();
        prop_assert!(sq.is_identity_letters());
        prop_assert_eq!(sq.phase_exp(), 0);
    }

    #[test]
    fn format_parse_round_trip(ls in (1usize..=10).prop_flat_map(letters), neg in any::<bool>()) {
        let sign = if neg { ising_avn::Sign::Minus } else { ising_avn::Sign::Plus };
        let p = PauliString::from_letters(&ls, sign).unwrap();
        prop_assert_eq!(p.to_string().parse::<PauliString>().unwrap(), p);
        let indexed: Vec<String> = p.support().map(|(s, l)| format!("{l}{}", s + 1)).collect();
        if !indexed.is_empty() {
            let text = format!("{}{}", if neg { "-" } else { "+" }, indexed.join(" "));
            prop_assert_eq!(PauliString::parse_sized(&text, Some(p.n())).unwrap(), p);
        }
    }
}

/// Commuting observables sharing an eigenvector multiply to the eigenvalue product times I.
#[test]
fn ghz_operators_multiply_to_minus_identity() {
    for ops in [["YYZ", "YZY", "ZYY", "ZZZ"], ["XXYY", "XYXY", "XYYX", "XXXX"]] {
        let ops = ops.map(|s| s.parse::<PauliString>().unwrap());
        let n = ops[0].n();
        let product = ops.iter().skip(1).fold(ops[0], |acc, p| acc.multiply(p).unwrap());
        let minus_identity = PauliString::identity(n).unwrap().negate();
        assert_eq!(product, minus_identity);
        let dense = ops.iter().map(kron_matrix).reduce(|a, b| a * b).unwrap();
        assert!(max_abs_diff(&dense, &kron_matrix(&minus_identity)) < 1e-15);
    }
}

#[test]
fn excited_operators_commute_densely() {
    let a: PauliString = "XXYY".parse().unwrap();
    let b: PauliString = "XXXX".parse().unwrap();
    let (ma, mb) = (kron_matrix(&a), kron_matrix(&b));
    assert!(a.commutes(&b).unwrap());
    assert_eq!(&ma * &mb, &mb * &ma);
}

#[test]
fn excited_state_xxxx_flips_sign() {
    let s = model::first_excited_state_4().unwrap();
    let out = "XXXX".parse::<PauliString>().unwrap().apply(&s).unwrap();
    for (a, b) in out.amplitudes().iter().zip(s.amplitudes()) {
        assert!((a + b).norm() < 1e-15);
    }
}

#[test]
fn ground_state_yyz_eigenvalue() {
    let s = model::even_parity_uniform_state(3).unwrap();
    let out = "YYZ".parse::<PauliString>().unwrap().apply(&s).unwrap();
    for (a, b) in out.amplitudes().iter().zip(s.amplitudes()) {
        assert!((a + b).norm() < 1e-15);
    }
}

/// Anticommuting strings cannot share an eigenvector with ±1 eigenvalues;
/// check this on the model's named states over every pair of 3-site strings.
#[test]
fn anticommuting_pairs_share_no_eigenvector() {
    let states: Vec<StateVector> = vec![
        model::even_parity_uniform_state(3).unwrap(),
        model::odd_parity_uniform_state(3).unwrap(),
        model::closed_form_ground_state_3(0.5).unwrap(),
        model::select_ground_state(&IsingParams::new(3, 1.0).unwrap(), None, 1e-8).unwrap(),
    ];
    let all: Vec<PauliString> = (0..64u64)
        .map(|code| {
            let ls: Vec<_> = (0..3).map(|s| ising_avn::Letter::ALL[(code >> (2 * (2 - s)) & 3) as usize]).collect();
            PauliString::from_letters(&ls, ising_avn::Sign::Plus).unwrap()
        })
        .collect();
    for s in &states {
        let stabilizers: Vec<&PauliString> = all
            .iter()
            .filter(|p| ising_avn::avn::closest_eigenvalue(p, s).unwrap().1 < 1e-9)
            .collect();
        for a in &stabilizers {
            for b in &stabilizers {
                assert!(a.commutes(b).unwrap(), "{a} and {b} both stabilize a state");
            }
        }
    }
}
