#![allow(dead_code)]

use ising_avn::{Letter, PauliString, Sign};
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use proptest::prelude::*;

pub fn letters(n: usize) -> impl Strategy<Value = Vec<Letter>> {
    prop::collection::vec(prop::sample::select(Letter::ALL.to_vec()), n)
}

/// Any Pauli string, including non-Hermitian phases.
pub fn pauli(n: usize) -> impl Strategy<Value = PauliString> {
    (letters(n), 0u8..4).prop_map(|(ls, k)| {
        let base = PauliString::from_letters(&ls, Sign::Plus).unwrap();
        PauliString::from_masks(base.n(), base.x_mask(), base.z_mask(), base.phase_exp() + k).unwrap()
    })
}

pub fn complex_vec(dim: usize) -> impl Strategy<Value = Vec<Complex64>> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0).prop_map(|(re, im)| Complex64::new(re, im)), dim)
}

/// Kronecker product of single-site matrices; independent of the bitmask code.
pub fn kron_matrix(p: &PauliString) -> DMatrix<Complex64> {
    let c = |re: f64, im: f64| Complex64::new(re, im);
    let single = |l: Letter| match l {
        Letter::I => DMatrix::from_row_slice(2, 2, &[c(1., 0.), c(0., 0.), c(0., 0.), c(1., 0.)]),
        Letter::X => DMatrix::from_row_slice(2, 2, &[c(0., 0.), c(1., 0.), c(1., 0.), c(0., 0.)]),
        Letter::Y => DMatrix::from_row_slice(2, 2, &[c(0., 0.), c(0., -1.), c(0., 1.), c(0., 0.)]),
        Letter::Z => DMatrix::from_row_slice(2, 2, &[c(1., 0.), c(0., 0.), c(0., 0.), c(-1., 0.)]),
    };
    let mut m = DMatrix::from_element(1, 1, c(1., 0.));
    for l in p.letters() {
        m = m.kronecker(&single(l));
    }
    let coeff = match p.coefficient_exp() {
        0 => c(1., 0.),
        1 => c(0., 1.),
        2 => c(-1., 0.),
        _ => c(0., -1.),
    };
    m * coeff
}

pub fn max_abs_diff(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> f64 {
    (a - b).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn dense_apply(m: &DMatrix<Complex64>, v: &[Complex64]) -> Vec<Complex64> {
    (m * DVector::from_column_slice(v)).iter().copied().collect()
}

/// Projects `seed` onto common ±1 eigenspaces of a greedily chosen commuting
/// subset of `candidates`; strings that anticommute with an earlier choice,
/// or whose projection would vanish, are skipped.
pub fn stabilizer_like_state(n: usize, seed: Vec<Complex64>, candidates: &[(Vec<Letter>, bool)]) -> ising_avn::StateVector {
    let mut v = seed;
    let mut chosen: Vec<PauliString> = Vec::new();
    for (ls, neg) in candidates {
        let p = PauliString::from_letters(ls, if *neg { Sign::Minus } else { Sign::Plus }).unwrap();
        if p.is_identity_letters() || !chosen.iter().all(|q| q.commutes(&p).unwrap()) {
            continue;
        }
        let image = p.apply_amplitudes(&v).unwrap();
        let projected: Vec<Complex64> = v.iter().zip(&image).map(|(a, b)| (a + b) * 0.5).collect();
        if ising_avn::state::norm(&projected) > 1e-3 {
            v = projected;
            chosen.push(p);
        }
    }
    ising_avn::StateVector::new(n, v).unwrap()
}

pub fn stabilizer_like_sized(n: usize) -> impl Strategy<Value = ising_avn::StateVector> {
    (complex_vec(1 << n), prop::collection::vec((letters(n), any::<bool>()), 0..=2 * n))
        .prop_map(move |(seed, cands)| stabilizer_like_state(n, seed, &cands))
}

pub fn stabilizer_like_strategy(max_n: usize) -> impl Strategy<Value = ising_avn::StateVector> {
    (1usize..=max_n).prop_flat_map(stabilizer_like_sized)
}
