//! The periodic transverse-field Ising ring
//!
//! ```text
//! H = −Σ_{j=1..N} ( σˣ_j σˣ_{j+1} + B σᶻ_j ),   σˣ_{N+1} = σˣ_1
//! ```
//!
//! with the coupling fixed to 1, its exact dense diagonalization, and the
//! closed-form ground states known for three and four sites.

use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pauli::{Letter, PauliString, Sign};
use crate::state::{self, StateVector};

/// Default site cap for dense Hamiltonians and diagonalization.
pub const DEFAULT_DENSE_CAP: usize = 14;

/// Default absolute eigenvalue gap below which levels are merged.
pub const DEFAULT_DEGENERACY_TOL: f64 = 1e-8;

/// Eigenpairs with a residual above this are reported as a numerical fault.
const EIGEN_RESIDUAL_LIMIT: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IsingParams {
    n: usize,
    field_b: f64,
}

impl IsingParams {
    pub fn new(n: usize, field_b: f64) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidParameter(format!("the ring needs at least 2 sites, got {n}")));
        }
        if n > state::MAX_STATE_SITES {
            return Err(Error::CapExceeded { what: "Ising ring", n, cap: state::MAX_STATE_SITES });
        }
        if !field_b.is_finite() || field_b < 0.0 {
            return Err(Error::InvalidParameter(format!("transverse field must be finite and >= 0, got {field_b}")));
        }
        Ok(IsingParams { n, field_b })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn field_b(&self) -> f64 {
        self.field_b
    }
}

/// Sector of the conserved parity `Π_j σᶻ_j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn of_index(index: usize) -> Parity {
        if index.count_ones() % 2 == 0 {
            Parity::Even
        } else {
            Parity::Odd
        }
    }
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Parity::Even => "even",
            Parity::Odd => "odd",
        })
    }
}

impl FromStr for Parity {
    type Err = Error;
    fn from_str(s: &str) -> Result<Parity> {
        match s {
            "even" => Ok(Parity::Even),
            "odd" => Ok(Parity::Odd),
            other => Err(Error::InvalidParameter(format!("parity must be even or odd, got {other:?}"))),
        }
    }
}

/// The 2N Pauli terms with their coefficients: N bonds (−1, XX) then N fields (−B, Z).
///
/// At N = 2 the two bonds coincide as operators and both are emitted.
pub fn hamiltonian_terms(params: &IsingParams) -> Vec<(f64, PauliString)> {
    let n = params.n;
    let mut terms = Vec::with_capacity(2 * n);
    for j in 0..n {
        let mut letters = vec![Letter::I; n];
        letters[j] = Letter::X;
        letters[(j + 1) % n] = Letter::X;
        let bond = PauliString::from_letters(&letters, Sign::Plus).expect("valid site count");
        terms.push((-1.0, bond));
    }
    for j in 0..n {
        let field = PauliString::single(n, j, Letter::Z).expect("valid site count");
        terms.push((-params.field_b, field));
    }
    terms
}

fn bond_masks(n: usize) -> impl Iterator<Item = usize> {
    (0..n).map(move |j| {
        let a = n - 1 - j;
        let b = n - 1 - (j + 1) % n;
        (1usize << a) | (1usize << b)
    })
}

fn diagonal_energy(params: &IsingParams, index: usize) -> f64 {
    let ups = params.n as f64 - 2.0 * index.count_ones() as f64;
    -params.field_b * ups
}

/// `H·v` without materializing the matrix.
pub fn apply_hamiltonian(params: &IsingParams, v: &[Complex64]) -> Result<Vec<Complex64>> {
    let dim = state::dimension(params.n)?;
    if v.len() != dim {
        return Err(Error::InvalidParameter(format!("expected {dim} amplitudes, got {}", v.len())));
    }
    let mut out: Vec<Complex64> = v.iter().enumerate().map(|(k, a)| a * diagonal_energy(params, k)).collect();
    for mask in bond_masks(params.n) {
        for (k, a) in v.iter().enumerate() {
            out[k ^ mask] -= a;
        }
    }
    Ok(out)
}

/// `⟨ψ|H|ψ⟩`.
pub fn energy(params: &IsingParams, state: &StateVector) -> Result<f64> {
    if state.n() != params.n {
        return Err(Error::SizeMismatch { left: params.n, right: state.n() });
    }
    let hv = apply_hamiltonian(params, state.amplitudes())?;
    Ok(state.amplitudes().iter().zip(&hv).map(|(a, b)| (a.conj() * b).re).sum())
}

pub fn hamiltonian_matrix(params: &IsingParams) -> Result<DMatrix<f64>> {
    hamiltonian_matrix_capped(params, DEFAULT_DENSE_CAP)
}

/// Real symmetric matrix of H in the computational basis.
pub fn hamiltonian_matrix_capped(params: &IsingParams, cap: usize) -> Result<DMatrix<f64>> {
    if params.n > cap {
        return Err(Error::CapExceeded { what: "dense Hamiltonian", n: params.n, cap });
    }
    let dim = 1usize << params.n;
    let mut m = DMatrix::zeros(dim, dim);
    for k in 0..dim {
        m[(k, k)] = diagonal_energy(params, k);
    }
    for mask in bond_masks(params.n) {
        for k in 0..dim {
            m[(k ^ mask, k)] -= 1.0;
        }
    }
    Ok(m)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Level {
    pub energy: f64,
    /// Positions in the ascending eigenvalue list.
    pub indices: Vec<usize>,
    pub vectors: Vec<StateVector>,
    pub residuals: Vec<f64>,
}

impl Level {
    pub fn dimension(&self) -> usize {
        self.indices.len()
    }

    /// `1 − ‖P ψ‖²` for the projector P onto this level's span.
    pub fn projection_deficit(&self, state: &StateVector) -> Result<f64> {
        let mut weight = 0.0;
        for v in &self.vectors {
            weight += v.inner(state)?.norm_sqr();
        }
        Ok(1.0 - weight)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumResult {
    pub n: usize,
    pub field_b: f64,
    /// The full spectrum, ascending.
    pub eigenvalues: Vec<f64>,
    /// Degenerate groups of `eigenvalues` indices, lowest first.
    pub levels: Vec<Vec<usize>>,
    /// Eigenvectors for the requested lowest levels.
    pub lowest: Vec<Level>,
    pub degeneracy_tol: f64,
}

impl SpectrumResult {
    pub fn ground(&self) -> &Level {
        &self.lowest[0]
    }

    pub fn ground_energy(&self) -> f64 {
        self.eigenvalues[0]
    }

    pub fn ground_dimension(&self) -> usize {
        self.levels[0].len()
    }

    pub fn level_energy(&self, level: usize) -> f64 {
        let idx = &self.levels[level];
        idx.iter().map(|&i| self.eigenvalues[i]).sum::<f64>() / idx.len() as f64
    }

    pub fn max_residual(&self) -> f64 {
        self.lowest.iter().flat_map(|l| l.residuals.iter().copied()).fold(0.0, f64::max)
    }
}

/// Groups ascending values whose consecutive gaps are below `tol`.
pub fn group_levels(sorted: &[f64], tol: f64) -> Vec<Vec<usize>> {
    let mut levels: Vec<Vec<usize>> = Vec::new();
    for (i, &e) in sorted.iter().enumerate() {
        match levels.last_mut() {
            Some(last) if e - sorted[*last.last().unwrap()] < tol => last.push(i),
            _ => levels.push(vec![i]),
        }
    }
    levels
}

/// Fixes the global phase: the first amplitude above 1e−8 in magnitude becomes real positive.
fn fix_phase(mut amps: Vec<Complex64>) -> Vec<Complex64> {
    if let Some(a) = amps.iter().find(|a| a.norm() > 1e-8).copied() {
        let phase = a.conj() / a.norm();
        for x in amps.iter_mut() {
            *x *= phase;
        }
    }
    amps
}

pub fn exact_diagonalize(params: &IsingParams, k: usize, degeneracy_tol: f64) -> Result<SpectrumResult> {
    exact_diagonalize_capped(params, k, degeneracy_tol, DEFAULT_DENSE_CAP)
}

/// Full dense diagonalization; eigenvectors are returned for the lowest `k` levels.
pub fn exact_diagonalize_capped(
    params: &IsingParams,
    k: usize,
    degeneracy_tol: f64,
    cap: usize,
) -> Result<SpectrumResult> {
    if !(degeneracy_tol.is_finite() && degeneracy_tol >= 0.0) {
        return Err(Error::InvalidParameter(format!("bad degeneracy tolerance {degeneracy_tol}")));
    }
    let matrix = hamiltonian_matrix_capped(params, cap)?;
    let dim = matrix.nrows();
    if k > dim {
        return Err(Error::TooManyLevels { requested: k, available: dim });
    }
    let eig = SymmetricEigen::new(matrix);
    let mut order: Vec<usize> = (0..dim).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]).then(a.cmp(&b)));
    let eigenvalues: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let levels = group_levels(&eigenvalues, degeneracy_tol);
    if k > levels.len() {
        return Err(Error::TooManyLevels { requested: k, available: levels.len() });
    }

    let mut lowest = Vec::with_capacity(k);
    for group in levels.iter().take(k) {
        let mut vectors = Vec::with_capacity(group.len());
        let mut residuals = Vec::with_capacity(group.len());
        for &i in group {
            let col = eig.eigenvectors.column(order[i]);
            let amps = fix_phase(col.iter().map(|&a| Complex64::new(a, 0.0)).collect());
            let v = StateVector::new(params.n, amps)?;
            let hv = apply_hamiltonian(params, v.amplitudes())?;
            let r = state::residual(&hv, eigenvalues[i], v.amplitudes());
            if r > EIGEN_RESIDUAL_LIMIT {
                return Err(Error::Numerical(format!("eigenpair {i} has residual {r:e}")));
            }
            vectors.push(v);
            residuals.push(r);
        }
        let energy = group.iter().map(|&i| eigenvalues[i]).sum::<f64>() / group.len() as f64;
        lowest.push(Level { energy, indices: group.clone(), vectors, residuals });
    }

    Ok(SpectrumResult {
        n: params.n,
        field_b: params.field_b,
        eigenvalues,
        levels,
        lowest,
        degeneracy_tol,
    })
}

/// Projects onto one parity sector; `None` if nothing survives.
pub fn project_parity(state: &StateVector, parity: Parity) -> Option<StateVector> {
    let amps: Vec<Complex64> = state
        .amplitudes()
        .iter()
        .enumerate()
        .map(|(k, a)| if Parity::of_index(k) == parity { *a } else { Complex64::new(0.0, 0.0) })
        .collect();
    if state::norm(&amps) < 1e-6 {
        return None;
    }
    StateVector::new(state.n(), fix_phase(amps)).ok()
}

/// The numerical ground state, optionally restricted to a parity sector.
///
/// Without a parity the ground level must be nondegenerate.
pub fn select_ground_state(params: &IsingParams, parity: Option<Parity>, degeneracy_tol: f64) -> Result<StateVector> {
    let spectrum = exact_diagonalize(params, 1, degeneracy_tol)?;
    let ground = spectrum.ground();
    match parity {
        None if ground.dimension() > 1 => Err(Error::DegenerateGroundState { dimension: ground.dimension() }),
        None => Ok(ground.vectors[0].clone()),
        Some(parity) => ground
            .vectors
            .iter()
            .filter_map(|v| project_parity(v, parity))
            .next()
            .ok_or_else(|| Error::InvalidParameter(format!("ground level has no {parity}-parity component"))),
    }
}

/// `ξ₁(B) = −1 + 2B + 2√(1 − B + B²)`.
pub fn xi1(b: f64) -> f64 {
    -1.0 + 2.0 * b + 2.0 * (1.0 - b + b * b).sqrt()
}

/// `𝒩₁ = 3 + ξ₁²`.
pub fn norm1(b: f64) -> f64 {
    3.0 + xi1(b).powi(2)
}

/// `ξ₂(B) = −1 + 2B² + 2√(1 + B⁴)`.
pub fn xi2(b: f64) -> f64 {
    -1.0 + 2.0 * b * b + 2.0 * (1.0 + b.powi(4)).sqrt()
}

/// `ξ₃(B) = √(1 + B² + √(1 + B⁴))`.
pub fn xi3(b: f64) -> f64 {
    (1.0 + b * b + (1.0 + b.powi(4)).sqrt()).sqrt()
}

/// The four-site normalization constant `𝒩₂` exactly as printed, term by term.
pub fn norm2_printed(b: f64) -> f64 {
    let x2 = xi2(b);
    let x3 = xi3(b);
    let s = std::f64::consts::SQRT_2;
    1.0 + 3.0 * (b + x3 / s).powi(2)
        + 0.25 * (2.0 * b + s * x3).powi(2)
        + (4.0 * b + 2.0 * s * x3).powi(2) / (4.0 * x3 * x3)
        + (x2 - 2.0 * s * b / x3 + 2.0 * s * b * x3).powi(2)
}

fn check_field(b: f64) -> Result<()> {
    if !b.is_finite() || b < 0.0 {
        return Err(Error::InvalidParameter(format!("transverse field must be finite and >= 0, got {b}")));
    }
    Ok(())
}

/// `(ξ₁|000⟩ + |011⟩ + |101⟩ + |110⟩)/√𝒩₁`.
pub fn closed_form_ground_state_3(b: f64) -> Result<StateVector> {
    check_field(b)?;
    let x1 = xi1(b);
    let scale = norm1(b).sqrt();
    let amps = [x1, 0.0, 0.0, 1.0, 0.0, 1.0, 1.0, 0.0].map(|a| a / scale);
    StateVector::from_real(3, &amps)
}

/// Unnormalized four-site ground-state amplitudes, indexed `|0000⟩ … |1111⟩`.
pub fn closed_form_4_amplitudes(b: f64) -> [f64; 16] {
    let x2 = xi2(b);
    let x3 = xi3(b);
    let s = std::f64::consts::SQRT_2;
    let adjacent = b + x3 / s;
    let alternating = (4.0 * b + 2.0 * s * x3) / (2.0 * s * x3);
    let mut c = [0.0; 16];
    c[0b0000] = x2 - 2.0 * s * b * (1.0 - x3 * x3) / x3;
    c[0b0011] = adjacent;
    c[0b0110] = adjacent;
    c[0b1001] = adjacent;
    c[0b1100] = adjacent;
    c[0b0101] = alternating;
    c[0b1010] = alternating;
    c[0b1111] = 1.0;
    c
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClosedForm4 {
    pub state: StateVector,
    /// Printed `𝒩₂`.
    pub printed_norm: f64,
    /// Squared norm of the printed amplitudes.
    pub computed_norm_sq: f64,
}

impl ClosedForm4 {
    pub fn norm_ratio(&self) -> f64 {
        self.printed_norm / self.computed_norm_sq
    }
}

/// Four-site closed form, renormalized numerically, with the printed `𝒩₂` kept for comparison.
pub fn closed_form_4(b: f64) -> Result<ClosedForm4> {
    check_field(b)?;
    let amps = closed_form_4_amplitudes(b);
    let computed_norm_sq = amps.iter().map(|a| a * a).sum();
    Ok(ClosedForm4 {
        state: StateVector::from_real(4, &amps)?,
        printed_norm: norm2_printed(b),
        computed_norm_sq,
    })
}

pub fn closed_form_ground_state_4(b: f64) -> Result<StateVector> {
    closed_form_4(b).map(|c| c.state)
}

fn uniform_parity_state(n: usize, parity: Parity) -> Result<StateVector> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!("parity states need at least 2 sites, got {n}")));
    }
    let dim = state::dimension(n)?;
    let amp = 2f64.powf(-((n - 1) as f64) / 2.0);
    let amps = (0..dim)
        .map(|k| if Parity::of_index(k) == parity { Complex64::new(amp, 0.0) } else { Complex64::new(0.0, 0.0) })
        .collect();
    StateVector::new(n, amps)
}

/// Equal superposition of all even-parity bit strings; a zero-field ground state.
pub fn even_parity_uniform_state(n: usize) -> Result<StateVector> {
    uniform_parity_state(n, Parity::Even)
}

/// Equal superposition of all odd-parity bit strings; the degenerate partner.
pub fn odd_parity_uniform_state(n: usize) -> Result<StateVector> {
    uniform_parity_state(n, Parity::Odd)
}

/// `(−|0000⟩ + |1111⟩)/√2`, a zero-energy state of the four-site ring at B = 0.
pub fn first_excited_state_4() -> Result<StateVector> {
    let mut amps = [0.0; 16];
    amps[0b0000] = -1.0;
    amps[0b1111] = 1.0;
    StateVector::from_real(4, &amps)
}

/// `(|0…0⟩ + |1…1⟩)/√2`.
pub fn ghz_state(n: usize) -> Result<StateVector> {
    let dim = state::dimension(n)?;
    let mut amps = vec![0.0; dim];
    amps[0] = 1.0;
    amps[dim - 1] = 1.0;
    StateVector::from_real(n, &amps)
}
