//! Normalized state vectors in the computational basis.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest site count for which a state vector may be allocated.
pub const MAX_STATE_SITES: usize = 26;

const NORM_TOL: f64 = 1e-12;

/// Amplitudes over `|b_1 b_2 ... b_n⟩`, site 1 most significant, `b = 0` for σᶻ = +1.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateVector {
    n: usize,
    amplitudes: Vec<Complex64>,
}

pub fn dimension(n: usize) -> Result<usize> {
    if n == 0 {
        return Err(Error::InvalidParameter("a state needs at least one site".into()));
    }
    if n > MAX_STATE_SITES {
        return Err(Error::CapExceeded { what: "state vector", n, cap: MAX_STATE_SITES });
    }
    Ok(1usize << n)
}

pub fn norm(v: &[Complex64]) -> f64 {
    v.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
}

/// `‖a − λ·b‖`.
pub fn residual(a: &[Complex64], lambda: f64, b: &[Complex64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y * lambda).norm_sqr())
        .sum::<f64>()
        .sqrt()
}

impl StateVector {
    /// Normalizes `amplitudes`; rejects wrong lengths and zero or non-finite vectors.
    pub fn new(n: usize, amplitudes: Vec<Complex64>) -> Result<Self> {
        let dim = dimension(n)?;
        if amplitudes.len() != dim {
            return Err(Error::InvalidParameter(format!(
                "expected {dim} amplitudes for {n} sites, got {}",
                amplitudes.len()
            )));
        }
        let nrm = norm(&amplitudes);
        if !nrm.is_finite() || nrm == 0.0 {
            return Err(Error::InvalidParameter("state has zero or non-finite norm".into()));
        }
        let amplitudes = amplitudes.into_iter().map(|a| a / nrm).collect();
        Ok(StateVector { n, amplitudes })
    }

    pub fn from_real(n: usize, amplitudes: &[f64]) -> Result<Self> {
        Self::new(n, amplitudes.iter().map(|&a| Complex64::new(a, 0.0)).collect())
    }

    pub fn basis(n: usize, index: usize) -> Result<Self> {
        let dim = dimension(n)?;
        if index >= dim {
            return Err(Error::InvalidParameter(format!("basis index {index} out of range")));
        }
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); dim];
        amplitudes[index] = Complex64::new(1.0, 0.0);
        Ok(StateVector { n, amplitudes })
    }

    /// For vectors already of unit norm (e.g. images under a unitary).
    pub(crate) fn from_normalized(n: usize, amplitudes: Vec<Complex64>) -> Self {
        debug_assert!((norm(&amplitudes) - 1.0).abs() < 1e-9);
        StateVector { n, amplitudes }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        norm(&self.amplitudes)
    }

    pub fn is_normalized(&self) -> bool {
        (self.norm() - 1.0).abs() <= NORM_TOL
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &StateVector) -> Result<Complex64> {
        if self.n != other.n {
            return Err(Error::SizeMismatch { left: self.n, right: other.n });
        }
        Ok(self.amplitudes.iter().zip(&other.amplitudes).map(|(a, b)| a.conj() * b).sum())
    }

    /// `|⟨self|other⟩|`.
    pub fn overlap(&self, other: &StateVector) -> Result<f64> {
        Ok(self.inner(other)?.norm())
    }
}
