//! Exhaustive search for Pauli stabilizers of a state and for the
//! contradiction-admitting subsets among them.
//!
//! The scanned family is every sign-positive Hermitian Pauli string on `n`
//! sites (`4^n` candidates). Negative results are therefore statements about
//! that family only.

use std::collections::{BTreeSet, HashMap};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::avn::{self, Constraint, ConstraintSet};
use crate::error::{Error, Result};
use crate::gf2::{self, BitRow, Solution};
use crate::model::{self, IsingParams};
use crate::pauli::{Letter, PauliString, Sign};
use crate::state::StateVector;

pub const MAX_SCAN_SITES: usize = 8;
pub const DEFAULT_STABILIZER_TOL: f64 = 1e-8;
pub const DEFAULT_MAX_SUBSET: usize = 4;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StabilizerEntry {
    pub observable: PauliString,
    pub eigenvalue: Sign,
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StabilizerInventory {
    pub n: usize,
    /// Canonical order: lexicographic in the letters with `I < X < Y < Z`.
    pub entries: Vec<StabilizerEntry>,
    pub tol: f64,
    pub scanned: u64,
}

impl StabilizerInventory {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn find(&self, observable: &PauliString) -> Option<&StabilizerEntry> {
        self.entries.iter().find(|e| e.observable == *observable)
    }

    pub fn constraint(&self, index: usize) -> Constraint {
        let e = &self.entries[index];
        Constraint::new(e.observable, e.eigenvalue).expect("inventory strings are Hermitian")
    }
}

/// Candidate number `code` in canonical order: base-4 digits, site 1 most significant.
fn candidate(n: usize, code: u64) -> PauliString {
    let letters: Vec<Letter> = (0..n).map(|s| Letter::ALL[(code >> (2 * (n - 1 - s)) & 3) as usize]).collect();
    PauliString::from_letters(&letters, Sign::Plus).expect("site count checked by caller")
}

pub fn enumerate_stabilizers(state: &StateVector, tol: f64) -> Result<StabilizerInventory> {
    let n = state.n();
    if n > MAX_SCAN_SITES {
        return Err(Error::CapExceeded { what: "stabilizer scan", n, cap: MAX_SCAN_SITES });
    }
    if !(tol.is_finite() && tol >= 0.0) {
        return Err(Error::InvalidParameter(format!("bad stabilizer tolerance {tol}")));
    }
    let total = 1u64 << (2 * n);
    let entries = (0..total)
        .into_par_iter()
        .map(|code| {
            let observable = candidate(n, code);
            let (eigenvalue, residual) = avn::closest_eigenvalue(&observable, state)?;
            Ok((residual <= tol).then_some(StabilizerEntry { observable, eigenvalue, residual }))
        })
        .collect::<Result<Vec<Option<StabilizerEntry>>>>()?
        .into_iter()
        .flatten()
        .collect();
    Ok(StabilizerInventory { n, entries, tol, scanned: total })
}

/// All minimal contradictory subsets of at most `max_size` non-identity inventory entries.
///
/// A first elimination pass over the whole inventory decides whether any
/// contradiction exists at all; only then are small subsets enumerated, by
/// matching occurrence vectors of half-size combinations. Results are
/// ordered by size, then lexicographically by inventory position.
pub fn find_avn_subsets(inventory: &StabilizerInventory, max_size: usize) -> Result<Vec<ConstraintSet>> {
    let pool: Vec<usize> = (0..inventory.len()).filter(|&i| !inventory.entries[i].observable.is_identity_letters()).collect();
    let full = ConstraintSet::new(inventory.n, pool.iter().map(|&i| inventory.constraint(i)).collect())?;
    let system = avn::build_lhv_system(&full);
    if let Solution::Consistent(_) = gf2::solve(&system.rows, &system.rhs, system.variables.len()) {
        return Ok(Vec::new());
    }

    let rows = &system.rows;
    let rhs = &system.rhs;
    let width = system.variables.len();
    let mut found: Vec<Vec<usize>> = Vec::new();
    for size in 1..=max_size.min(pool.len()) {
        let left = size / 2;
        let right = size - left;
        let mut by_key: HashMap<BitRow, Vec<(Vec<usize>, bool)>> = HashMap::new();
        for combo in combinations(pool.len(), left) {
            let (key, parity) = fold(&combo, rows, rhs, width);
            by_key.entry(key).or_default().push((combo, parity));
        }
        let mut hits: BTreeSet<Vec<usize>> = BTreeSet::new();
        for combo in combinations(pool.len(), right) {
            let (key, parity) = fold(&combo, rows, rhs, width);
            let Some(partners) = by_key.get(&key) else { continue };
            for (other, other_parity) in partners {
                if parity == *other_parity || other.iter().any(|i| combo.contains(i)) {
                    continue;
                }
                let mut union: Vec<usize> = other.iter().chain(&combo).copied().collect();
                union.sort_unstable();
                if !found.iter().any(|f| f.iter().all(|i| union.binary_search(i).is_ok())) {
                    hits.insert(union);
                }
            }
        }
        found.extend(hits);
    }

    found
        .into_iter()
        .map(|subset| full.subset(&subset))
        .map(|set| ConstraintSet::new(set.n(), set.constraints().to_vec()))
        .collect()
}

fn fold(combo: &[usize], rows: &[BitRow], rhs: &[bool], width: usize) -> (BitRow, bool) {
    let mut acc = BitRow::zeros(width);
    let mut parity = false;
    for &i in combo {
        acc.xor_assign(&rows[i]);
        parity ^= rhs[i];
    }
    (acc, parity)
}

/// k-subsets of `0..m` in lexicographic order; the empty subset when `k == 0`.
fn combinations(m: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > m {
        return out;
    }
    let mut combo: Vec<usize> = (0..k).collect();
    loop {
        out.push(combo.clone());
        let Some(pos) = (0..k).rev().find(|&p| combo[p] < m - k + p) else {
            return out;
        };
        combo[pos] += 1;
        for q in pos + 1..k {
            combo[q] = combo[q - 1] + 1;
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NegativeScan {
    pub n: usize,
    pub field_b: f64,
    pub ground_energy: f64,
    pub inventory: StabilizerInventory,
    pub avn_sets: Vec<ConstraintSet>,
    pub max_size: usize,
}

/// Scans the unique ground state at `params` for contradiction-admitting sets.
pub fn negative_result_scan(params: &IsingParams, tol: f64, max_size: usize) -> Result<NegativeScan> {
    if params.n() > MAX_SCAN_SITES {
        return Err(Error::CapExceeded { what: "stabilizer scan", n: params.n(), cap: MAX_SCAN_SITES });
    }
    let spectrum = model::exact_diagonalize(params, 1, model::DEFAULT_DEGENERACY_TOL)?;
    let ground = spectrum.ground();
    if ground.dimension() > 1 {
        return Err(Error::DegenerateGroundState { dimension: ground.dimension() });
    }
    let inventory = enumerate_stabilizers(&ground.vectors[0], tol)?;
    let avn_sets = find_avn_subsets(&inventory, max_size)?;
    Ok(NegativeScan {
        n: params.n(),
        field_b: params.field_b(),
        ground_energy: spectrum.ground_energy(),
        inventory,
        avn_sets,
        max_size,
    })
}
