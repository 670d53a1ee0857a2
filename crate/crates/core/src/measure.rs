//! Single-shot local measurements of Pauli observables.
//!
//! Each observer measures one letter on one site; outcomes are drawn
//! sequentially from the projectors `(1 ± P_j)/2`, collapsing the state after
//! every draw. For an eigenstate of the full observable the product of the
//! local outcomes is fixed in every shot even though each factor is random.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::avn::{Constraint, ConstraintSet};
use crate::error::{Error, Result};
use crate::pauli::{Letter, PauliString, Sign};
use crate::state::{self, StateVector};

/// Name of the generator recorded in reports.
pub const GENERATOR: &str = "rand_chacha::ChaCha8Rng (seed_from_u64)";

/// Probabilities this close to 0 or 1 are treated as exact.
const CERTAINTY_EPS: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MeasurementOrder {
    SiteAscending,
    SiteDescending,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Outcome {
    /// Zero-based site.
    pub site: usize,
    pub axis: Letter,
    pub value: Sign,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShotRecord {
    pub constraint: usize,
    /// Site-ascending regardless of measurement order.
    pub outcomes: Vec<Outcome>,
    pub product: Sign,
    /// `product == eigenvalue × observable sign`.
    pub matched: bool,
}

/// Measures `axis` on `site`, collapsing `amps`. `u` is a uniform draw in `[0, 1)`.
fn measure_site(n: usize, amps: &mut Vec<Complex64>, site: usize, axis: Letter, u: f64) -> Result<Sign> {
    let local = PauliString::single(n, site, axis)?;
    let image = local.apply_amplitudes(amps)?;
    let expectation: f64 = amps.iter().zip(&image).map(|(a, b)| (a.conj() * b).re).sum();
    let mut p_plus = ((1.0 + expectation) / 2.0).clamp(0.0, 1.0);
    if p_plus < CERTAINTY_EPS {
        p_plus = 0.0;
    } else if p_plus > 1.0 - CERTAINTY_EPS {
        p_plus = 1.0;
    }
    let value = if u < p_plus { Sign::Plus } else { Sign::Minus };
    let s = value.as_f64();
    let projected: Vec<Complex64> = amps.iter().zip(&image).map(|(a, b)| (a + b * s) * 0.5).collect();
    let nrm = state::norm(&projected);
    if !(nrm > 1e-12) {
        return Err(Error::Numerical(format!("projection onto {value} for {axis} at site {} vanished", site + 1)));
    }
    *amps = projected.into_iter().map(|a| a / nrm).collect();
    Ok(value)
}

/// One shot using explicit uniforms, one per non-identity site in measurement order.
///
/// Also returns the post-measurement state.
pub fn sample_with_uniforms(
    state: &StateVector,
    constraint: &Constraint,
    index: usize,
    order: MeasurementOrder,
    uniforms: &[f64],
) -> Result<(ShotRecord, StateVector)> {
    let obs = &constraint.observable;
    if obs.n() != state.n() {
        return Err(Error::SizeMismatch { left: obs.n(), right: state.n() });
    }
    let mut sites: Vec<(usize, Letter)> = obs.support().collect();
    if order == MeasurementOrder::SiteDescending {
        sites.reverse();
    }
    if uniforms.len() < sites.len() {
        return Err(Error::InvalidParameter(format!("need {} uniforms, got {}", sites.len(), uniforms.len())));
    }
    let mut amps = state.amplitudes().to_vec();
    let mut outcomes = Vec::with_capacity(sites.len());
    for (&(site, axis), &u) in sites.iter().zip(uniforms) {
        let value = measure_site(state.n(), &mut amps, site, axis, u)?;
        outcomes.push(Outcome { site, axis, value });
    }
    outcomes.sort_by_key(|o| o.site);
    let product = outcomes.iter().fold(Sign::Plus, |acc, o| acc * o.value);
    let record = ShotRecord { constraint: index, outcomes, product, matched: product == constraint.outcome_product() };
    Ok((record, StateVector::new(state.n(), amps)?))
}

/// One shot drawing from `rng`, site-ascending.
pub fn sample_with_rng<R: Rng>(state: &StateVector, constraint: &Constraint, index: usize, rng: &mut R) -> Result<ShotRecord> {
    let uniforms: Vec<f64> = (0..constraint.observable.weight()).map(|_| rng.random::<f64>()).collect();
    sample_with_uniforms(state, constraint, index, MeasurementOrder::SiteAscending, &uniforms).map(|(r, _)| r)
}

pub fn sample_constraint(state: &StateVector, constraint: &Constraint, seed: u64) -> Result<ShotRecord> {
    sample_with_rng(state, constraint, 0, &mut ChaCha8Rng::seed_from_u64(seed))
}

/// Full transcript: `shots` fresh copies of `state` per constraint, one generator for the run.
pub fn run_shots(state: &StateVector, set: &ConstraintSet, shots: usize, seed: u64) -> Result<Vec<Vec<ShotRecord>>> {
    if shots == 0 {
        return Err(Error::InvalidParameter("shots must be at least 1".into()));
    }
    if set.n() != state.n() {
        return Err(Error::SizeMismatch { left: set.n(), right: state.n() });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    set.iter()
        .enumerate()
        .map(|(i, c)| (0..shots).map(|_| sample_with_rng(state, c, i, &mut rng)).collect())
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SiteMarginal {
    pub site: usize,
    pub axis: Letter,
    /// Fraction of shots with outcome +1.
    pub plus_fraction: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstraintStats {
    pub constraint: Constraint,
    pub matched_fraction: f64,
    pub marginals: Vec<SiteMarginal>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentStats {
    pub generator: String,
    pub seed: u64,
    pub shots: usize,
    pub constraints: Vec<ConstraintStats>,
}

pub fn summarize(set: &ConstraintSet, transcript: &[Vec<ShotRecord>], seed: u64) -> ExperimentStats {
    let shots = transcript.first().map_or(0, Vec::len);
    let constraints = set
        .iter()
        .zip(transcript)
        .map(|(c, records)| {
            let total = records.len() as f64;
            let matched = records.iter().filter(|r| r.matched).count() as f64;
            let marginals = c
                .observable
                .support()
                .enumerate()
                .map(|(k, (site, axis))| {
                    let plus = records.iter().filter(|r| r.outcomes[k].value == Sign::Plus).count() as f64;
                    SiteMarginal { site, axis, plus_fraction: plus / total }
                })
                .collect();
            ConstraintStats { constraint: *c, matched_fraction: matched / total, marginals }
        })
        .collect();
    ExperimentStats { generator: GENERATOR.to_string(), seed, shots, constraints }
}

pub fn run_experiment(state: &StateVector, set: &ConstraintSet, shots: usize, seed: u64) -> Result<ExperimentStats> {
    let transcript = run_shots(state, set, shots, seed)?;
    Ok(summarize(set, &transcript, seed))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::avn::standard_ghz_set;
    use crate::model::even_parity_uniform_state;

    fn c(text: &str) -> Constraint {
        text.parse().unwrap()
    }

    #[test]
    fn parity_product_is_always_plus() {
        let s = even_parity_uniform_state(3).unwrap();
        for seed in 0..20 {
            let r = sample_constraint(&s, &c("ZZZ = 1"), seed).unwrap();
            assert_eq!(r.product, Sign::Plus);
            assert!(r.matched);
            assert_eq!(r.outcomes.len(), 3);
        }
    }

    #[test]
    fn basis_state_is_deterministic() {
        let s = StateVector::basis(3, 0).unwrap();
        for seed in 0..10 {
            let r = sample_constraint(&s, &c("ZZZ = 1"), seed).unwrap();
            assert!(r.outcomes.iter().all(|o| o.value == Sign::Plus));
        }
    }

    #[test]
    fn yyz_outcomes_vary_but_product_does_not() {
        let s = even_parity_uniform_state(3).unwrap();
        let mut seen = std::collections::HashSet::new();
        for seed in 0..64 {
            let r = sample_constraint(&s, &c("YYZ = -1"), seed).unwrap();
            assert_eq!(r.product, Sign::Minus);
            assert!(r.matched);
            seen.insert(r.outcomes.iter().map(|o| o.value).collect::<Vec<_>>());
        }
        assert!(seen.len() > 1);
    }

    #[test]
    fn flipped_eigenvalue_never_matches() {
        let s = even_parity_uniform_state(3).unwrap();
        let set = standard_ghz_set(3).unwrap().with_eigenvalue(3, Sign::Minus);
        let stats = run_experiment(&s, &set, 500, 7).unwrap();
        assert_eq!(stats.constraints[3].matched_fraction, 0.0);
        assert_eq!(stats.constraints[0].matched_fraction, 1.0);
    }

    #[test]
    fn zero_shots_and_size_mismatch() {
        let s = even_parity_uniform_state(3).unwrap();
        assert!(run_shots(&s, &standard_ghz_set(3).unwrap(), 0, 1).is_err());
        assert!(run_shots(&s, &standard_ghz_set(4).unwrap(), 1, 1).is_err());
    }

    #[test]
    fn parity_measurement_leaves_even_basis_state() {
        for n in 3..=6 {
            let s = even_parity_uniform_state(n).unwrap();
            let zs = Constraint::new(PauliString::from_letters(&vec![Letter::Z; n], Sign::Plus).unwrap(), Sign::Plus).unwrap();
            let uniforms = [0.1, 0.9, 0.4, 0.6, 0.2, 0.8];
            let (_, post) = sample_with_uniforms(&s, &zs, 0, MeasurementOrder::SiteAscending, &uniforms).unwrap();
            let support: Vec<usize> = (0..post.dim()).filter(|&k| post.amplitudes()[k].norm() > 1e-12).collect();
            assert_eq!(support.len(), 1);
            assert_eq!(support[0].count_ones() % 2, 0);
        }
    }
}
