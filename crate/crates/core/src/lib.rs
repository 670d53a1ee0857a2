//! Exact diagonalization of the periodic transverse-field Ising ring and
//! machine-checked all-versus-nothing (GHZ-type) contradictions with local
//! realism on its eigenstates.
//!
//! * [`pauli`]: phase-exact Pauli strings on a bitmask pair.
//! * [`model`]: the Hamiltonian, its dense spectrum and the known closed-form states.
//! * [`avn`]: eigenequation checks, the GF(2) sign system and contradiction certificates.
//! * [`search`]: exhaustive stabilizer scans and contradiction-subset discovery.
//! * [`measure`]: seeded single-shot local measurements.
//! * [`report`]: the command runners and report schema used by the `ising-avn` binary.

pub mod avn;
pub mod error;
pub mod gf2;
pub mod measure;
pub mod model;
pub mod pauli;
pub mod report;
pub mod search;
pub mod state;

pub use avn::{AvnCertificate, Constraint, ConstraintSet, LhvSystem, Verdict};
pub use error::{Error, Result};
pub use model::{IsingParams, Parity, SpectrumResult};
pub use pauli::{Letter, PauliString, Sign};
pub use state::StateVector;
