//! Command runners behind the CLI and the machine-readable report they produce.

use std::path::PathBuf;
use std::time::Instant;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::avn::{self, AvnCertificate, BruteForceOutcome, ConstraintSet};
use crate::error::Error;
use crate::measure::{self, ExperimentStats};
use crate::model::{self, IsingParams, Parity};
use crate::pauli::PauliString;
use crate::search::{self, StabilizerInventory};
use crate::state::StateVector;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Default field grid for closed-form checks.
pub const CLOSED_FORM_GRID: [f64; 6] = [0.0, 0.1, 0.25, 0.5, 1.0, 2.0];

/// Overlap deficit allowed for the three-site closed form.
pub const CLOSED_FORM_3_TOL: f64 = 1e-9;
/// Overlap deficit allowed for the four-site closed form.
pub const CLOSED_FORM_4_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Spectrum,
    VerifyClosedForm,
    Avn,
    Search,
    Simulate,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Json,
    Csv,
    Text,
}

/// Missing fields take the values of `RunConfig::default()` when deserializing.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct RunConfig {
    pub command: Command,
    pub n: usize,
    /// `None` means the command's default (0, or the grid for closed-form checks).
    pub field_b: Option<f64>,
    /// `None` picks 1e−10 for analytic states and 1e−8 for numerical ones.
    pub tol_eigen: Option<f64>,
    pub tol_degeneracy: f64,
    pub tol_stabilizer: f64,
    pub shots: usize,
    pub seed: u64,
    pub parity: Option<Parity>,
    pub excited: bool,
    pub levels: usize,
    pub max_subset: usize,
    pub format: OutputFormat,
    pub out: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig::new(Command::Spectrum, 3)
    }
}

impl RunConfig {
    pub fn new(command: Command, n: usize) -> Self {
        RunConfig {
            command,
            n,
            field_b: None,
            tol_eigen: None,
            tol_degeneracy: model::DEFAULT_DEGENERACY_TOL,
            tol_stabilizer: search::DEFAULT_STABILIZER_TOL,
            shots: 10_000,
            seed: 1,
            parity: None,
            excited: false,
            levels: 4,
            max_subset: search::DEFAULT_MAX_SUBSET,
            format: OutputFormat::Json,
            out: None,
        }
    }

    pub fn validate(&self) -> Result<(), Error> {
        let bad = |msg: String| Err(Error::InvalidParameter(msg));
        if self.n < 2 {
            return bad(format!("--n must be at least 2, got {}", self.n));
        }
        if let Some(b) = self.field_b {
            if !b.is_finite() || b < 0.0 {
                return bad(format!("--field must be finite and >= 0, got {b}"));
            }
        }
        for (name, tol) in [
            ("--tol-eigen", self.tol_eigen.unwrap_or(0.0)),
            ("--tol-degeneracy", self.tol_degeneracy),
            ("--tol-stabilizer", self.tol_stabilizer),
        ] {
            if !tol.is_finite() || tol < 0.0 {
                return bad(format!("{name} must be finite and >= 0, got {tol}"));
            }
        }
        if self.command == Command::Simulate && self.shots == 0 {
            return bad("--shots must be at least 1".into());
        }
        if self.levels == 0 {
            return bad("--levels must be at least 1".into());
        }
        if self.excited && self.n != 4 {
            return bad("--excited is only defined for n = 4".into());
        }
        if self.excited && self.field_b.unwrap_or(0.0) != 0.0 {
            return bad("--excited requires zero field".into());
        }
        if self.command == Command::VerifyClosedForm && !(self.n == 3 || self.n == 4) {
            return bad(format!("no closed-form ground state is available for n = {}", self.n));
        }
        Ok(())
    }

    fn field(&self) -> f64 {
        self.field_b.unwrap_or(0.0)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LevelSummary {
    pub energy: f64,
    pub degeneracy: usize,
    /// Largest eigen-residual, present for the levels whose vectors were computed.
    pub max_residual: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumPayload {
    pub n: usize,
    pub field_b: f64,
    pub ground_energy: f64,
    pub ground_degeneracy: usize,
    pub degeneracy_tol: f64,
    pub levels: Vec<LevelSummary>,
    pub eigenvalues: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClosedFormPoint {
    pub field_b: f64,
    pub ground_degeneracy: usize,
    /// `|⟨formula|numerical⟩|` for a nondegenerate ground level.
    pub overlap: Option<f64>,
    /// `1 − ‖P_ground formula‖²`.
    pub projection_deficit: f64,
    /// Printed normalization divided by the computed squared norm (four sites only).
    pub printed_norm_ratio: Option<f64>,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZeroFieldReading {
    /// Ground-space projection deficit of the eight-term reading (with `|1111⟩`).
    pub with_1111_deficit: f64,
    /// Ground-space projection deficit of the seven-term printed list (without `|1111⟩`).
    pub without_1111_deficit: f64,
    pub amplitude_1111: f64,
    pub includes_1111: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClosedFormPayload {
    pub n: usize,
    pub tolerance: f64,
    pub points: Vec<ClosedFormPoint>,
    pub zero_field_reading: Option<ZeroFieldReading>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AvnPayload {
    pub state: String,
    pub certified: bool,
    pub certificate: AvnCertificate,
    /// Ordered product of the certificate's observables.
    pub certificate_product: Option<PauliString>,
    pub brute_force: Option<BruteForceOutcome>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchPayload {
    pub state: String,
    pub scope: String,
    pub max_subset: usize,
    pub inventory: StabilizerInventory,
    pub avn_sets: Vec<ConstraintSet>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulatePayload {
    pub state: String,
    pub all_matched: bool,
    pub statistics: ExperimentStats,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Payload {
    Spectrum(SpectrumPayload),
    ClosedForm(ClosedFormPayload),
    Avn(AvnPayload),
    Search(SearchPayload),
    Simulate(SimulatePayload),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub version: String,
    pub config: RunConfig,
    pub payload: Payload,
    pub duration_seconds: f64,
}

impl Report {
    /// `false` when the command ran but its check failed.
    pub fn succeeded(&self) -> bool {
        match &self.payload {
            Payload::Spectrum(_) | Payload::Search(_) => true,
            Payload::ClosedForm(p) => p.points.iter().all(|pt| pt.passed),
            Payload::Avn(p) => p.certified,
            Payload::Simulate(p) => p.all_matched,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    pub fn from_json(text: &str) -> serde_json::Result<Report> {
        serde_json::from_str(text)
    }

    pub fn render(&self, format: OutputFormat) -> String {
        match format {
            OutputFormat::Json => self.to_json() + "\n",
            OutputFormat::Csv => {
                let mut out = String::from("key,value\n");
                for (k, v) in flatten(&serde_json::to_value(self).expect("reports serialize")) {
                    out.push_str(&csv_field(&k));
                    out.push(',');
                    out.push_str(&csv_field(&v));
                    out.push('\n');
                }
                out
            }
            OutputFormat::Text => {
                let mut out = String::new();
                for (k, v) in flatten(&serde_json::to_value(self).expect("reports serialize")) {
                    out.push_str(&format!("{k}: {v}\n"));
                }
                out
            }
        }
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Dotted-path leaves of a JSON value.
fn flatten(value: &Value) -> Vec<(String, String)> {
    fn walk(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
        let join = |k: &str| if prefix.is_empty() { k.to_string() } else { format!("{prefix}.{k}") };
        match v {
            Value::Object(map) => {
                for (k, child) in map {
                    walk(&join(k), child, out);
                }
            }
            Value::Array(items) if !items.is_empty() => {
                for (i, child) in items.iter().enumerate() {
                    walk(&join(&i.to_string()), child, out);
                }
            }
            Value::String(s) => out.push((prefix.to_string(), s.clone())),
            other => out.push((prefix.to_string(), other.to_string())),
        }
    }
    let mut out = Vec::new();
    walk("", value, &mut out);
    out
}

pub fn run(config: &RunConfig) -> Result<Report, Error> {
    config.validate()?;
    let start = Instant::now();
    let payload = match config.command {
        Command::Spectrum => Payload::Spectrum(cmd_spectrum(config)?),
        Command::VerifyClosedForm => Payload::ClosedForm(cmd_verify_closed_form(config)?),
        Command::Avn => Payload::Avn(cmd_avn(config)?),
        Command::Search => Payload::Search(cmd_search(config)?),
        Command::Simulate => Payload::Simulate(cmd_simulate(config)?),
    };
    Ok(Report {
        version: VERSION.to_string(),
        config: config.clone(),
        payload,
        duration_seconds: start.elapsed().as_secs_f64(),
    })
}

pub fn cmd_spectrum(config: &RunConfig) -> Result<SpectrumPayload, Error> {
    let params = IsingParams::new(config.n, config.field())?;
    let probe = model::exact_diagonalize(&params, 1, config.tol_degeneracy)?;
    let k = config.levels.min(probe.levels.len());
    let spectrum = model::exact_diagonalize(&params, k, config.tol_degeneracy)?;
    let levels = (0..spectrum.levels.len())
        .map(|i| LevelSummary {
            energy: spectrum.level_energy(i),
            degeneracy: spectrum.levels[i].len(),
            max_residual: spectrum.lowest.get(i).map(|l| l.residuals.iter().copied().fold(0.0, f64::max)),
        })
        .collect();
    Ok(SpectrumPayload {
        n: config.n,
        field_b: config.field(),
        ground_energy: spectrum.ground_energy(),
        ground_degeneracy: spectrum.ground_dimension(),
        degeneracy_tol: config.tol_degeneracy,
        levels,
        eigenvalues: spectrum.eigenvalues,
    })
}

pub fn cmd_verify_closed_form(config: &RunConfig) -> Result<ClosedFormPayload, Error> {
    let grid: Vec<f64> = match config.field_b {
        Some(b) => vec![b],
        None => CLOSED_FORM_GRID.to_vec(),
    };
    let tolerance = if config.n == 3 { CLOSED_FORM_3_TOL } else { CLOSED_FORM_4_TOL };
    let mut points = Vec::with_capacity(grid.len());
    let mut zero_field_reading = None;
    for &b in &grid {
        let params = IsingParams::new(config.n, b)?;
        let spectrum = model::exact_diagonalize(&params, 1, config.tol_degeneracy)?;
        let ground = spectrum.ground();
        let (formula, printed_norm_ratio) = match config.n {
            3 => (model::closed_form_ground_state_3(b)?, None),
            _ => {
                let cf = model::closed_form_4(b)?;
                let ratio = cf.norm_ratio();
                (cf.state, Some(ratio))
            }
        };
        let projection_deficit = ground.projection_deficit(&formula)?;
        let overlap = if ground.dimension() == 1 { Some(ground.vectors[0].overlap(&formula)?) } else { None };
        let passed = match overlap {
            Some(o) => o >= 1.0 - tolerance,
            None => projection_deficit < tolerance,
        };
        points.push(ClosedFormPoint { field_b: b, ground_degeneracy: ground.dimension(), overlap, projection_deficit, printed_norm_ratio, passed });

        if config.n == 4 && b == 0.0 {
            zero_field_reading = Some(resolve_zero_field_reading(ground, &formula)?);
        }
    }
    Ok(ClosedFormPayload { n: config.n, tolerance, points, zero_field_reading })
}

/// Compares the eight-term zero-field state against the seven-term printed list.
fn resolve_zero_field_reading(ground: &model::Level, eight_terms: &StateVector) -> Result<ZeroFieldReading, Error> {
    let mut seven = eight_terms.amplitudes().to_vec();
    seven[0b1111] = 0.0.into();
    let seven = StateVector::new(4, seven)?;
    let with_1111_deficit = ground.projection_deficit(eight_terms)?;
    let without_1111_deficit = ground.projection_deficit(&seven)?;
    Ok(ZeroFieldReading {
        with_1111_deficit,
        without_1111_deficit,
        amplitude_1111: eight_terms.amplitudes()[0b1111].re,
        includes_1111: with_1111_deficit < without_1111_deficit && with_1111_deficit < CLOSED_FORM_4_TOL,
    })
}

/// The state and constraint set a run of `avn` or `simulate` works on.
fn avn_target(config: &RunConfig) -> Result<(String, StateVector, ConstraintSet, f64), Error> {
    let n = config.n;
    if config.excited {
        let tol = config.tol_eigen.unwrap_or(avn::DEFAULT_EIGEN_TOL);
        return Ok(("first-excited (-|0000>+|1111>)/sqrt2".into(), model::first_excited_state_4()?, avn::excited_ghz_set_4(), tol));
    }
    let standard = avn::standard_ghz_set(n)?;
    let b = config.field();
    if b == 0.0 {
        let tol = config.tol_eigen.unwrap_or(avn::DEFAULT_EIGEN_TOL);
        return match config.parity.unwrap_or(Parity::Even) {
            Parity::Even => {
                let (label, state) = match n {
                    3 => ("closed-form ground state n=3, B=0", model::closed_form_ground_state_3(0.0)?),
                    4 => ("closed-form ground state n=4, B=0", model::closed_form_ground_state_4(0.0)?),
                    _ => ("even-parity uniform state", model::even_parity_uniform_state(n)?),
                };
                Ok((label.into(), state, standard, tol))
            }
            Parity::Odd => {
                let state = model::odd_parity_uniform_state(n)?;
                let observables: Vec<PauliString> = standard.iter().map(|c| c.observable).collect();
                let set = avn::assign_eigenvalues(&observables, &state, tol)?;
                Ok(("odd-parity uniform state".into(), state, set, tol))
            }
        };
    }
    let tol = config.tol_eigen.unwrap_or(avn::NUMERICAL_EIGEN_TOL);
    let params = IsingParams::new(n, b)?;
    let state = model::select_ground_state(&params, config.parity, config.tol_degeneracy)?;
    Ok((format!("numerical ground state n={n}, B={b}"), state, standard, tol))
}

pub fn cmd_avn(config: &RunConfig) -> Result<AvnPayload, Error> {
    let (state_label, state, set, tol) = avn_target(config)?;
    let certificate = avn::certify_avn(&set, &state, tol)?;
    let certificate_product = match certificate.classical.certificate() {
        Some(rows) => Some(avn::operator_product(&set, rows)?),
        None => None,
    };
    let brute_force = match avn::brute_force_satisfiable(&set) {
        Ok(bf) => Some(bf),
        Err(Error::CapExceeded { .. }) => None,
        Err(e) => return Err(e),
    };
    Ok(AvnPayload { state: state_label, certified: certificate.holds(), certificate, certificate_product, brute_force })
}

pub fn cmd_search(config: &RunConfig) -> Result<SearchPayload, Error> {
    let (label, state) = if config.excited {
        ("first-excited (-|0000>+|1111>)/sqrt2".to_string(), model::first_excited_state_4()?)
    } else {
        let params = IsingParams::new(config.n, config.field())?;
        if params.n() > search::MAX_SCAN_SITES {
            return Err(Error::CapExceeded { what: "stabilizer scan", n: params.n(), cap: search::MAX_SCAN_SITES });
        }
        let state = model::select_ground_state(&params, config.parity, config.tol_degeneracy)?;
        let sector = config.parity.map(|p| format!(", {p} parity")).unwrap_or_default();
        (format!("numerical ground state n={}, B={}{sector}", config.n, config.field()), state)
    };
    let inventory = search::enumerate_stabilizers(&state, config.tol_stabilizer)?;
    let avn_sets = search::find_avn_subsets(&inventory, config.max_subset)?;
    Ok(SearchPayload {
        state: label,
        scope: format!("all 4^{} sign-positive Hermitian Pauli strings", inventory.n),
        max_subset: config.max_subset,
        inventory,
        avn_sets,
    })
}

pub fn cmd_simulate(config: &RunConfig) -> Result<SimulatePayload, Error> {
    let (state_label, state, set, _) = avn_target(config)?;
    let statistics = measure::run_experiment(&state, &set, config.shots, config.seed)?;
    let all_matched = statistics.constraints.iter().all(|c| c.matched_fraction == 1.0);
    Ok(SimulatePayload { state: state_label, all_matched, statistics })
}
