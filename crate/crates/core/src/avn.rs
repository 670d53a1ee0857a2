//! All-versus-nothing arguments against local realism.
//!
//! The quantum side is a [`ConstraintSet`]: commuting ±1-coefficient Pauli
//! observables, each paired with the eigenvalue a state is claimed to have.
//! The classical side is an [`LhvSystem`]: one hidden ±1 value per
//! `(site, axis)`, written `m = (−1)^v`, and one product relation per
//! constraint, i.e. a linear system over GF(2). A contradiction is certified
//! by a subset of relations whose left-hand sides cancel while their
//! right-hand sides multiply to −1.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf2::{self, BitRow, Solution};
use crate::pauli::{Letter, PauliString, Sign};
use crate::state::{self, StateVector};

/// Residual tolerance for states built from closed forms.
pub const DEFAULT_EIGEN_TOL: f64 = 1e-10;

/// Residual tolerance for states obtained by numerical diagonalization.
pub const NUMERICAL_EIGEN_TOL: f64 = 1e-8;

/// Variable cap for [`brute_force_satisfiable`].
pub const MAX_BRUTE_FORCE_VARIABLES: usize = 24;

/// One eigenequation `O|ψ⟩ = λ|ψ⟩`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawConstraint")]
pub struct Constraint {
    pub observable: PauliString,
    pub eigenvalue: Sign,
}

#[derive(Deserialize)]
struct RawConstraint {
    observable: PauliString,
    eigenvalue: Sign,
}

impl TryFrom<RawConstraint> for Constraint {
    type Error = Error;
    fn try_from(raw: RawConstraint) -> Result<Self> {
        Constraint::new(raw.observable, raw.eigenvalue)
    }
}

impl Constraint {
    pub fn new(observable: PauliString, eigenvalue: Sign) -> Result<Self> {
        if observable.sign().is_none() {
            return Err(Error::NotHermitian(observable.to_string()));
        }
        Ok(Constraint { observable, eigenvalue })
    }

    /// Product of local outcomes implied for an LHV model: eigenvalue × observable sign.
    pub fn outcome_product(&self) -> Sign {
        self.eigenvalue * self.observable.sign().expect("checked on construction")
    }

    /// The same physical statement with the observable's sign and eigenvalue both flipped.
    pub fn flipped(&self) -> Constraint {
        Constraint { observable: self.observable.negate(), eigenvalue: -self.eigenvalue }
    }
}

impl fmt::Display for Constraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = {}", self.observable, self.eigenvalue)
    }
}

impl FromStr for Constraint {
    type Err = Error;

    /// `"<pauli> = ±1"`, e.g. `"+YYZ = -1"`.
    fn from_str(s: &str) -> Result<Self> {
        let (lhs, rhs) = s.split_once('=').ok_or_else(|| Error::Parse {
            text: s.to_string(),
            reason: "expected '<observable> = <+1|-1>'".into(),
        })?;
        let observable = PauliString::parse(lhs)?;
        let eigenvalue = match rhs.trim() {
            "1" | "+1" => Sign::Plus,
            "-1" => Sign::Minus,
            other => {
                return Err(Error::Parse { text: s.to_string(), reason: format!("eigenvalue {other:?} is not ±1") })
            }
        };
        Constraint::new(observable, eigenvalue)
    }
}

/// Pairwise commuting constraints over a common site count.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawSet")]
pub struct ConstraintSet {
    n: usize,
    constraints: Vec<Constraint>,
}

#[derive(Deserialize)]
struct RawSet {
    n: usize,
    constraints: Vec<Constraint>,
}

impl TryFrom<RawSet> for ConstraintSet {
    type Error = Error;
    fn try_from(raw: RawSet) -> Result<Self> {
        ConstraintSet::new(raw.n, raw.constraints)
    }
}

impl ConstraintSet {
    pub fn new(n: usize, constraints: Vec<Constraint>) -> Result<Self> {
        let mut set = ConstraintSet { n, constraints: Vec::with_capacity(constraints.len()) };
        for c in constraints {
            set.push(c)?;
        }
        Ok(set)
    }

    /// Appends a constraint after checking size and commutation with the existing ones.
    pub fn push(&mut self, c: Constraint) -> Result<()> {
        if c.observable.n() != self.n {
            return Err(Error::SizeMismatch { left: self.n, right: c.observable.n() });
        }
        let idx = self.constraints.len();
        for (i, other) in self.constraints.iter().enumerate() {
            if !other.observable.commutes(&c.observable)? {
                return Err(Error::NotCommuting { first: i, second: idx });
            }
        }
        self.constraints.push(c);
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.constraints.len()
    }

    pub fn is_empty(&self) -> bool {
        self.constraints.is_empty()
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Constraint> {
        self.constraints.iter()
    }

    /// A copy with constraint `index` removed.
    pub fn without(&self, index: usize) -> ConstraintSet {
        let mut constraints = self.constraints.clone();
        constraints.remove(index);
        ConstraintSet { n: self.n, constraints }
    }

    /// A copy with the constraints at `indices` (in that order).
    pub fn subset(&self, indices: &[usize]) -> ConstraintSet {
        ConstraintSet { n: self.n, constraints: indices.iter().map(|&i| self.constraints[i]).collect() }
    }

    /// Replaces the eigenvalue of constraint `index`; commutation is unaffected.
    pub fn with_eigenvalue(&self, index: usize, eigenvalue: Sign) -> ConstraintSet {
        let mut out = self.clone();
        out.constraints[index].eigenvalue = eigenvalue;
        out
    }

    pub fn with_flipped(&self, index: usize) -> ConstraintSet {
        let mut out = self.clone();
        out.constraints[index] = out.constraints[index].flipped();
        out
    }
}

impl<'a> IntoIterator for &'a ConstraintSet {
    type Item = &'a Constraint;
    type IntoIter = std::slice::Iter<'a, Constraint>;
    fn into_iter(self) -> Self::IntoIter {
        self.constraints.iter()
    }
}

fn set_from_text(n: usize, items: &[(&str, Sign)]) -> Result<ConstraintSet> {
    let constraints = items
        .iter()
        .map(|(text, ev)| Constraint::new(PauliString::parse_sized(text, Some(n))?, *ev))
        .collect::<Result<Vec<_>>>()?;
    ConstraintSet::new(n, constraints)
}

/// `ZYYZ…Z, YZYZ…Z, YYZZ…Z, ZZZZ…Z` with eigenvalues `(−1, −1, −1, +1)`.
///
/// These are the eigenvalues on the even-parity uniform state; they hold for
/// every `n ≥ 3` because `Y_aY_b = −X_aZ_aX_bZ_b` and the remaining Z's
/// complete a full parity operator.
pub fn standard_ghz_set(n: usize) -> Result<ConstraintSet> {
    if n < 3 {
        return Err(Error::InvalidParameter(format!("the standard set needs n >= 3, got {n}")));
    }
    let with_ys = |a: usize, b: usize| {
        let mut letters = vec![Letter::Z; n];
        letters[a] = Letter::Y;
        letters[b] = Letter::Y;
        PauliString::from_letters(&letters, Sign::Plus)
    };
    let constraints = vec![
        Constraint::new(with_ys(1, 2)?, Sign::Minus)?,
        Constraint::new(with_ys(0, 2)?, Sign::Minus)?,
        Constraint::new(with_ys(0, 1)?, Sign::Minus)?,
        Constraint::new(PauliString::from_letters(&vec![Letter::Z; n], Sign::Plus)?, Sign::Plus)?,
    ];
    ConstraintSet::new(n, constraints)
}

/// `XXYY, XYXY, XYYX, XXXX` with their eigenvalues on `(−|0000⟩ + |1111⟩)/√2`.
pub fn excited_ghz_set_4() -> ConstraintSet {
    set_from_text(4, &[("XXYY", Sign::Plus), ("XYXY", Sign::Plus), ("XYYX", Sign::Plus), ("XXXX", Sign::Minus)])
        .expect("fixed commuting set")
}

/// Reads off each observable's eigenvalue on `state`; fails if it is not an eigenvector.
pub fn assign_eigenvalues(observables: &[PauliString], state: &StateVector, tol: f64) -> Result<ConstraintSet> {
    let mut constraints = Vec::with_capacity(observables.len());
    for obs in observables {
        let (eigenvalue, residual) = closest_eigenvalue(obs, state)?;
        if residual > tol {
            return Err(Error::NotAnEigenstate { observable: obs.to_string(), residual });
        }
        constraints.push(Constraint::new(*obs, eigenvalue)?);
    }
    ConstraintSet::new(state.n(), constraints)
}

/// The ±1 closest to an eigenvalue of `obs` on `state`, and the residual `‖O·ψ − λψ‖`.
pub fn closest_eigenvalue(obs: &PauliString, state: &StateVector) -> Result<(Sign, f64)> {
    let image = obs.apply(state)?;
    let plus = state::residual(image.amplitudes(), 1.0, state.amplitudes());
    let minus = state::residual(image.amplitudes(), -1.0, state.amplitudes());
    Ok(if plus <= minus { (Sign::Plus, plus) } else { (Sign::Minus, minus) })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EigenReport {
    pub residuals: Vec<f64>,
    pub tol: f64,
    /// Indices of constraints whose residual exceeds `tol`.
    pub failed: Vec<usize>,
}

impl EigenReport {
    pub fn passed(&self) -> bool {
        self.failed.is_empty()
    }

    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().copied().fold(0.0, f64::max)
    }
}

pub fn verify_eigenequations(set: &ConstraintSet, state: &StateVector, tol: f64) -> Result<EigenReport> {
    if set.n() != state.n() {
        return Err(Error::SizeMismatch { left: set.n(), right: state.n() });
    }
    let mut residuals = Vec::with_capacity(set.len());
    let mut failed = Vec::new();
    for (i, c) in set.iter().enumerate() {
        let image = c.observable.apply(state)?;
        let r = state::residual(image.amplitudes(), c.eigenvalue.as_f64(), state.amplitudes());
        if !(r <= tol) {
            failed.push(i);
        }
        residuals.push(r);
    }
    Ok(EigenReport { residuals, tol, failed })
}

/// A hidden variable: the predetermined outcome of measuring `axis` on `site`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Variable {
    /// Zero-based site.
    pub site: usize,
    pub axis: Letter,
}

impl fmt::Display for Variable {
    /// `y1`, `z3`, ... with 1-based sites.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.axis.as_char().to_ascii_lowercase(), self.site + 1)
    }
}

impl FromStr for Variable {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let err = || Error::Parse { text: s.to_string(), reason: "expected e.g. y1".into() };
        let mut chars = s.chars();
        let axis = chars.next().and_then(|c| Letter::from_char(c.to_ascii_uppercase())).ok_or_else(err)?;
        let site: usize = chars.as_str().parse().map_err(|_| err())?;
        if axis == Letter::I || site == 0 {
            return Err(err());
        }
        Ok(Variable { site: site - 1, axis })
    }
}

impl Serialize for Variable {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Variable {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

/// The classical sign system `Σ_{v ∈ row} v = rhs (mod 2)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LhvSystem {
    pub variables: Vec<Variable>,
    pub rows: Vec<BitRow>,
    /// `true` where the product of outcomes must be −1.
    pub rhs: Vec<bool>,
}

impl LhvSystem {
    pub fn num_variables(&self) -> usize {
        self.variables.len()
    }

    /// Does a ±1 assignment (one per variable) satisfy every relation?
    pub fn is_satisfied_by(&self, assignment: &[Sign]) -> bool {
        if assignment.len() != self.variables.len() {
            return false;
        }
        let bits = BitRow::from_bits(&assignment.iter().map(|s| s.bit()).collect::<Vec<_>>());
        self.rows.iter().zip(&self.rhs).all(|(row, &b)| row.dot(&bits) == b)
    }

    /// Re-sums the certificate rows: zero left-hand side and odd right-hand side.
    pub fn verifies_certificate(&self, certificate: &[usize]) -> bool {
        if certificate.is_empty() || certificate.iter().any(|&i| i >= self.rows.len()) {
            return false;
        }
        let mut acc = BitRow::zeros(self.variables.len());
        let mut parity = false;
        for &i in certificate {
            acc.xor_assign(&self.rows[i]);
            parity ^= self.rhs[i];
        }
        acc.is_zero() && parity
    }
}

/// Hidden variables of a set: every measurement axis used anywhere in the set,
/// at every site some constraint acts on. Each observer thus has one fixed
/// menu of local measurements, and a variable may sit in no relation at all.
pub fn measurement_menu(set: &ConstraintSet) -> Vec<Variable> {
    let mut axes: Vec<Letter> = set.iter().flat_map(|c| c.observable.support().map(|(_, l)| l)).collect();
    axes.sort();
    axes.dedup();
    let mut sites: Vec<usize> = set.iter().flat_map(|c| c.observable.support().map(|(s, _)| s)).collect();
    sites.sort();
    sites.dedup();
    sites.into_iter().flat_map(|site| axes.iter().map(move |&axis| Variable { site, axis })).collect()
}

pub fn build_lhv_system(set: &ConstraintSet) -> LhvSystem {
    let variables = measurement_menu(set);

    let rows = set
        .iter()
        .map(|c| {
            let mut row = BitRow::zeros(variables.len());
            for (site, axis) in c.observable.support() {
                let col = variables.binary_search(&Variable { site, axis }).expect("collected above");
                row.set(col, true);
            }
            row
        })
        .collect();
    let rhs = set.iter().map(|c| c.outcome_product().bit()).collect();
    LhvSystem { variables, rows, rhs }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Verdict {
    /// A local hidden-variable assignment reproducing every relation.
    Satisfiable { assignment: Vec<Sign> },
    /// Constraint indices whose relations are jointly contradictory.
    Unsatisfiable { certificate: Vec<usize> },
}

impl Verdict {
    pub fn is_satisfiable(&self) -> bool {
        matches!(self, Verdict::Satisfiable { .. })
    }

    pub fn certificate(&self) -> Option<&[usize]> {
        match self {
            Verdict::Unsatisfiable { certificate } => Some(certificate),
            Verdict::Satisfiable { .. } => None,
        }
    }
}

/// Gaussian elimination over GF(2).
///
/// An unsatisfiable verdict carries the smallest contradictory subset
/// (lexicographically first among equals) whenever the dependency space is
/// small enough to scan, which covers every set built from a handful of
/// constraints.
pub fn is_classically_satisfiable(system: &LhvSystem) -> Verdict {
    match gf2::solve(&system.rows, &system.rhs, system.variables.len()) {
        Solution::Consistent(bits) => Verdict::Satisfiable { assignment: bits.into_iter().map(Sign::from_bit).collect() },
        Solution::Inconsistent(certificate) => Verdict::Unsatisfiable { certificate },
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BruteForceOutcome {
    /// The enumerated hidden variables; a satisfying assignment is aligned with this list.
    pub variables: Vec<Variable>,
    pub verdict: Verdict,
    /// Assignments examined before the verdict was reached.
    pub scanned: u64,
}

/// Exhaustive check of every ±1 assignment, evaluating products of outcomes directly.
///
/// Enumerates the full [`measurement_menu`], including variables no relation
/// touches. Shares no solving code with the GF(2) route. Unsatisfiable sets
/// get the smallest contradictory subset found by enumerating subsets in
/// order of size.
pub fn brute_force_satisfiable(set: &ConstraintSet) -> Result<BruteForceOutcome> {
    let variables = measurement_menu(set);
    if variables.len() > MAX_BRUTE_FORCE_VARIABLES {
        return Err(Error::CapExceeded {
            what: "brute-force variable count",
            n: variables.len(),
            cap: MAX_BRUTE_FORCE_VARIABLES,
        });
    }
    if set.len() > MAX_BRUTE_FORCE_VARIABLES {
        return Err(Error::CapExceeded { what: "brute-force constraint count", n: set.len(), cap: MAX_BRUTE_FORCE_VARIABLES });
    }
    let positions: Vec<Vec<usize>> = set
        .iter()
        .map(|c| {
            c.observable
                .support()
                .map(|(site, axis)| variables.iter().position(|v| v.site == site && v.axis == axis).unwrap())
                .collect()
        })
        .collect();
    let targets: Vec<i8> = set.iter().map(|c| c.eigenvalue.value() * c.observable.sign().unwrap().value()).collect();

    let total = 1u64 << variables.len();
    for code in 0..total {
        let outcome = |i: usize| if code >> i & 1 == 1 { -1i8 } else { 1 };
        let ok = positions
            .iter()
            .zip(&targets)
            .all(|(pos, &t)| pos.iter().map(|&i| outcome(i)).product::<i8>() == t);
        if ok {
            let assignment = (0..variables.len()).map(|i| Sign::from_value(outcome(i).into()).unwrap()).collect();
            return Ok(BruteForceOutcome { variables, verdict: Verdict::Satisfiable { assignment }, scanned: code + 1 });
        }
    }

    let certificate = smallest_contradiction(&positions, &targets, variables.len())
        .ok_or_else(|| Error::Numerical("no assignment works yet no contradictory subset exists".into()))?;
    Ok(BruteForceOutcome { variables, verdict: Verdict::Unsatisfiable { certificate }, scanned: total })
}

/// Smallest subset (then lexicographically first) in which every variable
/// occurs an even number of times and the targets multiply to −1.
fn smallest_contradiction(positions: &[Vec<usize>], targets: &[i8], nvars: usize) -> Option<Vec<usize>> {
    let m = positions.len();
    for size in 1..=m {
        let mut combo: Vec<usize> = (0..size).collect();
        loop {
            let mut counts = vec![0u32; nvars];
            for &i in &combo {
                for &p in &positions[i] {
                    counts[p] += 1;
                }
            }
            let product: i8 = combo.iter().map(|&i| targets[i]).product();
            if product == -1 && counts.iter().all(|c| c % 2 == 0) {
                return Some(combo);
            }
            // Next combination in lexicographic order.
            let Some(pos) = (0..size).rev().find(|&p| combo[p] < m - size + p) else {
                break;
            };
            combo[pos] += 1;
            for q in pos + 1..size {
                combo[q] = combo[q - 1] + 1;
            }
        }
    }
    None
}

/// Ordered operator product of the observables at `indices`.
pub fn operator_product(set: &ConstraintSet, indices: &[usize]) -> Result<PauliString> {
    let mut acc = PauliString::identity(set.n())?;
    for &i in indices {
        acc = acc.multiply(&set.constraints()[i].observable)?;
    }
    Ok(acc)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AvnCertificate {
    pub set: ConstraintSet,
    pub quantum: EigenReport,
    pub system: LhvSystem,
    pub classical: Verdict,
}

impl AvnCertificate {
    /// Quantum eigenequations hold and no LHV assignment reproduces them.
    pub fn holds(&self) -> bool {
        self.quantum.passed() && !self.classical.is_satisfiable()
    }
}

pub fn certify_avn(set: &ConstraintSet, state: &StateVector, tol: f64) -> Result<AvnCertificate> {
    let quantum = verify_eigenequations(set, state, tol)?;
    let system = build_lhv_system(set);
    let classical = is_classically_satisfiable(&system);
    Ok(AvnCertificate { set: set.clone(), quantum, system, classical })
}
