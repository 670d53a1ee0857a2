//! Phase-exact Pauli strings over `n` sites.
//!
//! A string is stored as a pair of bitmasks plus an exponent of `i`:
//!
//! ```text
//! P = i^phase_exp * W_1 ⊗ W_2 ⊗ ... ⊗ W_n,   W_j = X^{x_j} Z^{z_j}
//! ```
//!
//! so the letter `Y = i·XZ` is the mask pair `(1, 1)` plus one unit of phase.
//! The masks are aligned with computational-basis indices: site 1 is the most
//! significant bit, which is the ordering under which the three-site ring
//! Hamiltonian has its familiar 8×8 matrix form. Bit `n - 1 - s` of a mask
//! therefore belongs to the zero-based site `s`.

use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::state::StateVector;

/// Largest site count a [`PauliString`] can hold.
pub const MAX_SITES: usize = 64;

/// Default site cap for [`PauliString::to_matrix`].
pub const DEFAULT_DENSE_CAP: usize = 10;

const I_POWERS: [Complex64; 4] = [
    Complex64::new(1.0, 0.0),
    Complex64::new(0.0, 1.0),
    Complex64::new(-1.0, 0.0),
    Complex64::new(0.0, -1.0),
];

/// `i^k` for any integer exponent.
pub fn i_power(k: u8) -> Complex64 {
    I_POWERS[(k & 3) as usize]
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Letter {
    I,
    X,
    Y,
    Z,
}

impl Letter {
    pub const ALL: [Letter; 4] = [Letter::I, Letter::X, Letter::Y, Letter::Z];

    fn bits(self) -> (bool, bool) {
        match self {
            Letter::I => (false, false),
            Letter::X => (true, false),
            Letter::Y => (true, true),
            Letter::Z => (false, true),
        }
    }

    fn from_bits(x: bool, z: bool) -> Letter {
        match (x, z) {
            (false, false) => Letter::I,
            (true, false) => Letter::X,
            (true, true) => Letter::Y,
            (false, true) => Letter::Z,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Letter::I => 'I',
            Letter::X => 'X',
            Letter::Y => 'Y',
            Letter::Z => 'Z',
        }
    }

    pub fn from_char(c: char) -> Option<Letter> {
        match c {
            'I' => Some(Letter::I),
            'X' => Some(Letter::X),
            'Y' => Some(Letter::Y),
            'Z' => Some(Letter::Z),
            _ => None,
        }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_char())
    }
}

/// A ±1 value: an eigenvalue, a measurement outcome or an observable's sign.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn from_bit(bit: bool) -> Sign {
        if bit {
            Sign::Minus
        } else {
            Sign::Plus
        }
    }

    /// `true` for −1, matching the GF(2) encoding `m = (−1)^bit`.
    pub fn bit(self) -> bool {
        self == Sign::Minus
    }

    pub fn value(self) -> i8 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn as_f64(self) -> f64 {
        f64::from(self.value())
    }

    pub fn from_value(v: i64) -> Option<Sign> {
        match v {
            1 => Some(Sign::Plus),
            -1 => Some(Sign::Minus),
            _ => None,
        }
    }
}

impl std::ops::Mul for Sign {
    type Output = Sign;
    fn mul(self, rhs: Sign) -> Sign {
        Sign::from_bit(self.bit() ^ rhs.bit())
    }
}

impl std::ops::Neg for Sign {
    type Output = Sign;
    fn neg(self) -> Sign {
        Sign::from_bit(!self.bit())
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+1",
            Sign::Minus => "-1",
        })
    }
}

impl Serialize for Sign {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_i8(self.value())
    }
}

impl<'de> Deserialize<'de> for Sign {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Sign, D::Error> {
        let v = i64::deserialize(d)?;
        Sign::from_value(v).ok_or_else(|| serde::de::Error::custom(format!("expected +1 or -1, got {v}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PauliString {
    n: usize,
    x_mask: u64,
    z_mask: u64,
    phase_exp: u8,
}

fn low_mask(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

fn check_sites(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidParameter("a Pauli string needs at least one site".into()));
    }
    if n > MAX_SITES {
        return Err(Error::CapExceeded { what: "Pauli string", n, cap: MAX_SITES });
    }
    Ok(())
}

impl PauliString {
    /// Builds a string from raw masks. Bits above `n` are rejected.
    pub fn from_masks(n: usize, x_mask: u64, z_mask: u64, phase_exp: u8) -> Result<Self> {
        check_sites(n)?;
        let lm = low_mask(n);
        if x_mask & !lm != 0 || z_mask & !lm != 0 {
            return Err(Error::InvalidParameter(format!("mask bits set above site count {n}")));
        }
        Ok(PauliString { n, x_mask, z_mask, phase_exp: phase_exp & 3 })
    }

    pub fn identity(n: usize) -> Result<Self> {
        Self::from_masks(n, 0, 0, 0)
    }

    /// Hermitian string `sign · L_1 ⊗ ... ⊗ L_n`.
    pub fn from_letters(letters: &[Letter], sign: Sign) -> Result<Self> {
        let n = letters.len();
        check_sites(n)?;
        let mut x_mask = 0u64;
        let mut z_mask = 0u64;
        for (site, &letter) in letters.iter().enumerate() {
            let bit = 1u64 << (n - 1 - site);
            let (x, z) = letter.bits();
            if x {
                x_mask |= bit;
            }
            if z {
                z_mask |= bit;
            }
        }
        let y_count = (x_mask & z_mask).count_ones() as u8;
        let sign_exp = if sign.bit() { 2 } else { 0 };
        Ok(PauliString { n, x_mask, z_mask, phase_exp: (y_count + sign_exp) & 3 })
    }

    /// A single letter on zero-based `site`, identity elsewhere.
    pub fn single(n: usize, site: usize, letter: Letter) -> Result<Self> {
        check_sites(n)?;
        if site >= n {
            return Err(Error::InvalidParameter(format!("site {} out of range for {n} sites", site + 1)));
        }
        let mut letters = vec![Letter::I; n];
        letters[site] = letter;
        Self::from_letters(&letters, Sign::Plus)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn x_mask(&self) -> u64 {
        self.x_mask
    }

    pub fn z_mask(&self) -> u64 {
        self.z_mask
    }

    pub fn phase_exp(&self) -> u8 {
        self.phase_exp
    }

    fn bit(&self, site: usize) -> u64 {
        1u64 << (self.n - 1 - site)
    }

    /// Letter at zero-based `site`.
    pub fn letter(&self, site: usize) -> Letter {
        let b = self.bit(site);
        Letter::from_bits(self.x_mask & b != 0, self.z_mask & b != 0)
    }

    pub fn letters(&self) -> Vec<Letter> {
        (0..self.n).map(|s| self.letter(s)).collect()
    }

    /// Non-identity positions as `(zero-based site, letter)`, site-ascending.
    pub fn support(&self) -> impl Iterator<Item = (usize, Letter)> + '_ {
        (0..self.n).map(|s| (s, self.letter(s))).filter(|(_, l)| *l != Letter::I)
    }

    pub fn weight(&self) -> usize {
        (self.x_mask | self.z_mask).count_ones() as usize
    }

    pub fn is_identity_letters(&self) -> bool {
        self.x_mask == 0 && self.z_mask == 0
    }

    fn y_count(&self) -> u8 {
        ((self.x_mask & self.z_mask).count_ones() & 3) as u8
    }

    /// Exponent `k` of the coefficient `i^k` in front of the letter product.
    pub fn coefficient_exp(&self) -> u8 {
        (self.phase_exp + 4 - self.y_count()) & 3
    }

    pub fn is_hermitian(&self) -> bool {
        self.coefficient_exp() % 2 == 0
    }

    /// The ±1 coefficient of a Hermitian string, `None` for ±i.
    pub fn sign(&self) -> Option<Sign> {
        match self.coefficient_exp() {
            0 => Some(Sign::Plus),
            2 => Some(Sign::Minus),
            _ => None,
        }
    }

    /// Same letters with coefficient +1.
    pub fn unsigned(&self) -> PauliString {
        PauliString { phase_exp: self.y_count(), ..*self }
    }

    pub fn negate(&self) -> PauliString {
        PauliString { phase_exp: (self.phase_exp + 2) & 3, ..*self }
    }

    fn check_same_n(&self, other: &PauliString) -> Result<()> {
        if self.n != other.n {
            return Err(Error::SizeMismatch { left: self.n, right: other.n });
        }
        Ok(())
    }

    /// Exact operator product `self · other`.
    pub fn multiply(&self, other: &PauliString) -> Result<PauliString> {
        self.check_same_n(other)?;
        // Moving each Z of `self` past an X of `other` costs a factor −1.
        let swaps = (self.z_mask & other.x_mask).count_ones() as u8;
        Ok(PauliString {
            n: self.n,
            x_mask: self.x_mask ^ other.x_mask,
            z_mask: self.z_mask ^ other.z_mask,
            phase_exp: (self.phase_exp + other.phase_exp + 2 * (swaps & 1)) & 3,
        })
    }

    pub fn commutes(&self, other: &PauliString) -> Result<bool> {
        self.check_same_n(other)?;
        let form = (self.x_mask & other.z_mask).count_ones() + (self.z_mask & other.x_mask).count_ones();
        Ok(form % 2 == 0)
    }

    /// Applies the string to raw amplitudes; `out[k ^ x] = i^p (−1)^{|k & z|} v[k]`.
    pub fn apply_amplitudes(&self, v: &[Complex64]) -> Result<Vec<Complex64>> {
        if v.len() != 1usize.checked_shl(self.n as u32).unwrap_or(0) {
            return Err(Error::InvalidParameter(format!(
                "amplitude length {} does not match {} sites",
                v.len(),
                self.n
            )));
        }
        let phase = i_power(self.phase_exp);
        let x = self.x_mask as usize;
        let z = self.z_mask as usize;
        let mut out = vec![Complex64::new(0.0, 0.0); v.len()];
        for (k, amp) in v.iter().enumerate() {
            let c = if (k & z).count_ones() % 2 == 0 { phase } else { -phase };
            out[k ^ x] = c * amp;
        }
        Ok(out)
    }

    /// Acts on a state; Pauli strings are unitary so the result stays normalized.
    pub fn apply(&self, state: &StateVector) -> Result<StateVector> {
        if state.n() != self.n {
            return Err(Error::SizeMismatch { left: self.n, right: state.n() });
        }
        let amps = self.apply_amplitudes(state.amplitudes())?;
        Ok(StateVector::from_normalized(self.n, amps))
    }

    /// Dense matrix of the string, refused above `cap` sites.
    pub fn to_matrix(&self, cap: usize) -> Result<DMatrix<Complex64>> {
        if self.n > cap {
            return Err(Error::CapExceeded { what: "dense Pauli matrix", n: self.n, cap });
        }
        let dim = 1usize << self.n;
        let phase = i_power(self.phase_exp);
        let x = self.x_mask as usize;
        let z = self.z_mask as usize;
        let mut m = DMatrix::zeros(dim, dim);
        for k in 0..dim {
            let c = if (k & z).count_ones() % 2 == 0 { phase } else { -phase };
            m[(k ^ x, k)] = c;
        }
        Ok(m)
    }

    /// Parses with the site count inferred from the text.
    pub fn parse(text: &str) -> Result<Self> {
        Self::parse_sized(text, None)
    }

    /// Parses `[+|-]LETTERS` or `[+|-]L1 L2 ...` (1-based sites).
    ///
    /// With `n` given, compact strings must have exactly `n` letters and
    /// site-indexed tokens must stay within `1..=n`.
    pub fn parse_sized(text: &str, n: Option<usize>) -> Result<Self> {
        let err = |reason: &str| Error::Parse { text: text.to_string(), reason: reason.to_string() };
        let trimmed = text.trim();
        let (sign, body) = match trimmed.chars().next() {
            Some('+') => (Sign::Plus, trimmed[1..].trim_start()),
            Some('-') => (Sign::Minus, trimmed[1..].trim_start()),
            _ => (Sign::Plus, trimmed),
        };
        if body.is_empty() {
            return Err(err("empty operator"));
        }
        if body.starts_with('i') {
            return Err(err("only coefficients +1 and -1 are allowed"));
        }

        let letters = if body.chars().any(|c| c.is_ascii_digit()) {
            let mut placed: Vec<(usize, Letter)> = Vec::new();
            for token in body.split_whitespace() {
                let mut chars = token.chars();
                let letter = chars
                    .next()
                    .and_then(Letter::from_char)
                    .ok_or_else(|| err(&format!("bad letter in token {token:?}")))?;
                let site: usize = chars
                    .as_str()
                    .parse()
                    .map_err(|_| err(&format!("bad site index in token {token:?}")))?;
                if site == 0 || n.is_some_and(|n| site > n) {
                    return Err(err(&format!("site {site} out of range")));
                }
                if placed.iter().any(|(s, _)| *s == site) {
                    return Err(err(&format!("duplicate site {site}")));
                }
                placed.push((site, letter));
            }
            let max_site = placed.iter().map(|(s, _)| *s).max().unwrap_or(0);
            let n = n.unwrap_or(max_site);
            let mut letters = vec![Letter::I; n];
            for (site, letter) in placed {
                letters[site - 1] = letter;
            }
            letters
        } else {
            let letters: Vec<Letter> = body
                .chars()
                .map(|c| Letter::from_char(c).ok_or_else(|| err(&format!("bad letter {c:?}"))))
                .collect::<Result<_>>()?;
            if let Some(n) = n {
                if letters.len() != n {
                    return Err(err(&format!("expected {n} letters, found {}", letters.len())));
                }
            }
            letters
        };
        if letters.len() > MAX_SITES {
            return Err(Error::CapExceeded { what: "Pauli string", n: letters.len(), cap: MAX_SITES });
        }
        Self::from_letters(&letters, sign)
    }
}

impl fmt::Display for PauliString {
    /// Canonical form: coefficient prefix (`+`, `-`, `+i`, `-i`) then letters.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let prefix = match self.coefficient_exp() {
            0 => "+",
            1 => "+i",
            2 => "-",
            _ => "-i",
        };
        f.write_str(prefix)?;
        for l in self.letters() {
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

impl FromStr for PauliString {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        PauliString::parse(s)
    }
}

impl Serialize for PauliString {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for PauliString {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        PauliString::parse(&text).map_err(serde::de::Error::custom)
    }
}
