//! Dense linear algebra over GF(2) with row-combination tracking.

use std::fmt;

use serde::{Deserialize, Serialize};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitRow {
    words: Vec<u64>,
    len: usize,
}

impl BitRow {
    pub fn zeros(len: usize) -> Self {
        BitRow { words: vec![0; len.div_ceil(64)], len }
    }

    pub fn from_bits(bits: &[bool]) -> Self {
        let mut row = BitRow::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            row.set(i, b);
        }
        row
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len);
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.len);
        let bit = 1u64 << (i % 64);
        if value {
            self.words[i / 64] |= bit;
        } else {
            self.words[i / 64] &= !bit;
        }
    }

    pub fn flip(&mut self, i: usize) {
        assert!(i < self.len);
        self.words[i / 64] ^= 1u64 << (i % 64);
    }

    pub fn xor_assign(&mut self, other: &BitRow) {
        assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len).filter(|&i| self.get(i))
    }

    /// Parity of the AND with `other`.
    pub fn dot(&self, other: &BitRow) -> bool {
        assert_eq!(self.len, other.len);
        self.words.iter().zip(&other.words).map(|(a, b)| (a & b).count_ones()).sum::<u32>() % 2 == 1
    }
}

impl fmt::Debug for BitRow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitRow({self})")
    }
}

impl fmt::Display for BitRow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len {
            f.write_str(if self.get(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl Serialize for BitRow {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for BitRow {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        let bits = text
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(serde::de::Error::custom(format!("bad bit {other:?}"))),
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(BitRow::from_bits(&bits))
    }
}

/// Outcome of solving `A·v = b` over GF(2).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Solution {
    /// One solution; free variables are set to 0.
    Consistent(Vec<bool>),
    /// Row indices, ascending, whose rows sum to zero while their rhs bits sum to 1.
    Inconsistent(Vec<usize>),
}

/// Kernels up to this dimension are searched exhaustively for the smallest certificate.
const MAX_EXHAUSTIVE_KERNEL: usize = 20;

/// Reduced row-echelon state: each reduced row remembers which input rows it combines.
struct Reduced {
    pivots: Vec<(usize, BitRow, bool, BitRow)>,
    /// Combinations of input rows that vanish on the left-hand side, with their rhs.
    dependencies: Vec<(BitRow, bool)>,
}

fn reduce(rows: &[BitRow], rhs: &[bool], ncols: usize) -> Reduced {
    assert_eq!(rows.len(), rhs.len());
    let m = rows.len();
    let mut work: Vec<(BitRow, bool, BitRow)> = rows
        .iter()
        .zip(rhs)
        .enumerate()
        .map(|(i, (r, &b))| {
            assert_eq!(r.len(), ncols);
            let mut combo = BitRow::zeros(m);
            combo.set(i, true);
            (r.clone(), b, combo)
        })
        .collect();

    let mut pivot_row = 0;
    let mut pivot_cols = Vec::new();
    for col in 0..ncols {
        let Some(found) = (pivot_row..m).find(|&r| work[r].0.get(col)) else {
            continue;
        };
        work.swap(pivot_row, found);
        let (prow, pb, pcombo) = work[pivot_row].clone();
        for (r, entry) in work.iter_mut().enumerate() {
            if r != pivot_row && entry.0.get(col) {
                entry.0.xor_assign(&prow);
                entry.1 ^= pb;
                entry.2.xor_assign(&pcombo);
            }
        }
        pivot_cols.push(col);
        pivot_row += 1;
    }

    let dependencies = work[pivot_row..].iter().map(|(_, b, combo)| (combo.clone(), *b)).collect();
    let pivots = work
        .into_iter()
        .take(pivot_row)
        .zip(pivot_cols)
        .map(|((row, b, combo), col)| (col, row, b, combo))
        .collect();
    Reduced { pivots, dependencies }
}

/// Left-kernel basis of the matrix: combinations of rows summing to zero.
pub fn left_kernel(rows: &[BitRow], ncols: usize) -> Vec<BitRow> {
    let rhs = vec![false; rows.len()];
    reduce(rows, &rhs, ncols).dependencies.into_iter().map(|(c, _)| c).collect()
}

fn better(a: &[usize], b: &[usize]) -> bool {
    (a.len(), a) < (b.len(), b)
}

pub fn solve(rows: &[BitRow], rhs: &[bool], ncols: usize) -> Solution {
    let reduced = reduce(rows, rhs, ncols);

    if reduced.dependencies.iter().any(|(_, b)| *b) {
        let basis = &reduced.dependencies;
        let mut best: Option<Vec<usize>> = None;
        let mut consider = |combo: &BitRow| {
            let idx: Vec<usize> = combo.ones().collect();
            if best.as_ref().is_none_or(|b| better(&idx, b)) {
                best = Some(idx);
            }
        };
        if basis.len() <= MAX_EXHAUSTIVE_KERNEL {
            // Every dependency is a combination of the basis; scan all of them.
            for mask in 1u64..(1u64 << basis.len()) {
                let mut combo = BitRow::zeros(rows.len());
                let mut parity = false;
                for (i, (c, b)) in basis.iter().enumerate() {
                    if mask >> i & 1 == 1 {
                        combo.xor_assign(c);
                        parity ^= b;
                    }
                }
                if parity {
                    consider(&combo);
                }
            }
        } else {
            for (c, _) in basis.iter().filter(|(_, b)| *b) {
                consider(c);
            }
        }
        return Solution::Inconsistent(best.expect("an odd dependency exists"));
    }

    let mut assignment = vec![false; ncols];
    for (col, _, b, _) in &reduced.pivots {
        // Fully reduced: each pivot row touches no other pivot column.
        assignment[*col] = *b;
    }
    Solution::Consistent(assignment)
}
