//! Young diagram combinatorics.
//!
//! Partitions (Young indices) label the joint irreducible blocks of
//! `SU(d) × S_n` acting on `(C^d)^{⊗n}`. This module enumerates them and
//! computes the two block dimensions:
//!
//! * [`multiplicity_dim`]: the symmetric-group irrep dimension `dim V_λ`
//!   (standard Young tableaux, hook length formula);
//! * [`weyl_dim`]: the `SU(d)` irrep dimension `dim U_λ` (semistandard
//!   tableaux with entries in `1..=d`, Weyl dimension formula).
//!
//! Both are exact big integers; `log2_*` companions are provided for
//! large-`n` work where only the magnitude matters. Symmetric-group
//! characters are evaluated with the Murnaghan–Nakayama rule and
//! [`rsk_shape`] gives the Robinson–Schensted–Knuth insertion shape of a word.

use std::collections::HashMap;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::NeumaierSum;

/// A weakly decreasing tuple of nonnegative integers.
///
/// Trailing zeros are dropped on construction, so `(2, 0)` and `(2)` are the
/// same partition; use [`Partition::padded`] to get a fixed-length view.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Partition {
    parts: Vec<usize>,
}

impl Partition {
    /// Builds a partition, rejecting tuples that are not weakly decreasing.
    pub fn new(mut parts: Vec<usize>) -> Result<Self> {
        if let Some(w) = parts.windows(2).find(|w| w[0] < w[1]) {
            return Err(Error::InvalidPartition(format!(
                "{:?} is not weakly decreasing ({} < {})",
                parts, w[0], w[1]
            )));
        }
        while parts.last() == Some(&0) {
            parts.pop();
        }
        Ok(Partition { parts })
    }

    /// The empty partition of zero.
    pub fn empty() -> Self {
        Partition { parts: Vec::new() }
    }

    /// The one-row partition `(n)`.
    pub fn row(n: usize) -> Self {
        if n == 0 {
            Self::empty()
        } else {
            Partition { parts: vec![n] }
        }
    }

    /// The one-column partition `(1, …, 1)`.
    pub fn column(n: usize) -> Self {
        Partition { parts: vec![1; n] }
    }

    pub(crate) fn from_sorted_unchecked(mut parts: Vec<usize>) -> Self {
        debug_assert!(parts.windows(2).all(|w| w[0] >= w[1]));
        while parts.last() == Some(&0) {
            parts.pop();
        }
        Partition { parts }
    }

    /// The positive parts.
    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    /// The parts padded with zeros (or truncated view is never taken) to length `d`.
    ///
    /// Returns `None` when the partition has more than `d` rows.
    pub fn padded(&self, d: usize) -> Option<Vec<usize>> {
        if self.parts.len() > d {
            return None;
        }
        let mut v = self.parts.clone();
        v.resize(d, 0);
        Some(v)
    }

    /// Number of boxes.
    pub fn weight(&self) -> usize {
        self.parts.iter().sum()
    }

    /// Number of positive parts (rows).
    pub fn length(&self) -> usize {
        self.parts.len()
    }

    /// The `i`-th part, zero beyond the last row.
    pub fn part(&self, i: usize) -> usize {
        self.parts.get(i).copied().unwrap_or(0)
    }

    /// The transposed diagram.
    pub fn conjugate(&self) -> Partition {
        let cols = self.part(0);
        let parts = (0..cols)
            .map(|j| self.parts.iter().take_while(|&&r| r > j).count())
            .collect();
        Partition { parts }
    }

    /// Hook lengths of every box, row by row.
    pub fn hook_lengths(&self) -> Vec<usize> {
        let conj = self.conjugate();
        let mut hooks = Vec::with_capacity(self.weight());
        for (i, &row) in self.parts.iter().enumerate() {
            for j in 0..row {
                hooks.push((row - j - 1) + (conj.parts[j] - i - 1) + 1);
            }
        }
        hooks
    }

    /// The normalized shape `λ / n` padded to `d` entries.
    pub fn normalized(&self, d: usize) -> Option<Vec<f64>> {
        let n = self.weight();
        let padded = self.padded(d)?;
        if n == 0 {
            return Some(padded.iter().map(|_| 0.0).collect());
        }
        Some(padded.iter().map(|&x| x as f64 / n as f64).collect())
    }

    fn check_rows(&self, d: usize) -> Result<()> {
        if self.length() > d {
            Err(Error::TooManyRows {
                partition: self.to_string(),
                rows: self.length(),
                d,
            })
        } else {
            Ok(())
        }
    }
}

impl TryFrom<Vec<usize>> for Partition {
    type Error = Error;

    fn try_from(parts: Vec<usize>) -> Result<Self> {
        Partition::new(parts)
    }
}

impl From<Partition> for Vec<usize> {
    fn from(p: Partition) -> Self {
        p.parts
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, part) in self.parts.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{part}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A permutation of `{0, …, n-1}`, stored as its image list `σ(i) = images[i]`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn new(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &x in &images {
            if x >= n || seen[x] {
                return Err(Error::InvalidArgument(format!(
                    "{images:?} is not a permutation of 0..{n}"
                )));
            }
            seen[x] = true;
        }
        Ok(Permutation { images })
    }

    pub fn identity(n: usize) -> Self {
        Permutation {
            images: (0..n).collect(),
        }
    }

    /// The transposition exchanging `i` and `j`.
    pub fn transposition(n: usize, i: usize, j: usize) -> Result<Self> {
        let mut images: Vec<usize> = (0..n).collect();
        if i >= n || j >= n {
            return Err(Error::InvalidArgument(format!(
                "transposition ({i} {j}) outside 0..{n}"
            )));
        }
        images.swap(i, j);
        Ok(Permutation { images })
    }

    /// All `n!` permutations in lexicographic order of their image lists.
    pub fn all(n: usize) -> impl Iterator<Item = Permutation> {
        use itertools::Itertools;
        (0..n).permutations(n).map(|images| Permutation { images })
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn image(&self, i: usize) -> usize {
        self.images[i]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.images.len()];
        for (i, &x) in self.images.iter().enumerate() {
            inv[x] = i;
        }
        Permutation { images: inv }
    }

    /// `(self ∘ other)(i) = self(other(i))`.
    pub fn compose(&self, other: &Permutation) -> Result<Permutation> {
        if self.degree() != other.degree() {
            return Err(Error::WeightMismatch {
                left: self.degree(),
                right: other.degree(),
            });
        }
        Ok(Permutation {
            images: other.images.iter().map(|&i| self.images[i]).collect(),
        })
    }

    pub fn cycle_type(&self) -> CycleType {
        let n = self.images.len();
        let mut seen = vec![false; n];
        let mut lengths = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                i = self.images[i];
                len += 1;
            }
            lengths.push(len);
        }
        lengths.sort_unstable_by(|a, b| b.cmp(a));
        CycleType(Partition::from_sorted_unchecked(lengths))
    }
}

/// The cycle lengths of a permutation, as a partition of its degree.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct CycleType(Partition);

impl CycleType {
    pub fn new(lengths: Partition) -> Self {
        CycleType(lengths)
    }

    /// Cycle type of the identity on `n` points.
    pub fn identity(n: usize) -> Self {
        CycleType(Partition::column(n))
    }

    pub fn partition(&self) -> &Partition {
        &self.0
    }

    pub fn degree(&self) -> usize {
        self.0.weight()
    }

    /// Order of the centralizer, `z_μ = ∏ i^{m_i} m_i!`.
    pub fn centralizer_order(&self) -> BigUint {
        let mut z = BigUint::one();
        let parts = self.0.parts();
        let mut i = 0;
        while i < parts.len() {
            let len = parts[i];
            let mut m = 0usize;
            while i < parts.len() && parts[i] == len {
                m += 1;
                i += 1;
                z *= BigUint::from(len) * BigUint::from(m);
            }
        }
        z
    }

    /// Number of permutations with this cycle type, `n! / z_μ`.
    pub fn class_size(&self) -> BigUint {
        factorial(self.degree()) / self.centralizer_order()
    }
}

impl fmt::Display for CycleType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}

pub(crate) fn factorial(n: usize) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, k| acc * BigUint::from(k))
}

/// Every partition of `n` with at most `d` positive parts, in
/// lexicographically decreasing order.
pub fn enumerate_partitions(n: usize, d: usize) -> Vec<Partition> {
    let mut out = Vec::new();
    let mut stream = PartitionStream::new(n, d);
    while let Some(parts) = stream.next_padded() {
        out.push(Partition::from_sorted_unchecked(parts.to_vec()));
    }
    out
}

/// Walks the partitions of [`enumerate_partitions`] in the same order without
/// allocating, yielding each one zero-padded to `d` rows.
#[derive(Debug, Clone)]
pub struct PartitionStream {
    parts: Vec<usize>,
    started: bool,
    done: bool,
}

impl PartitionStream {
    pub fn new(n: usize, d: usize) -> Self {
        let mut parts = vec![0; d];
        let done = d == 0 && n > 0;
        if let Some(first) = parts.first_mut() {
            *first = n;
        }
        PartitionStream {
            parts,
            started: false,
            done,
        }
    }

    /// The next partition, padded with zeros to `d` entries.
    pub fn next_padded(&mut self) -> Option<&[usize]> {
        if self.done {
            return None;
        }
        if !self.started {
            self.started = true;
            return Some(&self.parts);
        }
        let d = self.parts.len();
        // rightmost row that can lose a box while the rows below absorb it
        let mut tail = 0;
        for i in (0..d.saturating_sub(1)).rev() {
            tail += self.parts[i + 1];
            let part = self.parts[i];
            if part >= 2 && tail < (d - 1 - i) * (part - 1) {
                let cap = part - 1;
                self.parts[i] = cap;
                let mut rem = tail + 1;
                for slot in &mut self.parts[i + 1..] {
                    *slot = rem.min(cap);
                    rem -= *slot;
                }
                return Some(&self.parts);
            }
        }
        self.done = true;
        None
    }
}

/// Number of partitions of `n` with at most `d` parts (saturating at `u128::MAX`).
pub fn partition_count(n: usize, d: usize) -> u128 {
    // partitions into at most d parts = partitions with parts of size at most d
    let mut count = vec![0u128; n + 1];
    count[0] = 1;
    for k in 1..=d.min(n.max(1)) {
        for m in k..=n {
            count[m] = count[m].saturating_add(count[m - k]);
        }
    }
    count[n]
}

/// `dim V_λ`: the number of standard Young tableaux of shape `λ`.
pub fn multiplicity_dim(lambda: &Partition) -> BigUint {
    let hooks = lambda
        .hook_lengths()
        .into_iter()
        .fold(BigUint::one(), |acc, h| acc * BigUint::from(h));
    factorial(lambda.weight()) / hooks
}

/// `log2 dim V_λ` from the hook length formula in floating point.
pub fn log2_multiplicity_dim(lambda: &Partition) -> f64 {
    let n = lambda.weight();
    let num: f64 = (2..=n).map(|k| (k as f64).log2()).sum();
    let den: f64 = lambda
        .hook_lengths()
        .iter()
        .map(|&h| (h as f64).log2())
        .sum();
    num - den
}

/// `dim U_λ` for `SU(d)` via the Weyl dimension formula.
pub fn weyl_dim(lambda: &Partition, d: usize) -> Result<BigUint> {
    lambda.check_rows(d)?;
    let parts = lambda.padded(d).expect("row count checked");
    let mut num = BigUint::one();
    let mut den = BigUint::one();
    for i in 0..d {
        for j in (i + 1)..d {
            num *= BigUint::from(parts[i] - parts[j] + j - i);
            den *= BigUint::from(j - i);
        }
    }
    Ok(num / den)
}

/// `log2 dim U_λ` for `SU(d)`.
pub fn log2_weyl_dim(lambda: &Partition, d: usize) -> Result<f64> {
    lambda.check_rows(d)?;
    let parts = lambda.padded(d).expect("row count checked");
    let mut acc = 0.0;
    for i in 0..d {
        for j in (i + 1)..d {
            acc += ((parts[i] - parts[j] + j - i) as f64).log2() - ((j - i) as f64).log2();
        }
    }
    Ok(acc)
}

/// Table of `log2 k!` used when many dimensions of the same size are needed.
#[derive(Debug, Clone)]
pub(crate) struct Log2Factorials {
    table: Vec<f64>,
    log2_int: Vec<f64>,
}

impl Log2Factorials {
    pub fn new(max: usize) -> Self {
        let mut table = Vec::with_capacity(max + 1);
        let mut log2_int = Vec::with_capacity(max + 1);
        table.push(0.0);
        log2_int.push(f64::NEG_INFINITY);
        let mut acc = NeumaierSum::default();
        for k in 1..=max {
            let l = (k as f64).log2();
            acc.add(l);
            table.push(acc.total());
            log2_int.push(l);
        }
        Log2Factorials { table, log2_int }
    }

    pub fn get(&self, k: usize) -> f64 {
        self.table[k]
    }

    /// `log2 dim V_λ` through `f_λ = n! ∏_{i<j}(ℓ_i - ℓ_j) / ∏ ℓ_i!`
    /// with `ℓ_i = λ_i + k - 1 - i` over `k` rows (zero rows allowed);
    /// `O(k²)` per call. The table must cover `n + k`.
    pub fn log2_multiplicity_dim_padded(&self, parts: &[usize]) -> f64 {
        let k = parts.len();
        let mut acc = self.get(parts.iter().sum());
        for i in 0..k {
            let li = parts[i] + k - 1 - i;
            acc -= self.get(li);
            for (j, &pj) in parts.iter().enumerate().skip(i + 1) {
                acc += self.log2_int[li - (pj + k - 1 - j)];
            }
        }
        acc
    }
}

/// shape and the position reached in the cycle type.
#[derive(Debug, Default, Clone)]
pub struct CharacterCache {
    memo: HashMap<(Vec<usize>, Vec<usize>), BigInt>,
}

impl CharacterCache {
    pub fn new() -> Self {
        Self::default()
    }

    /// `χ_λ(μ)`, reusing earlier border-strip removals.
    pub fn character(&mut self, lambda: &Partition, mu: &CycleType) -> Result<BigInt> {
        if lambda.weight() != mu.degree() {
            return Err(Error::WeightMismatch {
                left: lambda.weight(),
                right: mu.degree(),
            });
        }
        Ok(self.eval(lambda.parts(), mu.partition().parts()))
    }

    fn eval(&mut self, lambda: &[usize], mu: &[usize]) -> BigInt {
        if mu.is_empty() {
            return BigInt::one();
        }
        let key = (lambda.to_vec(), mu.to_vec());
        if let Some(v) = self.memo.get(&key) {
            return v.clone();
        }
        let r = mu[0];
        let rest = &mu[1..];
        // beta-set (first column hook lengths): bead i at λ_i + k - 1 - i
        let k = lambda.len();
        let beads: Vec<usize> = lambda
            .iter()
            .enumerate()
            .map(|(i, &p)| p + k - 1 - i)
            .collect();
        let mut total = BigInt::zero();
        for (idx, &b) in beads.iter().enumerate() {
            if b < r {
                continue;
            }
            let target = b - r;
            if beads.contains(&target) {
                continue;
            }
            // leg length = beads strictly between target and b
            let height = beads.iter().filter(|&&x| x > target && x < b).count();
            let mut moved = beads.clone();
            moved[idx] = target;
            moved.sort_unstable_by(|a, b| b.cmp(a));
            let shape: Vec<usize> = moved
                .iter()
                .enumerate()
                .map(|(i, &x)| x - (k - 1 - i))
                .filter(|&p| p > 0)
                .collect();
            let sub = self.eval(&shape, rest);
            if height % 2 == 0 {
                total += sub;
            } else {
                total -= sub;
            }
        }
        self.memo.insert(key, total.clone());
        total
    }
}

/// The irreducible symmetric-group character `χ_λ` at cycle type `μ`.
pub fn sn_character(lambda: &Partition, mu: &CycleType) -> Result<BigInt> {
    CharacterCache::new().character(lambda, mu)
}

/// Shape of the RSK insertion tableau of `word`, whose letters lie in `1..=d`.
///
/// Row insertion bumps the leftmost entry strictly larger than the inserted
/// letter. Rows are kept as letter counts, so each insertion is `O(d²)`
/// regardless of the word length.
pub fn rsk_shape(word: &[usize], d: usize) -> Result<Partition> {
    if let Some(&letter) = word.iter().find(|&&x| x == 0 || x > d) {
        return Err(Error::LetterOutOfRange { letter, d });
    }
    let mut tableau = CountTableau::new(d);
    for &letter in word {
        tableau.insert(letter - 1);
    }
    Ok(tableau.shape())
}

/// Insertion tableau with at most `d` rows, row `r` stored as counts of each letter.
#[derive(Debug, Clone)]
pub(crate) struct CountTableau {
    d: usize,
    counts: Vec<usize>,
    lengths: Vec<usize>,
}

impl CountTableau {
    pub fn new(d: usize) -> Self {
        CountTableau {
            d,
            counts: vec![0; d * d],
            lengths: vec![0; d],
        }
    }

    /// Inserts a zero-based letter.
    pub fn insert(&mut self, mut letter: usize) {
        for row in 0..self.d {
            let base = row * self.d;
            let bumped = ((letter + 1)..self.d).find(|&y| self.counts[base + y] > 0);
            self.counts[base + letter] += 1;
            match bumped {
                Some(y) => {
                    self.counts[base + y] -= 1;
                    letter = y;
                }
                None => {
                    self.lengths[row] += 1;
                    return;
                }
            }
        }
        unreachable!("row r of a semistandard tableau only holds letters >= r");
    }

    pub fn shape(&self) -> Partition {
        Partition::from_sorted_unchecked(self.lengths.clone())
    }
}
