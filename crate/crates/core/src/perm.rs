//! Permutations, peak sets, and their basic statistics.
//!
//! A [`Permutation`] is a bijection of `[n]` in one-line notation. Its
//! circular peak set is the set of *values* `σ(i)` with
//! `σ(i-1) < σ(i) > σ(i+1)` at interior positions `i ∈ [2, n-1]` — no
//! wraparound between the last and first position.

use std::fmt;

use crate::{Error, Result};

/// A permutation of `[n]` in one-line notation.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    values: Vec<u32>,
}

impl Permutation {
    /// Builds a permutation from its one-line notation, checking that the
    /// values are a bijection of `[n]` with `n >= 1`.
    pub fn new(values: Vec<u32>) -> Result<Self> {
        let n = values.len();
        if n == 0 {
            return Err(Error::InvalidPermutation(
                "one-line notation is empty".into(),
            ));
        }
        let mut seen = vec![false; n + 1];
        for &v in &values {
            if v == 0 || v as usize > n {
                return Err(Error::InvalidPermutation(format!(
                    "value {v} outside [1, {n}]"
                )));
            }
            if seen[v as usize] {
                return Err(Error::InvalidPermutation(format!("value {v} repeats")));
            }
            seen[v as usize] = true;
        }
        Ok(Self { values })
    }

    pub fn identity(n: u32) -> Self {
        Self {
            values: (1..=n).collect(),
        }
    }

    pub(crate) fn from_values_unchecked(values: Vec<u32>) -> Self {
        debug_assert!(Self::new(values.clone()).is_ok());
        Self { values }
    }

    /// Parses one-line notation with values separated by whitespace or
    /// commas, e.g. `"4 8 3 6 2 5 1 7"` or `"4,8,3,6,2,5,1,7"`.
    pub fn parse(s: &str) -> Result<Self> {
        let mut values = Vec::new();
        for tok in s.split(|c: char| c.is_whitespace() || c == ',') {
            if tok.is_empty() {
                continue;
            }
            let v = tok
                .parse::<u32>()
                .map_err(|_| Error::InvalidPermutation(format!("cannot parse value {tok:?}")))?;
            values.push(v);
        }
        Self::new(values)
    }

    pub fn n(&self) -> u32 {
        self.values.len() as u32
    }

    pub fn values(&self) -> &[u32] {
        &self.values
    }

    /// The set of values sitting at an interior strict peak.
    ///
    /// Orders `n <= 2` have no interior positions and yield the empty set.
    pub fn circular_peak_set(&self) -> PeakSet {
        let v = &self.values;
        let mut elements = Vec::new();
        for i in 1..v.len().saturating_sub(1) {
            if v[i - 1] < v[i] && v[i] > v[i + 1] {
                elements.push(v[i]);
            }
        }
        elements.sort_unstable();
        PeakSet {
            n: self.n(),
            elements,
        }
    }

    /// Order-isomorphic relabeling of the subsequence at the given 1-based
    /// positions onto `[k]` (pattern flattening).
    pub fn reduce_subsequence(&self, positions: &[u32]) -> Result<Permutation> {
        let n = self.n();
        if positions.is_empty() {
            return Err(Error::Domain("no positions selected".into()));
        }
        for w in positions.windows(2) {
            if w[0] >= w[1] {
                return Err(Error::Domain(format!(
                    "positions must be strictly increasing, got {} before {}",
                    w[0], w[1]
                )));
            }
        }
        if positions[0] == 0 || *positions.last().unwrap() > n {
            return Err(Error::Domain(format!("positions must lie in [1, {n}]")));
        }
        let picked: Vec<u32> = positions
            .iter()
            .map(|&p| self.values[(p - 1) as usize])
            .collect();
        let mut sorted = picked.clone();
        sorted.sort_unstable();
        let relabeled = picked
            .iter()
            .map(|v| sorted.binary_search(v).unwrap() as u32 + 1)
            .collect();
        Ok(Permutation { values: relabeled })
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for v in &self.values {
            if !first {
                write!(f, " ")?;
            }
            write!(f, "{v}")?;
            first = false;
        }
        Ok(())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({self})")
    }
}

/// A subset of `[n]` tagged with its ambient order `n`.
///
/// The ambient order is part of the identity: the same element set at a
/// different `n` is a different classification key, since `cp_n(S)` doubles
/// with each increment of `n` past `max S`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PeakSet {
    n: u32,
    elements: Vec<u32>,
}

impl PeakSet {
    /// Builds a peak set from strictly increasing elements in `[1, n]`.
    pub fn new(n: u32, elements: Vec<u32>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidPeakSet("ambient order must be >= 1".into()));
        }
        for w in elements.windows(2) {
            if w[0] >= w[1] {
                return Err(Error::InvalidPeakSet(format!(
                    "elements must be strictly increasing, got {} before {}",
                    w[0], w[1]
                )));
            }
        }
        if let (Some(&first), Some(&last)) = (elements.first(), elements.last()) {
            if first == 0 || last > n {
                return Err(Error::InvalidPeakSet(format!(
                    "elements must lie in [1, {n}]"
                )));
            }
        }
        Ok(Self { n, elements })
    }

    pub fn empty(n: u32) -> Self {
        Self {
            n,
            elements: Vec::new(),
        }
    }

    /// Parses a comma-separated element list (whitespace tolerated; empty
    /// string for the empty set). Elements are sorted; duplicates are an
    /// error.
    pub fn parse(n: u32, spec: &str) -> Result<Self> {
        let mut elements = Vec::new();
        for tok in spec.split(',') {
            let tok = tok.trim();
            if tok.is_empty() {
                continue;
            }
            let v = tok
                .parse::<u32>()
                .map_err(|_| Error::InvalidPeakSet(format!("cannot parse element {tok:?}")))?;
            elements.push(v);
        }
        elements.sort_unstable();
        Self::new(n, elements)
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn elements(&self) -> &[u32] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn max(&self) -> Option<u32> {
        self.elements.last().copied()
    }

    /// Whether any permutation of `[n]` has this circular peak set: the
    /// `j`-th smallest element must be at least `2j + 1` for every `j`.
    /// The empty set is feasible.
    pub fn is_feasible(&self) -> bool {
        self.elements
            .iter()
            .enumerate()
            .all(|(idx, &v)| v as u64 >= 2 * (idx as u64 + 1) + 1)
    }

    /// Splits the set into maximal runs of consecutive integers.
    pub fn run_decomposition(&self) -> RunDecomposition {
        let mut runs: Vec<Run> = Vec::new();
        for &v in &self.elements {
            match runs.last_mut() {
                Some(run) if run.max + 1 == v => {
                    run.max = v;
                    run.len += 1;
                }
                _ => runs.push(Run { max: v, len: 1 }),
            }
        }
        RunDecomposition { runs }
    }

    /// Bitmask with bit `v` set for each element `v`. Only valid for
    /// elements below 64, which covers every table-building scale.
    pub(crate) fn mask(&self) -> u64 {
        debug_assert!(self.max().unwrap_or(0) < 64);
        self.elements.iter().fold(0u64, |m, &v| m | (1u64 << v))
    }
}

impl fmt::Display for PeakSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (idx, v) in self.elements.iter().enumerate() {
            if idx > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "}}")
    }
}

impl fmt::Debug for PeakSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}@{}", self.n)
    }
}

/// One maximal run `[max - len + 1, max]` of consecutive elements.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Run {
    pub max: u32,
    pub len: u32,
}

impl Run {
    pub fn min(&self) -> u32 {
        self.max - self.len + 1
    }
}

/// The type of a set: its maximal runs, ascending, with gaps of at least
/// one missing integer between consecutive runs.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RunDecomposition {
    runs: Vec<Run>,
}

impl RunDecomposition {
    pub fn runs(&self) -> &[Run] {
        &self.runs
    }

    pub fn num_runs(&self) -> usize {
        self.runs.len()
    }

    /// Rebuilds the element list the runs cover.
    pub fn expand(&self) -> Vec<u32> {
        let mut out = Vec::new();
        for run in &self.runs {
            out.extend(run.min()..=run.max);
        }
        out
    }
}

/// Feasibility check on a bitmask key (bit `v` = value `v` in the set).
pub(crate) fn mask_is_feasible(mask: u64) -> bool {
    let mut rest = mask;
    let mut j = 0u32;
    while rest != 0 {
        let v = rest.trailing_zeros();
        j += 1;
        if v < 2 * j + 1 {
            return false;
        }
        rest &= rest - 1;
    }
    true
}

pub(crate) fn mask_elements(mask: u64) -> Vec<u32> {
    let mut out = Vec::with_capacity(mask.count_ones() as usize);
    let mut rest = mask;
    while rest != 0 {
        out.push(rest.trailing_zeros());
        rest &= rest - 1;
    }
    out
}
