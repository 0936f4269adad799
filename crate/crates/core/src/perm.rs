//! Value types shared by every engine: permutations, gap bounds, endpoint
//! variants and exact count tables.

use std::fmt;

use num_bigint::BigUint;

use crate::error::{Error, Result};

/// Exact nonnegative count.
pub type Count = BigUint;

/// A permutation of `1..=n` in list notation. Position `i` (1-based) holds
/// `π(i)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Permutation(Vec<u32>);

impl Permutation {
    /// Validates that `entries` is a bijection on `1..=entries.len()`.
    pub fn new(entries: Vec<u32>) -> Result<Self> {
        let n = entries.len();
        if n == 0 {
            return Err(Error::InvalidPermutation("empty".into()));
        }
        let mut seen = vec![false; n + 1];
        for (pos, &v) in entries.iter().enumerate() {
            let idx = v as usize;
            if idx == 0 || idx > n {
                return Err(Error::InvalidPermutation(format!(
                    "entry {v} at position {} outside 1..={n}",
                    pos + 1
                )));
            }
            if seen[idx] {
                return Err(Error::InvalidPermutation(format!("value {v} repeated")));
            }
            seen[idx] = true;
        }
        Ok(Permutation(entries))
    }

    /// Caller guarantees the bijection invariant.
    pub(crate) fn from_vec_unchecked(entries: Vec<u32>) -> Self {
        debug_assert!(Permutation::new(entries.clone()).is_ok());
        Permutation(entries)
    }

    pub fn identity(n: u32) -> Self {
        assert!(n >= 1, "identity of an empty set");
        Permutation((1..=n).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    /// Always false; kept for clippy's `len_without_is_empty`.
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn n(&self) -> u32 {
        self.0.len() as u32
    }

    pub fn entries(&self) -> &[u32] {
        &self.0
    }

    pub fn into_entries(self) -> Vec<u32> {
        self.0
    }

    /// `π(i)` for 1-based `i`.
    pub fn at(&self, i: usize) -> u32 {
        self.0[i - 1]
    }

    pub fn reversed(&self) -> Self {
        let mut v = self.0.clone();
        v.reverse();
        Permutation(v)
    }

    pub fn is_k_bounded(&self, k: GapSpec) -> bool {
        is_k_bounded(self, k)
    }

    pub fn is_anchored(&self) -> bool {
        is_anchored(self)
    }

    pub fn gaps(&self) -> Vec<i64> {
        gaps(self)
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for v in &self.0 {
            if !first {
                f.write_str(",")?;
            }
            first = false;
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

/// Maximum absolute difference allowed between consecutive entries.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GapSpec(pub(crate) u32);

impl GapSpec {
    pub fn new(k: u32) -> Result<Self> {
        if k == 0 {
            Err(Error::InvalidGap)
        } else {
            Ok(GapSpec(k))
        }
    }

    pub fn get(self) -> u32 {
        self.0
    }
}

impl fmt::Display for GapSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Which endpoint constraint a permutation must satisfy.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Variant {
    /// `π(1) = 1` and `π(n) = n`.
    Anchored,
    /// `π(1) = start` and `π(n) = end`.
    Endpoints { start: u32, end: u32 },
    /// No endpoint constraint.
    Free,
}

impl Variant {
    /// Checks the variant makes sense for permutations of `1..=n`.
    pub fn validate(self, n: u32) -> Result<()> {
        if n == 0 {
            return Err(Error::InvalidVariant { n, reason: "n must be at least 1".into() });
        }
        if let Variant::Endpoints { start, end } = self {
            if start == 0 || start > n || end == 0 || end > n {
                return Err(Error::InvalidVariant {
                    n,
                    reason: format!("endpoints ({start},{end}) outside 1..={n}"),
                });
            }
            if n > 1 && start == end {
                return Err(Error::InvalidVariant {
                    n,
                    reason: format!("start and end coincide at {start}"),
                });
            }
        }
        Ok(())
    }

    /// Required first and last values for permutations of `1..=n`.
    pub fn endpoints(self, n: u32) -> (Option<u32>, Option<u32>) {
        match self {
            Variant::Anchored => (Some(1), Some(n)),
            Variant::Endpoints { start, end } => (Some(start), Some(end)),
            Variant::Free => (None, None),
        }
    }

    pub fn admits(self, p: &Permutation) -> bool {
        let (s, e) = self.endpoints(p.n());
        s.is_none_or(|s| p.at(1) == s) && e.is_none_or(|e| p.at(p.len()) == e)
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Variant::Anchored => f.write_str("anchored"),
            Variant::Endpoints { start, end } => write!(f, "endpoints:{start},{end}"),
            Variant::Free => f.write_str("free"),
        }
    }
}

impl std::str::FromStr for Variant {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "anchored" => Ok(Variant::Anchored),
            "free" => Ok(Variant::Free),
            other => {
                let rest = other
                    .strip_prefix("endpoints:")
                    .ok_or_else(|| format!("unknown variant {other:?}"))?;
                let (a, b) = rest
                    .split_once(',')
                    .ok_or_else(|| format!("expected endpoints:<start>,<end>, got {other:?}"))?;
                let start = a.trim().parse().map_err(|e| format!("bad start {a:?}: {e}"))?;
                let end = b.trim().parse().map_err(|e| format!("bad end {b:?}: {e}"))?;
                Ok(Variant::Endpoints { start, end })
            }
        }
    }
}

/// Which engine produced a [`CountTable`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Provenance {
    Brute,
    Dp,
    ClosedForm,
    Oeis,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Provenance::Brute => "brute",
            Provenance::Dp => "dp",
            Provenance::ClosedForm => "closed-form",
            Provenance::Oeis => "oeis",
        })
    }
}

/// Exact terms of a sequence over a contiguous index range.
///
/// `k` and `variant` are `None` for tables of external origin, where the
/// parameters are not known.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CountTable {
    pub k: Option<GapSpec>,
    pub variant: Option<Variant>,
    pub provenance: Provenance,
    offset: i64,
    terms: Vec<Count>,
}

impl CountTable {
    /// Table indexed from 1.
    pub fn new(k: GapSpec, variant: Variant, provenance: Provenance, terms: Vec<Count>) -> Self {
        CountTable { k: Some(k), variant: Some(variant), provenance, offset: 1, terms }
    }

    pub fn with_offset(
        k: Option<GapSpec>,
        variant: Option<Variant>,
        provenance: Provenance,
        offset: i64,
        terms: Vec<Count>,
    ) -> Self {
        CountTable { k, variant, provenance, offset, terms }
    }

    /// Index of the first term.
    pub fn offset(&self) -> i64 {
        self.offset
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &[Count] {
        &self.terms
    }

    pub fn get(&self, n: i64) -> Option<&Count> {
        let idx = n.checked_sub(self.offset)?;
        usize::try_from(idx).ok().and_then(|i| self.terms.get(i))
    }

    /// `(index, term)` pairs in index order.
    pub fn iter(&self) -> impl Iterator<Item = (i64, &Count)> + '_ {
        self.terms.iter().enumerate().map(move |(i, t)| (self.offset + i as i64, t))
    }

    /// Index one past the last term.
    pub fn end(&self) -> i64 {
        self.offset + self.terms.len() as i64
    }
}

pub fn is_k_bounded(p: &Permutation, k: GapSpec) -> bool {
    p.entries().windows(2).all(|w| w[0].abs_diff(w[1]) <= k.get())
}

pub fn is_anchored(p: &Permutation) -> bool {
    p.at(1) == 1 && p.at(p.len()) == p.n()
}

/// Signed consecutive differences `π(i+1) - π(i)`; empty for `n = 1`.
pub fn gaps(p: &Permutation) -> Vec<i64> {
    p.entries().windows(2).map(|w| w[1] as i64 - w[0] as i64).collect()
}

/// True when the last entry of `prefix` has no unused value of `1..=n` within
/// distance `k`.
pub fn is_blocked(prefix: &[u32], k: GapSpec, n: u32) -> Result<bool> {
    let &last = prefix
        .last()
        .ok_or_else(|| Error::Precondition("blocked check on an empty prefix".into()))?;
    let lo = last.saturating_sub(k.get()).max(1);
    let hi = last.saturating_add(k.get()).min(n);
    Ok((lo..=hi).filter(|&v| v != last).all(|v| prefix.contains(&v)))
}
