//! Structural decompositions of bounded anchored permutations.
//!
//! For `k = 2` an anchored permutation leaves the diagonal only through
//! isolated swaps `i+1, i` at spaced-out positions. For `k = 3`, every `+3`
//! step away from an anchored prefix opens either the Joker or a cascading
//! pattern of `+3` runs, `-3` runs and a small corrective gap. The functions
//! here decide those patterns from the gap word and report
//! [`Error::LemmaViolation`] if a permutation ever fails to fit.

use std::collections::BTreeSet;

use crate::enumerate::JOKER;
use crate::error::{Error, Result};
use crate::perm::{gaps, is_anchored, is_k_bounded, GapSpec, Permutation};

/// Gap word of the Joker read from the diagonal point before it.
pub const JOKER_GAPS: [i64; 5] = [3, -2, 3, -2, 3];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DepartureClassification {
    Joker,
    Cascading { m: usize, d: i64 },
    NotApplicable,
}

impl DepartureClassification {
    /// Length of the two later runs: `m - 1` after a downward `d`, else `m`.
    pub fn m_prime(m: usize, d: i64) -> usize {
        if d < 0 {
            m - 1
        } else {
            m
        }
    }

    /// The forced return gap.
    pub fn d_bar(d: i64) -> i64 {
        if d == 1 || d == -2 {
            1
        } else {
            -1
        }
    }
}

/// Positions `i` where a 2-bounded anchored permutation has `π(i) = i + 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct K2Decomposition {
    n: u32,
    swaps: BTreeSet<u32>,
}

impl K2Decomposition {
    /// Checks `swaps ⊆ {2..n-2}` with members pairwise at least 3 apart.
    pub fn new(n: u32, swaps: impl IntoIterator<Item = u32>) -> Result<Self> {
        if n == 0 {
            return Err(Error::Precondition("n must be at least 1".into()));
        }
        let swaps: BTreeSet<u32> = swaps.into_iter().collect();
        for &i in &swaps {
            if i < 2 || i + 2 > n {
                return Err(Error::Precondition(format!("swap position {i} outside 2..={}", n as i64 - 2)));
            }
        }
        let v: Vec<u32> = swaps.iter().copied().collect();
        if let Some(w) = v.windows(2).find(|w| w[1] - w[0] < 3) {
            return Err(Error::Precondition(format!("swap positions {} and {} closer than 3", w[0], w[1])));
        }
        Ok(K2Decomposition { n, swaps })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn swaps(&self) -> &BTreeSet<u32> {
        &self.swaps
    }
}

pub fn decompose_k2(p: &Permutation) -> Result<K2Decomposition> {
    if !is_k_bounded(p, GapSpec(2)) || !is_anchored(p) {
        return Err(Error::Precondition(format!("{p} is not 2-bounded and anchored")));
    }
    let n = p.n();
    let swaps: Vec<u32> = (1..=n).filter(|&i| p.at(i as usize) == i + 1).collect();
    let dec = K2Decomposition::new(n, swaps.iter().copied())
        .map_err(|e| Error::LemmaViolation(format!("{p}: {e}")))?;
    if reconstruct_k2(&dec)? != *p {
        return Err(Error::LemmaViolation(format!("{p} is not a product of spaced swaps")));
    }
    Ok(dec)
}

pub fn reconstruct_k2(dec: &K2Decomposition) -> Result<Permutation> {
    let entries = (1..=dec.n)
        .map(|i| {
            if dec.swaps.contains(&i) {
                i + 1
            } else if i > 1 && dec.swaps.contains(&(i - 1)) {
                i - 1
            } else {
                i
            }
        })
        .collect();
    Permutation::new(entries)
}

/// All valid swap sets for `n`, in lexicographic order of their elements.
pub fn k2_decompositions(n: u32) -> Vec<K2Decomposition> {
    fn go(n: u32, from: u32, cur: &mut Vec<u32>, out: &mut Vec<K2Decomposition>) {
        out.push(K2Decomposition { n, swaps: cur.iter().copied().collect() });
        let mut i = from;
        while i + 2 <= n {
            cur.push(i);
            go(n, i + 3, cur, out);
            cur.pop();
            i += 1;
        }
    }
    let mut out = Vec::new();
    go(n, 2, &mut Vec::new(), &mut out);
    out
}

/// Positions `i` (1-based) where entries `i ..= i+4` read
/// `i+2, i, i+3, i+1, i+4`.
pub fn find_joker(p: &Permutation) -> Vec<usize> {
    let e = p.entries();
    if e.len() < 5 {
        return Vec::new();
    }
    (1..=e.len() - 4)
        .filter(|&i| (0..5).all(|j| e[i - 1 + j] as usize == JOKER[j] as usize + i - 1))
        .collect()
}

/// `+3^m, d, -3^{m'}, d̄, +3^{m'}`.
pub fn cascading_gap_word(m: usize, d: i64) -> Result<Vec<i64>> {
    if m == 0 {
        return Err(Error::Precondition("m must be positive".into()));
    }
    if ![-2, -1, 1, 2].contains(&d) {
        return Err(Error::Precondition(format!("d = {d} is not one of ±1, ±2")));
    }
    let mp = DepartureClassification::m_prime(m, d);
    let mut w = vec![3; m];
    w.push(d);
    w.extend(std::iter::repeat_n(-3, mp));
    w.push(DepartureClassification::d_bar(d));
    w.extend(std::iter::repeat_n(3, mp));
    Ok(w)
}

/// Whether entries `1..=i` are exactly `{1..=i}` with `π(i) = i`.
fn anchored_prefix(p: &Permutation, i: usize) -> bool {
    let e = &p.entries()[..i];
    e[i - 1] as usize == i && e.iter().all(|&v| (v as usize) <= i)
}

/// Classifies the departure after an anchored prefix of length `i`, from the
/// gap word alone.
pub fn classify_departure(p: &Permutation, i: usize) -> Result<DepartureClassification> {
    if !is_k_bounded(p, GapSpec(3)) || !is_anchored(p) {
        return Err(Error::Precondition(format!("{p} is not 3-bounded and anchored")));
    }
    if i == 0 || i > p.len() || !anchored_prefix(p, i) {
        return Err(Error::Precondition(format!("prefix of length {i} of {p} is not anchored")));
    }
    let g = gaps(p);
    let after = &g[i - 1..];
    if after.first() != Some(&3) {
        return Ok(DepartureClassification::NotApplicable);
    }
    if after.starts_with(&JOKER_GAPS) {
        return Ok(DepartureClassification::Joker);
    }
    let m = after.iter().take_while(|&&x| x == 3).count();
    let violation = |what: String| Error::LemmaViolation(format!("{p} at {i}: {what}"));
    let &d = after.get(m).ok_or_else(|| violation("run of +3 reaches the end".into()))?;
    let word = cascading_gap_word(m, d).map_err(|_| violation(format!("gap {d} after the +3 run")))?;
    if after.starts_with(&word) {
        Ok(DepartureClassification::Cascading { m, d })
    } else {
        Err(violation(format!("gaps {:?} do not follow {:?}", &after[..word.len().min(after.len())], word)))
    }
}

/// Classifies every `+3` departure from an anchored prefix and confirms the
/// realized gaps match the Joker or a cascading word.
pub fn validate_lemma33(p: &Permutation) -> Result<bool> {
    Ok(departures(p)?.iter().all(|r| r.is_ok()))
}

/// Per-departure classification results for `p`.
pub fn departures(p: &Permutation) -> Result<Vec<Result<DepartureClassification>>> {
    if !is_k_bounded(p, GapSpec(3)) || !is_anchored(p) {
        return Err(Error::Precondition(format!("{p} is not 3-bounded and anchored")));
    }
    let g = gaps(p);
    let mut out = Vec::new();
    let mut max_seen = 0;
    for i in 1..p.len() {
        max_seen = max_seen.max(p.at(i) as usize);
        if max_seen == i && p.at(i) as usize == i && g[i - 1] == 3 {
            out.push(classify_departure(p, i));
        }
    }
    Ok(out)
}
