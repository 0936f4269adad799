//! Counting k-bounded permutations for any fixed `k` by sweeping the value
//! axis.
//!
//! A k-bounded permutation of `1..=n` is a Hamiltonian path in the graph on
//! `1..=n` joining values at distance `<= k`, read from its first entry.
//! Values are added in increasing order; when value `v` arrives it may take
//! path edges to any of the `k` previous values, and afterwards value `v - k`
//! can never gain another edge. So the only state that matters is the last
//! `k` values: how many edges each already has and which of them are the two
//! ends of a common path segment. That state is a [`Profile`], and the number
//! of profiles depends on `k` alone.
//!
//! Anchoring and fixed endpoints become degree constraints: a designated
//! value keeps at most one path edge and must finish as a path end, every
//! other value must finish with two. A segment end that leaves the window
//! with one edge becomes a *terminal*; there are at most two.

use std::collections::{HashMap, HashSet};
use std::fmt;

use num_bigint::BigUint;
use num_traits::Zero;

use crate::error::Result;
use crate::perm::{Count, CountTable, GapSpec, Provenance, Variant};

/// Slot has two path edges and is finished.
const CLOSED: u8 = 0;
/// Slot has no path edges yet; it is a segment by itself.
const SINGLE: u8 = 1;
/// Slot has one edge and the far end of its segment is a terminal that has
/// already left the window.
const TAIL: u8 = 2;
/// Codes from here on pair two single-edge slots that end the same segment.
const FIRST_LABEL: u8 = 3;

/// Interface state of the sweep: one code per value in the window, oldest
/// first.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Profile(Vec<u8>);

impl Profile {
    pub fn slots(&self) -> &[u8] {
        &self.0
    }

    pub fn canonical(&self) -> Profile {
        Profile(canonicalize(&self.0))
    }
}

impl fmt::Display for Profile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, &c) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            match c {
                CLOSED => f.write_str("=")?,
                SINGLE => f.write_str("o")?,
                TAIL => f.write_str("t")?,
                l => write!(f, "{}", l - FIRST_LABEL)?,
            }
        }
        f.write_str("]")
    }
}

/// Renumbers pairing labels in first-occurrence order.
pub fn canonicalize(slots: &[u8]) -> Vec<u8> {
    let mut map = [0u8; 256];
    let mut next = FIRST_LABEL;
    slots
        .iter()
        .map(|&c| {
            if c < FIRST_LABEL {
                return c;
            }
            if map[c as usize] == 0 {
                map[c as usize] = next;
                next += 1;
            }
            map[c as usize]
        })
        .collect()
}

fn degree(code: u8) -> u8 {
    match code {
        CLOSED => 2,
        SINGLE => 0,
        _ => 1,
    }
}

fn fresh_label(slots: &[u8]) -> u8 {
    slots.iter().copied().filter(|&c| c >= FIRST_LABEL).max().map_or(FIRST_LABEL, |m| m + 1)
}

fn all_closed(slots: &[u8]) -> bool {
    slots.iter().all(|&c| c == CLOSED)
}

/// Where the other end of the segment through a slot lies.
#[derive(Clone, Copy)]
enum FarEnd {
    Slot(usize),
    Terminal,
}

fn far_end(slots: &[u8], j: usize) -> FarEnd {
    match slots[j] {
        SINGLE => FarEnd::Slot(j),
        TAIL => FarEnd::Terminal,
        l => FarEnd::Slot(
            (0..slots.len()).find(|&i| i != j && slots[i] == l).expect("paired label"),
        ),
    }
}

/// Constraints in force while one value is added.
struct Step<'a> {
    k: usize,
    free: bool,
    is_last: bool,
    /// Designation of each window slot before the new value arrives.
    window: &'a [bool],
    /// Designation of the value being added.
    incoming: bool,
}

impl Step<'_> {
    fn cap(designated: bool) -> u8 {
        if designated {
            1
        } else {
            2
        }
    }

    /// Every profile reachable by adding one value to `slots`, already
    /// trimmed to the window and canonicalized.
    fn transitions(&self, slots: &[u8], mut emit: impl FnMut(Vec<u8>)) {
        let open: Vec<usize> = (0..slots.len())
            .filter(|&j| slots[j] != CLOSED && degree(slots[j]) < Self::cap(self.window[j]))
            .collect();

        let mut finish = |s: Vec<u8>| {
            if let Some(s) = self.trim(s) {
                emit(canonicalize(&s));
            }
        };

        // No edge back: the new value starts a segment of its own.
        let mut s = slots.to_vec();
        s.push(SINGLE);
        finish(s);

        for &j in &open {
            let mut s = slots.to_vec();
            let new = match s[j] {
                SINGLE => {
                    let l = fresh_label(&s);
                    s[j] = l;
                    l
                }
                code => {
                    s[j] = CLOSED;
                    code
                }
            };
            s.push(new);
            finish(s);
        }

        if self.incoming {
            return;
        }
        for (ai, &a) in open.iter().enumerate() {
            for &b in &open[ai + 1..] {
                if slots[a] >= FIRST_LABEL && slots[a] == slots[b] {
                    continue; // would close a cycle
                }
                let (fa, fb) = (far_end(slots, a), far_end(slots, b));
                let mut s = slots.to_vec();
                s[a] = CLOSED;
                s[b] = CLOSED;
                match (fa, fb) {
                    (FarEnd::Terminal, FarEnd::Terminal) => {
                        // Joins both terminals: the path is complete.
                        if !self.is_last || !all_closed(&s) {
                            continue;
                        }
                    }
                    (FarEnd::Terminal, FarEnd::Slot(x)) | (FarEnd::Slot(x), FarEnd::Terminal) => {
                        s[x] = TAIL;
                    }
                    (FarEnd::Slot(x), FarEnd::Slot(y)) => {
                        let l = fresh_label(&s);
                        s[x] = l;
                        s[y] = l;
                    }
                }
                s.push(CLOSED);
                finish(s);
            }
        }
    }

    /// Evicts the oldest slot once the window exceeds `k` values.
    fn trim(&self, mut s: Vec<u8>) -> Option<Vec<u8>> {
        if s.len() > self.k {
            let designated = self.window[0];
            if !evict(&mut s, designated, self.free, self.is_last) {
                return None;
            }
        }
        Some(s)
    }
}

/// Removes the oldest slot, whose value can gain no further edges. Returns
/// false if that leaves no way to complete a single spanning path.
fn evict(s: &mut Vec<u8>, designated: bool, free: bool, is_last: bool) -> bool {
    let code = s.remove(0);
    if code == CLOSED {
        return true;
    }
    if !free && !designated {
        return false;
    }
    match code {
        // Segment ends here and at a terminal (or is a lone value): it can
        // only be the whole path.
        SINGLE | TAIL => is_last && all_closed(s),
        label => {
            if s.iter().filter(|&&c| c == TAIL).count() >= 2 {
                return false;
            }
            let partner = s.iter().position(|&c| c == label).expect("paired label");
            s[partner] = TAIL;
            true
        }
    }
}

/// Peak number of live profiles seen during a sweep.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SweepStats {
    pub peak_profiles: usize,
}

/// Incremental sweep that can report the count for `n = added + 1` at any
/// point and then keep going.
struct Sweep {
    k: usize,
    variant: Variant,
    /// Values added so far.
    added: u32,
    states: HashMap<Vec<u8>, Count>,
    stats: SweepStats,
}

impl Sweep {
    fn new(k: GapSpec, variant: Variant) -> Self {
        let mut states = HashMap::new();
        states.insert(Vec::new(), BigUint::from(1u32));
        Sweep { k: k.get() as usize, variant, added: 0, states, stats: SweepStats { peak_profiles: 1 } }
    }

    fn designated(&self, value: u32, n: Option<u32>) -> bool {
        match self.variant {
            Variant::Anchored => value == 1 || Some(value) == n,
            Variant::Endpoints { start, end } => value == start || value == end,
            Variant::Free => false,
        }
    }

    fn free(&self) -> bool {
        self.variant == Variant::Free
    }

    /// Designation of the `len` window slots after `self.added` values.
    fn window(&self, len: usize, n: Option<u32>) -> Vec<bool> {
        let first = self.added + 1 - len as u32;
        (0..len as u32).map(|i| self.designated(first + i, n)).collect()
    }

    /// Adds the next value, which is not the last.
    fn advance(&mut self) {
        let v = self.added + 1;
        let mut next: HashMap<Vec<u8>, Count> = HashMap::with_capacity(self.states.len());
        let window = self.window(self.k.min(self.added as usize), None);
        for (slots, count) in &self.states {
            let step = Step {
                k: self.k,
                free: self.free(),
                is_last: false,
                window: &window,
                incoming: self.designated(v, None),
            };
            step.transitions(slots, |s| {
                *next.entry(s).or_default() += count;
            });
        }
        self.states = next;
        self.added = v;
        self.stats.peak_profiles = self.stats.peak_profiles.max(self.states.len());
    }

    /// Number of undirected Hamiltonian paths if the next value is the last.
    fn finish(&self) -> Count {
        let n = self.added + 1;
        let mut total = BigUint::zero();
        let window = self.window(self.k.min(self.added as usize), Some(n));
        for (slots, count) in &self.states {
            let step = Step {
                k: self.k,
                free: self.free(),
                is_last: true,
                window: &window,
                incoming: self.designated(n, Some(n)),
            };
            let mut completions = 0u64;
            step.transitions(slots, |mut s| {
                // Drain what is left of the window, oldest first.
                let first = n + 1 - s.len() as u32;
                for value in first..=n {
                    if !evict(&mut s, self.designated(value, Some(n)), self.free(), true) {
                        return;
                    }
                }
                completions += 1;
            });
            if completions > 0 {
                total += count * completions;
            }
        }
        total
    }

    /// Permutations are directed paths: a free path can be read either way.
    fn to_permutations(&self, paths: Count, n: u32) -> Count {
        if self.free() && n >= 2 {
            paths * 2u32
        } else {
            paths
        }
    }
}

/// Exact number of k-bounded permutations of `1..=n` under `variant`.
pub fn count_dp(k: GapSpec, n: u32, variant: Variant) -> Result<Count> {
    count_dp_with_stats(k, n, variant).map(|(c, _)| c)
}

pub fn count_dp_with_stats(k: GapSpec, n: u32, variant: Variant) -> Result<(Count, SweepStats)> {
    variant.validate(n)?;
    let mut sweep = Sweep::new(k, variant);
    for _ in 1..n {
        sweep.advance();
    }
    let paths = sweep.finish();
    Ok((sweep.to_permutations(paths, n), sweep.stats))
}

/// Counts for `n = 1 ..= max_n` from a single sweep. For fixed endpoints,
/// lengths too short to contain both endpoints count as zero.
pub fn term_table(k: GapSpec, variant: Variant, max_n: u32) -> CountTable {
    term_table_with_stats(k, variant, max_n).0
}

pub fn term_table_with_stats(k: GapSpec, variant: Variant, max_n: u32) -> (CountTable, SweepStats) {
    let mut sweep = Sweep::new(k, variant);
    let mut terms = Vec::with_capacity(max_n as usize);
    for n in 1..=max_n {
        let c = if variant.validate(n).is_ok() {
            let paths = sweep.finish();
            sweep.to_permutations(paths, n)
        } else {
            BigUint::zero()
        };
        terms.push(c);
        if n < max_n {
            sweep.advance();
        }
    }
    (CountTable::new(k, variant, Provenance::Dp, terms), sweep.stats)
}

/// Number of distinct canonical profiles the anchored sweep can ever reach,
/// counting the ramp-up while the window is still filling. This bounds the
/// dimension of the transfer matrix.
pub fn state_space_size(k: GapSpec) -> usize {
    let kk = k.get() as usize;
    let mut seen: HashSet<Vec<u8>> = HashSet::new();
    let mut sweep = Sweep::new(k, Variant::Anchored);
    // Ramp-up: until value 1 has left the window the steps differ.
    for _ in 0..=kk {
        sweep.advance();
        seen.extend(sweep.states.keys().cloned());
    }
    // From here on every step applies the same transition map.
    let window = vec![false; kk];
    let step = Step { k: kk, free: false, is_last: false, window: &window, incoming: false };
    let mut queue: Vec<Vec<u8>> = sweep.states.keys().cloned().collect();
    let mut steady: HashSet<Vec<u8>> = queue.iter().cloned().collect();
    while let Some(p) = queue.pop() {
        step.transitions(&p, |s| {
            if steady.insert(s.clone()) {
                queue.push(s);
            }
        });
    }
    seen.extend(steady);
    seen.len()
}
