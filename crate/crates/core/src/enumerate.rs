//! Lexicographic backtracking over k-bounded permutations.
//!
//! This is the ground truth every faster engine is checked against, so the
//! search stays simple: extend a prefix by every unused value within `k` of
//! its last entry, in increasing order. Two prunes cut dead prefixes early and
//! can be switched off with [`SearchOptions::prune`] for differential tests.

use num_bigint::BigUint;
use rayon::prelude::*;

use crate::error::Result;
use crate::perm::{is_blocked, Count, GapSpec, Permutation, Variant};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchOptions {
    pub prune: bool,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions { prune: true }
    }
}

/// Endpoint constraints in raw form. Unlike [`Variant`], a start outside
/// `1..=n` is allowed and simply yields nothing.
#[derive(Clone, Copy, Debug)]
struct Search {
    k: u32,
    n: u32,
    start: Option<u32>,
    end: Option<u32>,
    prune: bool,
}

/// Mutable search state: current prefix plus a used-value mask.
#[derive(Clone)]
struct Frontier {
    path: Vec<u32>,
    used: Vec<bool>,
}

impl Frontier {
    fn new(n: u32) -> Self {
        Frontier { path: Vec::with_capacity(n as usize), used: vec![false; n as usize + 1] }
    }

    fn push(&mut self, v: u32) {
        self.path.push(v);
        self.used[v as usize] = true;
    }

    fn pop(&mut self) -> Option<u32> {
        let v = self.path.pop()?;
        self.used[v as usize] = false;
        Some(v)
    }
}

impl Search {
    fn new(k: GapSpec, n: u32, variant: Variant, options: SearchOptions) -> Self {
        let (start, end) = variant.endpoints(n);
        Search { k: k.get(), n, start, end, prune: options.prune }
    }

    /// Smallest admissible value for position `depth` strictly greater than
    /// `after`.
    fn next_candidate(&self, f: &Frontier, after: Option<u32>) -> Option<u32> {
        let depth = f.path.len() as u32;
        let (lo, hi) = match f.path.last() {
            None => match self.start {
                Some(s) => (s, s.min(self.n)),
                None => (1, self.n),
            },
            Some(&a) => (a.saturating_sub(self.k).max(1), a.saturating_add(self.k).min(self.n)),
        };
        let lo = match after {
            Some(a) => lo.max(a + 1),
            None => lo,
        };
        let last_slot = depth + 1 == self.n;
        (lo..=hi).find(|&v| {
            !f.used[v as usize]
                && match self.end {
                    Some(e) => (v == e) == last_slot,
                    None => true,
                }
        })
    }

    /// False when the prefix provably cannot be completed.
    fn viable(&self, f: &Frontier) -> bool {
        if !self.prune || f.path.len() as u32 == self.n {
            return true;
        }
        let k = GapSpec(self.k);
        if is_blocked(&f.path, k, self.n).unwrap_or(false) {
            return false;
        }
        let Some(u) = (1..=self.n).find(|&v| !f.used[v as usize]) else {
            return true;
        };
        let remaining = self.n as usize - f.path.len();
        let a = *f.path.last().expect("nonempty prefix");
        let lo = u.saturating_sub(self.k).max(1);
        let hi = u.saturating_add(self.k).min(self.n);
        let mut free_neighbours =
            (lo..=hi).filter(|&w| w != u && !f.used[w as usize]).count();
        if a.abs_diff(u) <= self.k {
            free_neighbours += 1;
        }
        // Anything placed strictly inside the permutation needs two distinct
        // neighbours; only the final entry gets away with one.
        let needed = if remaining == 1 || self.end.is_none() || self.end == Some(u) { 1 } else { 2 };
        free_neighbours >= needed
    }

    fn iter(self) -> Enumerate {
        Enumerate { search: self, frontier: Frontier::new(self.n), after: None, done: false }
    }

    /// Counts completions of the current prefix, recording visited nodes.
    fn count_from(&self, f: &mut Frontier, nodes: &mut u64) -> u128 {
        *nodes += 1;
        if f.path.len() as u32 == self.n {
            return 1;
        }
        let mut total = 0;
        let mut after = None;
        while let Some(v) = self.next_candidate(f, after) {
            f.push(v);
            if self.viable(f) {
                total += self.count_from(f, nodes);
            }
            f.pop();
            after = Some(v);
        }
        total
    }

    /// All viable prefixes of length `depth` (or complete permutations, if
    /// shorter), in lexicographic order.
    fn prefixes(&self, depth: usize) -> Vec<Vec<u32>> {
        fn go(s: &Search, f: &mut Frontier, depth: usize, out: &mut Vec<Vec<u32>>) {
            if f.path.len() == depth || f.path.len() as u32 == s.n {
                out.push(f.path.clone());
                return;
            }
            let mut after = None;
            while let Some(v) = s.next_candidate(f, after) {
                f.push(v);
                if s.viable(f) {
                    go(s, f, depth, out);
                }
                f.pop();
                after = Some(v);
            }
        }
        let mut out = Vec::new();
        go(self, &mut Frontier::new(self.n), depth, &mut out);
        out
    }

    /// Parallel count by splitting the search tree on its first few entries.
    fn count(&self) -> (u128, u64) {
        if self.n == 0 || self.start.is_some_and(|s| s > self.n) {
            return (0, 0);
        }
        let depth = if self.n > 9 { 4 } else { 1 };
        let prefixes = self.prefixes(depth);
        prefixes
            .par_iter()
            .map(|prefix| {
                let mut f = Frontier::new(self.n);
                for &v in prefix {
                    f.push(v);
                }
                let mut nodes = 0;
                let c = self.count_from(&mut f, &mut nodes);
                (c, nodes + prefix.len() as u64)
            })
            .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1))
    }
}

/// Lazily yields permutations in lexicographic order of list notation.
pub struct Enumerate {
    search: Search,
    frontier: Frontier,
    after: Option<u32>,
    done: bool,
}

impl Iterator for Enumerate {
    type Item = Permutation;

    fn next(&mut self) -> Option<Permutation> {
        if self.done {
            return None;
        }
        loop {
            match self.search.next_candidate(&self.frontier, self.after) {
                Some(v) => {
                    self.frontier.push(v);
                    if !self.search.viable(&self.frontier) {
                        self.frontier.pop();
                        self.after = Some(v);
                        continue;
                    }
                    if self.frontier.path.len() as u32 == self.search.n {
                        let out = Permutation::from_vec_unchecked(self.frontier.path.clone());
                        self.frontier.pop();
                        self.after = Some(v);
                        return Some(out);
                    }
                    self.after = None;
                }
                None => match self.frontier.pop() {
                    Some(v) => self.after = Some(v),
                    None => {
                        self.done = true;
                        return None;
                    }
                },
            }
        }
    }
}

/// Every k-bounded permutation of `1..=n` admitted by `variant`, in
/// lexicographic order.
pub fn enumerate(k: GapSpec, n: u32, variant: Variant) -> Result<Enumerate> {
    enumerate_with(k, n, variant, SearchOptions::default())
}

pub fn enumerate_with(
    k: GapSpec,
    n: u32,
    variant: Variant,
    options: SearchOptions,
) -> Result<Enumerate> {
    variant.validate(n)?;
    Ok(Search::new(k, n, variant, options).iter())
}

pub fn count_brute(k: GapSpec, n: u32, variant: Variant) -> Result<Count> {
    count_brute_with(k, n, variant, SearchOptions::default()).map(|(c, _)| c)
}

/// Count plus the number of search-tree nodes visited.
pub fn count_brute_with(
    k: GapSpec,
    n: u32,
    variant: Variant,
    options: SearchOptions,
) -> Result<(Count, u64)> {
    variant.validate(n)?;
    let (c, nodes) = Search::new(k, n, variant, options).count();
    Ok((BigUint::from(c), nodes))
}

/// The Joker pattern read from position 1.
pub const JOKER: [u32; 5] = [3, 1, 4, 2, 5];

/// `(F, G, H)` for `k = 3` by filtered enumeration:
///
/// * `F`: anchored.
/// * `G`: starting at 1 or 2, ending at `n`.
/// * `H`: starting at 3, ending at `n`, not opening with the Joker.
pub fn count_classes_fgh(n: u32) -> Result<(Count, Count, Count)> {
    if n == 0 {
        return Err(crate::Error::Precondition("n must be at least 1".into()));
    }
    let raw = |start: u32| Search {
        k: 3,
        n,
        start: Some(start),
        end: Some(n),
        prune: true,
    };
    let count_start = |start: u32| -> u128 {
        if start > n || (start == n && n > 1) {
            0
        } else {
            raw(start).count().0
        }
    };
    let f = count_start(1);
    let g = f + count_start(2);
    let h = if 3 > n || n == 3 {
        0
    } else {
        raw(3).iter().filter(|p| !p.entries().starts_with(&JOKER)).count() as u128
    };
    Ok((f.into(), g.into(), h.into()))
}
