//! Named invariant suites, each a list of pass/fail checks.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use num_bigint::BigInt;

use crate::closed_form::{self, closed_table, expand_gf, fgh_table, gf_k2, gf_k3, h_eliminated};
use crate::enumerate::{count_brute, count_classes_fgh, enumerate};
use crate::error::Error;
use crate::frontier::count_dp;
use crate::oeis::{compare, OeisClient};
use crate::perm::{Count, GapSpec, Variant};
use crate::structure::{
    classify_departure, decompose_k2, departures, find_joker, k2_decompositions, reconstruct_k2,
    DepartureClassification,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Lemma2,
    Lemma33,
    Fgh,
    Recurrences,
    Gf,
    Oeis,
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Ok(match s {
            "lemma2" => Suite::Lemma2,
            "lemma33" => Suite::Lemma33,
            "fgh" => Suite::Fgh,
            "recurrences" => Suite::Recurrences,
            "gf" => Suite::Gf,
            "oeis" => Suite::Oeis,
            other => return Err(format!("unknown suite {other:?}")),
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome {
    Pass,
    Fail,
    Skip,
}

#[derive(Clone, Debug)]
pub struct Check {
    pub name: String,
    pub outcome: Outcome,
    pub detail: String,
}

impl Check {
    fn new(name: impl Into<String>, ok: bool, detail: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            outcome: if ok { Outcome::Pass } else { Outcome::Fail },
            detail: detail.into(),
        }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = match self.outcome {
            Outcome::Pass => "PASS",
            Outcome::Fail => "FAIL",
            Outcome::Skip => "SKIP",
        };
        write!(f, "{tag} {}", self.name)?;
        if !self.detail.is_empty() {
            write!(f, ": {}", self.detail)?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Default)]
pub struct Options {
    pub max_n: Option<u32>,
    pub k: Option<u32>,
    pub cache_dir: Option<PathBuf>,
}

pub fn run(suite: Suite, opts: &Options) -> Vec<Check> {
    match suite {
        Suite::Lemma2 => lemma2(opts.max_n.unwrap_or(16)),
        Suite::Lemma33 => lemma33(opts.max_n.unwrap_or(12)),
        Suite::Fgh => fgh(opts.max_n.unwrap_or(13)),
        Suite::Recurrences => recurrences(opts.k, opts.max_n.unwrap_or(13)),
        Suite::Gf => gf(opts.max_n.unwrap_or(200)),
        Suite::Oeis => oeis(opts),
    }
}

fn gap(k: u32) -> GapSpec {
    GapSpec(k)
}

fn lemma2(max_n: u32) -> Vec<Check> {
    let mut out = Vec::new();
    for n in 1..=max_n {
        let mut bad = None;
        let mut perms = 0usize;
        for p in enumerate(gap(2), n, Variant::Anchored).expect("valid") {
            perms += 1;
            match decompose_k2(&p).and_then(|d| reconstruct_k2(&d).map(|q| (d, q))) {
                Ok((_, q)) if q == p => {}
                Ok(_) => bad = Some(format!("{p} does not round-trip")),
                Err(e) => bad = Some(e.to_string()),
            }
        }
        let decs = k2_decompositions(n);
        for d in &decs {
            match reconstruct_k2(d).and_then(|p| decompose_k2(&p)) {
                Ok(back) if &back == d => {}
                Ok(_) => bad = Some(format!("swap set {:?} does not round-trip", d.swaps())),
                Err(e) => bad = Some(e.to_string()),
            }
        }
        let closed = closed_form::count_k2(n);
        let ok = bad.is_none() && Count::from(perms) == closed && Count::from(decs.len()) == closed;
        out.push(Check::new(
            format!("lemma2 n={n}"),
            ok,
            bad.unwrap_or_else(|| format!("{perms} permutations, {} swap sets, R_n = {closed}", decs.len())),
        ));
    }
    out
}

fn lemma33(max_n: u32) -> Vec<Check> {
    let mut out = Vec::new();
    for n in 1..=max_n {
        let mut bad = None;
        let mut seen = 0usize;
        for p in enumerate(gap(3), n, Variant::Anchored).expect("valid") {
            let results = departures(&p).expect("anchored 3-bounded input");
            for r in &results {
                if let Err(e) = r {
                    bad = Some(e.to_string());
                }
            }
            seen += results.len();
            let jokers = find_joker(&p);
            for i in 1..p.len() {
                if let Ok(c) = classify_departure(&p, i) {
                    let is_joker = c == DepartureClassification::Joker;
                    if is_joker != jokers.contains(&(i + 1)) {
                        bad = Some(format!("{p}: Joker detectors disagree at {i}"));
                    }
                }
            }
        }
        out.push(Check::new(
            format!("lemma33 n={n}"),
            bad.is_none(),
            bad.unwrap_or_else(|| format!("{seen} departures classified")),
        ));
    }
    out
}

fn fgh(max_n: u32) -> Vec<Check> {
    let mut out = Vec::new();
    let brute: Vec<(BigInt, BigInt, BigInt)> = (1..=max_n)
        .map(|n| {
            let (f, g, h) = count_classes_fgh(n).expect("n >= 1");
            (f.into(), g.into(), h.into())
        })
        .collect();
    let at = |n: i64, which: usize| -> BigInt {
        if n <= 0 {
            return BigInt::default();
        }
        let t = &brute[n as usize - 1];
        [&t.0, &t.1, &t.2][which].clone()
    };
    let (f, g, h) = (0, 1, 2);
    for n in 6..=max_n as i64 {
        let l35 = at(n, f) == at(n - 1, g) + at(n - 1, h) + at(n - 5, f);
        let l36 = at(n, g) == at(n, f) + at(n - 2, g) + at(n - 3, f) + at(n - 4, g) + at(n - 2, h);
        let l37 = at(n, h) == at(n - 3, f) + at(n - 3, g) + at(n - 4, f) + at(n - 5, g) + at(n - 3, h);
        let elim = at(n, h) == at(n - 3, f) + at(n - 1, g) - at(n - 1, f);
        out.push(Check::new(
            format!("fgh recurrences n={n}"),
            l35 && l36 && l37 && elim,
            format!("F={} G={} H={}", at(n, f), at(n, g), at(n, h)),
        ));
    }
    let (tf, tg, th) = fgh_table(max_n);
    let table_ok = (1..=max_n as i64).all(|n| {
        tf.get(n).map(|v| BigInt::from(v.clone())) == Some(at(n, f))
            && tg.get(n).map(|v| BigInt::from(v.clone())) == Some(at(n, g))
            && th.get(n).map(|v| BigInt::from(v.clone())) == Some(at(n, h))
            && BigInt::from(h_eliminated(n as u32)) == at(n, h)
    });
    out.push(Check::new("fgh table matches enumeration", table_ok, ""));
    out
}

fn recurrences(k: Option<u32>, max_n: u32) -> Vec<Check> {
    let ks: Vec<u32> = match k {
        Some(k) => vec![k],
        None => vec![1, 2, 3],
    };
    let mut out = Vec::new();
    for k in ks {
        let closed = closed_table(gap(k), max_n).ok();
        for n in 1..=max_n {
            let brute = count_brute(gap(k), n, Variant::Anchored).expect("valid");
            let dp = count_dp(gap(k), n, Variant::Anchored).expect("valid");
            let closed_v = closed.as_ref().and_then(|t| t.get(n as i64).cloned());
            let ok = brute == dp && closed_v.as_ref().is_none_or(|c| *c == brute);
            let detail = match &closed_v {
                Some(c) => format!("brute={brute} dp={dp} closed={c}"),
                None => format!("brute={brute} dp={dp}"),
            };
            out.push(Check::new(format!("counts agree k={k} n={n}"), ok, detail));
        }
    }
    out
}

fn gf(max_n: u32) -> Vec<Check> {
    let mut out = Vec::new();
    for (k, g) in [(2u32, gf_k2()), (3, gf_k3())] {
        let series = expand_gf(&g, max_n as usize);
        let table = closed_table(gap(k), max_n).expect("k <= 3");
        let want: Vec<BigInt> = table.terms().iter().map(|c| c.clone().into()).collect();
        let first_diff = series.iter().zip(&want).position(|(a, b)| a != b);
        out.push(Check::new(
            format!("gf k={k} expands to closed form up to n={max_n}"),
            first_diff.is_none() && series.len() == want.len(),
            match first_diff {
                Some(i) => format!("first difference at n={}", i + 1),
                None => format!("{g}"),
            },
        ));
    }
    out
}

/// Default cache location when none is configured.
pub fn default_cache_dir() -> PathBuf {
    std::env::var_os(crate::oeis::CACHE_DIR_ENV)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(".oeis-cache"))
}

pub const OEIS_ID: &str = "A249665";

fn oeis(opts: &Options) -> Vec<Check> {
    let dir = opts.cache_dir.clone().unwrap_or_else(default_cache_dir);
    let client = OeisClient::new(&dir);
    let name = format!("oeis {OEIS_ID} vs k=3 anchored");
    let table = match client.fetch(OEIS_ID) {
        Ok(t) => t,
        Err(e @ (Error::Offline { .. } | Error::Http { .. })) => {
            return vec![Check { name, outcome: Outcome::Skip, detail: e.to_string() }];
        }
        Err(e) => return vec![Check::new(name, false, e.to_string())],
    };
    let max = u32::try_from(table.end().max(1) + 3).unwrap_or(u32::MAX).min(400);
    let ours = closed_table(gap(3), max).expect("k = 3");
    let report = compare(&ours, &table);
    let ok = report.best.is_full_match() && report.best.overlap >= table.len().min(ours.len()).saturating_sub(3);
    vec![Check::new(
        name,
        ok,
        format!(
            "shift {} overlap {} first mismatch {:?}",
            report.best.shift, report.best.overlap, report.best.first_mismatch
        ),
    )]
}
