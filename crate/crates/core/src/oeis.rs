//! OEIS b-files: parsing, a caching fetch client, and table comparison with
//! offset reconciliation.
//!
//! The cache holds one file per sequence id (`<cache_dir>/<id>.txt`), stored
//! byte-for-byte as served. Writes go through a temporary file and a rename so
//! concurrent fetches of the same id never leave a torn file behind.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::time::{SystemTime, UNIX_EPOCH};

use num_bigint::BigUint;

use crate::error::{Error, Result};
use crate::perm::{CountTable, Provenance};

pub const BASE_URL_ENV: &str = "KBOUND_OEIS_BASE_URL";
pub const CACHE_DIR_ENV: &str = "KBOUND_OEIS_CACHE";
pub const DEFAULT_BASE_URL: &str = "https://oeis.org";

/// Parses `<index> <value>` lines, skipping blanks and `#` comments. Indices
/// must be contiguous; the first one becomes the table offset.
pub fn parse_bfile(text: &str) -> Result<CountTable> {
    let mut offset = None;
    let mut terms = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line_no = lineno + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut parts = line.split_whitespace();
        let (Some(idx), Some(val), None) = (parts.next(), parts.next(), parts.next()) else {
            return Err(Error::Parse { line: line_no, message: format!("expected '<index> <value>', got {line:?}") });
        };
        let idx: i64 = idx
            .parse()
            .map_err(|e| Error::Parse { line: line_no, message: format!("bad index {idx:?}: {e}") })?;
        let val: BigUint = val
            .parse()
            .map_err(|e| Error::Parse { line: line_no, message: format!("bad value {val:?}: {e}") })?;
        let expected = *offset.get_or_insert(idx) + terms.len() as i64;
        if idx != expected {
            return Err(Error::NonContiguous { line: line_no, expected, found: idx });
        }
        terms.push(val);
    }
    Ok(CountTable::with_offset(None, None, Provenance::Oeis, offset.unwrap_or(1), terms))
}

/// Renders a table in b-file form, one `<index> <value>` line per term.
pub fn to_bfile(table: &CountTable) -> String {
    let mut out = String::new();
    for (n, v) in table.iter() {
        out.push_str(&format!("{n} {v}\n"));
    }
    out
}

/// Checks the `A` + six digits form.
pub fn validate_id(id: &str) -> Result<()> {
    let ok = id.len() == 7 && id.starts_with('A') && id[1..].bytes().all(|b| b.is_ascii_digit());
    if ok {
        Ok(())
    } else {
        Err(Error::InvalidSequenceId(id.to_string()))
    }
}

pub fn bfile_url(base_url: &str, id: &str) -> String {
    format!("{}/{id}/b{}.txt", base_url.trim_end_matches('/'), &id[1..])
}

/// Blocking b-file client backed by an on-disk cache.
#[derive(Debug)]
pub struct OeisClient {
    base_url: String,
    cache_dir: PathBuf,
    refresh: bool,
    requests: AtomicUsize,
}

impl OeisClient {
    /// Base URL from `KBOUND_OEIS_BASE_URL`, falling back to oeis.org.
    pub fn new(cache_dir: impl Into<PathBuf>) -> Self {
        let base_url = std::env::var(BASE_URL_ENV).unwrap_or_else(|_| DEFAULT_BASE_URL.to_string());
        OeisClient { base_url, cache_dir: cache_dir.into(), refresh: false, requests: AtomicUsize::new(0) }
    }

    pub fn with_base_url(mut self, url: impl Into<String>) -> Self {
        self.base_url = url.into();
        self
    }

    /// Re-download even when a cached copy exists.
    pub fn with_refresh(mut self, refresh: bool) -> Self {
        self.refresh = refresh;
        self
    }

    pub fn cache_path(&self, id: &str) -> PathBuf {
        self.cache_dir.join(format!("{id}.txt"))
    }

    /// HTTP requests issued so far by this client.
    pub fn network_requests(&self) -> usize {
        self.requests.load(Ordering::Relaxed)
    }

    pub fn fetch(&self, id: &str) -> Result<CountTable> {
        parse_bfile(&self.fetch_text(id)?)
    }

    /// Raw b-file text, from the cache when possible.
    pub fn fetch_text(&self, id: &str) -> Result<String> {
        validate_id(id)?;
        let path = self.cache_path(id);
        if !self.refresh {
            if let Ok(text) = fs::read_to_string(&path) {
                return Ok(text);
            }
        }
        let url = bfile_url(&self.base_url, id);
        self.requests.fetch_add(1, Ordering::Relaxed);
        let text = match ureq::get(&url).call() {
            Ok(mut resp) => resp
                .body_mut()
                .read_to_string()
                .map_err(|e| Error::Io(std::io::Error::other(e)))?,
            Err(ureq::Error::StatusCode(status)) => return Err(Error::Http { status, url }),
            Err(_) if !path.exists() => {
                return Err(Error::Offline { id: id.to_string(), cache_dir: self.cache_dir.clone() });
            }
            Err(e) => return Err(Error::Io(std::io::Error::other(e))),
        };
        write_atomically(&self.cache_dir, &path, text.as_bytes())?;
        Ok(text)
    }
}

fn write_atomically(dir: &Path, path: &Path, bytes: &[u8]) -> Result<()> {
    fs::create_dir_all(dir)?;
    static SEQ: AtomicUsize = AtomicUsize::new(0);
    let nanos = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.subsec_nanos()).unwrap_or(0);
    let tmp = dir.join(format!(
        ".{}.{}.{}.{}.tmp",
        path.file_name().and_then(|s| s.to_str()).unwrap_or("bfile"),
        std::process::id(),
        SEQ.fetch_add(1, Ordering::Relaxed),
        nanos
    ));
    let mut f = fs::File::create(&tmp)?;
    f.write_all(bytes)?;
    f.sync_all()?;
    drop(f);
    fs::rename(&tmp, path)?;
    Ok(())
}

/// Fetches `sequence_id` through a default client rooted at `cache_dir`.
pub fn fetch_terms(sequence_id: &str, cache_dir: &Path) -> Result<CountTable> {
    OeisClient::new(cache_dir).fetch(sequence_id)
}

/// Agreement of two tables at one relative shift: `a[n]` is compared with
/// `b[n + shift]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Alignment {
    pub shift: i64,
    /// Number of indices where both tables have a term.
    pub overlap: usize,
    /// First index (in `a`'s numbering) where the terms differ.
    pub first_mismatch: Option<i64>,
    /// Terms that agree before the first mismatch.
    pub matched: usize,
}

impl Alignment {
    pub fn is_full_match(&self) -> bool {
        self.overlap > 0 && self.first_mismatch.is_none()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompareReport {
    /// Alignment with indices taken at face value.
    pub direct: Alignment,
    /// Shift in `SHIFTS` with the longest agreeing run (smallest `|shift|`
    /// on ties, then the negative one). Reported, never applied silently.
    pub best: Alignment,
}

pub const SHIFTS: std::ops::RangeInclusive<i64> = -3..=3;

pub fn align(a: &CountTable, b: &CountTable, shift: i64) -> Alignment {
    let lo = a.offset().max(b.offset() - shift);
    let hi = a.end().min(b.end() - shift);
    let mut overlap = 0;
    let mut matched = 0;
    let mut first_mismatch = None;
    for n in lo..hi {
        overlap += 1;
        if a.get(n) == b.get(n + shift) {
            if first_mismatch.is_none() {
                matched += 1;
            }
        } else if first_mismatch.is_none() {
            first_mismatch = Some(n);
        }
    }
    Alignment { shift, overlap, first_mismatch, matched }
}

pub fn compare(a: &CountTable, b: &CountTable) -> CompareReport {
    let direct = align(a, b, 0);
    let mut shifts: Vec<i64> = SHIFTS.collect();
    shifts.sort_by_key(|s| (s.abs(), *s));
    let best = shifts
        .into_iter()
        .map(|s| align(a, b, s))
        .fold(None::<Alignment>, |best, cur| match best {
            Some(b) if (b.matched, b.is_full_match()) >= (cur.matched, cur.is_full_match()) => Some(b),
            _ => Some(cur),
        })
        .expect("nonempty shift range");
    CompareReport { direct, best }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::closed_form::closed_table;
    use crate::perm::GapSpec;

    #[test]
    fn parse_examples() {
        let t = parse_bfile("1 1\n2 1\n3 1\n4 2\n").unwrap();
        assert_eq!(t.offset(), 1);
        let want: Vec<BigUint> = [1u32, 1, 1, 2].iter().map(|&v| v.into()).collect();
        assert_eq!(t.terms(), want.as_slice());
        let t = parse_bfile("# comment\n1 1\n").unwrap();
        assert_eq!(t.len(), 1);
        assert!(matches!(parse_bfile("1 one\n"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(parse_bfile("1 1\n\n3 2\n"), Err(Error::NonContiguous { line: 3, expected: 2, found: 3 })));
        assert!(matches!(parse_bfile("1\n"), Err(Error::Parse { line: 1, .. })));
        let t = parse_bfile("0 5\n1\t6\n").unwrap();
        assert_eq!(t.offset(), 0);
        assert_eq!(t.get(1), Some(&6u32.into()));
        assert!(parse_bfile("").unwrap().is_empty());
    }

    #[test]
    fn ids() {
        assert!(validate_id("A249665").is_ok());
        assert!(validate_id("bad-id").is_err());
        assert!(validate_id("A24966").is_err());
        assert!(validate_id("a249665").is_err());
        assert_eq!(bfile_url("https://oeis.org/", "A249665"), "https://oeis.org/A249665/b249665.txt");
    }

    #[test]
    fn compare_examples() {
        let k3 = closed_table(GapSpec::new(3).unwrap(), 20).unwrap();
        let k2 = closed_table(GapSpec::new(2).unwrap(), 20).unwrap();
        let r = compare(&k3, &k3);
        assert!(r.direct.is_full_match());
        assert_eq!(r.best.shift, 0);
        assert_eq!(r.direct.overlap, 20);

        let r = compare(&k2, &k3);
        // 1,1,1,2,3 against 1,1,1,2,6.
        assert_eq!(r.direct.first_mismatch, Some(5));

        let empty = CountTable::with_offset(None, None, Provenance::Oeis, 1, vec![]);
        let r = compare(&k3, &empty);
        assert_eq!(r.direct.overlap, 0);
        assert_eq!(r.direct.first_mismatch, None);
    }

    #[test]
    fn shifted_offset_is_found() {
        let k3 = closed_table(GapSpec::new(3).unwrap(), 20).unwrap();
        let zero_based = CountTable::with_offset(None, None, Provenance::Oeis, 0, k3.terms().to_vec());
        let r = compare(&k3, &zero_based);
        assert!(!r.direct.is_full_match());
        assert_eq!(r.best.shift, -1);
        assert!(r.best.is_full_match());
        assert_eq!(r.best.overlap, 20);
    }

    #[test]
    fn offline_without_cache() {
        let dir = tempfile::tempdir().unwrap();
        let client = OeisClient::new(dir.path()).with_base_url("http://127.0.0.1:9");
        assert!(matches!(client.fetch("A249665"), Err(Error::Offline { .. })));
        assert!(matches!(client.fetch("bad-id"), Err(Error::InvalidSequenceId(_))));
        assert_eq!(client.network_requests(), 1);
    }
}
