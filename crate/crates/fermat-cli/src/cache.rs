//! Persistent caches for sweep results: Frobenius traces and split-prime
//! torsion verdicts.
//!
//! Both formats are plain ASCII with a one-line header, one entry per line,
//! sorted by p, LF-terminated:
//!
//! ```text
//! #fermat-trace-cache v1 m=9
//! 5 0
//! 7 -4
//! ```
//!
//! Traces are deterministic, so two caches for the same m can only disagree
//! through corruption; merging rejects any conflicting entry. Rewrites go
//! through a temporary file in the destination directory followed by a
//! rename, so readers never observe a torn file.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use fermat_core::stickelberger::torsion_free_test;
use fermat_core::sweep::{primes_up_to, trace_direct};

use crate::error::{CliError, Stage, StageExt};

pub const TRACE_HEADER: &str = "#fermat-trace-cache v1";
pub const SPLIT_HEADER: &str = "#fermat-split-cache v1";

/// Cache directory: `FERMAT_CACHE_DIR` if set, else `./fermat-cache`.
pub fn default_cache_dir() -> PathBuf {
    match std::env::var_os("FERMAT_CACHE_DIR") {
        Some(dir) if !dir.is_empty() => PathBuf::from(dir),
        _ => PathBuf::from("fermat-cache"),
    }
}

fn parse_header(line: &str, tag: &str, path_hint: &str) -> Result<u64, CliError> {
    let expect = format!("{tag} m=");
    let rest = line.strip_prefix(&expect).ok_or_else(|| {
        CliError::cache(format!(
            "FORMAT_MISMATCH: {path_hint}: header {line:?} is not {expect:?}<m>"
        ))
    })?;
    rest.parse::<u64>().map_err(|_| {
        CliError::cache(format!("FORMAT_MISMATCH: {path_hint}: bad modulus in header {line:?}"))
    })
}

fn atomic_write(path: &Path, contents: &str) -> Result<(), CliError> {
    let dir = path.parent().filter(|d| !d.as_os_str().is_empty()).unwrap_or(Path::new("."));
    std::fs::create_dir_all(dir)
        .map_err(|e| CliError::cache(format!("cannot create {}: {e}", dir.display())))?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir)
        .map_err(|e| CliError::cache(format!("cannot create temp file in {}: {e}", dir.display())))?;
    tmp.write_all(contents.as_bytes())
        .map_err(|e| CliError::cache(format!("cannot write {}: {e}", path.display())))?;
    tmp.persist(path)
        .map_err(|e| CliError::cache(format!("cannot persist {}: {e}", path.display())))?;
    Ok(())
}

/// A generic sorted `p -> value` cache; the value type differs per format.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimeCache<V> {
    pub m: u64,
    pub entries: BTreeMap<u64, V>,
}

pub type TraceCache = PrimeCache<i64>;
pub type SplitCache = PrimeCache<bool>;

/// How one entry value is printed and parsed.
pub trait CacheValue: Sized + Copy + PartialEq + std::fmt::Debug {
    const HEADER: &'static str;
    fn render(self) -> String;
    fn parse(token: &str) -> Option<Self>;
}

impl CacheValue for i64 {
    const HEADER: &'static str = TRACE_HEADER;
    fn render(self) -> String {
        self.to_string()
    }
    fn parse(token: &str) -> Option<Self> {
        token.parse().ok()
    }
}

impl CacheValue for bool {
    const HEADER: &'static str = SPLIT_HEADER;
    fn render(self) -> String {
        if self { "1".into() } else { "0".into() }
    }
    fn parse(token: &str) -> Option<Self> {
        match token {
            "0" => Some(false),
            "1" => Some(true),
            _ => None,
        }
    }
}

impl<V: CacheValue> PrimeCache<V> {
    pub fn new(m: u64) -> Self {
        PrimeCache { m, entries: BTreeMap::new() }
    }

    /// Parse the full cache text; `path_hint` only names the source in errors.
    pub fn parse(text: &str, path_hint: &str) -> Result<Self, CliError> {
        let mut lines = text.lines();
        let header = lines.next().ok_or_else(|| {
            CliError::cache(format!("FORMAT_MISMATCH: {path_hint}: empty cache file"))
        })?;
        let m = parse_header(header, V::HEADER, path_hint)?;
        let mut entries = BTreeMap::new();
        let mut last_p = 0u64;
        for (idx, line) in lines.enumerate() {
            if line.is_empty() {
                continue;
            }
            let mut tokens = line.split_whitespace();
            let (Some(p_tok), Some(v_tok), None) = (tokens.next(), tokens.next(), tokens.next())
            else {
                return Err(CliError::cache(format!(
                    "FORMAT_MISMATCH: {path_hint}: line {}: expected \"<p> <value>\", got {line:?}",
                    idx + 2
                )));
            };
            let p: u64 = p_tok.parse().map_err(|_| {
                CliError::cache(format!(
                    "FORMAT_MISMATCH: {path_hint}: line {}: bad prime {p_tok:?}",
                    idx + 2
                ))
            })?;
            let v = V::parse(v_tok).ok_or_else(|| {
                CliError::cache(format!(
                    "FORMAT_MISMATCH: {path_hint}: line {}: bad value {v_tok:?}",
                    idx + 2
                ))
            })?;
            if p < last_p {
                return Err(CliError::cache(format!(
                    "FORMAT_MISMATCH: {path_hint}: entries not sorted at p={p}"
                )));
            }
            last_p = p;
            if let Some(&old) = entries.get(&p) {
                if old != v {
                    return Err(CliError::cache(format!(
                        "CONFLICTING_ENTRY: {path_hint}: p={p} has values {old:?} and {v:?}"
                    )));
                }
            }
            entries.insert(p, v);
        }
        Ok(PrimeCache { m, entries })
    }

    /// Read a cache file; a missing file is an empty cache for `m`.
    pub fn load_or_empty(path: &Path, m: u64) -> Result<Self, CliError> {
        if !path.exists() {
            return Ok(PrimeCache::new(m));
        }
        let cache = Self::read(path)?;
        if cache.m != m {
            return Err(CliError::cache(format!(
                "FORMAT_MISMATCH: {} holds m={}, wanted m={}",
                path.display(),
                cache.m,
                m
            )));
        }
        Ok(cache)
    }

    pub fn read(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::cache(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text, &path.display().to_string())
    }

    pub fn render(&self) -> String {
        let mut out = format!("{} m={}\n", V::HEADER, self.m);
        for (p, v) in &self.entries {
            let _ = writeln!(out, "{p} {}", v.render());
        }
        out
    }

    /// Atomically replace `path` with this cache's contents.
    pub fn write(&self, path: &Path) -> Result<(), CliError> {
        atomic_write(path, &self.render())
    }

    /// Fold `other` into `self`: union of entries, rejecting any prime the
    /// two sides value differently (traces are deterministic, so a conflict
    /// means corruption).
    pub fn merge(&mut self, other: &Self, other_hint: &str) -> Result<(), CliError> {
        if self.m != other.m {
            return Err(CliError::cache(format!(
                "FORMAT_MISMATCH: cannot merge m={} with {other_hint} (m={})",
                self.m, other.m
            )));
        }
        for (&p, &v) in &other.entries {
            if let Some(&old) = self.entries.get(&p) {
                if old != v {
                    return Err(CliError::cache(format!(
                        "CONFLICTING_ENTRY: p={p} has values {old:?} and {v:?} ({other_hint})"
                    )));
                }
            }
            self.entries.insert(p, v);
        }
        Ok(())
    }
}

pub fn trace_cache_path(dir: &Path, m: u64) -> PathBuf {
    dir.join(format!("traces-m{m}.txt"))
}

pub fn split_cache_path(dir: &Path, m: u64) -> PathBuf {
    dir.join(format!("split-m{m}.txt"))
}

fn check_sweep_bound(bound: u64) -> Result<(), CliError> {
    if bound > fermat_core::sweep::MAX_SWEEP_BOUND {
        return Err(CliError::config(format!(
            "bound {bound} exceeds the sweep cap {}",
            fermat_core::sweep::MAX_SWEEP_BOUND
        )));
    }
    Ok(())
}

/// Traces for every good prime `p <= bound`, served from the cache in `dir`;
/// only missing primes are computed, and the cache file is rewritten once if
/// anything new was added. Returns the entries with the newly-computed count.
pub fn ensure_traces(
    m: u64,
    bound: u64,
    dir: &Path,
) -> Result<(Vec<(u64, i64)>, usize), CliError> {
    check_sweep_bound(bound)?;
    let path = trace_cache_path(dir, m);
    let mut cache = TraceCache::load_or_empty(&path, m)?;
    let mut added = 0usize;
    for p in primes_up_to(bound) {
        if p == 2 || m % p == 0 || cache.entries.contains_key(&p) {
            continue;
        }
        let t = trace_direct(m, p).stage(Stage::Frobenius)?;
        cache.entries.insert(p, t);
        added += 1;
    }
    if added > 0 {
        cache.write(&path)?;
    }
    let entries =
        cache.entries.iter().filter(|&(&p, _)| p <= bound).map(|(&p, &t)| (p, t)).collect();
    Ok((entries, added))
}

/// Torsion-freeness verdicts for every split prime `p <= bound`, cached the
/// same way as traces.
pub fn ensure_split(
    m: u64,
    bound: u64,
    dir: &Path,
) -> Result<(BTreeMap<u64, bool>, usize), CliError> {
    check_sweep_bound(bound)?;
    let path = split_cache_path(dir, m);
    let mut cache = SplitCache::load_or_empty(&path, m)?;
    let mut added = 0usize;
    let mut p = m + 1;
    while p <= bound {
        if fermat_core::ff::is_prime(p) && !cache.entries.contains_key(&p) {
            let result = torsion_free_test(m, p).stage(Stage::Frobenius)?;
            cache.entries.insert(p, result.torsion_free);
            added += 1;
        }
        p += m;
    }
    if added > 0 {
        cache.write(&path)?;
    }
    let entries =
        cache.entries.iter().filter(|&(&q, _)| q <= bound).map(|(&q, &v)| (q, v)).collect();
    Ok((entries, added))
}
