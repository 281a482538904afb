//! Exhaustive search for the maximum number of distinct squares.
//!
//! Words are enumerated in first-occurrence canonical form (the first letter
//! is `a` and each new letter is the next unused one), which visits exactly
//! one word per letter-renaming class. The space for a given `n` is split by
//! fixed-length prefixes; partitions are independent and are merged in
//! prefix order, so results do not depend on the worker count.

use std::fs;
use std::io::Write;
use std::path::Path;

use num_rational::Ratio;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::conjecture::conjecture_rhs;
use crate::error::{Error, Result};
use crate::squares::SquareScanner;
use crate::verifier::verify_all;

pub const DEFAULT_CAP: usize = 22;
pub const MAX_WITNESSES: usize = 100;
pub const CHECKPOINT_VERSION: u32 = 1;
const PREFIX_LEN: usize = 8;
/// Partitions processed between checkpoint writes.
const CHUNK: usize = 32;

#[derive(Debug, Clone)]
pub struct CensusConfig {
    pub sigma: usize,
    /// Worker threads; 0 lets rayon decide.
    pub jobs: usize,
    /// Largest admissible `n`.
    pub cap: usize,
    /// Run the full verifier on every k-th word of each partition.
    pub verify_every: Option<u64>,
    /// Stop after this many partitions in one invocation (for resumption).
    pub partition_budget: Option<usize>,
}

impl CensusConfig {
    pub fn new(sigma: usize) -> Self {
        CensusConfig {
            sigma,
            jobs: 0,
            cap: DEFAULT_CAP,
            verify_every: None,
            partition_budget: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusRow {
    pub n: usize,
    pub sigma: usize,
    pub max_sq: usize,
    /// Total number of canonical words attaining `max_sq`.
    pub witness_count: u64,
    /// The lexicographically first witnesses, at most [`MAX_WITNESSES`].
    pub witnesses: Vec<String>,
    pub conjecture_rhs: i64,
    pub conjecture_pass: bool,
}

pub const TSV_HEADER: &str = "n\tsigma\tmax_sq\tconjecture_rhs\tpass\twitness_count\tfirst_witness";

impl CensusRow {
    pub fn tsv_line(&self) -> String {
        format!(
            "{}\t{}\t{}\t{}\t{}\t{}\t{}",
            self.n,
            self.sigma,
            self.max_sq,
            self.conjecture_rhs,
            self.conjecture_pass,
            self.witness_count,
            self.witnesses.first().map(String::as_str).unwrap_or("")
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartitionResult {
    pub prefix: String,
    pub words: u64,
    pub max_sq: usize,
    pub witness_count: u64,
    pub witnesses: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartialRun {
    pub n: usize,
    pub done: Vec<PartitionResult>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Checkpoint {
    pub version: u32,
    pub sigma: usize,
    pub rows: Vec<CensusRow>,
    pub partial: Option<PartialRun>,
}

impl Checkpoint {
    fn empty(sigma: usize) -> Self {
        Checkpoint {
            version: CHECKPOINT_VERSION,
            sigma,
            rows: Vec::new(),
            partial: None,
        }
    }

    pub fn load(path: &Path, sigma: usize) -> Result<Option<Self>> {
        let text = match fs::read_to_string(path) {
            Ok(t) => t,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
            Err(e) => return Err(Error::Checkpoint(format!("{}: {e}", path.display()))),
        };
        let cp: Checkpoint = serde_json::from_str(&text)
            .map_err(|e| Error::Checkpoint(format!("{}: {e}", path.display())))?;
        if cp.version != CHECKPOINT_VERSION {
            return Err(Error::Checkpoint(format!(
                "unsupported version {} (expected {CHECKPOINT_VERSION})",
                cp.version
            )));
        }
        if cp.sigma != sigma {
            return Err(Error::Checkpoint(format!(
                "checkpoint is for sigma = {}, run asks for {sigma}",
                cp.sigma
            )));
        }
        if cp.rows.iter().enumerate().any(|(i, r)| r.n != i + 1 || r.sigma != sigma) {
            return Err(Error::Checkpoint("rows are not 1..k in order".into()));
        }
        Ok(Some(cp))
    }

    /// Writes via a temporary file and rename.
    pub fn save(&self, path: &Path) -> Result<()> {
        let io = |e: std::io::Error| Error::Checkpoint(format!("{}: {e}", path.display()));
        let tmp = path.with_extension("tmp");
        let mut f = fs::File::create(&tmp).map_err(io)?;
        let text = serde_json::to_string_pretty(self).expect("checkpoint serializes");
        f.write_all(text.as_bytes()).map_err(io)?;
        f.sync_all().map_err(io)?;
        fs::rename(&tmp, path).map_err(io)
    }
}

fn check_range(n: usize, cfg: &CensusConfig) -> Result<()> {
    if n == 0 {
        return Err(Error::Resource("n must be at least 1".into()));
    }
    if n > cfg.cap {
        return Err(Error::Resource(format!("n = {n} exceeds the cap {}", cfg.cap)));
    }
    if cfg.sigma == 0 || cfg.sigma > 26 {
        return Err(Error::Resource(format!("sigma = {} not in 1..=26", cfg.sigma)));
    }
    Ok(())
}

/// Canonical prefixes of length `min(n, PREFIX_LEN)` in lexicographic order.
pub fn prefixes(n: usize, sigma: usize) -> Vec<Vec<u8>> {
    let len = n.min(PREFIX_LEN);
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(n);
    extend_canonical(&mut cur, len, sigma, &mut |w| out.push(w.to_vec()));
    out
}

/// Calls `f` on every canonical completion of `cur` to length `n`, in
/// lexicographic order. Letters are `b'a' + k`.
fn extend_canonical(cur: &mut Vec<u8>, n: usize, sigma: usize, f: &mut impl FnMut(&[u8])) {
    if cur.len() == n {
        f(cur);
        return;
    }
    let used = cur.iter().map(|&c| (c - b'a') as usize + 1).max().unwrap_or(0);
    for c in 0..sigma.min(used + 1) {
        cur.push(b'a' + c as u8);
        extend_canonical(cur, n, sigma, f);
        cur.pop();
    }
}

fn run_partition(prefix: &[u8], n: usize, cfg: &CensusConfig) -> Result<PartitionResult> {
    let mut scanner = SquareScanner::new();
    let mut res = PartitionResult {
        prefix: String::from_utf8_lossy(prefix).into_owned(),
        words: 0,
        max_sq: 0,
        witness_count: 0,
        witnesses: Vec::new(),
    };
    let mut failure = None;
    let mut cur = prefix.to_vec();
    extend_canonical(&mut cur, n, cfg.sigma, &mut |w| {
        if let Some(k) = cfg.verify_every {
            if res.words.is_multiple_of(k) && failure.is_none() && !verify_all(w).pass {
                failure = Some(String::from_utf8_lossy(w).into_owned());
            }
        }
        res.words += 1;
        let c = scanner.count(w);
        if c > res.max_sq || res.witness_count == 0 {
            res.max_sq = c;
            res.witness_count = 0;
            res.witnesses.clear();
        }
        if c == res.max_sq {
            res.witness_count += 1;
            if res.witnesses.len() < MAX_WITNESSES {
                res.witnesses.push(String::from_utf8_lossy(w).into_owned());
            }
        }
    });
    match failure {
        Some(w) => Err(Error::CheckFailed(format!("verifier rejected {w}"))),
        None => Ok(res),
    }
}

fn merge(n: usize, sigma: usize, mut parts: Vec<PartitionResult>) -> Result<CensusRow> {
    parts.sort_by(|a, b| a.prefix.cmp(&b.prefix));
    let max_sq = parts.iter().map(|p| p.max_sq).max().unwrap_or(0);
    let best = parts.iter().filter(|p| p.max_sq == max_sq && p.witness_count > 0);
    let witness_count = best.clone().map(|p| p.witness_count).sum();
    let witnesses = best
        .flat_map(|p| p.witnesses.iter().cloned())
        .take(MAX_WITNESSES)
        .collect();
    let rhs = conjecture_rhs(n as u64)?;
    Ok(CensusRow {
        n,
        sigma,
        max_sq,
        witness_count,
        witnesses,
        conjecture_rhs: rhs,
        conjecture_pass: max_sq as i64 <= rhs,
    })
}

fn pool(jobs: usize) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| Error::Resource(format!("thread pool: {e}")))
}

/// Exact maximum of `|SQ(w)|` over all words of length `n` on at most
/// `cfg.sigma` letters.
pub fn max_distinct_squares(n: usize, cfg: &CensusConfig) -> Result<CensusRow> {
    check_range(n, cfg)?;
    let parts = pool(cfg.jobs)?.install(|| {
        prefixes(n, cfg.sigma)
            .par_iter()
            .map(|p| run_partition(p, n, cfg))
            .collect::<Result<Vec<_>>>()
    })?;
    merge(n, cfg.sigma, parts)
}

/// Binary census row for `n`, judged against the conjectured bound.
pub fn check_conjecture(n: usize, cfg: &CensusConfig) -> Result<CensusRow> {
    let cfg = CensusConfig {
        sigma: 2,
        ..cfg.clone()
    };
    max_distinct_squares(n, &cfg)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DensityRow {
    pub n: usize,
    pub max_sq: usize,
    /// `max_sq / n` as a reduced fraction.
    pub density: String,
}

pub fn density_table(ns: impl IntoIterator<Item = usize>, cfg: &CensusConfig) -> Result<Vec<DensityRow>> {
    ns.into_iter()
        .map(|n| {
            let row = max_distinct_squares(n, cfg)?;
            Ok(DensityRow {
                n,
                max_sq: row.max_sq,
                density: Ratio::new(row.max_sq, n).to_string(),
            })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CensusOutcome {
    pub rows: Vec<CensusRow>,
    /// False when the partition budget ran out before `n_max` finished.
    pub complete: bool,
}

/// Rows for `n = 1..=n_max`, resuming from and updating `checkpoint`.
///
/// `emit` sees each row once it is final, including rows replayed from the
/// checkpoint.
pub fn run_census(
    n_max: usize,
    cfg: &CensusConfig,
    checkpoint: Option<&Path>,
    mut emit: impl FnMut(&CensusRow),
) -> Result<CensusOutcome> {
    check_range(n_max, cfg)?;
    let mut cp = match checkpoint {
        Some(path) => Checkpoint::load(path, cfg.sigma)?.unwrap_or_else(|| Checkpoint::empty(cfg.sigma)),
        None => Checkpoint::empty(cfg.sigma),
    };
    let save = |cp: &Checkpoint| match checkpoint {
        Some(path) => cp.save(path),
        None => Ok(()),
    };
    let workers = pool(cfg.jobs)?;
    let mut budget = cfg.partition_budget;

    let mut rows = Vec::new();
    for n in 1..=n_max {
        if let Some(row) = cp.rows.get(n - 1) {
            emit(row);
            rows.push(row.clone());
            continue;
        }
        let mut done = match cp.partial.take() {
            Some(p) if p.n == n => p.done,
            Some(p) => {
                return Err(Error::Checkpoint(format!(
                    "partial run is for n = {}, expected {n}",
                    p.n
                )))
            }
            None => Vec::new(),
        };
        let todo: Vec<Vec<u8>> = prefixes(n, cfg.sigma)
            .into_iter()
            .filter(|p| !done.iter().any(|d| d.prefix.as_bytes() == p.as_slice()))
            .collect();
        for chunk in todo.chunks(CHUNK) {
            if budget == Some(0) {
                cp.partial = Some(PartialRun { n, done });
                save(&cp)?;
                return Ok(CensusOutcome {
                    rows,
                    complete: false,
                });
            }
            let take = budget.map_or(chunk.len(), |b| b.min(chunk.len()));
            let results = workers.install(|| {
                chunk[..take]
                    .par_iter()
                    .map(|p| run_partition(p, n, cfg))
                    .collect::<Result<Vec<_>>>()
            })?;
            done.extend(results);
            if let Some(b) = budget.as_mut() {
                *b -= take;
            }
            if take < chunk.len() {
                cp.partial = Some(PartialRun { n, done });
                save(&cp)?;
                return Ok(CensusOutcome {
                    rows,
                    complete: false,
                });
            }
            cp.partial = Some(PartialRun {
                n,
                done: done.clone(),
            });
            save(&cp)?;
        }
        let row = merge(n, cfg.sigma, done)?;
        cp.partial = None;
        cp.rows.push(row.clone());
        save(&cp)?;
        emit(&row);
        rows.push(row);
    }
    Ok(CensusOutcome {
        rows,
        complete: true,
    })
}
