//! Exhaustive classification of forbidden words by the isomorphism type of
//! their cubes, and the conjecture checks built on it.

use std::collections::{BTreeMap, HashMap};
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::PathBuf;
use std::sync::Mutex;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::cube::build_graph;
use crate::error::{Error, Result};
use crate::exec::{self, Execution};
use crate::iso::{
    canonical_certificate, find_isomorphism, CanonicalCertificate, DEFAULT_NODE_BUDGET,
};
use crate::words::{bit_changes, canonical_rep, representatives, Word};

pub const MAX_HARNESS_DIM: usize = 11;
pub const DEFAULT_TIME_BUDGET: Duration = Duration::from_secs(30 * 60);

#[derive(Clone, Debug)]
pub struct HarnessOptions {
    pub exec: Execution,
    pub node_budget: u64,
    /// Wall-clock limit for one dimension.
    pub time_budget: Option<Duration>,
    /// Append-only JSON-lines log of computed certificates, reused across runs.
    pub results_path: Option<PathBuf>,
    /// Classify lengths `1..=d` instead of `3..=d-1`.
    pub full_range: bool,
}

impl Default for HarnessOptions {
    fn default() -> Self {
        HarnessOptions {
            exec: Execution::Parallel,
            node_budget: DEFAULT_NODE_BUDGET,
            time_budget: Some(DEFAULT_TIME_BUDGET),
            results_path: None,
            full_range: false,
        }
    }
}

impl HarnessOptions {
    pub fn length_range(&self, d: usize) -> (usize, usize) {
        if self.full_range {
            (1, d)
        } else {
            (3, d.saturating_sub(1))
        }
    }
}

/// Certificates keyed to the representative words producing them.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IsoClassTable {
    pub d: usize,
    pub k_min: usize,
    pub k_max: usize,
    pub classes: BTreeMap<CanonicalCertificate, Vec<Word>>,
}

impl IsoClassTable {
    pub fn word_count(&self) -> usize {
        self.classes.values().map(Vec::len).sum()
    }

    pub fn multi_member_classes(&self) -> impl Iterator<Item = &Vec<Word>> {
        self.classes.values().filter(|ws| ws.len() > 1)
    }

    /// Class of `f` or of whichever trivial variant of it is tabulated.
    pub fn class_of(&self, f: &Word) -> Option<&CanonicalCertificate> {
        let rep = canonical_rep(f);
        self.classes
            .iter()
            .find(|(_, ws)| ws.contains(&rep))
            .map(|(c, _)| c)
    }
}

#[derive(Serialize, Deserialize)]
struct LogLine {
    d: usize,
    k: usize,
    f: Word,
    certificate: String,
}

/// Previously computed `(d, f) -> certificate` entries plus an append handle.
struct ResultsLog {
    known: HashMap<Word, CanonicalCertificate>,
    file: Mutex<File>,
}

impl ResultsLog {
    fn open(path: &PathBuf, d: usize) -> Result<Self> {
        let io = |e: std::io::Error| {
            Error::Precondition(format!("results file {}: {e}", path.display()))
        };
        let mut known = HashMap::new();
        if path.exists() {
            for line in BufReader::new(File::open(path).map_err(io)?).lines() {
                let line = line.map_err(io)?;
                // a torn last line from an interrupted run is skipped
                if let Ok(rec) = serde_json::from_str::<LogLine>(&line) {
                    if rec.d == d {
                        known.insert(rec.f, CanonicalCertificate(rec.certificate));
                    }
                }
            }
        }
        let file = OpenOptions::new()
            .create(true)
            .append(true)
            .open(path)
            .map_err(io)?;
        Ok(ResultsLog {
            known,
            file: Mutex::new(file),
        })
    }

    fn append(&self, d: usize, f: &Word, cert: &CanonicalCertificate) {
        let line = serde_json::to_string(&LogLine {
            d,
            k: f.len(),
            f: *f,
            certificate: cert.0.clone(),
        })
        .unwrap();
        let mut file = self.file.lock().unwrap();
        let _ = writeln!(file, "{line}");
    }
}

/// Builds `Q_d(f)` for every representative `f` with length in
/// `k_min..=k_max` and buckets the words by canonical certificate.
pub fn isom_classes(
    d: usize,
    k_min: usize,
    k_max: usize,
    opts: &HarnessOptions,
) -> Result<IsoClassTable> {
    if !(1..=MAX_HARNESS_DIM).contains(&d) {
        return Err(Error::DimensionOutOfRange {
            d,
            min: 1,
            max: MAX_HARNESS_DIM,
        });
    }
    if k_min == 0 || k_max > d {
        return Err(Error::Precondition(format!(
            "need 1 <= k_min and k_max <= d, got {k_min}..={k_max}, d = {d}"
        )));
    }
    let mut words = Vec::new();
    for k in k_min..=k_max {
        words.extend(representatives(k)?);
    }
    let log = opts
        .results_path
        .as_ref()
        .map(|p| ResultsLog::open(p, d))
        .transpose()?;
    let deadline = opts.time_budget.map(|t| (Instant::now() + t, t));
    let certs = exec::try_map(opts.exec, &words, |f| {
        if let Some(c) = log.as_ref().and_then(|l| l.known.get(f)) {
            return Ok(c.clone());
        }
        if let Some((at, t)) = deadline {
            if Instant::now() > at {
                return Err(Error::TimeBudgetExceeded(t.as_secs()));
            }
        }
        let g = build_graph(d, Some(f))?;
        let c = canonical_certificate(g.graph(), opts.node_budget)?;
        if let Some(l) = &log {
            l.append(d, f, &c);
        }
        Ok(c)
    })?;
    let mut classes: BTreeMap<CanonicalCertificate, Vec<Word>> = BTreeMap::new();
    for (f, c) in words.into_iter().zip(certs) {
        classes.entry(c).or_default().push(f);
    }
    for ws in classes.values_mut() {
        ws.sort_by(|a, b| a.len().cmp(&b.len()).then(a.cmp(b)));
    }
    Ok(IsoClassTable {
        d,
        k_min,
        k_max,
        classes,
    })
}

/// Every unordered pair inside a multi-member class.
pub fn nontrivial_pairs(t: &IsoClassTable) -> Vec<(Word, Word)> {
    let mut out = Vec::new();
    for ws in t.multi_member_classes() {
        for i in 0..ws.len() {
            for j in i + 1..ws.len() {
                out.push((ws[i], ws[j]));
            }
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConjectureId {
    /// Isomorphic at dimension `d` implies isomorphic at `d - 1`.
    #[serde(rename = "dim_minus_1")]
    DimMinus1,
    /// Non-trivial isomorphic pairs satisfy `3|f| >= 2(d + 1)`.
    TwoThirds,
    /// Non-trivial isomorphic pairs have the same number of blocks.
    Blocks,
}

impl ConjectureId {
    pub fn from_index(i: u8) -> Option<Self> {
        match i {
            1 => Some(ConjectureId::DimMinus1),
            2 => Some(ConjectureId::TwoThirds),
            3 => Some(ConjectureId::Blocks),
            _ => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Holds,
    Falsified,
    BudgetExceeded,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub f: Word,
    pub g: Word,
    pub d: usize,
    /// The pair was re-checked with the direct backtracking search.
    pub rechecked: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct DimensionResult {
    pub d: usize,
    pub verdict: Verdict,
    pub classes: usize,
    pub nontrivial_pairs: usize,
    pub counterexample: Option<Counterexample>,
    pub seconds: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct ConjectureReport {
    pub conjecture: ConjectureId,
    pub d_min: usize,
    pub d_max: usize,
    pub dimensions: Vec<DimensionResult>,
}

impl ConjectureReport {
    pub fn verdict(&self) -> Verdict {
        let vs = self.dimensions.iter().map(|r| r.verdict);
        if vs.clone().any(|v| v == Verdict::Falsified) {
            Verdict::Falsified
        } else if vs.clone().any(|v| v == Verdict::BudgetExceeded) {
            Verdict::BudgetExceeded
        } else {
            Verdict::Holds
        }
    }
}

const RECHECK_LIMIT: u64 = 50_000_000;

/// Confirms with the direct search that `Q_dim(f) ≅ Q_dim(g)` really holds
/// (`expect_iso`) or really fails.
fn recheck(dim: usize, f: &Word, g: &Word, expect_iso: bool) -> Result<bool> {
    let gf = build_graph(dim, Some(f))?;
    let gg = build_graph(dim, Some(g))?;
    Ok(find_isomorphism(gf.graph(), gg.graph(), RECHECK_LIMIT)?.is_some() == expect_iso)
}

fn check_dimension(id: ConjectureId, d: usize, opts: &HarnessOptions) -> Result<DimensionResult> {
    if !(3..=MAX_HARNESS_DIM).contains(&d) {
        return Err(Error::DimensionOutOfRange {
            d,
            min: 3,
            max: MAX_HARNESS_DIM,
        });
    }
    let start = Instant::now();
    let (k_min, k_max) = opts.length_range(d);
    let table = match isom_classes(d, k_min, k_max, opts) {
        Ok(t) => t,
        Err(Error::TimeBudgetExceeded(_)) => {
            return Ok(DimensionResult {
                d,
                verdict: Verdict::BudgetExceeded,
                classes: 0,
                nontrivial_pairs: 0,
                counterexample: None,
                seconds: start.elapsed().as_secs_f64(),
            })
        }
        Err(e) => return Err(e),
    };
    let pairs = nontrivial_pairs(&table);
    let candidate: Option<(Word, Word, usize, bool)> = match id {
        ConjectureId::DimMinus1 => {
            let words: Vec<Word> = table.multi_member_classes().flatten().copied().collect();
            let certs = exec::try_map(opts.exec, &words, |f| {
                canonical_certificate(build_graph(d - 1, Some(f))?.graph(), opts.node_budget)
            })?;
            let lower: HashMap<Word, CanonicalCertificate> = words.into_iter().zip(certs).collect();
            pairs
                .iter()
                .find(|(f, g)| lower[f] != lower[g])
                .map(|(f, g)| (*f, *g, d - 1, false))
        }
        ConjectureId::TwoThirds => table
            .multi_member_classes()
            .find(|ws| 3 * ws[0].len() < 2 * (d + 1))
            .map(|ws| (ws[0], ws[1], d, true)),
        ConjectureId::Blocks => table.multi_member_classes().find_map(|ws| {
            ws.iter()
                .find(|w| bit_changes(w) != bit_changes(&ws[0]))
                .map(|w| (ws[0], *w, d, true))
        }),
    };
    let counterexample = candidate
        .map(|(f, g, dim, expect_iso)| -> Result<Counterexample> {
            Ok(Counterexample {
                f,
                g,
                d: dim,
                rechecked: recheck(dim, &f, &g, expect_iso)?,
            })
        })
        .transpose()?;
    let verdict = match &counterexample {
        Some(c) if c.rechecked => Verdict::Falsified,
        Some(c) => {
            return Err(Error::Precondition(format!(
                "certificate verdict for ({}, {}) at d = {} disagrees with direct search",
                c.f, c.g, c.d
            )))
        }
        None => Verdict::Holds,
    };
    Ok(DimensionResult {
        d,
        verdict,
        classes: table.classes.len(),
        nontrivial_pairs: pairs.len(),
        counterexample,
        seconds: start.elapsed().as_secs_f64(),
    })
}

fn single(id: ConjectureId, d: usize, opts: &HarnessOptions) -> Result<ConjectureReport> {
    Ok(ConjectureReport {
        conjecture: id,
        d_min: d,
        d_max: d,
        dimensions: vec![check_dimension(id, d, opts)?],
    })
}

pub fn check_conjecture_dim_minus_1(d: usize, opts: &HarnessOptions) -> Result<ConjectureReport> {
    single(ConjectureId::DimMinus1, d, opts)
}

pub fn check_conjecture_two_thirds(d: usize, opts: &HarnessOptions) -> Result<ConjectureReport> {
    single(ConjectureId::TwoThirds, d, opts)
}

pub fn check_conjecture_blocks(d: usize, opts: &HarnessOptions) -> Result<ConjectureReport> {
    single(ConjectureId::Blocks, d, opts)
}

/// Runs one conjecture over `d_min..=d_max`, calling `each` as every
/// dimension finishes.
pub fn run_conjecture(
    id: ConjectureId,
    d_min: usize,
    d_max: usize,
    opts: &HarnessOptions,
    mut each: impl FnMut(&DimensionResult),
) -> Result<ConjectureReport> {
    let mut dimensions = Vec::new();
    for d in d_min..=d_max {
        let r = check_dimension(id, d, opts)?;
        each(&r);
        dimensions.push(r);
    }
    Ok(ConjectureReport {
        conjecture: id,
        d_min,
        d_max,
        dimensions,
    })
}
