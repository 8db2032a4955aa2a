//! Command-line front end: argument parsing, dispatch and JSON output.
//!
//! [`run`] takes the argument vector and output sinks and returns the process
//! exit code, so the whole interface can be driven from tests.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::time::Duration;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use fibcube::counting::{brute_count, count_avoiders};
use fibcube::cube::{build_graph, edge_count};
use fibcube::exec::{self, Execution};
use fibcube::harness::{
    isom_classes, nontrivial_pairs, run_conjecture, ConjectureId, HarnessOptions, Verdict,
    DEFAULT_TIME_BUDGET,
};
use fibcube::iso::{are_isomorphic, DEFAULT_NODE_BUDGET};
use fibcube::theorems::{verify_block_pair, verify_equal_blocks, verify_equal_length};
use fibcube::words::{autocorrelation, is_trivial_pair};
use fibcube::{Error, Word};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_FAILURE: i32 = 2;

pub const DEFAULT_SEED: u64 = 0x5eed;

#[derive(Parser, Debug)]
#[command(
    name = "fibcube",
    version,
    about = "Generalized Fibonacci cubes: counting, graphs, isomorphism"
)]
pub struct Cli {
    /// Worker threads for the classification commands (default: logical CPUs).
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    /// Seed for randomized internals.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Search-node budget per canonical labeling.
    #[arg(long, global = true, env = "FIBCUBE_BUDGET", default_value_t = DEFAULT_NODE_BUDGET)]
    pub budget: u64,
    /// Wall-clock budget per dimension, in seconds.
    #[arg(long, global = true, default_value_t = DEFAULT_TIME_BUDGET.as_secs())]
    pub time_budget: u64,
    /// Write standard output to this file instead.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
    /// Progress messages on standard error.
    #[arg(long, short, global = true, action = clap::ArgAction::Count)]
    pub verbose: u8,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Number of length-d binary strings avoiding f.
    Count {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        f: Word,
        /// Count by enumerating every string instead.
        #[arg(long)]
        oracle: bool,
    },
    /// Autocorrelation polynomial of f.
    Poly {
        #[arg(long)]
        f: Word,
    },
    /// Build Q_d(f).
    Build {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        f: Option<Word>,
        /// Emit graph6 text instead of statistics.
        #[arg(long)]
        graph6: bool,
        /// Include the vertex labels and edge list.
        #[arg(long, conflicts_with = "graph6")]
        full: bool,
    },
    /// Decide whether Q_d(f) and Q_d(g) are isomorphic.
    Iso {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        f: Word,
        #[arg(long)]
        g: Word,
        /// Include the vertex mapping when isomorphic.
        #[arg(long)]
        mapping: bool,
    },
    /// Machine-check one of the structural theorems at dimension d.
    Verify {
        #[arg(long, value_enum)]
        theorem: Theorem,
        #[arg(long)]
        d: usize,
        #[arg(long)]
        k: Option<usize>,
    },
    /// Classify forbidden words by the isomorphism type of Q_d(f).
    Classes {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        kmin: Option<usize>,
        #[arg(long)]
        kmax: Option<usize>,
        /// Use every length from 1 to d.
        #[arg(long)]
        full_range: bool,
        /// Append-only results file reused across runs.
        #[arg(long)]
        results: Option<PathBuf>,
    },
    /// Test a conjecture over a range of dimensions.
    Conjecture {
        /// 1: isomorphism descends to d-1, 2: two-thirds length bound, 3: equal block counts.
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=3))]
        id: u8,
        #[arg(long, default_value_t = 3)]
        dmin: usize,
        #[arg(long)]
        dmax: usize,
        #[arg(long)]
        full_range: bool,
        #[arg(long)]
        results: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Theorem {
    /// Isomorphic cubes come from forbidden words of equal length.
    Length,
    /// The block pair 0^k 1^k, 0^{k+1} 1^{k-1} up to dimension 3k-1.
    #[value(name = "3k1")]
    ThreeKMinusOne,
    /// Length d-1 words: isomorphic iff equal block counts.
    Blocks,
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Lib(Error),
    Io(std::io::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Io(e)
    }
}

impl Failure {
    fn kind(&self) -> &'static str {
        match self {
            Failure::Usage(_) => "usage",
            Failure::Lib(Error::BudgetExceeded(_) | Error::TimeBudgetExceeded(_)) => "budget",
            Failure::Lib(_) => "validation",
            Failure::Io(_) => "io",
        }
    }

    fn message(&self) -> String {
        match self {
            Failure::Usage(m) => m.clone(),
            Failure::Lib(e) => e.to_string(),
            Failure::Io(e) => e.to_string(),
        }
    }
}

struct Out {
    buf: Vec<u8>,
}

impl Out {
    fn line<T: Serialize>(&mut self, value: &T) {
        serde_json::to_writer(&mut self.buf, value).expect("serializable output");
        self.buf.push(b'\n');
    }

    fn text(&mut self, s: &str) {
        self.buf.extend_from_slice(s.as_bytes());
        self.buf.push(b'\n');
    }
}

/// Parses `argv` (including the program name), runs the command and returns
/// the exit code. Results go to `out`, diagnostics to `err`.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(out, "{e}");
                return EXIT_OK;
            }
            let msg = e.render().to_string();
            let first = msg
                .lines()
                .next()
                .unwrap_or("")
                .trim_start_matches("error: ")
                .to_string();
            let _ = writeln!(err, "{msg}");
            let _ = writeln!(out, "{}", json!({ "error": first, "kind": "usage" }));
            return EXIT_FAILURE;
        }
    };
    let mut o = Out { buf: Vec::new() };
    let mut diag = Vec::new();
    let result = match cli.jobs {
        Some(n) => exec::with_jobs(n, || dispatch(&cli, &mut o, &mut diag)),
        None => dispatch(&cli, &mut o, &mut diag),
    };
    let _ = err.write_all(&diag);
    let code = match result {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "fibcube: {}", f.message());
            o.line(&json!({ "error": f.message(), "kind": f.kind() }));
            EXIT_FAILURE
        }
    };
    let written = match &cli.output {
        Some(path) if code != EXIT_FAILURE => std::fs::write(path, &o.buf),
        _ => out.write_all(&o.buf),
    };
    if let Err(e) = written {
        let _ = writeln!(err, "fibcube: {e}");
        return EXIT_FAILURE;
    }
    code
}

fn harness_options(cli: &Cli, full_range: bool, results: Option<&PathBuf>) -> HarnessOptions {
    HarnessOptions {
        exec: if cli.jobs == Some(1) {
            Execution::Sequential
        } else {
            Execution::Parallel
        },
        node_budget: cli.budget,
        time_budget: Some(Duration::from_secs(cli.time_budget)),
        results_path: results.cloned(),
        full_range,
    }
}

fn dispatch(cli: &Cli, o: &mut Out, err: &mut Vec<u8>) -> Result<i32, Failure> {
    match &cli.command {
        Command::Count { d, f, oracle } => {
            let n = if *oracle {
                brute_count(*d, f)?
            } else {
                count_avoiders(*d, f)?
            };
            o.line(&json!({ "n": n }));
        }
        Command::Poly { f } => {
            let p = autocorrelation(f);
            o.line(&json!({ "coeffs": p, "at2": p.eval_at_two() }));
        }
        Command::Build { d, f, graph6, full } => {
            let g = build_graph(*d, f.as_ref())?;
            if *graph6 {
                o.text(&g.graph().to_graph6());
            } else {
                let mut v = json!({
                    "d": d,
                    "f": f,
                    "vertices": g.order(),
                    "edges": edge_count(&g),
                    "connected": g.graph().is_connected(),
                    "bipartite": g.graph().two_coloring().is_some(),
                });
                if *full {
                    let labels: Vec<String> = g.labels().map(|w| w.to_string()).collect();
                    let edges: Vec<(usize, usize)> = g.graph().edges().collect();
                    v["labels"] = json!(labels);
                    v["edge_list"] = json!(edges);
                }
                o.line(&v);
            }
        }
        Command::Iso { d, f, g, mapping } => {
            let gf = build_graph(*d, Some(f))?;
            let gg = build_graph(*d, Some(g))?;
            let m = are_isomorphic(gf.graph(), gg.graph(), cli.budget)?;
            let mut v = json!({
                "isomorphic": m.is_some(),
                "d": d,
                "f": f,
                "g": g,
                "trivial_pair": f.len() == g.len() && is_trivial_pair(f, g),
                "vertices": [gf.order(), gg.order()],
                "edges": [edge_count(&gf), edge_count(&gg)],
            });
            if let (true, Some(m)) = (*mapping, &m) {
                let pairs: Vec<(String, String)> = m
                    .iter()
                    .enumerate()
                    .map(|(a, &b)| (gf.label(a).to_string(), gg.label(b).to_string()))
                    .collect();
                v["mapping"] = json!(pairs);
            }
            o.line(&v);
            return Ok(if m.is_some() { EXIT_OK } else { EXIT_NEGATIVE });
        }
        Command::Verify { theorem, d, k } => {
            let opts = harness_options(cli, true, None);
            let (holds, evidence) = match theorem {
                Theorem::Length => {
                    let r = verify_equal_length(*d, &opts)?;
                    (r.holds(), serde_json::to_value(&r).expect("report"))
                }
                Theorem::ThreeKMinusOne => {
                    let k = k.ok_or_else(|| {
                        Failure::Usage("--k is required for --theorem 3k1".into())
                    })?;
                    let r = verify_block_pair(k, *d, cli.budget)?;
                    if r.inconsistent() {
                        let _ = writeln!(err, "fibcube: explicit map and certificates disagree");
                    }
                    let mut v = serde_json::to_value(&r).expect("report");
                    v["inconsistent"] = json!(r.inconsistent());
                    (r.holds(), v)
                }
                Theorem::Blocks => {
                    let r = verify_equal_blocks(*d, cli.budget, opts.exec)?;
                    (r.holds(), serde_json::to_value(&r).expect("report"))
                }
            };
            o.text(if holds { "PASS" } else { "FAIL" });
            o.line(&evidence);
            return Ok(if holds { EXIT_OK } else { EXIT_NEGATIVE });
        }
        Command::Classes {
            d,
            kmin,
            kmax,
            full_range,
            results,
        } => {
            let opts = harness_options(cli, *full_range, results.as_ref());
            let (lo, hi) = opts.length_range(*d);
            let (lo, hi) = (kmin.unwrap_or(lo), kmax.unwrap_or(hi));
            if *full_range && cli.verbose > 0 {
                let _ = writeln!(err, "fibcube: length-{d} words all give the cube minus one vertex and form one class");
            }
            let table = isom_classes(*d, lo, hi, &opts)?;
            o.line(&json!({
                "d": d,
                "k_min": lo,
                "k_max": hi,
                "words": table.word_count(),
                "classes": table.classes.len(),
                "nontrivial_pairs": nontrivial_pairs(&table).len(),
            }));
            for (cert, members) in &table.classes {
                o.line(
                    &json!({ "certificate": cert, "length": members[0].len(), "members": members }),
                );
            }
        }
        Command::Conjecture {
            id,
            dmin,
            dmax,
            full_range,
            results,
        } => {
            let cid = ConjectureId::from_index(*id)
                .ok_or_else(|| Failure::Usage(format!("unknown conjecture {id}")))?;
            let opts = harness_options(cli, *full_range, results.as_ref());
            let verbose = cli.verbose > 0;
            let report = run_conjecture(cid, *dmin, *dmax, &opts, |r| {
                if verbose {
                    let _ = writeln!(err, "d = {}: {:?} in {:.1} s", r.d, r.verdict, r.seconds);
                }
            })?;
            for r in &report.dimensions {
                let mut v = serde_json::to_value(r).expect("report");
                v["conjecture"] = json!(cid);
                o.line(&v);
            }
            return Ok(match report.verdict() {
                Verdict::Holds => EXIT_OK,
                Verdict::Falsified => EXIT_NEGATIVE,
                Verdict::BudgetExceeded => EXIT_FAILURE,
            });
        }
    }
    Ok(EXIT_OK)
}
