//! End-to-end acceptance checks. Each criterion prints one PASS/FAIL line;
//! the process fails if any criterion fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::Command;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use fibcube::counting::{brute_count, count_avoiders, verify_count_chain};
use fibcube::cube::{
    build_graph, common_neighbors, count_c4_through_edge, disjoint_shortest_paths, edge_count,
};
use fibcube::exec::Execution;
use fibcube::harness::{run_conjecture, ConjectureId, HarnessOptions, Verdict};
use fibcube::iso::{canonical_certificate, DEFAULT_NODE_BUDGET};
use fibcube::theorems::{verify_block_pair, verify_equal_blocks};
use fibcube::words::{bit_changes, representatives};
use fibcube::{Graph, Word};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn all_words(k: usize) -> impl Iterator<Item = Word> {
    (0..1u32 << k).map(move |c| Word::from_code(c, k).unwrap())
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(start: Instant, limit: Duration) -> Result<(), String> {
    let t = start.elapsed();
    ensure(t <= limit, || {
        format!("took {:.1} s, limit {} s", t.as_secs_f64(), limit.as_secs())
    })
}

fn count_oracle() -> Outcome {
    let start = Instant::now();
    let mut checked = 0;
    for k in 1..=6 {
        for f in all_words(k) {
            for d in 0..=14 {
                let (a, b) = (count_avoiders(d, &f).unwrap(), brute_count(d, &f).unwrap());
                ensure(a == b, || format!("d = {d}, f = {f}: {a} vs {b}"))?;
                checked += 1;
            }
        }
    }
    within(start, Duration::from_secs(60))?;
    Ok(format!("{checked} (d, f) pairs"))
}

fn fibonacci() -> Outcome {
    let f: Word = "11".parse().unwrap();
    let n: Vec<u64> = (0..=24).map(|d| count_avoiders(d, &f).unwrap()).collect();
    ensure(n[1] == 2 && n[2] == 3, || {
        format!("n_1 = {}, n_2 = {}", n[1], n[2])
    })?;
    for d in 3..=20 {
        ensure(n[d] == n[d - 1] + n[d - 2], || {
            format!("recurrence fails at d = {d}")
        })?;
    }
    ensure(n[20] == 17711, || format!("n_20 = {}", n[20]))?;
    for d in [1, 2, 7, 13, 20, 21, 22, 23, 24] {
        let b = brute_count(d, &f).unwrap();
        ensure(b == n[d], || {
            format!("enumeration gives {b} at d = {d}, automaton {}", n[d])
        })?;
    }
    Ok("n_20 = 17711".into())
}

fn count_chain() -> Outcome {
    let start = Instant::now();
    let mut cases = 0;
    for d in 1..=12 {
        for k in 1..=d {
            ensure(verify_count_chain(d, k).unwrap(), || {
                format!("chain fails at d = {d}, k = {k}")
            })?;
            cases += 1;
        }
    }
    within(start, Duration::from_secs(300))?;
    Ok(format!("{cases} (d, k) cases"))
}

fn block_pair() -> Outcome {
    let mut cases = 0;
    for k in 2..=4 {
        for d in 1..=(3 * k - 1).min(11) {
            let r = verify_block_pair(k, d, DEFAULT_NODE_BUDGET).map_err(|e| e.to_string())?;
            ensure(!r.inconsistent(), || {
                format!("map and certificates disagree: {r:?}")
            })?;
            ensure(r.map_verified && r.certificates_equal, || format!("{r:?}"))?;
            if d == 3 * k - 1 {
                let x = k << (k - 1);
                ensure(r.excluded == (x, x), || {
                    format!("excluded {:?}, expected {x}", r.excluded)
                })?;
            }
            cases += 1;
        }
    }
    Ok(format!("{cases} (k, d) cases"))
}

fn long_words() -> Outcome {
    let mut pairs = 0;
    for d in 2..=9 {
        let r = verify_equal_blocks(d, DEFAULT_NODE_BUDGET, Execution::Parallel)
            .map_err(|e| e.to_string())?;
        ensure(r.holds(), || format!("d = {d}: {:?}", r.counterexample))?;
        pairs += r.equal_block_pairs + r.unequal_block_pairs;
    }
    Ok(format!("{pairs} pairs"))
}

fn negative_instance() -> Outcome {
    let out = Command::new(env!("CARGO_BIN_EXE_fibcube"))
        .args(["iso", "--d", "6", "--f", "0110", "--g", "0100"])
        .output()
        .map_err(|e| e.to_string())?;
    let code = out.status.code();
    ensure(code == Some(1), || format!("exit code {code:?}"))?;
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).map_err(|e| e.to_string())?;
    ensure(v["isomorphic"] == false, || format!("output {v}"))?;
    Ok("exit code 1".into())
}

fn conjectures() -> Outcome {
    let opts = HarnessOptions {
        exec: Execution::Parallel,
        ..Default::default()
    };
    let mut summary = Vec::new();
    for id in [
        ConjectureId::DimMinus1,
        ConjectureId::TwoThirds,
        ConjectureId::Blocks,
    ] {
        let r = run_conjecture(id, 3, 10, &opts, |_| {}).map_err(|e| e.to_string())?;
        ensure(r.verdict() == Verdict::Holds, || {
            format!("{id:?}: {:?}", r.dimensions.last())
        })?;
        let slowest = r.dimensions.iter().map(|x| x.seconds).fold(0.0, f64::max);
        summary.push(format!("{id:?} slowest {slowest:.1} s"));
    }
    Ok(format!("d <= 10; {}", summary.join(", ")))
}

fn relabeling_corpus() -> Vec<Graph> {
    let mut out = Vec::new();
    for d in 3..=9 {
        for k in 1..d {
            for f in representatives(k).unwrap().into_iter().step_by(5) {
                out.push(build_graph(d, Some(&f)).unwrap().graph().clone());
            }
        }
    }
    out.truncate(46);
    out.extend((3..=6).map(|d| build_graph(d, None).unwrap().graph().clone()));
    out
}

fn structural_properties() -> Outcome {
    for d in 1..=10 {
        for k in 1..=d.min(4) {
            for f in all_words(k) {
                let g = build_graph(d, Some(&f)).unwrap();
                ensure(g.graph().two_coloring().is_some(), || {
                    format!("Q_{d}({f}) not bipartite")
                })?;
            }
        }
    }
    for d in 1..=8 {
        let q = build_graph(d, None).unwrap();
        let g = q.graph();
        for a in 0..g.order() {
            for b in a + 1..g.order() {
                ensure(common_neighbors(g, a, b) <= 2, || format!("K_2,3 in Q_{d}"))?;
            }
        }
        for (a, b) in g.edges() {
            let c = count_c4_through_edge(&q, &q.label(a), &q.label(b)).unwrap();
            ensure(c == d - 1, || format!("edge in {c} four-cycles in Q_{d}"))?;
        }
    }
    for d in 3..=6 {
        let q = build_graph(d, None).unwrap();
        for a in 0..q.order() {
            for b in a + 1..q.order() {
                if q.label(a).hamming(&q.label(b)) == 3 {
                    let n = disjoint_shortest_paths(q.graph(), a, b);
                    ensure(n == 3, || format!("{n} disjoint geodesics in Q_{d}"))?;
                }
            }
        }
    }
    let corpus = relabeling_corpus();
    ensure(corpus.len() == 50, || {
        format!("corpus has {} graphs", corpus.len())
    })?;
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for (i, g) in corpus.iter().enumerate() {
        let cert = canonical_certificate(g, DEFAULT_NODE_BUDGET).map_err(|e| e.to_string())?;
        for _ in 0..100 {
            let mut p: Vec<usize> = (0..g.order()).collect();
            p.shuffle(&mut rng);
            let c = canonical_certificate(&g.relabel(&p), DEFAULT_NODE_BUDGET)
                .map_err(|e| e.to_string())?;
            ensure(c == cert, || {
                format!("certificate of corpus graph {i} changed under relabeling")
            })?;
        }
    }
    Ok("50 graphs x 100 relabelings".into())
}

fn edge_formulas() -> Outcome {
    let mut checked = 0;
    for d in 2..=10 {
        let full = d * (1 << (d - 1));
        for f in all_words(d - 1) {
            let e = edge_count(&build_graph(d, Some(&f)).unwrap());
            let expected = match bit_changes(&f) {
                0 => continue,
                1 => full - (4 * d - 3),
                _ => full - (4 * d - 2),
            };
            ensure(e == expected, || {
                format!("Q_{d}({f}) has {e} edges, expected {expected}")
            })?;
            checked += 1;
        }
    }
    Ok(format!("{checked} words"))
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("count oracle equivalence", count_oracle),
        ("Fibonacci recurrence", fibonacci),
        ("vertex-count chain", count_chain),
        ("block pair isomorphism", block_pair),
        ("length d-1 characterization", long_words),
        ("Q_6(0110) vs Q_6(0100)", negative_instance),
        ("conjecture suite", conjectures),
        ("structural property suites", structural_properties),
        ("edge-count formulas", edge_formulas),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome =
            catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {} {name}: PASS ({detail}; {secs:.1} s)", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {} {name}: FAIL ({why}; {secs:.1} s)", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
