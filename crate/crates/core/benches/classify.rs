use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use fibcube::counting::count_avoiders;
use fibcube::cube::build_graph;
use fibcube::exec::{self, Execution};
use fibcube::harness::{isom_classes, HarnessOptions};
use fibcube::iso::{canonical_certificate, DEFAULT_NODE_BUDGET};
use fibcube::words::{representatives, Word};

const MODES: [(&str, Execution); 2] = [
    ("sequential", Execution::Sequential),
    ("parallel", Execution::Parallel),
];

fn classify(c: &mut Criterion) {
    let mut group = c.benchmark_group("isom_classes");
    group.sample_size(10);
    for d in [7, 8] {
        for (name, exec) in MODES {
            let opts = HarnessOptions {
                exec,
                time_budget: None,
                ..Default::default()
            };
            group.bench_with_input(BenchmarkId::new(name, d), &d, |b, &d| {
                b.iter(|| isom_classes(d, 3, d - 1, &opts).unwrap())
            });
        }
    }
    group.finish();
}

fn canonicalize(c: &mut Criterion) {
    let mut group = c.benchmark_group("canonical_certificate");
    group.sample_size(10);
    for (d, f) in [(9, "0110"), (10, "000000000"), (10, "0101")] {
        let g = build_graph(d, Some(&f.parse::<Word>().unwrap())).unwrap();
        group.bench_function(format!("Q{d}({f})"), |b| {
            b.iter(|| canonical_certificate(g.graph(), DEFAULT_NODE_BUDGET).unwrap())
        });
    }
    group.finish();
}

fn count_sweep(c: &mut Criterion) {
    let words: Vec<Word> = (1..=8).flat_map(|k| representatives(k).unwrap()).collect();
    let mut group = c.benchmark_group("count_sweep");
    for (name, exec) in MODES {
        group.bench_function(name, |b| {
            b.iter(|| {
                exec::map(exec, &words, |f| {
                    (0..=40).map(|d| count_avoiders(d, f).unwrap()).sum::<u64>()
                })
            })
        });
    }
    group.finish();
}

criterion_group!(benches, classify, canonicalize, count_sweep);
criterion_main!(benches);
