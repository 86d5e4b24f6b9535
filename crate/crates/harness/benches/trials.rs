use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use mpqs_core::{SortConfig, Strategy};
use mpqs_harness::exec::{run_trials, Mode};
use mpqs_harness::experiments::{partition_trial, sort_trial};

const MODES: [(&str, Mode); 2] = [
    ("sequential", Mode::Sequential),
    ("parallel", Mode::Parallel),
];

fn sort_trials(c: &mut Criterion) {
    let mut g = c.benchmark_group("sort_trials");
    g.sample_size(10);
    for k in [1, 3, 7] {
        let cfg = SortConfig::new(k).unwrap().with_cutoff(k);
        for (name, mode) in MODES {
            g.bench_with_input(BenchmarkId::new(name, k), &cfg, |b, cfg| {
                b.iter(|| {
                    run_trials(8, 1, mode, |_, seed| {
                        black_box(sort_trial(1 << 16, seed, cfg))
                    })
                })
            });
        }
    }
    g.finish();
}

fn partition_trials(c: &mut Criterion) {
    let mut g = c.benchmark_group("partition_trials");
    g.sample_size(10);
    for (label, k, s) in [
        (
            "balanced-5",
            5,
            Strategy::fixed(mpqs_core::ComparisonTree::balanced(5).unwrap()),
        ),
        ("oracle-3", 3, Strategy::oracle_optimal()),
        ("oracle-7", 7, Strategy::oracle_optimal()),
    ] {
        for (name, mode) in MODES {
            g.bench_function(BenchmarkId::new(name, label), |b| {
                b.iter(|| {
                    run_trials(8, 1, mode, |_, seed| {
                        black_box(partition_trial(k, 1 << 17, seed, &s))
                    })
                })
            });
        }
    }
    g.finish();
}

criterion_group!(benches, sort_trials, partition_trials);
criterion_main!(benches);
