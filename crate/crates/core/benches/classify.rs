use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use sympinv::par::Exec;
use sympinv::smallgroups::{class_table, generate_group};

const MODES: [(&str, Exec); 2] = [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)];

fn closure(c: &mut Criterion) {
    let mut g = c.benchmark_group("generate_group");
    g.sample_size(10);
    for (n, q) in [(1, 7), (2, 3)] {
        for (name, exec) in MODES {
            g.bench_with_input(BenchmarkId::new(name, format!("Sp({},{q})", 2 * n)), &exec, |b, &exec| {
                b.iter(|| generate_group(n, q, exec).unwrap())
            });
        }
    }
    g.finish();
}

fn classes(c: &mut Criterion) {
    let mut g = c.benchmark_group("class_table");
    g.sample_size(10);
    for (n, q) in [(1, 11), (2, 3)] {
        for (name, exec) in MODES {
            g.bench_with_input(BenchmarkId::new(name, format!("Sp({},{q})", 2 * n)), &exec, |b, &exec| {
                // the class cache lives on the group, so each sample needs a fresh one
                b.iter_batched(
                    || generate_group(n, q, Exec::default()).unwrap(),
                    |fresh| class_table(&fresh, 1_000_000, exec),
                    criterion::BatchSize::LargeInput,
                )
            });
        }
    }
    g.finish();
}

criterion_group!(benches, closure, classes);
criterion_main!(benches);
