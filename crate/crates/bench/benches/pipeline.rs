use cfgsimp::{analyze, bounded_equiv, enumerate_language, simplify_pipeline, SearchCaps};
use cfgsimp_bench::corpus;
use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};

fn bench_pipeline(c: &mut Criterion) {
    let grammars = corpus(50);
    c.bench_function("simplify_pipeline/50", |b| {
        b.iter(|| {
            for g in &grammars {
                black_box(simplify_pipeline(g).unwrap());
            }
        })
    });
    c.bench_function("analyze/50", |b| {
        b.iter(|| {
            for g in &grammars {
                black_box(analyze(g));
            }
        })
    });
}

fn bench_oracle(c: &mut Criterion) {
    let grammars = corpus(20);
    let simplified: Vec<_> = grammars
        .iter()
        .map(|g| simplify_pipeline(g).unwrap().0)
        .collect();
    let mut group = c.benchmark_group("enumerate");
    for n in [3usize, 5, 6] {
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, &n| {
            b.iter(|| {
                for g in &simplified {
                    black_box(enumerate_language(g, n, SearchCaps::for_len(n)));
                }
            })
        });
    }
    group.finish();

    c.bench_function("bounded_equiv/pipeline/n6", |b| {
        b.iter(|| {
            for (g, s) in grammars.iter().zip(&simplified) {
                black_box(bounded_equiv(g, s, 6, SearchCaps::for_len(6)).unwrap());
            }
        })
    });
}

criterion_group!(benches, bench_pipeline, bench_oracle);
criterion_main!(benches);
