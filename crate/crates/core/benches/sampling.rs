use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use exactcat::exactstruct::{check_axiom, max_structure, Axiom, CheckConfig};
use exactcat::par::Execution;
use exactcat::suites::{check_lemma, Lemma};

fn modes() -> [(&'static str, Execution); 2] {
    [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)]
}

fn axioms(c: &mut Criterion) {
    let s = max_structure();
    let mut g = c.benchmark_group("check_axiom/max");
    g.sample_size(10);
    for axiom in [Axiom::R1, Axiom::R2, Axiom::L2] {
        for (name, exec) in modes() {
            let cfg = CheckConfig::new(200, 1729).with_execution(exec);
            g.bench_with_input(BenchmarkId::new(name, axiom), &cfg, |b, cfg| {
                b.iter(|| black_box(check_axiom(&s, axiom, cfg)))
            });
        }
    }
    g.finish();
}

fn lemmas(c: &mut Criterion) {
    let s = max_structure();
    let mut g = c.benchmark_group("check_lemma/max");
    g.sample_size(10);
    for lemma in [Lemma::Five, Lemma::ConeAcyclic] {
        for (name, exec) in modes() {
            let cfg = CheckConfig::new(100, 1729).with_execution(exec);
            g.bench_with_input(BenchmarkId::new(name, lemma), &cfg, |b, cfg| {
                b.iter(|| black_box(check_lemma(&s, lemma, cfg)))
            });
        }
    }
    g.finish();
}

criterion_group!(benches, axioms, lemmas);
criterion_main!(benches);
