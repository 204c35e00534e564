use adhmlab::current::ff_census_with;
use adhmlab::exec::Execution;
use adhmlab::hilbert::GradedSetup;
use adhmlab::nilpotent::square_zero_census;
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

fn modes() -> Vec<(&'static str, Execution)> {
    let mut m = vec![("sequential", Execution::Sequential)];
    #[cfg(feature = "parallel")]
    m.push(("parallel", Execution::Parallel));
    m
}

fn census(c: &mut Criterion) {
    let mut g = c.benchmark_group("ff_census_r2_n2_p3");
    g.sample_size(10);
    for (name, exec) in modes() {
        g.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &e| b.iter(|| ff_census_with(2, 2, 3, e).unwrap()));
    }
    g.finish();
}

fn square_zero(c: &mut Criterion) {
    let mut g = c.benchmark_group("square_zero_census_k2_n4_p3");
    g.sample_size(10);
    for (name, exec) in modes() {
        g.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &e| b.iter(|| square_zero_census(3, 2, 4, e).unwrap()));
    }
    g.finish();
}

fn hilbert(c: &mut Criterion) {
    let setup = GradedSetup::so_data(2, 4).unwrap();
    let mut g = c.benchmark_group("hilbert_so_k2_n4_d3");
    g.sample_size(10);
    for (name, exec) in modes() {
        g.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &e| b.iter(|| setup.hilbert_truncated_with(3, e).unwrap()));
    }
    g.finish();
}

criterion_group!(benches, census, square_zero, hilbert);
criterion_main!(benches);
