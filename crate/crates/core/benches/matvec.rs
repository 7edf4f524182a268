use cgbounds::generators::{diffusion_2d, random_rhs};
use cgbounds::sparse::SparseSymMatrix;
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

fn matvec(c: &mut Criterion) {
    let mut group = c.benchmark_group("matvec");
    for m in [50, 200, 500] {
        let a: SparseSymMatrix = diffusion_2d(m);
        let x = random_rhs(a.n(), 1);
        let mut y = vec![0.0; a.n()];
        group.bench_with_input(BenchmarkId::new("sequential", a.n()), &a, |b, a| {
            b.iter(|| a.matvec_into(black_box(&x), &mut y).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("parallel", a.n()), &a, |b, a| {
            b.iter(|| a.par_matvec_into(black_box(&x), &mut y).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, matvec);
criterion_main!(benches);
