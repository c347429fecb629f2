use std::hint::black_box;
use std::sync::Arc;

use criterion::{criterion_group, criterion_main, Criterion};
use koszulkit::algebra::{Algebra, ComputeOptions};
use koszulkit::complexes::{homology, koszul_certificate, koszul_complex};
use koszulkit::exactlin::{primes, PrimeField, Rationals};
use koszulkit::presets::{self_duality, yang_mills, Metric, Sign};

fn prime() -> PrimeField {
    PrimeField::new(primes::random_primes(0, 1)[0]).unwrap()
}

fn ideal_slices(c: &mut Criterion) {
    let ym = Arc::new(yang_mills(&Metric::euclidean(4)).unwrap());
    let mut group = c.benchmark_group("ideal_slice");
    group.sample_size(10);
    for n in [5, 6, 7] {
        group.bench_function(format!("yang-mills/modular/{n}"), |b| {
            b.iter(|| {
                let alg = Algebra::new(Arc::clone(&ym), prime()).unwrap();
                black_box(alg.graded_dim(n).unwrap())
            })
        });
    }
    group.bench_function("yang-mills/exact/5", |b| {
        b.iter(|| {
            let alg = Algebra::new(Arc::clone(&ym), Rationals).unwrap();
            black_box(alg.graded_dim(5).unwrap())
        })
    });
    group.finish();
}

fn koszul_homology(c: &mut Criterion) {
    let ym = Arc::new(yang_mills(&Metric::euclidean(4)).unwrap());
    let mut group = c.benchmark_group("homology");
    group.sample_size(10);
    group.bench_function("yang-mills/6", |b| {
        b.iter(|| {
            let alg = Arc::new(Algebra::new(Arc::clone(&ym), prime()).unwrap());
            let t = koszul_complex(alg, 6).unwrap();
            black_box(homology(&t, 6).unwrap())
        })
    });
    let sd = self_duality(Sign::Plus);
    group.bench_function("self-duality/certificate/7", |b| {
        b.iter(|| black_box(koszul_certificate(&sd, 7, &ComputeOptions::default()).unwrap()))
    });
    group.finish();
}

criterion_group!(benches, ideal_slices, koszul_homology);
criterion_main!(benches);
