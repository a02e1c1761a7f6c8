use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use randdiag_bench::{hermitian_fixture, normal_fixture, unitary_fixture, SIZES};
use randdiag_core::{eigh, rand_diag, schur, RngState};

fn diagonalizers(c: &mut Criterion) {
    let mut group = c.benchmark_group("diagonalize");
    group.sample_size(10);
    for n in SIZES {
        for (kind, a) in [
            ("unitary", unitary_fixture(n)),
            ("normal", normal_fixture(n)),
        ] {
            group.bench_with_input(
                BenchmarkId::new(format!("randdiag/{kind}"), n),
                &a,
                |b, a| {
                    let mut rng = RngState::new(0);
                    b.iter(|| rand_diag(black_box(a), &mut rng).unwrap())
                },
            );
            group.bench_with_input(BenchmarkId::new(format!("schur/{kind}"), n), &a, |b, a| {
                b.iter(|| schur(black_box(a)).unwrap())
            });
        }
    }
    group.finish();
}

fn hermitian(c: &mut Criterion) {
    let mut group = c.benchmark_group("eigh");
    group.sample_size(10);
    for n in SIZES {
        let h = hermitian_fixture(n);
        group.bench_with_input(BenchmarkId::from_parameter(n), &h, |b, h| {
            b.iter(|| eigh(black_box(h)).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, diagonalizers, hermitian);
criterion_main!(benches);
