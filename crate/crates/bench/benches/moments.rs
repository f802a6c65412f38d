use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use num_complex::Complex64;

use cue_moments::combinatorics::{kostka, magic_square_count};
use cue_moments::cue_asymptotic::{bulk_moment, micro_limit};
use cue_moments::cue_exact::finite_n_moment;
use cue_moments::haar_mc::{sample_cue_eigenphases, sample_cue_secular, sample_rng};
use cue_moments::zeta_side::{dirichlet_sum, euler_a, zeta_deriv, EulerProductConfig};
use cue_moments::{DerivativeIndex, PartitionShape};

fn di(v: &[u32]) -> DerivativeIndex {
    DerivativeIndex::new(v.to_vec()).unwrap()
}

fn asymptotic(c: &mut Criterion) {
    let z = Complex64::new(0.3, 0.4);
    let mut g = c.benchmark_group("bulk");
    for (mu, nu) in [(vec![1, 1], vec![1, 1]), (vec![2, 1, 1], vec![1, 2, 1]), (vec![3, 3], vec![3, 3])] {
        let (m, n) = (di(&mu), di(&nu));
        g.bench_function(BenchmarkId::from_parameter(format!("{m}|{n}")), |b| {
            b.iter(|| bulk_moment(black_box(&m), black_box(&n), z).unwrap())
        });
    }
    g.finish();

    let mut g = c.benchmark_group("micro");
    for (mu, nu) in [(vec![1, 1], vec![1, 1]), (vec![2, 1, 0], vec![0, 1, 2]), (vec![2, 2, 2], vec![2, 2, 2])] {
        let (m, n) = (di(&mu), di(&nu));
        for cv in [0.0, 0.5] {
            g.bench_function(BenchmarkId::new(format!("{m}|{n}"), cv), |b| {
                b.iter(|| micro_limit(black_box(&m), black_box(&n), Complex64::new(cv, 0.0)).unwrap())
            });
        }
    }
    g.finish();
}

fn exact(c: &mut Criterion) {
    let (m, n) = (di(&[2, 1]), di(&[1, 2]));
    let mut g = c.benchmark_group("finite_n");
    for size in [16u32, 128, 1024] {
        g.bench_function(BenchmarkId::new("float", size), |b| {
            b.iter(|| finite_n_moment(&m, &n, Complex64::new(0.3, 0.4), black_box(size)).unwrap())
        });
        g.bench_function(BenchmarkId::new("rational", size), |b| {
            b.iter(|| finite_n_moment(&m, &n, Complex64::new(0.5, 0.0), black_box(size)).unwrap())
        });
    }
    g.finish();
}

fn sampling(c: &mut Criterion) {
    let mut g = c.benchmark_group("sampler");
    for size in [16usize, 64, 256] {
        g.bench_function(BenchmarkId::new("qr", size), |b| {
            let mut rng = sample_rng(1, 0);
            b.iter(|| sample_cue_eigenphases(black_box(size), &mut rng))
        });
        g.bench_function(BenchmarkId::new("verblunsky", size), |b| {
            let mut rng = sample_rng(1, 0);
            b.iter(|| sample_cue_secular(black_box(size), &mut rng))
        });
    }
    g.finish();
}

fn combinatorics(c: &mut Criterion) {
    let lambda = PartitionShape::new(vec![5, 4, 3, 2, 1]).unwrap();
    let content = di(&[3, 3, 3, 3, 3]);
    c.bench_function("kostka/54321", |b| b.iter(|| kostka(black_box(&lambda), black_box(&content))));
    c.bench_function("magic_square/4x4x6", |b| b.iter(|| magic_square_count(black_box(&[6; 4]), black_box(&[6; 4]))));
}

fn zeta(c: &mut Criterion) {
    let cfg = EulerProductConfig::default();
    c.bench_function("zeta_deriv/3", |b| b.iter(|| zeta_deriv(3, black_box(1.6)).unwrap()));
    c.bench_function("euler_a/3x3", |b| b.iter(|| euler_a(3, 3, black_box(&cfg)).unwrap()));
    let (m, n) = (di(&[1, 1]), di(&[1, 1]));
    c.bench_function("dirichlet_sum/1e5", |b| b.iter(|| dirichlet_sum(&m, &n, 1.0, black_box(100_000)).unwrap()));
}

criterion_group!(benches, asymptotic, exact, sampling, combinatorics, zeta);
criterion_main!(benches);
