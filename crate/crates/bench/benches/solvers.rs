use std::hint::black_box;
use std::sync::Arc;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use robustsub::matroid::{Matroid, UnionMatroid};
use robustsub::multilinear::{multilinear_estimate, ExactExtension};
use robustsub::offline::{extended_greedy, robust_matroid_solve};
use robustsub::rounding::{decompose, swap_round};
use robustsub::{EstimatorConfig, FractionalPoint, GammaSearch};
use robustsub_bench::{contiguous_partition, disjoint_basis, facility_location};

fn greedy(c: &mut Criterion) {
    let mut group = c.benchmark_group("extended_greedy");
    for n in [100, 200, 400] {
        let f = facility_location(n, 200, 1);
        let m = contiguous_partition(n, 5, 3);
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |bench, _| {
            bench.iter(|| extended_greedy(&f, m.as_ref(), black_box(8)).unwrap())
        });
    }
    group.finish();

    let objectives: Vec<_> = (0..3).map(|s| facility_location(120, 100, s)).collect();
    let m = contiguous_partition(120, 4, 2);
    c.bench_function("robust_matroid_solve/n120_k3", |bench| {
        bench.iter(|| {
            robust_matroid_solve(&objectives, m.as_ref(), black_box(0.1), GammaSearch::Binary)
                .unwrap()
        })
    });
}

fn multilinear(c: &mut Criterion) {
    let f = facility_location(12, 50, 2);
    let y = FractionalPoint::new((0..12).map(|e| (e as f64 + 0.5) / 12.0).collect()).unwrap();
    c.bench_function("multilinear/exact_table_n12", |bench| {
        bench.iter(|| {
            ExactExtension::new(&f)
                .unwrap()
                .value(black_box(&y))
                .unwrap()
        })
    });
    let table = ExactExtension::new(&f).unwrap();
    c.bench_function("multilinear/exact_gradient_n12", |bench| {
        bench.iter(|| table.gradient(black_box(&y)).unwrap())
    });
    let g = facility_location(200, 200, 3);
    let y = FractionalPoint::new(vec![0.05; 200]).unwrap();
    let cfg = EstimatorConfig::new(256, 9);
    c.bench_function("multilinear/sampled_value_n200_256", |bench| {
        bench.iter(|| multilinear_estimate(&g, black_box(&y), &cfg).unwrap())
    });
}

fn rounding(c: &mut Criterion) {
    let (n, q, b, ell) = (200, 5, 3, 4);
    let base = contiguous_partition(n, q, b);
    let base: Arc<dyn Matroid> = base;
    let union = UnionMatroid::new(base, ell).unwrap();
    // Half of each of 2ℓ disjoint bases: total mass ℓ·rank, inside ℓ·P(M).
    let mut y = vec![0.0; n];
    for i in 0..2 * ell {
        for e in disjoint_basis(n, q, b, i).iter() {
            y[e] = 0.5;
        }
    }
    let y = FractionalPoint::new(y).unwrap();
    c.bench_function("rounding/decompose_n200_l4", |bench| {
        bench.iter(|| decompose(black_box(&y), &union).unwrap())
    });
    let d = decompose(&y, &union).unwrap();
    c.bench_function("rounding/swap_round_n200_l4", |bench| {
        let mut seed = 0;
        bench.iter(|| {
            seed += 1;
            swap_round(&d, &union, seed).unwrap()
        })
    });
}

criterion_group!(benches, greedy, multilinear, rounding);
criterion_main!(benches);
