use criterion::{criterion_group, criterion_main, Criterion};
use optoring::keldysh::observables::{i_nl_at, i_nl_map};
use optoring::keldysh::SelfEnergyModel;
use optoring::par::map_range_seq;
use optoring::SystemParams;
use std::hint::black_box;

fn grid(c: &mut Criterion) {
    let base = SystemParams { delta: -1.5, kappa: 0.1, gamma: 1e-5, g1_bare: 2e-4, ..Default::default() };
    let n = 16;
    let axis: Vec<f64> = (0..n).map(|i| base.g_cri() * (i as f64 + 0.5) / n as f64).collect();
    let model = SelfEnergyModel::default();
    let mut g = c.benchmark_group("i_nl_map_16x16");
    g.sample_size(10);
    g.bench_function("parallel", |b| b.iter(|| i_nl_map(black_box(&base), &axis, &axis, 1001, &model).unwrap()));
    g.bench_function("sequential", |b| {
        b.iter(|| {
            map_range_seq(n * n, |k| i_nl_at(black_box(&base), axis[k % n], axis[k / n], 1001, &model).unwrap())
        })
    });
    g.finish();
}

criterion_group!(benches, grid);
criterion_main!(benches);
