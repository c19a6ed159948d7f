use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::time::Duration;

use wigner_core::scenarios::{run_cut_scaling, CutScalingConfig};

fn cut_scaling(c: &mut Criterion) {
    let mut g = c.benchmark_group("cut_scaling");
    g.sample_size(10).measurement_time(Duration::from_secs(5));
    for m in [4, 8, 12, 16] {
        g.bench_with_input(BenchmarkId::from_parameter(m), &m, |b, &m| {
            b.iter(|| run_cut_scaling(&CutScalingConfig::new(m, 0.1)).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, cut_scaling);
criterion_main!(benches);
