use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use selberg_core::integrals::{eval_sample, BasisTag, QuadratureConfig, Schedule};
use selberg_core::qkernel::ExponentChart;

fn schedules(c: &mut Criterion) {
    let cases = [
        ("m1", ExponentChart::real(1, -0.4, -0.4, -0.4, 0.3).unwrap()),
        ("m2", ExponentChart::real(2, -0.4, -0.4, -0.4, 0.1).unwrap()),
    ];
    let mut group = c.benchmark_group("eval_sample");
    group.sample_size(10);
    for (name, chart) in &cases {
        for (label, schedule) in [
            ("parallel", Schedule::Parallel),
            ("sequential", Schedule::Sequential),
        ] {
            let cfg = QuadratureConfig {
                schedule,
                ..QuadratureConfig::default()
            };
            group.bench_with_input(BenchmarkId::new(label, name), chart, |b, chart| {
                b.iter(|| eval_sample(black_box(chart), 0.3, BasisTag::I, &cfg).unwrap())
            });
        }
    }
    group.finish();
}

criterion_group!(benches, schedules);
criterion_main!(benches);
