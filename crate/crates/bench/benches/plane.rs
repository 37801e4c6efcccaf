use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use termint::plane2d::{tail2d, CurveFamily, Integrand2D, Kernel2D, QuadConfig2D};

fn tails(c: &mut Criterion) {
    let cfg = QuadConfig2D::default();
    let gaussian = Integrand2D::gaussian();
    let mut group = c.benchmark_group("tail2d");
    group.sample_size(20);
    for fam in [CurveFamily::circle(), CurveFamily::offset_circle([1.0, 0.0]), CurveFamily::square()] {
        group.bench_function(format!("gaussian_point_{}", fam.label()), |b| {
            b.iter(|| tail2d(&gaussian, &Kernel2D::point(), black_box(&fam), 20.0, &cfg).unwrap())
        });
    }
    let sin = Integrand2D::sin_r2();
    let disk = Kernel2D::uniform_disk(2.0).unwrap();
    let fine = QuadConfig2D {
        radial_panel: 0.02,
        ..cfg.matched_to(1e-2)
    };
    group.bench_function("sin_r2_disk_circle", |b| {
        b.iter(|| tail2d(&sin, &disk, &CurveFamily::circle(), black_box(30.0), &fine).unwrap())
    });
    group.finish();
}

criterion_group!(benches, tails);
criterion_main!(benches);
