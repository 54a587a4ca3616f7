use criterion::{criterion_group, criterion_main, Criterion};
use heatimages_core::kernel::DEFAULT_EPSILON;
use heatimages_core::{enumerate_images, partition_numeric, DomainDescriptor, ImageSystem, QuadratureConfig};

fn images(c: &mut Criterion) {
    let d = DomainDescriptor::triangle(2, 3, 6, 1.0).unwrap();
    let y = d.reference_point();
    c.bench_function("enumerate_images triangle-236 cutoff 4", |b| {
        b.iter(|| enumerate_images(&d, &y, 4.0).unwrap())
    });
    let cube = DomainDescriptor::cuboid(1.0, 1.0, 2.0).unwrap();
    c.bench_function("image system box t=0.05", |b| {
        b.iter(|| ImageSystem::new(&cube, 0.05, DEFAULT_EPSILON).unwrap())
    });
}

fn traces(c: &mut Criterion) {
    let quad = QuadratureConfig::default();
    let mut group = c.benchmark_group("partition_numeric");
    group.sample_size(10);
    let rect = DomainDescriptor::rectangle(1.0, 2.0).unwrap();
    group.bench_function("rectangle t=0.02", |b| {
        b.iter(|| partition_numeric(&rect, 0.02, &quad, DEFAULT_EPSILON).unwrap())
    });
    let tri = DomainDescriptor::triangle(3, 3, 3, 1.0).unwrap();
    group.bench_function("triangle-333 t=0.005", |b| {
        b.iter(|| partition_numeric(&tri, 0.005, &quad, DEFAULT_EPSILON).unwrap())
    });
    group.finish();
}

criterion_group!(benches, images, traces);
criterion_main!(benches);
