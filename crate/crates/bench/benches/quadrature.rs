use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};

use ptk_core::catalog::builtin_scene;
use ptk_core::quadrature::NodeCounts;
use ptk_core::transversal::{hnpt_certificate, pair};

fn winding(c: &mut Criterion) {
    let s = builtin_scene("book-Id").unwrap();
    let circle = s.patch("circle").unwrap();
    let alpha = s.form("winding").unwrap();
    c.bench_function("pair/book-Id/winding", |b| {
        b.iter(|| {
            pair(
                black_box(&alpha),
                &s.chart.coords,
                &circle,
                NodeCounts::default(),
                1e-12,
            )
            .unwrap()
        })
    });
}

fn certificate(c: &mut Criterion) {
    let s = builtin_scene("so3-sphere").unwrap();
    let pi = s.poisson_structure().unwrap().unwrap();
    let (_, mu) = s.densities().unwrap().into_iter().next().unwrap();
    let north = s.patch("N").unwrap();
    c.bench_function("hnpt_certificate/so3-sphere/N", |b| {
        b.iter(|| {
            hnpt_certificate(
                &pi,
                &mu,
                &s.chart.coords,
                black_box(&north),
                NodeCounts::default(),
                1e-9,
            )
            .unwrap()
        })
    });
}

criterion_group!(benches, winding, certificate);
criterion_main!(benches);
