use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};

use ptk_bench::{scene_bivector, scene_structure};
use ptk_core::mvcalc::{int, schouten_bracket, volume_form, PolyScalar};
use ptk_core::poisson::{lemma1_residual, solve_invariant_density};

fn schouten(c: &mut Criterion) {
    for name in ["so3", "p2-log", "symplectic-r4"] {
        let pi = scene_bivector(name);
        c.bench_function(&format!("schouten/{name}"), |b| {
            b.iter(|| schouten_bracket(black_box(&pi), black_box(&pi)))
        });
    }
}

fn lemma1(c: &mut Criterion) {
    let pi = scene_bivector("symplectic-r4");
    let g = &PolyScalar::var(4, 0) * &PolyScalar::var(4, 3) + PolyScalar::constant(4, int(2));
    let mu = volume_form(4, g);
    c.bench_function("lemma1/symplectic-r4/k=1", |b| {
        b.iter(|| lemma1_residual(black_box(&pi), black_box(&mu), 1))
    });
}

fn density_solver(c: &mut Criterion) {
    let pi = scene_structure("sl2");
    c.bench_function("solve_invariant_density/sl2/degree2", |b| {
        b.iter(|| solve_invariant_density(black_box(&pi), 2))
    });
}

criterion_group!(benches, schouten, lemma1, density_solver);
criterion_main!(benches);
