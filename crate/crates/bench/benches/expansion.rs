use criterion::{black_box, criterion_group, criterion_main, Criterion};
use dickman_bench::{default_tables, geometric_grid};
use dickman_core::seriesgen::{dickman_constants, e_coefficients};
use dickman_core::{Expander, ExpansionRequest, TableExtents};

fn tables(c: &mut Criterion) {
    c.bench_function("build default coefficient tables", |b| {
        b.iter(|| dickman_core::CoefficientTables::build(black_box(TableExtents::default())))
    });
    c.bench_function("dickman constants r<=30", |b| {
        b.iter(|| dickman_constants(black_box(30)))
    });
    c.bench_function("E table 30x12", |b| {
        b.iter(|| e_coefficients(black_box(30), black_box(12)))
    });
}

fn evaluate(c: &mut Criterion) {
    let t = default_tables();
    let x = Expander::new(&t);
    let grid = geometric_grid(5.0, 1e4, 1.5);
    c.bench_function("k_ell ell=3 J=8 geometric grid", |b| {
        b.iter(|| {
            grid.iter()
                .map(|&u| x.k_ell(&ExpansionRequest::new(3, 0, u, 8)).unwrap().value)
                .sum::<f64>()
        })
    });
    c.bench_function("k_ell_kappa ell=2 kappa=2 J=6 u=30", |b| {
        b.iter(|| x.k_ell_kappa(black_box(&ExpansionRequest::new(2, 2, 30.0, 6))))
    });
}

criterion_group!(benches, tables, evaluate);
criterion_main!(benches);
