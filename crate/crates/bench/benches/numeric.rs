use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use num_complex::Complex64;
use qps_core::generators::foldy_generators;
use qps_core::numrep::{gaussian_family, SectorChoice};
use qps_core::{realize, FockField, GridRep, SectorMode, Spin};

fn position_operator(c: &mut Criterion) {
    let mut group = c.benchmark_group("apply_q");
    for n in [16, 32] {
        let g = GridRep::new(3, n, 1.1, 1.0, Spin::HALF).unwrap();
        let psi = gaussian_family(0, 1, &g, None, SectorChoice::Both).remove(0);
        group.bench_with_input(BenchmarkId::from_parameter(n), &psi, |bch, psi| {
            bch.iter(|| {
                let mut v: Vec<Complex64> = psi.clone();
                g.apply_q(0, &mut v);
                v
            })
        });
    }
    group.finish();
}

fn boost_generator(c: &mut Criterion) {
    let gens = foldy_generators(SectorMode::Full);
    let g = GridRep::new(3, 16, 1.1, 1.0, Spin::HALF).unwrap();
    let k1 = gens.get("K1").unwrap();
    let psi = gaussian_family(0, 1, &g, None, SectorChoice::Both).remove(0);
    let map = realize(k1, &g).unwrap();
    let mut group = c.benchmark_group("boost");
    group.sample_size(20);
    group.bench_function("realize", |bch| bch.iter(|| realize(black_box(k1), &g).unwrap()));
    group.bench_function("apply", |bch| bch.iter(|| map.apply(black_box(&psi))));
    group.finish();
}

fn fock_space(c: &mut Criterion) {
    let mut group = c.benchmark_group("fock");
    group.sample_size(10);
    group.bench_function("build_8_3", |bch| bch.iter(|| FockField::new(black_box(8), 1.0, 3).unwrap()));
    group.finish();
}

criterion_group!(benches, position_operator, boost_generator, fock_space);
criterion_main!(benches);
