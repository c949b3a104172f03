use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use llv_core::arithmetic::arithmetic_search;
use llv_core::harmonic::{project_harmonic, psi_power_line};
use llv_core::isometry::b_lambda;
use llv_core::lines::{chern_phio, ell_structure_sheaf_harmonic, phio_h_with_square};
use llv_core::monodromy::{dmon_lift, ek_pipeline, phi_p};
use llv_core::{q, K32Ring, LLVSpace, ReducedSymElement};

fn harmonic(c: &mut Criterion) {
    let s = LLVSpace::hilb(4).unwrap();
    let mut v = vec![q(0); s.rank()];
    v[0] = q(1);
    v[1] = q(3);
    v[22] = q(-1);
    let gamma = s.triple(q(2), v, q(5));
    c.bench_function("psi_power_line K3^[4]", |b| b.iter(|| psi_power_line(black_box(&s), &gamma, 4, &[]).unwrap()));
    let (ctx, _) = psi_power_line(&s, &gamma, 4, &[]).unwrap();
    let x = ReducedSymElement::gen(0).pow(6);
    c.bench_function("project_harmonic degree 6", |b| b.iter(|| project_harmonic(&ctx, black_box(&x)).unwrap()));
    let k6 = LLVSpace::hilb(6).unwrap();
    c.bench_function("ell(O) harmonic K3^[6]", |b| b.iter(|| ell_structure_sheaf_harmonic(black_box(&k6)).unwrap()));
}

fn ring(c: &mut Criterion) {
    let s = LLVSpace::hilb(2).unwrap();
    c.bench_function("K32Ring::new", |b| b.iter(|| K32Ring::new(black_box(&s)).unwrap()));
    let h = phio_h_with_square(&s, 2, &q(22)).unwrap();
    c.bench_function("chern_phio r0 = 2", |b| b.iter(|| chern_phio(&s, 2, black_box(&h)).unwrap()));
}

fn arithmetic(c: &mut Criterion) {
    let bound = q(1000);
    c.bench_function("arithmetic_search 60, 1000", |b| b.iter(|| arithmetic_search(black_box(60), &bound, &[1, 2]).unwrap()));
}

fn monodromy(c: &mut Criterion) {
    let k3 = LLVSpace::k3();
    let mut mu = vec![q(0); 22];
    mu[0] = q(1);
    mu[7] = q(-2);
    let g = phi_p(&k3).unwrap().compose(&b_lambda(&k3, &mu).unwrap()).unwrap();
    c.bench_function("dmon_lift n = 3", |b| b.iter(|| dmon_lift(black_box(&g), 3).unwrap()));
    c.bench_function("ek_pipeline k = 3", |b| b.iter(|| ek_pipeline(black_box(3)).unwrap()));
}

criterion_group!(benches, harmonic, ring, arithmetic, monodromy);
criterion_main!(benches);
