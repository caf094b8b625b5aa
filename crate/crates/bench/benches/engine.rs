use std::hint::black_box;
use std::sync::Arc;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use wcf_bench::{balanced_params, lossy_budget};
use wcf_core::adversary::{alice_cheat_bruteforce, alice_cheat_lossy, scf_solve};
use wcf_core::fock::{apply_beamsplitter, apply_loss, prepare_fock, BeamSplitterSpec, FockBasis};
use wcf_core::protocol::{honest_closed_form, honest_simulated, LossBudget};
use wcf_core::solver::{link_budget, solve_fair_balanced, sweep, LinkModel};

fn fock(c: &mut Criterion) {
    let mut g = c.benchmark_group("fock");
    for cap in [2, 4, 6] {
        let basis = Arc::new(FockBasis::new(3, cap).unwrap());
        let state = prepare_fock(basis.clone(), &[cap / 2, cap - cap / 2, 0]).unwrap();
        let bs = BeamSplitterSpec::new(0.3, 0, 1).unwrap();
        g.bench_with_input(BenchmarkId::new("beamsplitter", cap), &state, |b, s| {
            b.iter(|| apply_beamsplitter(black_box(s), &bs).unwrap())
        });
        g.bench_with_input(BenchmarkId::new("loss", cap), &state, |b, s| {
            b.iter(|| apply_loss(black_box(s), 1, 0.8).unwrap())
        });
    }
    g.finish();
}

fn protocol(c: &mut Criterion) {
    let p = balanced_params();
    let l = lossy_budget();
    let basis = Arc::new(FockBasis::new(3, 1).unwrap());
    c.bench_function("honest_closed_form", |b| b.iter(|| honest_closed_form(black_box(&p), &l).unwrap()));
    c.bench_function("honest_simulated", |b| {
        b.iter(|| honest_simulated(black_box(&p), &l, basis.clone()).unwrap())
    });
}

fn adversary(c: &mut Criterion) {
    let p = balanced_params();
    let l = lossy_budget();
    c.bench_function("alice_cheat_lossy", |b| b.iter(|| alice_cheat_lossy(black_box(&p), &l).unwrap()));
    let mut g = c.benchmark_group("bruteforce");
    for cap in [3, 5] {
        let basis = Arc::new(FockBasis::new(3, cap).unwrap());
        g.bench_with_input(BenchmarkId::from_parameter(cap), &basis, |b, basis| {
            b.iter(|| alice_cheat_bruteforce(&p, &l, basis.clone()).unwrap())
        });
    }
    g.finish();
    c.bench_function("scf_solve", |b| b.iter(|| scf_solve().unwrap()));
}

fn solver(c: &mut Criterion) {
    let link = link_budget(&LinkModel::at(0.3), 0.95, 0.95).unwrap();
    c.bench_function("solve_fair_balanced", |b| b.iter(|| solve_fair_balanced(black_box(0.57), &link).unwrap()));
    c.bench_function("solve_lossless", |b| {
        b.iter(|| solve_fair_balanced(black_box(0.5857864376269049), &LossBudget::lossless()).unwrap())
    });
    let d: Vec<f64> = (0..=40).map(|i| 0.05 * i as f64).collect();
    c.bench_function("sweep_41", |b| b.iter(|| sweep(black_box(&d), 0.57, 0.95).unwrap()));
}

criterion_group!(benches, fock, protocol, adversary, solver);
criterion_main!(benches);
