use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use fermat_k3::fixed_point::solve_lefschetz;
use fermat_k3::lattice::{invariant_sublattice, smith_normal_form, IntMatrix, RootPartition, REFERENCE_INVARIANT_GRAM};
use fermat_k3::mathieu::{m23_construct, m24_construct, GolayCode};
use fermat_k3::matrix_groups::fermat;
use fermat_k3::CycNumber;

fn cyclotomic(c: &mut Criterion) {
    let a = &(&CycNumber::zeta(24, 5) + &CycNumber::from_ratio(3, 7)) * &CycNumber::zeta(8, 1);
    let b = &CycNumber::zeta(12, 7) - &CycNumber::from_ratio(2, 5);
    c.bench_function("cyclotomic/mul", |bench| bench.iter(|| black_box(&a) * black_box(&b)));
    c.bench_function("cyclotomic/inv", |bench| bench.iter(|| black_box(&a).inv().unwrap()));
}

fn groups(c: &mut Criterion) {
    let mut group = c.benchmark_group("groups");
    group.sample_size(10);
    group.bench_function("f384_tilde_closure", |b| b.iter(fermat::f384_tilde));
    let code = GolayCode::construct();
    group.bench_function("golay_construct", |b| b.iter(GolayCode::construct));
    group.bench_function("m24_schreier_sims", |b| b.iter(|| m24_construct(black_box(&code)).unwrap()));
    let m23 = m23_construct(&m24_construct(&code).unwrap()).unwrap();
    group.bench_function("sylow2_m23", |b| b.iter(|| m23.sylow2(black_box(0)).unwrap()));
    group.finish();
}

fn lattices(c: &mut Criterion) {
    let gram = IntMatrix::from_i64(&REFERENCE_INVARIANT_GRAM).unwrap();
    c.bench_function("lattice/smith_normal_form", |b| b.iter(|| smith_normal_form(black_box(&gram))));
    let code = GolayCode::construct();
    // orbit shape [1, 1, 2, 4, 16] on consecutive points
    let partition = RootPartition::new(&[vec![1], vec![2], vec![3, 4], vec![5, 6, 7, 8], (9..=24).collect()]).unwrap();
    c.bench_function("lattice/invariant_sublattice", |b| b.iter(|| invariant_sublattice(&code, black_box(&partition)).unwrap()));
}

fn fixed_points(c: &mut Criterion) {
    c.bench_function("lefschetz/order_12", |b| b.iter(|| solve_lefschetz(black_box(12), 4, 4).unwrap()));
}

criterion_group!(benches, cyclotomic, groups, lattices, fixed_points);
criterion_main!(benches);
