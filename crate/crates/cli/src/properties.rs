//! Randomized invariant suites, 1000 cases each from the run seed.

use anyhow::Result;
use fermat_k3::lattice::*;
use fermat_k3::mathieu::{Bitmask24, GolayCode};
use fermat_k3::matrix::CycMatrix;
use fermat_k3::matrix_groups::{alpha_multiplier, GroupKind, MatrixGroup, ProjMatrix};
use fermat_k3::polynomial::{apply_matrix, monomials, Poly4};
use fermat_k3::CycNumber;
use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use proptest::prelude::*;
use proptest::test_runner::{Config, RngSeed, TestCaseResult, TestRunner};
use serde_json::json;

use crate::checks::Outcome;
use crate::context::Context;

pub const CASES: u32 = 1000;

fn run<S: Strategy>(ctx: &Context, strategy: S, test: impl Fn(S::Value) -> TestCaseResult) -> Result<Outcome> {
    let config = Config {
        cases: CASES,
        rng_seed: RngSeed::Fixed(ctx.seed()),
        failure_persistence: None,
        ..Config::default()
    };
    let mut runner = TestRunner::new(config);
    let (passed, summary) = match runner.run(&strategy, test) {
        Ok(()) => (true, format!("{CASES} cases, no counterexample")),
        Err(e) => (false, e.to_string()),
    };
    Ok(Outcome { passed, summary, data: json!({ "cases": CASES, "seed": ctx.seed().to_string() }) })
}

fn cyc() -> impl Strategy<Value = CycNumber> {
    let conductor = prop::sample::select(vec![1u32, 3, 4, 5, 6, 8, 12, 24]);
    (conductor, prop::collection::vec((-5i64..=5, 1i64..=4, 0i64..48), 0..5)).prop_map(|(n, terms)| {
        terms.into_iter().fold(CycNumber::zero(), |acc, (c, d, k)| &acc + &(&CycNumber::from_ratio(c, d) * &CycNumber::zeta(n, k)))
    })
}

fn quartic() -> impl Strategy<Value = Poly4> {
    prop::collection::vec((prop::sample::select(monomials(4)), -3i64..=3), 1..6).prop_map(|terms| Poly4::from_int_terms(&terms))
}

fn small_int_matrix() -> impl Strategy<Value = CycMatrix> {
    prop::collection::vec(-2i64..=2, 16).prop_map(|v| CycMatrix::from_fn(4, |i, j| CycNumber::from_integer(v[4 * i + j])))
}

fn int_matrix() -> impl Strategy<Value = IntMatrix> {
    (1usize..=5, 1usize..=5)
        .prop_flat_map(|(r, c)| prop::collection::vec(prop::collection::vec(-20i64..=20, c), r))
        .prop_map(|rows| IntMatrix::from_i64(&rows).expect("nonempty rectangular rows"))
}

#[derive(Clone, Debug)]
enum Op {
    Swap(usize, usize),
    Negate(usize),
    AddMultiple(usize, usize, i64),
}

fn ops() -> impl Strategy<Value = Vec<Op>> {
    let op = prop_oneof![
        (0usize..5, 0usize..5).prop_map(|(a, b)| Op::Swap(a, b)),
        (0usize..5).prop_map(Op::Negate),
        (0usize..5, 0usize..5, -4i64..=4).prop_map(|(a, b, k)| Op::AddMultiple(a, b, k)),
    ];
    prop::collection::vec(op, 0..10)
}

fn unimodular(n: usize, ops: &[Op]) -> IntMatrix {
    let mut rows = IntMatrix::identity(n).to_rows();
    for op in ops {
        match *op {
            Op::Swap(a, b) => rows.swap(a % n, b % n),
            Op::Negate(a) => rows[a % n].iter_mut().for_each(|x| *x = -&*x),
            Op::AddMultiple(a, b, k) if a % n != b % n => {
                let src = rows[b % n].clone();
                for (x, y) in rows[a % n].iter_mut().zip(src) {
                    *x += y * k;
                }
            }
            Op::AddMultiple(..) => {}
        }
    }
    IntMatrix::new(rows).expect("square")
}

/// At most three blocks, cut out by a codeword and a random set.
fn partition(code: &GolayCode, word: usize, extra: u32, mode: u8) -> RootPartition {
    let word = code.words()[word].bits();
    let extra = extra & 0xff_ffff;
    let labels: Vec<usize> = (0..24)
        .map(|i| {
            let inw = (word >> i & 1) as usize;
            let ine = (extra >> i & 1) as usize;
            match mode {
                0 => inw,
                1 => inw + inw * ine,
                _ => 2 * ine + inw - inw * ine,
            }
        })
        .collect();
    RootPartition::from_assignment(&labels).expect("24 labels")
}

fn fail(e: impl std::fmt::Display) -> TestCaseError {
    TestCaseError::fail(e.to_string())
}

pub fn ring_axioms(ctx: &Context) -> Result<Outcome> {
    run(ctx, (cyc(), cyc(), cyc()), |(a, b, c)| {
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a + &CycNumber::zero(), a.clone());
        prop_assert_eq!(&a * &CycNumber::one(), a.clone());
        prop_assert!((&a + &(-&a)).is_zero());
        if !a.is_zero() {
            prop_assert!((&a * &a.inv().map_err(fail)?).is_one());
        }
        prop_assert_eq!(CycNumber::parse_compact(&a.to_compact()).map_err(fail)?, a);
        Ok(())
    })
}

pub fn closure_idempotence(ctx: &Context) -> Result<Outcome> {
    let g = ctx.f128();
    let n = g.order();
    run(ctx, (0..n, 0..n, 0..n), |(i, j, k)| {
        let gens = [g.elements()[i].clone(), g.elements()[j].clone()];
        let h = MatrixGroup::closure(GroupKind::Projective, &gens, 4096).map_err(fail)?;
        prop_assert!(h.elements().iter().all(|x| g.contains(x)));
        prop_assert_eq!(g.order() % h.order(), 0);
        let x = h.elements()[k % h.order()].clone();
        let again = MatrixGroup::closure(GroupKind::Projective, &[gens[0].clone(), gens[1].clone(), x], 4096).map_err(fail)?;
        prop_assert!(again.same_elements(&h));
        let regenerated = MatrixGroup::closure(GroupKind::Projective, h.generators(), 4096).map_err(fail)?;
        prop_assert!(regenerated.same_elements(&h));
        Ok(())
    })
}

pub fn alpha_homomorphism(ctx: &Context) -> Result<Outcome> {
    let g = ctx.f384_tilde();
    let n = g.order();
    run(ctx, (0..n, 0..n), |(i, j)| {
        let a = ProjMatrix::new(&g.elements()[i]).map_err(fail)?;
        let b = ProjMatrix::new(&g.elements()[j]).map_err(fail)?;
        let lhs = alpha_multiplier(&a.mul(&b)).map_err(fail)?;
        let rhs = &alpha_multiplier(&a).map_err(fail)? * &alpha_multiplier(&b).map_err(fail)?;
        prop_assert_eq!(lhs, rhs);
        Ok(())
    })
}

pub fn substitution_action(ctx: &Context) -> Result<Outcome> {
    let g = ctx.f384_tilde();
    run(ctx, (0..g.order(), quartic(), small_int_matrix()), |(i, f, m)| {
        let x = &g.elements()[i];
        prop_assert_eq!(apply_matrix(x, &apply_matrix(&m, &f)), apply_matrix(&(&m * x), &f));
        Ok(())
    })
}

pub fn smith_invariance(ctx: &Context) -> Result<Outcome> {
    run(ctx, (int_matrix(), ops(), ops()), |(a, left, right)| {
        let u = unimodular(a.nrows(), &left);
        let v = unimodular(a.ncols(), &right);
        let b = u.mul(&a).and_then(|ua| ua.mul(&v)).map_err(fail)?;
        let d = smith_normal_form(&a);
        prop_assert_eq!(smith_normal_form(&b), d.clone());
        prop_assert!(d.windows(2).all(|w| w[1].is_zero() || (w[0].is_positive() && (&w[1] % &w[0]).is_zero())));
        if a.is_square() {
            prop_assert_eq!(a.determinant().map_err(fail)?.abs(), d.iter().product::<BigInt>());
        }
        Ok(())
    })
}

pub fn invariant_sublattice_enumeration(ctx: &Context) -> Result<Outcome> {
    let code = ctx.code()?;
    run(ctx, (0usize..code.words().len(), any::<u32>(), 0u8..3), |(w, extra, mode)| {
        let p = partition(code, w, extra, mode);
        let inv = invariant_sublattice(code, &p).map_err(fail)?;
        let brute = enumerate_fixed_vectors(code, &p, 1).map_err(fail)?;
        prop_assert!(brute.iter().all(|v| inv.contains(v)));
        prop_assert!(inv.is_spanned_by(&brute));
        prop_assert_eq!(inv.rank(), p.blocks().len());
        let discriminant = discriminant_group(inv.lattice()).map_err(fail)?;
        prop_assert_eq!(inv.lattice().determinant().abs(), discriminant.order());
        let words = invariant_codewords(code, &p);
        prop_assert!(words.iter().all(|w| p.is_union_of_blocks(*w) && code.contains(*w)));
        prop_assert!(words.contains(&Bitmask24::FULL));
        Ok(())
    })
}
