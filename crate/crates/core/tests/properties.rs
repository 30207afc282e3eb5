//! Randomized invariants, 1000 cases each from a fixed seed.

use std::sync::OnceLock;

use fermat_k3::lattice::*;
use fermat_k3::mathieu::{Bitmask24, GolayCode};
use fermat_k3::matrix::CycMatrix;
use fermat_k3::matrix_groups::{alpha_multiplier, fermat, GroupKind, MatrixGroup, ProjMatrix};
use fermat_k3::polynomial::{apply_matrix, monomials, Poly4};
use fermat_k3::CycNumber;
use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use proptest::prelude::*;
use proptest::test_runner::{Config, RngSeed};

const SEED: u64 = 0x5eed_2024;

fn config() -> Config {
    Config { cases: 1000, rng_seed: RngSeed::Fixed(SEED), failure_persistence: None, ..Config::default() }
}

fn f384_tilde() -> &'static MatrixGroup {
    static G: OnceLock<MatrixGroup> = OnceLock::new();
    G.get_or_init(fermat::f384_tilde)
}

fn f128() -> &'static MatrixGroup {
    static G: OnceLock<MatrixGroup> = OnceLock::new();
    G.get_or_init(fermat::f128)
}

fn code() -> &'static GolayCode {
    static C: OnceLock<GolayCode> = OnceLock::new();
    C.get_or_init(GolayCode::construct)
}

fn cyc() -> impl Strategy<Value = CycNumber> {
    let conductor = prop::sample::select(vec![1u32, 3, 4, 5, 6, 8, 12, 24]);
    (conductor, prop::collection::vec((-5i64..=5, 1i64..=4, 0i64..48), 0..5)).prop_map(|(n, terms)| {
        terms.into_iter().fold(CycNumber::zero(), |acc, (c, d, k)| &acc + &(&CycNumber::from_ratio(c, d) * &CycNumber::zeta(n, k)))
    })
}

fn quartic() -> impl Strategy<Value = Poly4> {
    let mons = monomials(4);
    prop::collection::vec((prop::sample::select(mons), -3i64..=3), 1..6).prop_map(|terms| Poly4::from_int_terms(&terms))
}

fn small_int_matrix() -> impl Strategy<Value = CycMatrix> {
    prop::collection::vec(-2i64..=2, 16)
        .prop_map(|v| CycMatrix::from_fn(4, |i, j| CycNumber::from_integer(v[4 * i + j])))
}

fn int_matrix() -> impl Strategy<Value = IntMatrix> {
    (1usize..=5, 1usize..=5)
        .prop_flat_map(|(r, c)| prop::collection::vec(prop::collection::vec(-20i64..=20, c), r))
        .prop_map(|rows| IntMatrix::from_i64(&rows).unwrap())
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

/// Unimodular `n×n` matrix from elementary operations.
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
    IntMatrix::new(rows).unwrap()
}

/// A partition with at most three blocks, cut out by a random codeword and
/// a random extra set so that glue often survives.
fn partition() -> impl Strategy<Value = RootPartition> {
    (0usize..4096, any::<u32>(), 0u8..3).prop_map(|(w, extra, mode)| {
        let word = code().words()[w].bits();
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
        RootPartition::from_assignment(&labels).unwrap()
    })
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn cyclotomic_ring_axioms(a in cyc(), b in cyc(), c in cyc()) {
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a + &CycNumber::zero(), a.clone());
        prop_assert_eq!(&a * &CycNumber::one(), a.clone());
        prop_assert!((&a + &(-&a)).is_zero());
        if !a.is_zero() {
            prop_assert!((&a * &a.inv().unwrap()).is_one());
        }
        prop_assert_eq!(CycNumber::parse_compact(&a.to_compact()).unwrap(), a);
    }

    #[test]
    fn closure_is_idempotent(i in 0usize..128, j in 0usize..128, k in 0usize..128) {
        let g = f128();
        let gens = [g.elements()[i].clone(), g.elements()[j].clone()];
        let h = MatrixGroup::closure(GroupKind::Projective, &gens, 4096).unwrap();
        prop_assert!(h.elements().iter().all(|x| g.contains(x)));
        prop_assert_eq!(g.order() % h.order(), 0);
        // Adding an element already in the closure changes nothing.
        let x = h.elements()[k % h.order()].clone();
        let again = MatrixGroup::closure(GroupKind::Projective, &[gens[0].clone(), gens[1].clone(), x], 4096).unwrap();
        prop_assert!(again.same_elements(&h));
        let from_elements = MatrixGroup::closure(GroupKind::Projective, h.generators(), 4096).unwrap();
        prop_assert!(from_elements.same_elements(&h));
    }

    #[test]
    fn alpha_is_a_homomorphism(i in 0usize..1536, j in 0usize..1536) {
        let g = f384_tilde();
        let a = ProjMatrix::new(&g.elements()[i]).unwrap();
        let b = ProjMatrix::new(&g.elements()[j]).unwrap();
        let lhs = alpha_multiplier(&a.mul(&b)).unwrap();
        let rhs = &alpha_multiplier(&a).unwrap() * &alpha_multiplier(&b).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn substitution_is_a_right_action(i in 0usize..1536, f in quartic(), m in small_int_matrix()) {
        let g = &f384_tilde().elements()[i];
        let lhs = apply_matrix(g, &apply_matrix(&m, &f));
        let rhs = apply_matrix(&(&m * g), &f);
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn smith_form_is_unimodular_invariant(a in int_matrix(), left in ops(), right in ops()) {
        let u = unimodular(a.nrows(), &left);
        let v = unimodular(a.ncols(), &right);
        let b = u.mul(&a).unwrap().mul(&v).unwrap();
        let d = smith_normal_form(&a);
        prop_assert_eq!(smith_normal_form(&b), d.clone());
        prop_assert!(d.windows(2).all(|w| w[1].is_zero() || (w[0].is_positive() && (&w[1] % &w[0]).is_zero())));
        if a.is_square() {
            prop_assert_eq!(a.determinant().unwrap().abs(), d.iter().product::<BigInt>());
        }
    }

    #[test]
    fn invariant_sublattice_matches_enumeration(p in partition()) {
        let inv = invariant_sublattice(code(), &p).unwrap();
        let brute = enumerate_fixed_vectors(code(), &p, 1).unwrap();
        prop_assert!(brute.iter().all(|v| inv.contains(v)));
        prop_assert!(inv.is_spanned_by(&brute));
        prop_assert_eq!(inv.rank(), p.blocks().len());
        prop_assert_eq!(inv.lattice().determinant().abs(), discriminant_group(inv.lattice()).unwrap().order());
        prop_assert!(invariant_codewords(code(), &p).iter().all(|w| p.is_union_of_blocks(*w) && code().contains(*w)));
        prop_assert!(invariant_codewords(code(), &p).contains(&Bitmask24::FULL));
    }
}
