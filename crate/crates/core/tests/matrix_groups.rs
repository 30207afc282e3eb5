use fermat_k3::finite_group::{models, OrderStructure};
use fermat_k3::matrix::CycMatrix;
use fermat_k3::matrix_groups::fermat::*;
use fermat_k3::matrix_groups::{alpha_multiplier, element_order, projective_normalize, GroupKind, MatrixGroup};
use fermat_k3::CycNumber;

#[test]
fn monomial_group_orders() {
    let big = f384_tilde();
    assert_eq!(big.order(), 1536);
    assert_eq!(big.symplectic_part().unwrap().order(), 384);
    let small = f128_tilde();
    assert_eq!(small.order(), 512);
    assert_eq!(small.symplectic_part().unwrap().order(), 128);
}

#[test]
fn f128_structure() {
    let g = f128();
    assert_eq!(g.order_structure(), OrderStructure::from_pairs(&[(1, 1), (2, 35), (4, 76), (8, 16)]));
    for e in g.elements() {
        if element_order(e, GroupKind::Projective) == Some(8) {
            assert!(element_order(&g.mul(e, e), GroupKind::Projective) == Some(4));
        }
    }
    let derived = g.commutator_subgroup();
    assert!(derived.same_elements(&derived_group()));
    assert!(derived.iso_search(&models::c2_times_d8()).unwrap().is_some());
    // Q16 sits inside F128
    assert!(q16().elements().iter().all(|e| g.contains(e)));
}

#[test]
fn swapped_frame_triple_is_not_the_derived_subgroup() {
    let derived = f128().commutator_subgroup();
    let [a, b, c] = swapped_frame_generators();
    assert!(derived.contains(&a));
    assert!(!derived.contains(&b));
    assert!(derived.contains(&c));
    assert!(!swapped_frame_group().same_elements(&derived));
}

#[test]
fn sylow_conjugates_share_order_structure() {
    let conj = sylow2_conjugates();
    assert_eq!(conj.len(), 3);
    let s0 = conj[0].order_structure();
    for g in &conj {
        assert_eq!(g.order(), 512);
        assert_eq!(g.order_structure(), s0);
    }
    assert!(!conj[0].same_elements(&conj[1]));
    assert!(!conj[1].same_elements(&conj[2]));
    let big = f384_tilde();
    assert!(conj.iter().all(|g| g.elements().iter().all(|e| big.contains(e))));
}

#[test]
fn alpha_image_is_mu4() {
    let g = f384_tilde();
    let mut values: Vec<CycNumber> =
        g.elements().iter().map(|e| alpha_multiplier(&projective_normalize(e).unwrap()).unwrap()).collect();
    values.sort();
    values.dedup();
    assert_eq!(values.len(), 4);
    assert!(values.iter().all(|v| v.root_of_unity_order().is_some_and(|o| 4 % o == 0)));
}

#[test]
fn trivial_and_abelian_cases() {
    let triv = MatrixGroup::closure(GroupKind::Linear, &[CycMatrix::identity(4)], 10).unwrap();
    assert_eq!(triv.order(), 1);
    assert_eq!(triv.order_structure(), OrderStructure::from_pairs(&[(1, 1)]));
    assert_eq!(diagonal_mu4().commutator_subgroup().order(), 1);
}

#[test]
fn q16_derived_subgroup_is_generated_by_p_squared() {
    let q = q16();
    let d = q.commutator_subgroup();
    let p2 = p().pow(2);
    let cyc = MatrixGroup::closure(GroupKind::Projective, &[p2], 16).unwrap();
    assert!(d.same_elements(&cyc));
}
