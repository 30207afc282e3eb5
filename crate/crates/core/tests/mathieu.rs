use std::time::Instant;

use fermat_k3::finite_group::OrderStructure;
use fermat_k3::mathieu::*;
use fermat_k3::matrix_groups::fermat::f128;
use fermat_k3::perm::{Perm, PermGroup};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_set(rng: &mut ChaCha8Rng, k: usize) -> Vec<usize> {
    let mut pts: Vec<usize> = (1..=24).collect();
    pts.shuffle(rng);
    pts.truncate(k);
    pts
}

#[test]
fn steiner_system() {
    let code = GolayCode::construct();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..100 {
        let five = Bitmask24::from_points(&random_set(&mut rng, 5)).unwrap();
        let octad = code.steiner_query(five).unwrap();
        assert!(five.is_subset_of(octad));
        assert_eq!(code.octads_containing(five), 1);
        let four = Bitmask24::from_points(&random_set(&mut rng, 4)).unwrap();
        assert_eq!(code.octads_containing(four), 5);
    }
    assert_eq!(42504, 759 * 56);
    assert!(code.steiner_query(Bitmask24::from_points(&[1, 2, 3, 4]).unwrap()).is_err());
}

#[test]
fn code_is_closed_under_symmetric_difference() {
    let code = GolayCode::construct();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..1000 {
        let a = code.words()[rng.gen_range(0..4096)];
        let b = code.words()[rng.gen_range(0..4096)];
        assert!(code.contains(a.xor(b)));
    }
}

#[test]
fn hex_cache_round_trip_and_validation() {
    let code = GolayCode::construct();
    let text = code.to_hex_lines();
    assert_eq!(GolayCode::from_hex_lines(&text).unwrap(), code);
    let corrupted = text.replacen("000000", "000001", 1);
    assert!(GolayCode::from_hex_lines(&corrupted).is_err());
}

#[test]
fn mathieu_groups() {
    let start = Instant::now();
    let code = GolayCode::construct();
    let m24 = m24_construct(&code).unwrap();
    assert_eq!(m24.order(), M24_ORDER);
    assert_eq!(M24_ORDER, 2u128.pow(10) * 27 * 5 * 7 * 11 * 23);
    assert_eq!(m24.orbit_partition().sizes, vec![24]);
    let m23 = m23_construct(&m24).unwrap();
    assert_eq!(m23.order(), M24_ORDER / 24);
    assert_eq!(m23.order(), M23_ORDER);
    assert!(m23.strong_generators().iter().all(|g| code.preserves_octads(g) && g.apply(23) == 23));
    assert!(start.elapsed().as_secs_f64() < 5.0);
}

#[test]
fn rejected_generator_is_identified() {
    let mut words: Vec<Bitmask24> = GolayCode::construct().words().to_vec();
    // relabel two points: still a Golay code, but not preserved by x ↦ x+1
    let swap = Perm::from_cycles(24, &[&[1, 2]]).unwrap();
    for w in words.iter_mut() {
        *w = w.apply(&swap);
    }
    let code = GolayCode::from_words(words).unwrap();
    assert!(matches!(m24_construct(&code), Err(fermat_k3::Error::GeneratorRejected { index: 0 })));
}

#[test]
fn five_transitivity_samples() {
    let m24 = m24_construct(&GolayCode::construct()).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..5 {
        let src = random_set(&mut rng, 5);
        let dst = random_set(&mut rng, 5);
        let g = m24.element_mapping(&src, &dst).unwrap().expect("M24 is 5-transitive");
        assert!(m24.contains(&g));
        for (s, d) in src.iter().zip(&dst) {
            assert_eq!(g.apply(s - 1), d - 1);
        }
    }
}

#[test]
fn bsgs_order_is_independent_of_generator_order() {
    let mut gens = m24_generators();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..3 {
        gens.shuffle(&mut rng);
        assert_eq!(PermGroup::new(24, gens.clone()).unwrap().order(), M24_ORDER);
    }
}

#[test]
fn bsgs_text_round_trip() {
    let m24 = m24_construct(&GolayCode::construct()).unwrap();
    let back = PermGroup::from_text(&m24.to_text()).unwrap();
    assert_eq!(back.order(), M24_ORDER);
}

#[test]
fn orbit_stabilizer_on_random_subgroups() {
    let m24 = m24_construct(&GolayCode::construct()).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..3 {
        let gens: Vec<Perm> = (0..2).map(|_| m24.random_element(&mut rng)).collect();
        let h = PermGroup::new(24, gens).unwrap();
        let p = rng.gen_range(1..=24usize);
        let orbit = h.orbit_partition().blocks.into_iter().find(|b| b.contains(&p)).unwrap();
        assert_eq!(h.point_stabilizer(p).unwrap().order() * orbit.len() as u128, h.order());
    }
}

#[test]
fn sylow_subgroup_of_m23() {
    let start = Instant::now();
    let m24 = m24_construct(&GolayCode::construct()).unwrap();
    let m23 = m23_construct(&m24).unwrap();
    let p = m23.sylow2(0).unwrap();
    assert_eq!(p.order(), 128);
    assert!(p.generators().iter().all(|g| m23.contains(g)));
    let table = p.cayley_table(512).unwrap();
    assert_eq!(table.order_structure(), OrderStructure::from_pairs(&[(1, 1), (2, 35), (4, 76), (8, 16)]));
    let orbits = p.orbit_partition();
    assert_eq!(orbits.sizes, vec![1, 1, 2, 4, 16]);
    assert!(orbits.blocks.contains(&vec![INFINITY]));
    assert_eq!(Some(orbits.sizes.clone()), orbit_type_solver(24, 5, true).into_iter().next().map(|v| v.into_iter().map(|x| x as usize).collect()));
    let iso = f128().iso_search(&table).unwrap();
    assert!(iso.is_some());
    eprintln!("sylow2 + iso: {:?}", start.elapsed());
}
