use fermat_k3::lattice::*;
use fermat_k3::mathieu::{m23_construct, m24_construct, Bitmask24, GolayCode};
use fermat_k3::{Error, Rational};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

fn m(rows: &[&[i64]]) -> IntMatrix {
    IntMatrix::from_i64(rows).unwrap()
}

fn factors(mat: &IntMatrix) -> Vec<i64> {
    smith_normal_form(mat).iter().map(|d| d.to_i64().unwrap()).collect()
}

fn r(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Invariant factors as ratios of gcds of k×k minors.
fn determinantal_divisors(mat: &IntMatrix) -> Vec<i64> {
    fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
        (0u32..1 << n).filter(|s| s.count_ones() as usize == k).map(|s| (0..n).filter(|i| s >> i & 1 == 1).collect()).collect()
    }
    let n = mat.nrows().min(mat.ncols());
    let mut prev = BigInt::from(1);
    let mut out = Vec::new();
    for k in 1..=n {
        let mut g = BigInt::zero();
        for rows in subsets(mat.nrows(), k) {
            for cols in subsets(mat.ncols(), k) {
                let minor = IntMatrix::new(rows.iter().map(|&i| cols.iter().map(|&j| mat.get(i, j).clone()).collect()).collect())
                    .unwrap()
                    .determinant()
                    .unwrap();
                g = g.gcd(&minor);
            }
        }
        if g.is_zero() {
            out.extend(std::iter::repeat_n(0, n - k + 1));
            break;
        }
        out.push((&g / &prev).to_i64().unwrap());
        prev = g;
    }
    out
}

fn invariant_gram() -> IntMatrix {
    IntMatrix::from_i64(&REFERENCE_INVARIANT_GRAM).unwrap()
}

#[test]
fn smith_forms() {
    assert_eq!(factors(&IntMatrix::identity(3)), vec![1, 1, 1]);
    assert_eq!(factors(&invariant_gram()), vec![1, 1, 4, 8, 8]);
    assert_eq!(factors(&m(&[&[8, 4, 4], &[4, 8, 0], &[4, 0, 8]])), vec![4, 4, 16]);
    assert_eq!(factors(&IntMatrix::diagonal_i64(&[16, 4, 4])), vec![4, 4, 16]);
    assert_eq!(factors(&invariant_gram().negated()), vec![1, 1, 4, 8, 8]);
    for mat in [
        invariant_gram(),
        m(&[&[8, 4, 4], &[4, 8, 0], &[4, 0, 8]]),
        m(&[&[6, 10, 4], &[15, 0, 3], &[9, 12, -6], &[0, 0, 7]]),
        m(&[&[2, 4, 6], &[4, 8, 12]]),
        m(&[&[0, 0], &[0, 5]]),
    ] {
        assert_eq!(factors(&mat), determinantal_divisors(&mat), "{mat}");
    }
}

#[test]
fn discriminant_groups() {
    let gram = invariant_gram();
    let l = Lattice::unlabeled(gram, Signature::PositiveDefinite).unwrap();
    let d = discriminant_group(&l).unwrap();
    assert_eq!(d, DiscriminantGroup::from_factors(&[4, 8, 8]).unwrap());
    assert_eq!(d.order(), l.determinant().abs());
    assert_eq!(d.to_string(), "Z/4 + Z/8 + Z/8");
    let diag = Lattice::unlabeled(IntMatrix::diagonal_i64(&[4, 8, 8]), Signature::PositiveDefinite).unwrap();
    assert_eq!(discriminant_group(&diag).unwrap(), d);
    let e8_like = Lattice::unlabeled(m(&[&[2, 1], &[1, 1]]), Signature::PositiveDefinite).unwrap();
    assert!(discriminant_group(&e8_like).unwrap().is_trivial());
    let degenerate = Lattice::unlabeled(m(&[&[2, 2], &[2, 2]]), Signature::Unspecified).unwrap();
    assert_eq!(discriminant_group(&degenerate), Err(Error::DegenerateGram));
    assert!(DiscriminantGroup::from_factors(&[4, 6]).is_err());
}

#[test]
fn lattice_validation_and_text() {
    assert!(Lattice::unlabeled(m(&[&[2, 1], &[0, 2]]), Signature::Unspecified).is_err());
    assert!(Lattice::unlabeled(m(&[&[2, 0], &[0, 2]]), Signature::NegativeDefinite).is_err());
    // Positive diagonal but indefinite.
    assert!(Lattice::unlabeled(m(&[&[2, 3], &[3, 2]]), Signature::PositiveDefinite).is_err());
    assert!(Lattice::new(m(&[&[2]]), vec![], Signature::PositiveDefinite).is_err());
    let l = Lattice::unlabeled(invariant_gram().negated(), Signature::NegativeDefinite).unwrap();
    let text = l.to_text();
    assert!(text.starts_with("5 negative\n-2 0 0 -1 0\n"));
    assert_eq!(Lattice::from_text(&text).unwrap(), l);
    assert!(matches!(Lattice::from_text("2 positive\n2 0\n"), Err(Error::Parse(_))));
    assert!(matches!(Lattice::from_text("1 sideways\n2\n"), Err(Error::Parse(_))));
    assert!(matches!(Lattice::from_text(""), Err(Error::Parse(_))));
}

#[test]
fn niemeier_a1() {
    let code = GolayCode::construct();
    let n = niemeier_a1_24(&code).unwrap();
    let l = n.lattice();
    assert_eq!(l.rank(), 24);
    assert!(l.is_even());
    assert_eq!(l.determinant().abs(), BigInt::from(1));
    assert_eq!(n.root_index(), &BigInt::from(4096));
    assert_eq!(n.glue_words().len(), 4096);
    // Every codeword half-sum lies in the lattice spanned by the basis.
    for w in code.words().iter().step_by(37) {
        let v: Vec<Rational> = (1..=24).map(|p| if w.contains(p) { r(1, 2) } else { r(0, 1) }).collect();
        assert!(lattice_coordinates(n.basis(), &v).is_some());
        assert!(n.contains(&v));
    }
    let roots = n.roots();
    assert_eq!(roots.len(), 48);
    // Half-integral roots would need a glue word of weight 4.
    let weight4_words = (0u32..1 << 24).filter(|b| b.count_ones() == 4).filter(|&b| code.contains(Bitmask24::new(b).unwrap())).count();
    assert_eq!(weight4_words, 0);
    assert_eq!(n.count_vectors_of_norm(2), BigInt::from(48));
    // Theta series minus the Leech theta series is (number of roots)·Δ.
    assert_eq!(n.count_vectors_of_norm(4), BigInt::from(196_560 - 24 * 48));
}

#[test]
fn glue_rejections() {
    let bad = Bitmask24::from_points(&[1, 2, 3, 4, 5, 6]).unwrap();
    assert!(matches!(glue_overlattice(&[bad]), Err(Error::CorruptCode(_))));
    let a = Bitmask24::from_points(&[1, 2, 3, 4, 5, 6, 7, 8]).unwrap();
    let b = Bitmask24::from_points(&[8, 9, 10, 11, 12, 13, 14, 15]).unwrap();
    assert!(matches!(glue_overlattice(&[a, b]), Err(Error::CorruptCode(_))));
    let partial = glue_overlattice(&[a]).unwrap();
    assert_eq!(partial.root_index(), &BigInt::from(2));
    assert_eq!(partial.lattice().determinant().abs(), BigInt::from(2).pow(22));
}

fn sylow_partition() -> (GolayCode, fermat_k3::perm::OrbitPartition) {
    let code = GolayCode::construct();
    let m24 = m24_construct(&code).unwrap();
    let p = m23_construct(&m24).unwrap().sylow2(0).unwrap();
    (code, p.orbit_partition())
}

#[test]
fn invariant_codewords_and_lattice_of_the_sylow_subgroup() {
    let (code, orbits) = sylow_partition();
    let part = RootPartition::from_orbits(&orbits).unwrap();
    assert_eq!(part.sizes(), vec![1, 1, 2, 4, 16]);
    let words = invariant_codewords(&code, &part);
    let small = part.blocks()[..4].iter().fold(Bitmask24::EMPTY, |a, b| a.xor(*b));
    assert_eq!(words, vec![Bitmask24::EMPTY, small, part.blocks()[4], Bitmask24::FULL]);
    assert_eq!(small.weight(), 8);

    let inv = invariant_sublattice(&code, &part).unwrap();
    assert_eq!(inv.rank(), 5);
    assert_eq!(factors(inv.lattice().gram()), vec![1, 1, 4, 8, 8]);
    let expected = Lattice::unlabeled(invariant_gram(), Signature::PositiveDefinite).unwrap();
    assert_eq!(discriminant_group(inv.lattice()).unwrap(), discriminant_group(&expected).unwrap());
    assert!(inv.is_spanned_by(&reference_invariant_basis()));
    assert_eq!(inv.gram_of(&reference_invariant_basis()).unwrap().negated(), invariant_gram());
    // Each basis vector is a fixed vector of N.
    let n = niemeier_a1_24(&code).unwrap();
    assert!(inv.basis().iter().all(|v| n.contains(&inv.root_coordinates(v))));

    let report = invariant_lattice_audit(&code, &orbits, 3).unwrap();
    assert!(report.passed, "{report:?}");
    assert_eq!(report.solver_types, vec![vec![1, 1, 2, 4, 16]]);
    assert_eq!(report.codewords.len(), 4);
}

#[test]
fn invariant_lattice_audit_rejects_other_partitions() {
    let code = GolayCode::construct();
    let orbits = fermat_k3::perm::PermGroup::trivial(24).orbit_partition();
    let report = invariant_lattice_audit(&code, &orbits, 3).unwrap();
    assert!(!report.passed);
    assert!(!report.types_agree);
}

#[test]
fn extreme_partitions() {
    let code = GolayCode::construct();
    assert_eq!(invariant_codewords(&code, &RootPartition::singletons()).len(), 4096);
    assert_eq!(invariant_codewords(&code, &RootPartition::whole()), vec![Bitmask24::EMPTY, Bitmask24::FULL]);
    let full = invariant_sublattice(&code, &RootPartition::singletons()).unwrap();
    assert_eq!(full.rank(), 24);
    assert!(full.lattice().is_unimodular());
    assert!(full.lattice().is_even());
    let whole = invariant_sublattice(&code, &RootPartition::whole()).unwrap();
    assert_eq!(whole.lattice().gram(), &m(&[&[-12]]));
}

#[test]
fn octad_split() {
    let code = GolayCode::construct();
    let octad = code.octads()[0];
    let part = RootPartition::new(&[octad.points(), octad.xor(Bitmask24::FULL).points()]).unwrap();
    let inv = invariant_sublattice(&code, &part).unwrap();
    assert_eq!(inv.rank(), 2);
    assert_eq!(inv.lattice().gram(), &m(&[&[-4, 0], &[0, -8]]));
    assert_eq!(inv.lattice().labels(), &["s1/2".to_string(), "s2/2".to_string()]);
}

/// Fixed vectors of N by direct membership: orbit-sum coordinates with step ½
/// whose root-coordinate expansion lies in N.
fn fixed_vectors_oracle(n: &GluedRootLattice, part: &RootPartition, height: i64) -> Vec<Vec<Rational>> {
    let k = part.blocks().len();
    let mut out = Vec::new();
    let mut idx = vec![-2 * height; k];
    loop {
        let v: Vec<Rational> = idx.iter().map(|&d| r(d, 2)).collect();
        let mut coords = vec![r(0, 1); 24];
        for (c, b) in v.iter().zip(part.blocks()) {
            for p in b.points() {
                coords[p - 1] = c.clone();
            }
        }
        if n.contains(&coords) {
            out.push(v);
        }
        let mut i = 0;
        loop {
            if i == k {
                return out;
            }
            idx[i] += 1;
            if idx[i] <= 2 * height {
                break;
            }
            idx[i] = -2 * height;
            i += 1;
        }
    }
}

#[test]
fn brute_force_fixed_vectors() {
    let code = GolayCode::construct();
    let n = niemeier_a1_24(&code).unwrap();
    let octad = code.octads()[5];
    let pts = octad.points();
    let rest = octad.xor(Bitmask24::FULL).points();
    let parts = [
        RootPartition::whole(),
        RootPartition::new(&[pts.clone(), rest.clone()]).unwrap(),
        RootPartition::new(&[pts[..4].to_vec(), pts[4..].to_vec(), rest.clone()]).unwrap(),
        RootPartition::new(&[vec![1], vec![2], (3..=24).collect()]).unwrap(),
    ];
    for part in &parts {
        let inv = invariant_sublattice(&code, part).unwrap();
        let brute = fixed_vectors_oracle(&n, part, 1);
        assert_eq!(enumerate_fixed_vectors(&code, part, 1).unwrap(), brute);
        assert!(brute.iter().all(|v| inv.contains(v)));
        assert!(inv.is_spanned_by(&brute), "{:?}", part.sizes());
    }
    let five = RootPartition::from_assignment(&(0..24).map(|i| i % 5).collect::<Vec<_>>()).unwrap();
    assert!(matches!(enumerate_fixed_vectors(&code, &five, 1), Err(Error::Capacity(_))));
}

#[test]
fn partition_validation() {
    assert!(RootPartition::new(&[(1..=23).collect()]).is_err());
    assert!(RootPartition::new(&[(1..=24).collect(), vec![1]]).is_err());
    assert!(RootPartition::new(&[(1..=24).collect(), vec![]]).is_err());
    assert!(RootPartition::from_assignment(&[0; 23]).is_err());
}

#[test]
fn niemeier_selection() {
    let s = niemeier_selection_audit();
    assert_eq!(s.verdict.as_deref(), Some("N(A1^24)"));
    assert!(s.passed);
    let by_group = |g: &str| s.candidates.iter().find(|c| c.root_stabilizer == g).unwrap().clone();
    assert_eq!(by_group("M12").stabilizer_two_part, 64);
    assert_eq!(by_group("C2.L3(2)").stabilizer_two_part, 16);
    assert_eq!(by_group("M23").stabilizer_two_part, 128);
    // Orders from the standard formulas.
    assert_eq!(by_group("M12").stabilizer_order, 12 * 11 * 10 * 9 * 8);
    assert_eq!(by_group("M23").stabilizer_order, 23 * 22 * 21 * 20 * 48);
    assert_eq!(by_group("C2.L3(2)").stabilizer_order, 2 * 168);
    assert_eq!(by_group("M23").stabilizer_order * 24, fermat_k3::mathieu::M24_ORDER);
    assert!(!niemeier_selection_for(1024).passed);
}

fn small_vectors(n: usize, h: i64) -> Vec<Vec<BigInt>> {
    let mut out = vec![vec![]];
    for _ in 0..n {
        out = out.into_iter().flat_map(|v| (-h..=h).map(move |x| [v.clone(), vec![BigInt::from(x)]].concat())).collect();
    }
    out
}

#[test]
fn norm_divisibility() {
    let pos = |rows: &[&[i64]]| Lattice::unlabeled(m(rows), Signature::PositiveDefinite).unwrap();
    let cases = [
        (pos(&[&[4, 0, 0], &[0, 8, 0], &[0, 0, 8]]), 4, true),
        (pos(&[&[8, 4, 4], &[4, 8, 0], &[4, 0, 8]]), 4, true),
        (Lattice::unlabeled(m(&[&[-2]]), Signature::NegativeDefinite).unwrap(), 4, false),
        (pos(&[&[4, 1], &[1, 4]]), 4, false),
        (pos(&[&[4, 2], &[2, 4]]), 4, true),
        (pos(&[&[6, 3], &[3, 6]]), 3, true),
        (pos(&[&[2, 1], &[1, 2]]), 2, true),
    ];
    for (l, k, expected) in cases {
        assert_eq!(norm_divisibility_check(&l, k).unwrap(), expected);
        let brute = small_vectors(l.rank(), 2).iter().all(|x| l.norm(x).is_multiple_of(&BigInt::from(k)));
        assert_eq!(brute, expected);
    }
    assert!(norm_divisibility_check(&pos(&[&[2]]), 0).is_err());
}

fn brute_invariant_forms(g: &IntMatrix, h: i64) -> Vec<IntMatrix> {
    let mut out = Vec::new();
    for a in -h..=h {
        for b in -h..=h {
            for c in -h..=h {
                let gram = m(&[&[a, b], &[b, c]]);
                if g.transpose().mul(&gram).unwrap().mul(g).unwrap() == gram {
                    out.push(gram);
                }
            }
        }
    }
    out
}

#[test]
fn invariant_forms() {
    let rot = quarter_rotation();
    let swap = m(&[&[0, 1], &[1, 0]]);
    let id = IntMatrix::identity(2);
    let rot_family = invariant_gram_solver(&rot).unwrap();
    assert_eq!(rot_family.generators, vec![IntMatrix::identity(2)]);
    assert_eq!(invariant_gram_solver(&id).unwrap().dimension(), 3);
    let swap_family = invariant_gram_solver(&swap).unwrap();
    assert_eq!(swap_family.dimension(), 2);
    for (g, family) in [(&rot, &rot_family), (&swap, &swap_family), (&id, &invariant_gram_solver(&id).unwrap())] {
        let brute = brute_invariant_forms(g, 3);
        for gram in &brute {
            assert!(family.coordinates(gram).is_some(), "{gram}");
        }
        // Every family member with small parameters is invariant.
        for t in small_vectors(family.dimension(), 2) {
            let gram = family.evaluate(&t).unwrap();
            assert_eq!(g.transpose().mul(&gram).unwrap().mul(g).unwrap(), gram);
        }
    }
    assert!(swap_family.coordinates(&m(&[&[5, -2], &[-2, 5]])).is_some());
    assert!(swap_family.coordinates(&m(&[&[5, -2], &[-2, 4]])).is_none());
    let four = rot_family.with_norms_divisible_by(4).unwrap();
    assert_eq!(four.generators, vec![IntMatrix::diagonal_i64(&[4, 4])]);
    let swap4 = swap_family.with_norms_divisible_by(4).unwrap();
    for gram in brute_invariant_forms(&swap, 8) {
        let l = Lattice::unlabeled(gram.clone(), Signature::Unspecified).unwrap();
        assert_eq!(swap4.coordinates(&gram).is_some(), norm_divisibility_check(&l, 4).unwrap(), "{gram}");
    }
    assert!(invariant_gram_solver(&m(&[&[1, 1], &[0, 1]])).is_err());
}

#[test]
fn overlattices() {
    let one = overlattice_enumeration(1, 2).unwrap();
    assert_eq!(one.len(), 1);
    assert_eq!(one[0].index, 1);
    assert_eq!(one[0].gram, IntMatrix::diagonal_i64(&[4, 8, 8]));

    let four = overlattice_enumeration(4, 2).unwrap();
    assert_eq!(four.iter().map(|o| o.index).collect::<Vec<_>>(), vec![1, 2]);
    let expected = rational_span_basis(&[
        vec![r(1, 2), r(1, 2), r(1, 2)],
        vec![r(0, 1), r(1, 1), r(0, 1)],
        vec![r(0, 1), r(0, 1), r(1, 1)],
    ]);
    assert_eq!(four[1].basis, expected);
    assert_eq!(four[1].glue, vec![vec![r(1, 2), r(1, 2), r(1, 2)]]);
    assert_eq!(factors(&four[1].gram), vec![4, 4, 16]);

    for n in 1..=6 {
        for mm in 1..=3 {
            let all = overlattice_enumeration(n, mm).unwrap();
            assert!(all.iter().all(|o| o.index == 1 || o.index == 2), "({n}, {mm})");
            // The only candidate index-2 glue is (H + v1 + v2)/2, of norm n + 2m.
            let has_two = all.iter().any(|o| o.index == 2);
            assert_eq!(has_two, n % 2 == 0, "({n}, {mm})");
        }
    }
    assert!(overlattice_enumeration(0, 1).is_err());
}

#[test]
fn polarization_degree() {
    let report = h_squared_case_analysis().unwrap();
    assert!(report.passed);
    assert_eq!(report.h_squared, Some(4));
    let find = |l, mm, n| report.cases.iter().find(|c| (c.index, c.m, c.n) == (l, mm, n)).unwrap();
    let (a, b) = (find(2, 2, 4), find(1, 1, 4));
    assert_eq!(a.verdict, CaseVerdict::DiscriminantMismatch);
    assert_eq!(a.invariant_factors, vec![4, 4, 16]);
    assert_eq!(a.gram, m(&[&[8, 4, 4], &[4, 8, 0], &[4, 0, 8]]));
    assert_eq!(b.verdict, CaseVerdict::DiscriminantMismatch);
    assert_eq!(b.invariant_factors, vec![4, 4, 16]);
    assert_eq!(b.gram, IntMatrix::diagonal_i64(&[16, 4, 4]));
    let ok = find(1, 2, 1);
    assert_eq!(ok.verdict, CaseVerdict::Accepted);
    assert_eq!(ok.invariant_factors, vec![4, 8, 8]);
    assert_eq!(find(2, 1, 16).verdict, CaseVerdict::NormsNotDivisible);
    assert_eq!(find(2, 4, 1).verdict, CaseVerdict::NormsNotDivisible);
    assert_eq!(report.cases.len(), 5);
}

#[test]
fn polarization_is_order_independent() {
    let target = invariant_lattice_discriminant();
    let base = h_squared_case_analysis().unwrap();
    let key = |r: &PolarizationReport| {
        let mut v: Vec<_> = r.cases.iter().map(|c| (c.index, c.m, c.n, c.verdict as u8)).collect();
        v.sort();
        v
    };
    let expected = key(&base);
    let mut perm: Vec<usize> = (0..5).collect();
    // Heap's algorithm over all 120 orders.
    let mut c = [0usize; 5];
    let mut i = 0;
    let mut seen = 1;
    while i < 5 {
        if c[i] < i {
            if i % 2 == 0 { perm.swap(0, i) } else { perm.swap(c[i], i) }
            let r = h_squared_case_analysis_in_order(&target, &perm).unwrap();
            assert_eq!(r.h_squared, Some(4));
            assert_eq!(key(&r), expected);
            seen += 1;
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    assert_eq!(seen, 120);
    assert!(h_squared_case_analysis_in_order(&target, &[0, 0, 1, 2, 3]).is_err());
    let wrong = DiscriminantGroup::from_factors(&[2, 8, 16]).unwrap();
    assert!(!h_squared_case_analysis_in_order(&wrong, &[0, 1, 2, 3, 4]).unwrap().passed);
}

#[test]
fn rank_relation() {
    assert_eq!(rank_relation_check(3).unwrap().niemeier_rank, 5);
    assert!(rank_relation_check(3).unwrap().warning.is_none());
    assert_eq!(rank_relation_check(1).unwrap().niemeier_rank, 3);
    let high = rank_relation_check(20).unwrap();
    assert_eq!(high.niemeier_rank, 22);
    assert!(high.warning.is_some());
    assert!(rank_relation_check(0).is_err());
    assert!(rank_relation_check(23).is_err());
}
