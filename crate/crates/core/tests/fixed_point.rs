use std::collections::BTreeSet;
use std::f64::consts::PI;

use fermat_k3::finite_group::{models, CayleyTable, OrderStructure};
use fermat_k3::fixed_point::*;
use fermat_k3::matrix_groups::fermat;
use fermat_k3::Rational;
use num_complex::Complex64;

fn zeta(n: u32, k: i64) -> Complex64 {
    Complex64::from_polar(1.0, 2.0 * PI * k as f64 / n as f64)
}

fn numeric_contribution(t: &LocalFixedType) -> Complex64 {
    let one = Complex64::new(1.0, 0.0);
    one / ((one - zeta(t.order, t.p as i64)) * (one - zeta(t.order, t.q as i64)))
}

/// Floating-point brute force over all count vectors.
fn numeric_solutions(n: u32, w: i64, bound: u32) -> BTreeSet<Vec<u32>> {
    let types = enumerate_local_types(n, w, true).unwrap();
    let c: Vec<Complex64> = types.iter().map(numeric_contribution).collect();
    let target = Complex64::new(1.0, 0.0) + zeta(n, -w);
    let mut out = BTreeSet::new();
    let mut v = vec![0u32; types.len()];
    loop {
        if v.iter().sum::<u32>() <= bound {
            let s: Complex64 = v.iter().zip(&c).map(|(&m, z)| z * m as f64).sum();
            if (s - target).norm() < 1e-9 {
                out.insert(v.clone());
            }
        }
        let mut i = 0;
        loop {
            if i == v.len() {
                return out;
            }
            v[i] += 1;
            if v[i] <= bound {
                break;
            }
            v[i] = 0;
            i += 1;
        }
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn phi_by_count(n: u64) -> u64 {
    (1..=n).filter(|&k| gcd(k, n) == 1).count() as u64
}

#[test]
fn lefschetz_solutions_match_numeric_search() {
    for (n, w, bound) in [(6, 2, 8), (12, 4, 4), (9, 3, 6), (4, 1, 8), (8, 2, 4)] {
        let exact = solve_lefschetz(n, w, bound).unwrap();
        let exact_set: BTreeSet<Vec<u32>> = exact.solutions.iter().cloned().collect();
        assert_eq!(exact_set, numeric_solutions(n, w, bound), "N = {n}, w = {w}");
        for s in &exact.solutions {
            assert!(lefschetz_residual(n, w, &exact.types, s).is_zero());
        }
    }
}

#[test]
fn order_six_weight_two() {
    let sol = solve_lefschetz(6, 2, symplectic_power_bound(6, 2).unwrap()).unwrap();
    assert_eq!(sol.types.iter().map(|t| t.label()).collect::<Vec<_>>(), vec![1, 5]);
    assert_eq!(sol.solutions, vec![vec![2, 0], vec![4, 1], vec![6, 2]]);
    // with the bound of a squared element, (6, 2) would be lost
    let smaller = solve_lefschetz(6, 2, 6).unwrap();
    assert!(!smaller.solutions.contains(&vec![6, 2]));
}

#[test]
fn order_twelve_weight_four() {
    let sol = solve_lefschetz(12, 4, symplectic_power_bound(12, 4).unwrap()).unwrap();
    assert_eq!(sol.types.len(), 3);
    assert_eq!(sol.solutions, vec![vec![1, 0, 0], vec![2, 1, 1]]);
}

#[test]
fn order_nine_has_no_solution() {
    let sol = solve_lefschetz(9, 3, symplectic_power_bound(9, 3).unwrap()).unwrap();
    assert!(sol.solutions.is_empty());
    assert!(!has_rational_solution(9, 3).unwrap());
    assert!(has_rational_solution(6, 2).unwrap());
    assert!(has_rational_solution(12, 4).unwrap());
}

#[test]
fn contributions_match_complex_values() {
    for n in 3..=12u32 {
        for w in 1..n as i64 {
            for t in enumerate_local_types(n, w, false).unwrap() {
                let exact = t.contribution();
                let coords = exact.coords_in(n);
                let approx: Complex64 = coords
                    .iter()
                    .enumerate()
                    .map(|(k, c)| zeta(n, k as i64) * to_f64(c))
                    .sum();
                assert!((approx - numeric_contribution(&t)).norm() < 1e-9);
            }
        }
    }
}

fn to_f64(q: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    q.to_f64().unwrap()
}

#[test]
fn invalid_lefschetz_inputs() {
    assert!(enumerate_local_types(6, 0, true).is_err());
    assert!(enumerate_local_types(1, 1, true).is_err());
    assert!(solve_lefschetz(6, 2, 25).is_err());
}

#[test]
fn invariant_ranks() {
    let q = |n: i64| Rational::from_integer(n.into());
    let cases = [
        (OrderStructure::from_pairs(&[(1, 1)]), 22),
        (OrderStructure::from_pairs(&[(1, 1), (2, 1)]), 14),
        (OrderStructure::from_pairs(&[(1, 1), (3, 2)]), 10),
        (OrderStructure::from_pairs(&[(1, 1), (5, 4)]), 6),
        (OrderStructure::from_pairs(&[(1, 1), (7, 6)]), 4),
        (models::binary_dihedral(4).order_structure(), 3),
        (OrderStructure::from_pairs(&[(1, 1), (2, 15), (5, 64)]), 3),
        (OrderStructure::from_pairs(&[(1, 1), (2, 15), (3, 80), (6, 48)]), 3),
    ];
    for (profile, rank) in cases {
        assert_eq!(mukai_rank(&profile).unwrap(), q(rank), "{profile}");
    }
    assert_eq!(mukai_rank(&fermat::f128().order_structure()).unwrap(), q(3));
    assert_eq!(mukai_rank(&fermat::f384().order_structure()).unwrap(), q(3));
    assert!(mukai_rank(&OrderStructure::from_pairs(&[(1, 1), (9, 8)])).is_err());
}

#[test]
fn realizable_values() {
    let oracle: BTreeSet<u64> = (1..=2000).filter(|&i| phi_by_count(i) <= 20 && i != 60).collect();
    assert_eq!(realizable_transcendental_values(), oracle);
    assert_eq!(oracle.len(), 40);
    assert_eq!(*oracle.iter().max().unwrap(), 66);
    for r in 2..=21u64 {
        let expected: BTreeSet<u64> = (1..=2000).filter(|&i| r % phi_by_count(i) == 0 && i != 60).collect();
        assert_eq!(admissible_transcendental_values(r).unwrap(), expected, "rank {r}");
    }
}

// 0-based permutation builders for the table cross-check

fn cycle(deg: usize, c: &[usize]) -> Vec<usize> {
    let mut v: Vec<usize> = (0..deg).collect();
    for i in 0..c.len() {
        v[c[i]] = c[(i + 1) % c.len()];
    }
    v
}

fn product(a: &[Vec<usize>], b: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let (da, db) = (a[0].len(), b[0].len());
    let mut out = Vec::new();
    for g in a {
        out.push(g.iter().copied().chain(da..da + db).collect());
    }
    for g in b {
        out.push((0..da).chain(g.iter().map(|x| x + da)).collect());
    }
    out
}

fn cyc(n: usize) -> Vec<Vec<usize>> {
    vec![(0..n).map(|i| (i + 1) % n).collect()]
}

fn s3() -> Vec<Vec<usize>> {
    vec![cycle(3, &[0, 1, 2]), cycle(3, &[0, 1])]
}

fn a4() -> Vec<Vec<usize>> {
    vec![cycle(4, &[0, 1, 2]), vec![1, 0, 3, 2]]
}

/// `x ↦ a x` and `x ↦ x + 1` on the integers mod a prime.
fn affine(p: usize, a: usize) -> Vec<Vec<usize>> {
    vec![(0..p).map(|x| x * a % p).collect(), (0..p).map(|x| (x + 1) % p).collect()]
}

/// Translations of F9 = F3[i] together with multiplication by i.
fn c3sq_c4() -> Vec<Vec<usize>> {
    let idx = |a: usize, b: usize| a % 3 + 3 * (b % 3);
    let mut t1 = vec![0; 9];
    let mut ti = vec![0; 9];
    let mut mi = vec![0; 9];
    for a in 0..3 {
        for b in 0..3 {
            t1[idx(a, b)] = idx(a + 1, b);
            ti[idx(a, b)] = idx(a, b + 1);
            mi[idx(a, b)] = idx(3 - b, a);
        }
    }
    vec![t1, ti, mi]
}

/// Translations of F16 together with multiplication by an element of order 5.
fn c2_4_c5() -> Vec<Vec<usize>> {
    fn mul(mut a: usize, mut b: usize) -> usize {
        let mut r = 0;
        while b > 0 {
            if b & 1 == 1 {
                r ^= a;
            }
            b >>= 1;
            a <<= 1;
            if a & 16 != 0 {
                a ^= 0b10011;
            }
        }
        r
    }
    let g5 = mul(2, mul(2, 2));
    let mut gens: Vec<Vec<usize>> = [1, 2, 4, 8].iter().map(|&t| (0..16).map(|x| x ^ t).collect()).collect();
    gens.push((0..16).map(|x| mul(x, g5)).collect());
    gens
}

fn c2_pow(n: usize) -> Vec<Vec<usize>> {
    (0..n).map(|i| cycle(2 * n, &[2 * i, 2 * i + 1])).collect()
}

fn build(name: &str) -> Option<CayleyTable> {
    let gens = match name {
        "C2" => c2_pow(1),
        "C2^2" => c2_pow(2),
        "C2^3" => c2_pow(3),
        "C2^4" => c2_pow(4),
        "C8" => cyc(8),
        "Q16" => return Some(models::binary_dihedral(4)),
        "F128" => return Some(fermat::f128().cayley_table()),
        "C3" => cyc(3),
        "C6" => cyc(6),
        "C2xC6" => product(&cyc(2), &cyc(6)),
        "C3^2" => product(&cyc(3), &cyc(3)),
        "C3xS3" => product(&cyc(3), &s3()),
        "S3xS3" => product(&s3(), &s3()),
        "C3^2:C4" => c3sq_c4(),
        "A4xC3" => product(&a4(), &cyc(3)),
        "A4xA4" => product(&a4(), &a4()),
        "C5" => cyc(5),
        "D10" => return Some(models::dihedral(5)),
        "C5:C4" => affine(5, 2),
        "C2^4:C5" => c2_4_c5(),
        "C7" => cyc(7),
        "C7:C3" => affine(7, 2),
        _ => return None,
    };
    Some(models::from_permutations(&gens))
}

#[test]
fn table_profiles_match_constructed_groups() {
    let table = solvable_table().unwrap();
    assert_eq!(table.len(), 29);
    let mut checked = 0;
    for e in &table {
        if let Some(p) = &e.profile {
            let g = build(&e.name).unwrap_or_else(|| panic!("no model for {}", e.name));
            assert_eq!(g.order() as u64, e.order, "{}", e.name);
            assert_eq!(&g.order_structure(), p, "{}", e.name);
            assert_eq!(e.nilpotent, is_nilpotent(&g), "{}", e.name);
            checked += 1;
        }
    }
    assert_eq!(checked, 22);
    assert_eq!(fermat::f384().order(), 384);
}

/// A finite group is nilpotent iff the upper central series reaches it.
fn is_nilpotent(g: &CayleyTable) -> bool {
    let mut g = g.clone();
    loop {
        if g.order() == 1 {
            return true;
        }
        let z = g.center();
        if z.len() == 1 {
            return false;
        }
        g = g.quotient(&z).unwrap();
    }
}

#[test]
fn solvable_audit_replays_to_1536() {
    let r = solvable_bound_audit().unwrap();
    let failed: Vec<_> = r.steps.iter().filter(|s| !s.holds).map(|s| &s.id).collect();
    assert!(r.passed, "failed steps {failed:?}");
    assert_eq!(r.final_bound, 1536);
    assert_eq!(r.attained_by, "F384");
    assert_eq!(r.attaining_i, 4);
    let best = r.candidates.iter().max_by_key(|c| c.bound).unwrap();
    assert_eq!((best.symplectic_order, best.max_i), (384, 4));
    for (name, bound) in [("C2^4:D10", 960), ("A4xA4", 864), ("A4,4", 1152), ("2^6·3", 1152), ("2^5·3", 1152)] {
        let c = r.candidates.iter().find(|c| c.case == name).unwrap();
        assert_eq!(c.bound, bound, "{name}");
    }
}

#[test]
fn nilpotent_audit_replays_to_512() {
    let r = nilpotent_bound_audit().unwrap();
    assert!(r.passed);
    assert_eq!(r.final_bound, 512);
    assert_eq!(r.attained_by, "F128");
    let c = r.candidates.iter().find(|c| c.case == "nilpotent 2^n·3").unwrap();
    assert_eq!((c.symplectic_order, c.max_i, c.bound), (12, 30, 360));
    let n6 = r.candidates.iter().find(|c| c.case == "2-group, n = 6").unwrap();
    assert_eq!(n6.bound, 384);
}

#[test]
fn corrupted_table_fails_audit() {
    let mut table = solvable_table().unwrap();
    let f384 = table.iter_mut().find(|e| e.name == "F384").unwrap();
    f384.order = 768;
    let r = solvable_bound_audit_with(&table).unwrap();
    assert!(!r.passed);
    assert_eq!(r.failed_step.as_deref(), Some("case2-n7"));

    let mut table = solvable_table().unwrap();
    table.iter_mut().find(|e| e.name == "C7").unwrap().profile = Some(OrderStructure::from_pairs(&[(1, 1), (2, 6)]));
    let r = solvable_bound_audit_with(&table).unwrap();
    assert!(!r.passed);
}

#[test]
fn table_parser_rejects_bad_rows() {
    assert!(parse_solvable_table("C2 | 2 | I | yes | 1:1 2:2").is_err());
    assert!(parse_solvable_table("C2 | 2 | VI | yes | 1:1 2:1").is_err());
    assert!(parse_solvable_table("C2 | 2 | I | yes").is_err());
    assert_eq!(parse_solvable_table("# only a comment\n").unwrap().len(), 0);
}
