//! Fixed-point arithmetic for finite automorphism groups of K3 surfaces:
//! symplectic fixed-point counts, the holomorphic Lefschetz equation for
//! isolated fixed points, the invariant-lattice rank formula, admissible
//! transcendental values and the replayed group-order bounds.

use std::collections::BTreeSet;
use std::fmt;

use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::cyclotomic::{euler_phi, CycNumber, Rational};
use crate::error::{Error, Result};
use crate::finite_group::OrderStructure;
use crate::linalg;

/// Number of fixed points of a symplectic automorphism of order `n`.
pub const NIKULIN_TABLE: [(u64, u64); 7] = [(2, 8), (3, 6), (4, 4), (5, 4), (6, 2), (7, 3), (8, 2)];

pub fn nikulin_fixed_count(n: u64) -> Result<u64> {
    NIKULIN_TABLE
        .iter()
        .find(|(k, _)| *k == n)
        .map(|(_, v)| *v)
        .ok_or_else(|| Error::OutOfRange(format!("symplectic order {n} outside 2..=8")))
}

/// Local action `(x, y) ↦ (ζ_N^p x, ζ_N^q y)` at an isolated fixed point,
/// stored with `p ≥ q`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LocalFixedType {
    pub order: u32,
    pub p: u32,
    pub q: u32,
}

impl LocalFixedType {
    pub fn new(order: u32, a: u32, b: u32) -> Self {
        LocalFixedType { order, p: a.max(b), q: a.min(b) }
    }

    /// `N - p`: the exponent `k` in the normal form `(ζ_N^{-k} x, ζ_N^{q} y)`.
    pub fn label(&self) -> u32 {
        self.order - self.p
    }

    pub fn is_faithful(&self) -> bool {
        let n = self.order;
        let op = n / n.gcd(&self.p);
        let oq = n / n.gcd(&self.q);
        op.lcm(&oq) == n
    }

    /// `1 / ((1 - ζ^p)(1 - ζ^q))`.
    pub fn contribution(&self) -> CycNumber {
        let one = CycNumber::one();
        let a = &one - &CycNumber::zeta(self.order, self.p as i64);
        let b = &one - &CycNumber::zeta(self.order, self.q as i64);
        (&a * &b).inv().expect("eigenvalues differ from 1")
    }
}

impl fmt::Display for LocalFixedType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "type ({}) {{{}, {}}} mod {}", self.label(), self.p, self.q, self.order)
    }
}

/// Unordered exponent pairs `{p, q}` in `1..N` with `p + q ≡ w (mod N)`,
/// sorted by label; with `faithful`, only pairs whose eigenvalues generate `μ_N`.
pub fn enumerate_local_types(n: u32, w: i64, faithful: bool) -> Result<Vec<LocalFixedType>> {
    if n < 2 || w.rem_euclid(n as i64) == 0 {
        return Err(Error::OutOfRange(format!("need N ≥ 2 and w ≢ 0 mod N (got N = {n}, w = {w})")));
    }
    let w = w.rem_euclid(n as i64) as u32;
    let mut out = Vec::new();
    for q in 1..n {
        for p in q..n {
            if (p + q) % n == w {
                let t = LocalFixedType::new(n, p, q);
                if !faithful || t.is_faithful() {
                    out.push(t);
                }
            }
        }
    }
    out.sort_by_key(|t| (t.label(), t.q));
    Ok(out)
}

/// `1 + ζ_N^{-w}`, the holomorphic Lefschetz number of `g` with
/// `g*ω = ζ_N^w ω`.
pub fn lefschetz_number(n: u32, w: i64) -> CycNumber {
    &CycNumber::one() + &CycNumber::zeta(n, -w)
}

pub fn lefschetz_residual(n: u32, w: i64, types: &[LocalFixedType], counts: &[u32]) -> CycNumber {
    let mut r = lefschetz_number(n, w);
    for (t, &m) in types.iter().zip(counts) {
        r = &r - &t.contribution().scale(&Rational::from_integer(m.into()));
    }
    r
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LefschetzSolutions {
    pub order: u32,
    pub weight: i64,
    pub bound: u32,
    pub types: Vec<LocalFixedType>,
    /// Count vectors aligned with `types`, sorted.
    pub solutions: Vec<Vec<u32>>,
}

/// All nonnegative integer point counts over the faithful types, with total at
/// most `bound`, satisfying the Lefschetz equation exactly.
pub fn solve_lefschetz(n: u32, w: i64, bound: u32) -> Result<LefschetzSolutions> {
    if bound > 24 {
        return Err(Error::OutOfRange(format!("fixed-point bound {bound} above 24")));
    }
    let types = enumerate_local_types(n, w, true)?;
    let contribs: Vec<CycNumber> = types.iter().map(LocalFixedType::contribution).collect();
    let target = lefschetz_number(n, w);
    let mut solutions = Vec::new();
    let mut counts = vec![0u32; types.len()];
    search(&contribs, &target, 0, bound, &CycNumber::zero(), &mut counts, &mut solutions);
    solutions.sort();
    Ok(LefschetzSolutions { order: n, weight: w, bound, types, solutions })
}

fn search(
    contribs: &[CycNumber],
    target: &CycNumber,
    idx: usize,
    left: u32,
    acc: &CycNumber,
    counts: &mut Vec<u32>,
    out: &mut Vec<Vec<u32>>,
) {
    if idx == contribs.len() {
        if acc == target {
            out.push(counts.clone());
        }
        return;
    }
    let mut sum = acc.clone();
    for m in 0..=left {
        counts[idx] = m;
        search(contribs, target, idx + 1, left - m, &sum, counts, out);
        sum = &sum + &contribs[idx];
    }
    counts[idx] = 0;
}

/// Whether the Lefschetz equation has any solution with rational counts.
pub fn has_rational_solution(n: u32, w: i64) -> Result<bool> {
    let types = enumerate_local_types(n, w, true)?;
    let cols: Vec<Vec<Rational>> = types.iter().map(|t| t.contribution().coords_in(n)).collect();
    let target = lefschetz_number(n, w).coords_in(n);
    let rows: Vec<Vec<Rational>> =
        (0..target.len()).map(|i| cols.iter().map(|c| c[i].clone()).collect()).collect();
    Ok(linalg::solve(&rows, &target).is_some())
}

/// Fixed-point count of the first symplectic power of `g`, where `g` has
/// order `n` and multiplier `ζ_n^w`: the power `g^d` with `d` the order of
/// the multiplier.
pub fn symplectic_power_bound(n: u32, w: i64) -> Result<u32> {
    let w = w.rem_euclid(n as i64) as u32;
    let d = n / n.gcd(&w);
    Ok(nikulin_fixed_count((n / d) as u64)? as u32)
}

/// `(24 + Σ m(n) f(n)) / |G| - 2`.
pub fn mukai_rank(profile: &OrderStructure) -> Result<Rational> {
    let order = profile.group_order();
    if order == 0 || profile.count(1) != 1 {
        return Err(Error::Shape(format!("{profile} is not an order profile")));
    }
    let mut total = 24u64;
    for (n, m) in profile.iter() {
        if n >= 2 {
            total += m * nikulin_fixed_count(n)?;
        }
    }
    Ok(Rational::new(total.into(), order.into()) - Rational::from_integer(2.into()))
}

/// Profile of the elementary abelian group of order `2^n`.
pub fn elementary_abelian_profile(n: u32) -> OrderStructure {
    let mut pairs = vec![(1, 1)];
    if n > 0 {
        pairs.push((2, (1u64 << n) - 1));
    }
    OrderStructure::from_pairs(&pairs)
}

/// Every `I` with `φ(I) ≤ 20`, except 60.
pub fn realizable_transcendental_values() -> BTreeSet<u64> {
    // φ(I) ≥ √(I/2), so φ(I) ≤ 20 forces I ≤ 800
    (1..=800).filter(|&i| euler_phi(i) <= 20 && i != 60).collect()
}

/// `{ I : φ(I) | rank_t, I ≠ 60 }` for `rank_t` in `2..=21`.
pub fn admissible_transcendental_values(rank_t: u64) -> Result<BTreeSet<u64>> {
    if !(2..=21).contains(&rank_t) {
        return Err(Error::OutOfRange(format!("transcendental rank {rank_t} outside 2..=21")));
    }
    Ok(divisor_admissible(rank_t))
}

fn divisor_admissible(r: u64) -> BTreeSet<u64> {
    (1..=2 * r * r + 2).filter(|&i| r % euler_phi(i) == 0 && i != 60).collect()
}

/// Largest admissible `I` over all ranks `s ≤ r`.
pub fn max_i_under_rank_bound(r: u64) -> Result<u64> {
    if r == 0 {
        return Err(Error::OutOfRange("rank bound must be positive".into()));
    }
    Ok((1..=r).flat_map(divisor_admissible).max().unwrap_or(1))
}

/// `2·rank T - 18`, the least fixed-point count of a nontrivial symplectic
/// automorphism when `rank T(X) = rank_t`.
pub fn topological_fixed_bound(rank_t: i64) -> i64 {
    2 * rank_t - 18
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum SolvableCase {
    I,
    II,
    III,
    IV,
    V,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolvableEntry {
    pub name: String,
    pub order: u64,
    pub case: SolvableCase,
    pub nilpotent: bool,
    pub profile: Option<OrderStructure>,
}

const SOLVABLE_TABLE: &str = include_str!("../data/solvable_symplectic.txt");

pub fn solvable_table() -> Result<Vec<SolvableEntry>> {
    parse_solvable_table(SOLVABLE_TABLE)
}

pub fn parse_solvable_table(text: &str) -> Result<Vec<SolvableEntry>> {
    let mut out = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let bad = |what: &str| Error::Parse(format!("line {}: {what}", lineno + 1));
        let cols: Vec<&str> = line.split('|').map(str::trim).collect();
        if cols.len() != 5 {
            return Err(bad("expected 5 columns"));
        }
        let order: u64 = cols[1].parse().map_err(|_| bad("order"))?;
        let case = match cols[2] {
            "I" => SolvableCase::I,
            "II" => SolvableCase::II,
            "III" => SolvableCase::III,
            "IV" => SolvableCase::IV,
            "V" => SolvableCase::V,
            _ => return Err(bad("case label")),
        };
        let nilpotent = match cols[3] {
            "yes" => true,
            "no" => false,
            _ => return Err(bad("nilpotent flag")),
        };
        let profile = if cols[4].is_empty() {
            None
        } else {
            let pairs = cols[4]
                .split_whitespace()
                .map(|t| {
                    let (a, b) = t.split_once(':')?;
                    Some((a.parse().ok()?, b.parse().ok()?))
                })
                .collect::<Option<Vec<(u64, u64)>>>()
                .ok_or_else(|| bad("order structure"))?;
            let p = OrderStructure::from_pairs(&pairs);
            if p.group_order() != order {
                return Err(bad("order structure does not sum to the order"));
            }
            Some(p)
        };
        out.push(SolvableEntry { name: cols[0].to_string(), order, case, nilpotent, profile });
    }
    Ok(out)
}

fn entry<'a>(table: &'a [SolvableEntry], name: &str) -> Result<&'a SolvableEntry> {
    table.iter().find(|e| e.name == name).ok_or_else(|| Error::Parse(format!("table has no entry {name}")))
}

fn profile_of(table: &[SolvableEntry], name: &str) -> Result<OrderStructure> {
    entry(table, name)?.profile.clone().ok_or_else(|| Error::Parse(format!("{name} has no order structure")))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Relation {
    #[serde(rename = "=")]
    Eq,
    #[serde(rename = "<")]
    Lt,
    #[serde(rename = "<=")]
    Le,
    #[serde(rename = ">")]
    Gt,
    #[serde(rename = ">=")]
    Ge,
}

impl Relation {
    fn holds(self, a: &Rational, b: &Rational) -> bool {
        match self {
            Relation::Eq => a == b,
            Relation::Lt => a < b,
            Relation::Le => a <= b,
            Relation::Gt => a > b,
            Relation::Ge => a >= b,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuditStep {
    pub id: String,
    pub statement: String,
    pub lhs: String,
    pub relation: Relation,
    pub rhs: String,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundCandidate {
    pub case: String,
    pub symplectic_order: u64,
    pub max_i: u64,
    pub bound: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuditReport {
    pub name: String,
    pub steps: Vec<AuditStep>,
    /// Inputs taken as given rather than computed.
    pub assumptions: Vec<String>,
    pub candidates: Vec<BoundCandidate>,
    pub final_bound: u64,
    pub attained_by: String,
    pub attaining_i: u64,
    pub passed: bool,
    pub failed_step: Option<String>,
}

struct Audit {
    steps: Vec<AuditStep>,
    assumptions: Vec<String>,
    candidates: Vec<BoundCandidate>,
}

impl Audit {
    fn new() -> Self {
        Audit { steps: Vec::new(), assumptions: Vec::new(), candidates: Vec::new() }
    }

    fn check(&mut self, id: &str, statement: &str, lhs: Rational, relation: Relation, rhs: Rational) -> bool {
        let holds = relation.holds(&lhs, &rhs);
        self.steps.push(AuditStep {
            id: id.to_string(),
            statement: statement.to_string(),
            lhs: lhs.to_string(),
            relation,
            rhs: rhs.to_string(),
            holds,
        });
        holds
    }

    fn check_int(&mut self, id: &str, statement: &str, lhs: u64, relation: Relation, rhs: u64) -> bool {
        self.check(id, statement, int(lhs), relation, int(rhs))
    }

    fn assume(&mut self, s: &str) {
        self.assumptions.push(s.to_string());
    }

    fn candidate(&mut self, case: &str, symplectic_order: u64, max_i: u64) {
        self.candidates.push(BoundCandidate {
            case: case.to_string(),
            symplectic_order,
            max_i,
            bound: symplectic_order * max_i,
        });
    }

    /// Invariant rank of `profile` → transcendental rank cap → `I` cap.
    fn rank_chain(&mut self, id: &str, group: &str, profile: &OrderStructure, expected_rank: i64) -> Result<u64> {
        let rank = mukai_rank(profile)?;
        self.check(
            &format!("{id}-rank"),
            &format!("invariant lattice rank of {group}"),
            rank.clone(),
            Relation::Eq,
            int(expected_rank as u64),
        );
        self.i_cap_from_rank(id, rank)
    }

    /// `rank T ≤ ⌊rank⌋ - 1`, then the largest admissible `I`.
    fn i_cap_from_rank(&mut self, id: &str, rank: Rational) -> Result<u64> {
        let r = rank.floor().to_integer().to_u64().unwrap_or(0);
        let rank_t = r.saturating_sub(1).max(1);
        let cap = max_i_under_rank_bound(rank_t)?;
        self.check_int(
            &format!("{id}-i-cap"),
            &format!("rank T ≤ {rank_t} gives I ≤ {cap}"),
            cap,
            Relation::Eq,
            cap,
        );
        Ok(cap)
    }

    fn finish(self, name: &str, final_bound: u64, expected: u64, attained_by: &str, attaining_i: u64) -> AuditReport {
        let mut steps = self.steps;
        let max = self.candidates.iter().map(|c| c.bound).max().unwrap_or(0);
        let holds = max == expected && final_bound == expected;
        steps.push(AuditStep {
            id: "final".into(),
            statement: format!("largest bound over all cases, attained by {attained_by} with I = {attaining_i}"),
            lhs: max.to_string(),
            relation: Relation::Eq,
            rhs: expected.to_string(),
            holds,
        });
        let failed_step = steps.iter().find(|s| !s.holds).map(|s| s.id.clone());
        AuditReport {
            name: name.to_string(),
            passed: failed_step.is_none(),
            failed_step,
            steps,
            assumptions: self.assumptions,
            candidates: self.candidates,
            final_bound: max,
            attained_by: attained_by.to_string(),
            attaining_i,
        }
    }
}

fn int(v: u64) -> Rational {
    Rational::from_integer(v.into())
}

/// The 2-group analysis shared by both audits. Returns the caps on `I` for
/// `|G_N| = 2^5` and `2^6`.
fn two_group_steps(a: &mut Audit, table: &[SolvableEntry], limit: u64) -> Result<(u64, u64)> {
    let f128 = profile_of(table, "F128")?;
    let involutions = f128.count(2);
    a.check_int("2grp-f128-involutions", "involutions in F128", involutions, Relation::Eq, 35);
    a.assume("a symplectic 2-group embeds in F128; order 2^7 forces G_N ≅ F128");
    a.assume("G_N ≅ F128 or G_N ≅ F384 forces I ∈ {1, 2, 4}");
    a.candidate("2-group, n = 7 (F128)", 128, 4);

    // an element of order 8
    let c8_cap = a.rank_chain("2grp-order8", "C8", &profile_of(table, "C8")?, 4)?;
    a.check_int("2grp-order8-bound", "|G| ≤ 2^6 · I", 64 * c8_cap, Relation::Lt, limit);

    // no element of order 8: 2k + 1 involutions and 2m elements of order 4
    let k_max_f128 = (involutions - 1) / 2;
    let mut caps = Vec::new();
    for n in [6u32, 5] {
        let order = 1u64 << n;
        let k_max = k_max_f128.min(order / 2 - 1);
        let mut worst = Rational::zero();
        for k in 0..=k_max {
            let m = order / 2 - 1 - k;
            let profile = OrderStructure::from_pairs(&[(1, 1), (2, 2 * k + 1), (4, 2 * m)]);
            let rank = mukai_rank(&profile)?;
            let closed = int(2) + Rational::new((24 + 8 * k).into(), order.into());
            if rank != closed {
                a.check(&format!("2grp-n{n}-closed-form-k{k}"), "rank = 2 + (24 + 8k)/2^n", rank.clone(), Relation::Eq, closed);
            }
            worst = worst.max(rank);
        }
        a.check(
            &format!("2grp-n{n}-rank"),
            &format!("largest invariant rank for order 2^{n} without order-8 elements (k ≤ {k_max})"),
            worst.clone(),
            Relation::Lt,
            if n == 6 { int(5) } else { int(7) },
        );
        let cap = a.i_cap_from_rank(&format!("2grp-n{n}"), worst)?.max(c8_cap);
        a.check_int(&format!("2grp-n{n}-bound"), &format!("|G| ≤ 2^{n} · I"), order * cap, Relation::Lt, limit);
        a.candidate(&format!("2-group, n = {n}"), order, cap);
        caps.push(cap);
    }

    // n ≤ 4: |G| ≥ 2^9 would need I ≥ 32
    large_i_steps(a, "2grp-n4", 16, 512)?;
    Ok((caps[1], caps[0]))
}

/// If `|G_N| ≤ max_order` and `|G| ≥ limit`, then `I ≥ limit / max_order`
/// which forces `φ(I) ≥ 12`, hence `|G_N| ≤ 2`.
fn large_i_steps(a: &mut Audit, id: &str, max_order: u64, limit: u64) -> Result<()> {
    let i_min = limit.div_ceil(max_order);
    let realizable = realizable_transcendental_values();
    let min_phi = realizable.iter().filter(|&&i| i >= i_min).map(|&i| euler_phi(i)).min().unwrap_or(0);
    a.check_int(&format!("{id}-phi"), &format!("φ(I) over realizable I ≥ {i_min}"), min_phi, Relation::Ge, 12);
    let topo = topological_fixed_bound(12);
    a.check_int(&format!("{id}-topological"), "fixed points of a symplectic g when rank T ≥ 12", topo as u64, Relation::Ge, 6);
    let orders: Vec<u64> = NIKULIN_TABLE.iter().filter(|(_, f)| *f as i64 >= topo).map(|(n, _)| *n).collect();
    a.check_int(&format!("{id}-orders"), "orders with at least 6 fixed points (2 and 3)", orders.len() as u64, Relation::Eq, 2);
    a.assume("for ord g = 3 the topological fixed-point bound is strict, excluding order 3");
    let mut n_ok = 0;
    for n in 0..=4u32 {
        let r = mukai_rank(&elementary_abelian_profile(n))?;
        let expected = int(6) + Rational::new(16.into(), (1u64 << n).into());
        a.check(&format!("{id}-c2^{n}-rank"), &format!("invariant rank of C2^{n} is 6 + 16/2^{n}"), r.clone(), Relation::Eq, expected);
        if r > int(12) {
            n_ok = n;
        }
    }
    a.check_int(&format!("{id}-c2-order"), "|G_N| ≤ 2", 1 << n_ok, Relation::Le, 2);
    let max_i = *realizable.iter().max().unwrap();
    a.check_int(&format!("{id}-bound"), "|G| ≤ 2 · max realizable I", 2 * max_i, Relation::Lt, limit);
    a.candidate(&format!("{id}: |G_N| ≤ 2"), 2, max_i);
    Ok(())
}

/// Replays the bound `|G| ≤ 2^9·3` for solvable `G_N`.
pub fn solvable_bound_audit() -> Result<AuditReport> {
    solvable_bound_audit_with(&solvable_table()?)
}

pub fn solvable_bound_audit_with(table: &[SolvableEntry]) -> Result<AuditReport> {
    let limit = 1536;
    let mut a = Audit::new();

    // (III): C3² ⊂ G_N
    let cap3 = a.rank_chain("case3-c3^2", "C3^2", &profile_of(table, "C3^2")?, 6)?;
    a.check_int("case3-cap", "I ≤ 12", cap3, Relation::Le, 12);
    // (IV): C5 ⊂ G_N
    let cap4 = a.rank_chain("case4-c5", "C5", &profile_of(table, "C5")?, 6)?;
    a.check_int("case4-cap", "I ≤ 12", cap4, Relation::Le, 12);
    // (V): C7 ⊂ G_N
    let cap5 = a.rank_chain("case5-c7", "C7", &profile_of(table, "C7")?, 4)?;
    a.check_int("case5-cap", "I ≤ 6", cap5, Relation::Le, 6);

    let exceptions = ["C2^4:D10", "A4xA4", "A4,4"];
    for e in table.iter().filter(|e| matches!(e.case, SolvableCase::III | SolvableCase::IV | SolvableCase::V)) {
        let cap = match e.case {
            SolvableCase::III => cap3,
            SolvableCase::IV => cap4,
            _ => cap5,
        };
        let id = format!("case{:?}-{}", e.case, e.name).to_lowercase();
        if exceptions.contains(&e.name.as_str()) {
            a.check_int(&id, &format!("{} · I can reach 2^9·3 before refinement", e.name), e.order * cap, Relation::Ge, limit);
        } else {
            a.check_int(&id, &format!("|{}| · I", e.name), e.order * cap, Relation::Lt, limit);
            a.candidate(&e.name, e.order, cap);
        }
    }

    // exception (i): C2⁴:C5 ⊂ C2⁴:D10
    let cap_i = a.rank_chain("exc-c2^4:c5", "C2^4:C5", &profile_of(table, "C2^4:C5")?, 3)?;
    let ord_i = entry(table, "C2^4:D10")?.order;
    a.check_int("exc-c2^4:d10-bound", "|C2^4:D10| · I", ord_i * cap_i, Relation::Lt, limit);
    a.candidate("C2^4:D10", ord_i, cap_i);
    // exception (ii)
    let cap_ii = a.rank_chain("exc-a4xa4", "A4xA4", &profile_of(table, "A4xA4")?, 3)?;
    let ord_ii = entry(table, "A4xA4")?.order;
    a.check_int("exc-a4xa4-bound", "|A4xA4| · I", ord_ii * cap_ii, Relation::Lt, limit);
    a.candidate("A4xA4", ord_ii, cap_ii);
    // exception (iii): A4,4 ⊃ A4×A4, so rank T = 2 and I ∈ {1,2,3,4,6}; 3 and 6 excluded
    a.assume("G_N ≅ A4,4 forces I ∉ {3, 6}");
    let allowed: Vec<u64> = admissible_transcendental_values(2)?.into_iter().filter(|i| *i != 3 && *i != 6).collect();
    let cap_iii = *allowed.iter().max().unwrap();
    a.check_int("exc-a4,4-i", "largest I left for A4,4", cap_iii, Relation::Eq, 4);
    let ord_iii = entry(table, "A4,4")?.order;
    a.check_int("exc-a4,4-bound", "|A4,4| · I", ord_iii * cap_iii, Relation::Lt, limit);
    a.candidate("A4,4", ord_iii, cap_iii);

    // (I): 2-groups
    let (cap_n5, cap_n6) = two_group_steps(&mut a, table, limit)?;

    // (II): order 2^n·3
    let f384 = entry(table, "F384")?.order;
    a.check_int("case2-n7", "|F384| · 4", f384 * 4, Relation::Le, limit);
    a.candidate("2^7·3 (F384)", f384, 4);
    a.check_int("case2-n6", "2^6·3 · I", 192 * cap_n6, Relation::Lt, limit);
    a.candidate("2^6·3", 192, cap_n6);
    a.check_int("case2-n5", "2^5·3 · I", 96 * cap_n5, Relation::Lt, limit);
    a.candidate("2^5·3", 96, cap_n5);
    large_i_steps(&mut a, "case2-n4", 48, limit)?;
    a.check_int("case2-n4-contradiction", "|G_N| = 2^n·3 ≥ 3 contradicts |G_N| ≤ 2", 3, Relation::Gt, 2);

    Ok(a.finish("solvable", 1536, 1536, "F384", 4))
}

/// Replays the bound `|G| ≤ 2^9` for nilpotent `G_N`.
pub fn nilpotent_bound_audit() -> Result<AuditReport> {
    nilpotent_bound_audit_with(&solvable_table()?)
}

pub fn nilpotent_bound_audit_with(table: &[SolvableEntry]) -> Result<AuditReport> {
    let limit = 512;
    let mut a = Audit::new();

    two_group_steps(&mut a, table, limit)?;

    // (II) nilpotent: C3, C6, C2×C6
    let nil2: Vec<&SolvableEntry> =
        table.iter().filter(|e| e.case == SolvableCase::II && e.nilpotent).collect();
    let max2 = nil2.iter().map(|e| e.order).max().unwrap_or(0);
    a.check_int("nil-case2-order", "nilpotent case II groups have order ≤ 12", max2, Relation::Le, 12);
    let cap2 = a.rank_chain("nil-case2-c3", "C3", &profile_of(table, "C3")?, 10)?;
    a.check_int("nil-case2-cap", "I ≤ 30", cap2, Relation::Eq, 30);
    a.check_int("nil-case2-bound", "12 · I", max2 * cap2, Relation::Lt, limit);
    a.candidate("nilpotent 2^n·3", max2, cap2);

    // (III)–(V) nilpotent: C3², C5, C7
    let nil3: Vec<&SolvableEntry> = table
        .iter()
        .filter(|e| matches!(e.case, SolvableCase::III | SolvableCase::IV | SolvableCase::V) && e.nilpotent)
        .collect();
    let max3 = nil3.iter().map(|e| e.order).max().unwrap_or(0);
    a.check_int("nil-case345-order", "nilpotent groups in cases III–V have order ≤ 9", max3, Relation::Le, 9);
    let cap3 = a.rank_chain("nil-case345-c3^2", "C3^2", &profile_of(table, "C3^2")?, 6)?;
    a.check_int("nil-case345-bound", "9 · I", max3 * cap3, Relation::Lt, limit);
    a.candidate("nilpotent, cases III–V", max3, cap3);

    Ok(a.finish("nilpotent", 512, 512, "F128", 4))
}
