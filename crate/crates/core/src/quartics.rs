//! Representations of the binary dihedral group `Q16` on the space of linear
//! forms of P³, semi-invariant forms, and the case analysis that rules out a
//! quadric image and normalizes a quartic one.

use std::fmt;

use serde::Serialize;

use crate::cyclotomic::{CycNumber, Rational};
use crate::error::{Error, Result};
use crate::fixed_point::nikulin_fixed_count;
use crate::linalg;
use crate::matrix::CycMatrix;
use crate::matrix_groups::{alpha_multiplier, element_order, fermat, GroupKind, ProjMatrix};
use crate::polynomial::{
    apply_matrix, binary_resultant, common_singular_point, diagonal_fixed_points, monomials, Poly4, PointP3,
};

/// Images of `a` and `b` for `Q_{4m} = ⟨a, b | a^{2m} = 1, a^m = b², b⁻¹ab = a⁻¹⟩`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LinearRep {
    pub a: CycMatrix,
    pub b: CycMatrix,
    pub m: u32,
}

impl LinearRep {
    pub fn new(a: CycMatrix, b: CycMatrix, m: u32) -> Result<Self> {
        if a.size() != b.size() || m == 0 {
            return Err(Error::Shape("generator images must be square of equal size".into()));
        }
        Ok(LinearRep { a, b, m })
    }

    pub fn dimension(&self) -> usize {
        self.a.size()
    }

    pub fn group_order(&self) -> usize {
        4 * self.m as usize
    }

    pub fn direct_sum(&self, other: &Self) -> Self {
        LinearRep { a: self.a.direct_sum(&other.a), b: self.b.direct_sum(&other.b), m: self.m }
    }

    /// The three defining relations hold exactly.
    pub fn satisfies_relations(&self) -> bool {
        let n = self.dimension();
        let Ok(b_inv) = self.b.inverse() else { return false };
        let Ok(a_inv) = self.a.inverse() else { return false };
        self.a.pow(2 * self.m as u64) == CycMatrix::identity(n)
            && self.a.pow(self.m as u64) == &self.b * &self.b
            && &(&b_inv * &self.a) * &self.b == a_inv
    }

    /// The relations hold up to nonzero scalars.
    pub fn satisfies_relations_projectively(&self) -> bool {
        let same = |x: &CycMatrix, y: &CycMatrix| match (ProjMatrix::new(x), ProjMatrix::new(y)) {
            (Ok(p), Ok(q)) => p == q,
            _ => false,
        };
        let Ok(b_inv) = self.b.inverse() else { return false };
        let Ok(a_inv) = self.a.inverse() else { return false };
        self.a.pow(2 * self.m as u64).as_scalar().is_some()
            && same(&self.a.pow(self.m as u64), &(&self.b * &self.b))
            && same(&(&(&b_inv * &self.a) * &self.b), &a_inv)
    }

    /// `a^n b^e`.
    pub fn element(&self, n: u32, e: u32) -> CycMatrix {
        let an = self.a.pow(n as u64);
        if e % 2 == 1 {
            &an * &self.b
        } else {
            an
        }
    }

    /// Traces at `a^0, …, a^{2m-1}, b, ab, …, a^{2m-1}b`.
    pub fn character(&self) -> Vec<CycNumber> {
        (0..2).flat_map(|e| (0..2 * self.m).map(move |n| (n, e))).map(|(n, e)| self.element(n, e).trace()).collect()
    }
}

/// `(1/|G|) Σ χ(g)·conj(ψ(g))`.
pub fn character_inner_product(chi: &[CycNumber], psi: &[CycNumber]) -> CycNumber {
    let sum = chi.iter().zip(psi).fold(CycNumber::zero(), |acc, (x, y)| &acc + &(x * &y.conj()));
    sum.scale(&Rational::new(1.into(), (chi.len() as i64).into()))
}

/// A one-dimensional character of `Q16`, given by the signs of `a` and `b`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct LinearCharacter {
    pub a: i8,
    pub b: i8,
}

impl LinearCharacter {
    pub const TRIVIAL: LinearCharacter = LinearCharacter { a: 1, b: 1 };

    pub fn all() -> [LinearCharacter; 4] {
        [
            LinearCharacter { a: 1, b: 1 },
            LinearCharacter { a: 1, b: -1 },
            LinearCharacter { a: -1, b: 1 },
            LinearCharacter { a: -1, b: -1 },
        ]
    }

    pub fn rep(self) -> LinearRep {
        let c = |s: i8| CycMatrix::diagonal(vec![CycNumber::from_integer(s as i64)]);
        LinearRep { a: c(self.a), b: c(self.b), m: 4 }
    }
}

impl fmt::Display for LinearCharacter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(a ↦ {}, b ↦ {})", self.a, self.b)
    }
}

fn z(n: u32, k: i64) -> CycNumber {
    CycNumber::zeta(n, k)
}

fn int(v: i64) -> CycNumber {
    CycNumber::from_integer(v)
}

fn swap_matrix(c: CycNumber) -> CycMatrix {
    CycMatrix::from_rows(vec![vec![int(0), c.clone()], vec![c, int(0)]])
}

/// The two-dimensional irreducible representation with `a ↦ diag(ζ₈^k, ζ₈^{-k})`
/// for `k` odd, `b ↦ ζ₄·swap`; for `k = 2`, `b ↦ swap`.
pub fn q16_plane_rep(k: i64) -> LinearRep {
    let a = CycMatrix::diagonal(vec![z(8, k), z(8, -k)]);
    let b = if k % 2 == 0 { swap_matrix(int(1)) } else { swap_matrix(z(4, 1)) };
    LinearRep { a, b, m: 4 }
}

/// The seven irreducible representations of `Q16`: the four characters
/// `(±1, ±1)` in the order `(1,1), (1,-1), (-1,1), (-1,-1)`, then the plane
/// representations with `a` of eigenvalues `ζ₈^{±1}`, `ζ₈^{±3}`, `ζ₄^{±1}`.
pub fn q16_irreps() -> Vec<LinearRep> {
    let mut out: Vec<LinearRep> = LinearCharacter::all().iter().map(|c| c.rep()).collect();
    out.push(q16_plane_rep(1));
    out.push(q16_plane_rep(3));
    out.push(q16_plane_rep(2));
    out
}

/// A linear representation recovered from a projective one, with the two
/// correction scalars `B⁻¹AB = βA⁻¹` and `A^m = αB²` (after fixing `A`).
#[derive(Clone, Debug)]
pub struct LiftedRep {
    pub rep: LinearRep,
    pub alpha: CycNumber,
    pub beta: CycNumber,
}

/// Rescales `A`, then `B`, so that the `Q_{4m}` relations hold exactly.
pub fn lift_projective_rep(a: &CycMatrix, b: &CycMatrix, m: u32) -> Result<LiftedRep> {
    let conj = &(&b.inverse()? * a) * b;
    let beta = (&conj * a)
        .as_scalar()
        .ok_or_else(|| Error::NotProjectiveRep("b⁻¹ab is not a scalar multiple of a⁻¹".into()))?;
    let a1 = a.scale(&beta.sqrt_of_root_of_unity()?.inv()?);
    let b2 = b * b;
    let alpha = (&a1.pow(m as u64) * &b2.inverse()?)
        .as_scalar()
        .ok_or_else(|| Error::NotProjectiveRep("a^m is not a scalar multiple of b²".into()))?;
    let b1 = b.scale(&alpha.sqrt_of_root_of_unity()?);
    let rep = LinearRep { a: a1, b: b1, m };
    if !rep.satisfies_relations() {
        return Err(Error::NotProjectiveRep("rescaled matrices still violate the relations".into()));
    }
    Ok(LiftedRep { rep, alpha, beta })
}

/// Result of searching for scalars `λ, μ` making `(λA, μB)` satisfy
/// `a^n = b² = 1, b⁻¹ab = a⁻¹`.
#[derive(Clone, Debug, Serialize)]
pub struct DihedralLiftScan {
    /// Every `λ` compatible with the conjugation relation.
    pub lambda_candidates: Vec<String>,
    /// Whether `(λA)^n = 1` for the corresponding candidate.
    pub power_relation_holds: Vec<bool>,
    pub obstructed: bool,
}

pub fn dihedral_lift_scan(a: &CycMatrix, b: &CycMatrix, n: u32) -> Result<DihedralLiftScan> {
    // (μb)⁻¹(λa)(μb) = λ·b⁻¹ab must equal λ⁻¹a⁻¹, so λ² = 1/c with b⁻¹ab·a = c
    let conj = &(&b.inverse()? * a) * b;
    let c = (&conj * a)
        .as_scalar()
        .ok_or_else(|| Error::NotProjectiveRep("b⁻¹ab is not a scalar multiple of a⁻¹".into()))?;
    let root = c.inv()?.sqrt_of_root_of_unity()?;
    let lambdas = [root.clone(), -root];
    let id = CycMatrix::identity(a.size());
    let power_relation_holds: Vec<bool> = lambdas.iter().map(|l| a.scale(l).pow(n as u64) == id).collect();
    // μ² = 1/b² always has a solution once b² is scalar
    let b_sq = (b * b).as_scalar().ok_or_else(|| Error::NotProjectiveRep("b² is not scalar".into()))?;
    b_sq.inv()?.sqrt_of_root_of_unity()?;
    Ok(DihedralLiftScan {
        lambda_candidates: lambdas.iter().map(|l| l.to_string()).collect(),
        obstructed: !power_relation_holds.iter().any(|&h| h),
        power_relation_holds,
    })
}

/// The plane projective representation of `D8` with `a ↦ diag(ζ₈, ζ₈⁻¹)`,
/// `b ↦ ζ₄·swap` admits no linear lift.
pub fn check_d8_obstruction() -> bool {
    let r = q16_plane_rep(1);
    match dihedral_lift_scan(&r.a, &r.b, 4) {
        Ok(scan) => scan.obstructed && scan.lambda_candidates == ["1", "-1"],
        Err(_) => false,
    }
}

/// Basis of the forms `F` of degree `degree` with `g(F) = c·F` for every
/// listed `(g, c)`, in reduced echelon form over the decreasing monomial order.
pub fn semi_invariant_forms(conditions: &[(CycMatrix, CycNumber)], degree: u32) -> Vec<Poly4> {
    let basis = monomials(degree);
    let n = basis.len();
    let mut rows: Vec<Vec<CycNumber>> = Vec::new();
    for (g, c) in conditions {
        let images: Vec<Poly4> = basis
            .iter()
            .map(|e| {
                let m = Poly4::monomial(*e, CycNumber::one());
                apply_matrix(g, &m).sub(&m.scale(c))
            })
            .collect();
        for e in &basis {
            rows.push(images.iter().map(|p| p.coeff(e)).collect());
        }
    }
    let mut space = linalg::nullspace(&rows, n);
    linalg::rref(&mut space);
    space
        .iter()
        .filter(|v| v.iter().any(|x| !x.is_zero()))
        .map(|v| Poly4::from_terms(basis.iter().zip(v).map(|(e, c)| (*e, c.clone()))))
        .collect()
}

/// Forms on which `a` and `b` act by the signs of `chi`.
pub fn semi_invariant_space(rep: &LinearRep, degree: u32, chi: LinearCharacter) -> Result<Vec<Poly4>> {
    if rep.dimension() != 4 {
        return Err(Error::Shape("semi-invariant forms need a 4-dimensional representation".into()));
    }
    Ok(semi_invariant_forms(
        &[(rep.a.clone(), int(chi.a as i64)), (rep.b.clone(), int(chi.b as i64))],
        degree,
    ))
}

/// Coordinate points at which every form of the span is singular.
pub fn common_singular_coordinate_points(basis: &[Poly4]) -> Vec<PointP3> {
    (0..4).map(PointP3::coordinate).filter(|p| common_singular_point(basis, p)).collect()
}

/// One line of an audit trace.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CaseStep {
    pub case: String,
    pub claim: String,
    pub evidence: String,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CaseAudit {
    pub name: String,
    pub steps: Vec<CaseStep>,
    /// Facts used but not recomputed.
    pub assumptions: Vec<String>,
    /// Changes of generators or coordinates applied along the way.
    pub normalizations: Vec<String>,
    pub notes: Vec<String>,
    pub passed: bool,
    pub failed_step: Option<String>,
}

#[derive(Default)]
struct Trace {
    steps: Vec<CaseStep>,
    assumptions: Vec<String>,
    normalizations: Vec<String>,
    notes: Vec<String>,
}

impl Trace {
    fn step(&mut self, case: &str, claim: impl Into<String>, evidence: impl Into<String>, holds: bool) -> bool {
        self.steps.push(CaseStep { case: case.into(), claim: claim.into(), evidence: evidence.into(), holds });
        holds
    }

    fn finish(self, name: &str) -> CaseAudit {
        let failed_step = self.steps.iter().find(|s| !s.holds).map(|s| format!("{}: {}", s.case, s.claim));
        CaseAudit {
            name: name.into(),
            passed: failed_step.is_none(),
            failed_step,
            steps: self.steps,
            assumptions: self.assumptions,
            normalizations: self.normalizations,
            notes: self.notes,
        }
    }
}

fn show_basis(basis: &[Poly4]) -> String {
    if basis.is_empty() {
        return "{}".into();
    }
    format!("{{{}}}", basis.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(", "))
}

fn show_points(points: &[PointP3]) -> String {
    points.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(" ")
}

fn one_dim(a: i8, b: i8) -> LinearRep {
    LinearCharacter { a, b }.rep()
}

/// Cases (i) and (ii): `ρ21 ⊕ ρ21` and `ρ21 ⊕ ρ22` are not faithful in PGL(4).
fn rule_out_doubled_planes(t: &mut Trace) {
    let r21 = q16_plane_rep(1);
    let r22 = q16_plane_rep(3);
    let cubed = LinearRep { a: r21.a.pow(3), b: r21.b.clone(), m: 4 };
    t.step(
        "setup",
        "ρ22 is ρ21 twisted by the outer automorphism a ↦ a³",
        format!("ρ21(a)³ = {}", cubed.a),
        cubed == r22,
    );
    t.normalizations.push("a ↦ a³, b ↦ b so that ρ21 occurs in the decomposition".into());
    for (case, rep) in [("(i)", r21.direct_sum(&r21)), ("(ii)", r21.direct_sum(&r22))] {
        let ord = element_order(&rep.a, GroupKind::Projective);
        t.step(
            case,
            "a⁴ is a scalar, so Q16 does not act faithfully on P³",
            format!("projective order of a = {ord:?}"),
            rep.satisfies_relations() && ord == Some(4),
        );
    }
}

/// Rules out every form in `basis` via a common singular coordinate point.
fn singular_everywhere(t: &mut Trace, case: &str, what: &str, basis: &[Poly4]) -> bool {
    let pts = common_singular_coordinate_points(basis);
    let holds = basis.is_empty() || !pts.is_empty();
    let evidence = if basis.is_empty() {
        "no such forms".to_string()
    } else {
        format!("basis {}; singular at {}", show_basis(basis), show_points(&pts))
    };
    t.step(case, format!("{what}: every such surface is singular"), evidence, holds)
}

#[derive(Clone, Debug, Serialize)]
pub struct QuadricAuditResult {
    pub report: CaseAudit,
    /// The surviving normal form before the fixed-point contradiction.
    pub normal_form: Poly4,
}

/// Shows that no `Q16`-invariant smooth quadric carries the induced action.
pub fn quadric_case_audit() -> Result<QuadricAuditResult> {
    let mut t = Trace::default();
    t.assumptions.push("the quadric W is smooth and Q16 acts faithfully on it".into());
    t.assumptions.push("every projective action of Q16 lifts to a linear one".into());
    rule_out_doubled_planes(&mut t);

    let r21 = q16_plane_rep(1);
    let r23 = q16_plane_rep(2);
    let rep3 = r21.direct_sum(&r23);
    for chi in LinearCharacter::all() {
        let basis = semi_invariant_space(&rep3, 2, chi)?;
        singular_everywhere(&mut t, "(iii)", &format!("quadrics with character {chi}"), &basis);
    }

    // (iv): ρ21 plus two one-dimensional summands, all sign choices
    let target = vec![
        Poly4::from_int_terms(&[([1, 1, 0, 0], 1)]),
        Poly4::from_int_terms(&[([0, 0, 1, 1], 1)]),
    ];
    let mut survivors: Vec<(LinearRep, LinearCharacter)> = Vec::new();
    let mut all_match = true;
    for s3 in [1i8, -1] {
        for t3 in [1i8, -1] {
            for s4 in [1i8, -1] {
                for t4 in [1i8, -1] {
                    let rep = r21.direct_sum(&one_dim(s3, t3)).direct_sum(&one_dim(s4, t4));
                    for chi in LinearCharacter::all() {
                        let basis = semi_invariant_space(&rep, 2, chi)?;
                        if basis.is_empty() || !common_singular_coordinate_points(&basis).is_empty() {
                            continue;
                        }
                        all_match &= basis == target;
                        survivors.push((rep.clone(), chi));
                    }
                }
            }
        }
    }
    t.step(
        "(iv)",
        "every remaining family of quadrics is αx1x2 + βx3x4",
        format!("{} of 64 sign and character choices survive", survivors.len()),
        all_match && !survivors.is_empty(),
    );
    let x1x2 = &target[0];
    let x3x4 = &target[1];
    let a_sing = common_singular_coordinate_points(std::slice::from_ref(x3x4));
    let b_sing = common_singular_coordinate_points(std::slice::from_ref(x1x2));
    t.step(
        "(iv)",
        "α = 0 or β = 0 gives a singular quadric",
        format!("x3x4 singular at {}; x1x2 singular at {}", show_points(&a_sing), show_points(&b_sing)),
        !a_sing.is_empty() && !b_sing.is_empty(),
    );
    t.normalizations.push("x3 ↦ (α/β)x3 and division by α give x1x2 + x3x4".into());
    let normal_form = x1x2.add(x3x4);

    let mut a_forms: Vec<CycMatrix> = survivors.iter().map(|(r, _)| r.a.clone()).collect();
    a_forms.sort();
    a_forms.dedup();
    let coordinate_points: Vec<PointP3> = (0..4).map(PointP3::coordinate).collect();
    for a in &a_forms {
        let mut sets = Vec::new();
        for k in [1u64, 2, 4] {
            sets.push(diagonal_fixed_points(&a.pow(k), &normal_form)?);
        }
        let same = sets.iter().all(|s| *s == coordinate_points);
        t.step(
            "(iv)",
            "a, a² and a⁴ have the same four fixed points on the quadric",
            format!("a = {a}; fixed points {}", show_points(&sets[0])),
            same,
        );
    }
    t.assumptions.push("a² and a⁴ both act trivially on the preimage of the four points under the double cover".into());
    let f4 = nikulin_fixed_count(4)?;
    let f2 = nikulin_fixed_count(2)?;
    t.step(
        "(iv)",
        "|X^{a²}| = |X^{a⁴}| is impossible",
        format!("a² has order 4 with {f4} fixed points, a⁴ has order 2 with {f2}; both would equal the preimage of ≤ 8 points"),
        f4 != f2 && f2 <= 2 * coordinate_points.len() as u64,
    );
    Ok(QuadricAuditResult { report: t.finish("quadric image"), normal_form })
}

/// `x1⁴ + x2⁴ + x3³x4 + x3x4³`.
pub fn canonical_quartic() -> Poly4 {
    Poly4::from_int_terms(&[([4, 0, 0, 0], 1), ([0, 4, 0, 0], 1), ([0, 0, 3, 1], 1), ([0, 0, 1, 3], 1)])
}

/// Certifies smoothness of `c1 x1⁴ + c2 x2⁴ + g(x3, x4)`: the first two
/// partials force `x1 = x2 = 0`, and the resultant of the remaining two
/// partials is returned (nonzero means smooth).
pub fn decoupled_smoothness_resultant(f: &Poly4) -> Result<CycNumber> {
    let grad = f.gradient();
    for i in 0..2 {
        let mut e = [0; 4];
        e[i] = 3;
        if grad[i].num_terms() != 1 || grad[i].coeff(&e).is_zero() {
            return Err(Error::Shape(format!("∂F/∂x{} is not a pure cube", i + 1)));
        }
    }
    if grad[2].variables().iter().chain(grad[3].variables().iter()).any(|&v| v < 2) {
        return Err(Error::Shape("x3, x4 partials involve x1 or x2".into()));
    }
    binary_resultant(&grad[2], &grad[3], 2, 3)
}

/// A diagonal substitution taking `α x1⁴ + β x2⁴ + γ x3³x4 + δ x3x4³` (all
/// coefficients nonzero, each a root of unity times a rational perfect power
/// as needed) to the canonical quartic, up to an overall scalar of 1.
pub fn normalize_to_canonical(f: &Poly4) -> Result<CycMatrix> {
    let support = [[4, 0, 0, 0], [0, 4, 0, 0], [0, 0, 3, 1], [0, 0, 1, 3]];
    if f.num_terms() != 4 || support.iter().any(|e| f.coeff(e).is_zero()) {
        return Err(Error::AuditFailed(format!("{f} is not of the shape αx1⁴ + βx2⁴ + γx3³x4 + δx3x4³ with all coefficients nonzero")));
    }
    let [alpha, beta, gamma, delta] = support.map(|e| f.coeff(&e));
    let c1 = alpha.inv()?.nth_root_unit_rational(4)?;
    let c2 = beta.inv()?.nth_root_unit_rational(4)?;
    // γu³v = δuv³ = 1: r = u/v has r² = δ/γ and u⁴ = r/γ
    let r = delta.checked_div(&gamma)?.nth_root_unit_rational(2)?;
    let u = r.checked_div(&gamma)?.nth_root_unit_rational(4)?;
    let v = u.checked_div(&r)?;
    let g = CycMatrix::diagonal(vec![c1, c2, u, v]);
    if apply_matrix(&g, f) != canonical_quartic() {
        return Err(Error::AuditFailed(format!("rescaling {f} did not reach the canonical quartic")));
    }
    Ok(g)
}

/// Sample coefficients `(α, γ, δ)` on which the final rescaling is replayed.
fn normalization_samples() -> Vec<[CycNumber; 3]> {
    let q = |n: i64, d: i64| CycNumber::from_ratio(n, d);
    vec![
        [int(1), int(1), int(1)],
        [int(16), q(1, 8), q(1, 2)],
        [z(4, 1), z(4, 1), -z(4, 1)],
        [int(-81), int(1), int(1)],
    ]
}

#[derive(Clone, Debug, Serialize)]
pub struct QuarticAuditResult {
    pub report: CaseAudit,
    pub canonical: Poly4,
}

/// Replays the quartic case and returns the canonical model.
pub fn quartic_case_audit() -> Result<QuarticAuditResult> {
    let mut t = Trace::default();
    t.assumptions.push("the image is a smooth quartic and Q16 acts faithfully and symplectically".into());
    t.assumptions.push("for g preserving the quartic F, g acts on the 2-form by det(g) divided by the scalar g(F)/F, so symplectic g has g(F) = det(g)·F".into());
    rule_out_doubled_planes(&mut t);

    // (iii)
    let rep3 = q16_plane_rep(1).direct_sum(&q16_plane_rep(2));
    let det3 = rep3.a.determinant();
    let basis3 = semi_invariant_forms(&[(rep3.a.clone(), det3.clone())], 4);
    let shape_ok = basis3.iter().all(|p| {
        p.terms().all(|(e, _)| *e == [2, 2, 0, 0] || *e == [1, 1, 1, 1] || (e[0] == 0 && e[1] == 0))
    });
    t.step("(iii)", "det a = 1, so F is a-invariant", format!("det a = {det3}"), det3.is_one());
    t.step(
        "(iii)",
        "a-invariant quartics are αx1²x2² + βx1x2x3x4 + f4(x3, x4)",
        format!("basis {}", show_basis(&basis3)),
        shape_ok,
    );
    t.notes.push(format!(
        "the a-invariant space is computed in full; its x3, x4 part is {}",
        show_basis(&basis3.iter().filter(|p| p.variables().iter().all(|&v| v >= 2)).cloned().collect::<Vec<_>>())
    ));
    singular_everywhere(&mut t, "(iii)", "a-invariant quartics", &basis3);

    // (iv): reduce a to a1 or a2
    let r = |k: i64| z(8, k);
    let a1 = CycMatrix::diagonal(vec![r(1), r(-1), int(1), int(1)]);
    let a2 = CycMatrix::diagonal(vec![r(1), r(-1), int(1), int(-1)]);
    let swap34 = CycMatrix::permutation(&[0, 1, 3, 2]);
    for (s3, s4) in [(1, 1), (-1, -1), (1, -1), (-1, 1)] {
        let a = CycMatrix::diagonal(vec![r(1), r(-1), int(s3), int(s4)]);
        let (target, how, ok) = match (s3, s4) {
            (1, 1) => ("a1", "as is", a == a1),
            (-1, -1) => ("a1", "a ↦ a⁵", ProjMatrix::new(&a)? == ProjMatrix::new(&a1.pow(5))?),
            (1, -1) => ("a2", "as is", a == a2),
            _ => ("a2", "swap x3 and x4", &(&swap34 * &a) * &swap34 == a2),
        };
        t.step("(iv)", format!("a = diag(ζ8, ζ8⁻¹, {s3}, {s4}) reduces to {target}"), how, ok);
    }
    t.normalizations.push("a ↦ a⁵, b ↦ b and the swap of x3, x4 reduce a to a1 or a2".into());

    let plane_b = q16_plane_rep(1).b;
    let b_of = |t3: i64, t4: i64| plane_b.direct_sum(&CycMatrix::diagonal(vec![int(t3), int(t4)]));
    let signs = [(1, 1), (1, -1), (-1, 1), (-1, -1)];

    // a = a1
    let det_a1 = a1.determinant();
    for (t3, t4) in signs {
        let b = b_of(t3, t4);
        let det_b = b.determinant();
        let basis = semi_invariant_forms(&[(a1.clone(), det_a1.clone()), (b, det_b.clone())], 4);
        singular_everywhere(&mut t, "(iv) a = a1", &format!("b = ... ⊕ diag({t3}, {t4}), det b = {det_b}"), &basis);
    }

    // a = a2
    let det_a2 = a2.determinant();
    let only_a = semi_invariant_forms(&[(a2.clone(), det_a2.clone())], 4);
    let expected_a: Vec<Poly4> = [[4, 0, 0, 0], [1, 1, 1, 1], [0, 4, 0, 0], [0, 0, 3, 1], [0, 0, 1, 3]]
        .iter()
        .map(|e| Poly4::monomial(*e, CycNumber::one()))
        .collect();
    t.step(
        "(iv) a = a2",
        "a(F) = -F gives αx1⁴ + βx2⁴ + γx3³x4 + δx3x4³ + εx1x2x3x4",
        format!("det a2 = {det_a2}; basis {}", show_basis(&only_a)),
        det_a2 == int(-1) && only_a == expected_a,
    );
    let canonical = canonical_quartic();
    for (t3, t4) in signs {
        let b = b_of(t3, t4);
        let d = b.determinant();
        let basis = semi_invariant_forms(&[(a2.clone(), det_a2.clone()), (b, d.clone())], 4);
        let case = format!("(iv) a = a2, b = ... ⊕ diag({t3}, {t4})");
        let expected = vec![
            Poly4::from_terms([([4, 0, 0, 0], int(1)), ([0, 4, 0, 0], d.clone())]),
            Poly4::from_int_terms(&[([0, 0, 3, 1], 1)]),
            Poly4::from_int_terms(&[([0, 0, 1, 3], 1)]),
        ];
        t.step(
            &case,
            format!("b(F) = {d}·F forces β = {d}·α and ε = 0"),
            format!("basis {}", show_basis(&basis)),
            basis == expected,
        );
        if basis != expected {
            continue;
        }
        for (k, name) in [(0, "α"), (1, "γ"), (2, "δ")] {
            let rest: Vec<Poly4> = basis.iter().enumerate().filter(|(j, _)| *j != k).map(|(_, p)| p.clone()).collect();
            let pts = common_singular_coordinate_points(&rest);
            t.step(&case, format!("{name} ≠ 0"), format!("with {name} = 0 the surface is singular at {}", show_points(&pts)), !pts.is_empty());
        }
        for [alpha, gamma, delta] in normalization_samples() {
            let f = basis[0].scale(&alpha).add(&basis[1].scale(&gamma)).add(&basis[2].scale(&delta));
            match normalize_to_canonical(&f) {
                Ok(g) => t.step(&case, "diagonal rescaling reaches the canonical quartic", format!("{f} via diag({})", diag_entries(&g)), true),
                Err(e) => t.step(&case, "diagonal rescaling reaches the canonical quartic", format!("{f}: {e}"), false),
            };
        }
    }
    t.normalizations.push("x_i ↦ c_i x_i with c_i fourth roots of coefficients gives x1⁴ + x2⁴ + x3³x4 + x3x4³".into());

    let res = decoupled_smoothness_resultant(&canonical)?;
    t.step(
        "canonical",
        "x1⁴ + x2⁴ + x3³x4 + x3x4³ is smooth",
        format!("∂1, ∂2 force x1 = x2 = 0; Res(∂3, ∂4) = {res}"),
        !res.is_zero(),
    );
    Ok(QuarticAuditResult { report: t.finish("quartic image"), canonical })
}

fn diag_entries(g: &CycMatrix) -> String {
    (0..g.size()).map(|i| g.get(i, i).to_string()).collect::<Vec<_>>().join(", ")
}

#[derive(Clone, Debug, Serialize)]
pub struct FermatQ16Report {
    pub order: usize,
    pub relations_hold: bool,
    /// `g(F) = c·F` with `c·α(g) = det g` for every element.
    pub scalars_match_multiplier: bool,
    pub all_symplectic: bool,
    pub passed: bool,
}

/// Checks that `⟨P, Q⟩` is a symplectic `Q16` inside the Fermat symmetries.
pub fn fermat_q16_check() -> Result<FermatQ16Report> {
    let g = fermat::q16();
    let (p, q) = (fermat::p(), fermat::q());
    let rep = LinearRep::new(p, q, 4)?;
    let relations_hold = rep.satisfies_relations_projectively();
    let fermat_form = Poly4::fermat();
    let mut scalars_match_multiplier = true;
    let mut all_symplectic = true;
    for m in g.elements() {
        let image = apply_matrix(m, &fermat_form);
        let c = image.coeff(&[4, 0, 0, 0]);
        let alpha = alpha_multiplier(&ProjMatrix::new(m)?)?;
        scalars_match_multiplier &= image == fermat_form.scale(&c) && &c * &alpha == m.determinant();
        all_symplectic &= alpha.is_one();
    }
    let order = g.order();
    Ok(FermatQ16Report {
        order,
        relations_hold,
        scalars_match_multiplier,
        all_symplectic,
        passed: order == 16 && relations_hold && scalars_match_multiplier && all_symplectic,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn irreps_satisfy_relations() {
        let reps = q16_irreps();
        assert_eq!(reps.len(), 7);
        assert!(reps.iter().all(LinearRep::satisfies_relations));
        let dims: usize = reps.iter().map(|r| r.dimension().pow(2)).sum();
        assert_eq!(dims, 16);
    }

    #[test]
    fn d8_obstruction() {
        assert!(check_d8_obstruction());
    }
}
