//! Polynomials in four variables over cyclotomic fields, points of P³ and the
//! handful of projective-geometry checks the quartic analysis needs.

use std::collections::BTreeMap;
use std::fmt;

use num_integer::Integer;
use num_traits::Signed;
use serde::{Serialize, Serializer};

use crate::cyclotomic::CycNumber;
use crate::error::{Error, Result};
use crate::matrix::CycMatrix;

pub type Exponent = [u32; 4];

/// Sparse polynomial in `x1..x4`; zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly4 {
    terms: BTreeMap<Exponent, CycNumber>,
}

impl Poly4 {
    pub fn zero() -> Self {
        Poly4::default()
    }

    pub fn constant(c: CycNumber) -> Self {
        Poly4::monomial([0; 4], c)
    }

    pub fn monomial(e: Exponent, c: CycNumber) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(e, c);
        }
        Poly4 { terms }
    }

    /// The variable `x_{i+1}` (0-based index).
    pub fn var(i: usize) -> Self {
        let mut e = [0; 4];
        e[i] = 1;
        Poly4::monomial(e, CycNumber::one())
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Exponent, CycNumber)>) -> Self {
        let mut p = Poly4::zero();
        for (e, c) in terms {
            p.add_term(e, &c);
        }
        p
    }

    /// Integer-coefficient shorthand.
    pub fn from_int_terms(terms: &[(Exponent, i64)]) -> Self {
        Poly4::from_terms(terms.iter().map(|&(e, c)| (e, CycNumber::from_integer(c))))
    }

    /// `x1⁴ + x2⁴ + x3⁴ + x4⁴`.
    pub fn fermat() -> Self {
        Poly4::from_int_terms(&[([4, 0, 0, 0], 1), ([0, 4, 0, 0], 1), ([0, 0, 4, 0], 1), ([0, 0, 0, 4], 1)])
    }

    fn add_term(&mut self, e: Exponent, c: &CycNumber) {
        if c.is_zero() {
            return;
        }
        let sum = match self.terms.get(&e) {
            Some(old) => old + c,
            None => c.clone(),
        };
        if sum.is_zero() {
            self.terms.remove(&e);
        } else {
            self.terms.insert(e, sum);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in decreasing lexicographic order of exponents.
    pub fn terms(&self) -> impl Iterator<Item = (&Exponent, &CycNumber)> {
        self.terms.iter().rev()
    }

    pub fn coeff(&self, e: &Exponent) -> CycNumber {
        self.terms.get(e).cloned().unwrap_or_else(CycNumber::zero)
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Total degree; 0 for the zero polynomial.
    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().sum()).max().unwrap_or(0)
    }

    pub fn is_homogeneous(&self) -> bool {
        let d = self.degree();
        self.terms.keys().all(|e| e.iter().sum::<u32>() == d)
    }

    /// Indices of variables that occur.
    pub fn variables(&self) -> Vec<usize> {
        (0..4).filter(|&i| self.terms.keys().any(|e| e[i] > 0)).collect()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(*e, c);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&CycNumber::from_integer(-1)))
    }

    pub fn scale(&self, c: &CycNumber) -> Self {
        Poly4::from_terms(self.terms.iter().map(|(e, x)| (*e, x * c)))
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Poly4::zero();
        for (e, c) in &self.terms {
            for (f, d) in &other.terms {
                let g = [e[0] + f[0], e[1] + f[1], e[2] + f[2], e[3] + f[3]];
                out.add_term(g, &(c * d));
            }
        }
        out
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut out = Poly4::constant(CycNumber::one());
        for _ in 0..n {
            out = out.mul(self);
        }
        out
    }

    pub fn eval(&self, x: &[CycNumber; 4]) -> CycNumber {
        let mut acc = CycNumber::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for i in 0..4 {
                for _ in 0..e[i] {
                    t = &t * &x[i];
                }
            }
            acc = &acc + &t;
        }
        acc
    }

    /// Partial derivative in `x_{i+1}`.
    pub fn derivative(&self, i: usize) -> Self {
        Poly4::from_terms(self.terms.iter().filter(|(e, _)| e[i] > 0).map(|(e, c)| {
            let mut f = *e;
            f[i] -= 1;
            (f, c.scale(&crate::Rational::from_integer(e[i].into())))
        }))
    }

    pub fn gradient(&self) -> [Poly4; 4] {
        [self.derivative(0), self.derivative(1), self.derivative(2), self.derivative(3)]
    }

    /// Substitutes `x_i ↦ images[i]`.
    pub fn substitute(&self, images: &[Poly4; 4]) -> Self {
        let mut out = Poly4::zero();
        for (e, c) in &self.terms {
            let mut t = Poly4::constant(c.clone());
            for i in 0..4 {
                t = t.mul(&images[i].pow(e[i]));
            }
            out = out.add(&t);
        }
        out
    }
}

impl fmt::Display for Poly4 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (k, (e, c)) in self.terms().enumerate() {
            let is_const = e.iter().all(|&x| x == 0);
            let negative = c.to_rational().filter(|q| q.is_negative());
            let c = match &negative {
                Some(q) => CycNumber::from_rational(-q.clone()),
                None => c.clone(),
            };
            match (k, negative.is_some()) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if !c.is_one() || is_const {
                if c.is_rational() {
                    write!(f, "{c}")?;
                } else {
                    write!(f, "({c})")?;
                }
            }
            for (i, &p) in e.iter().enumerate() {
                match p {
                    0 => {}
                    1 => write!(f, "x{}", i + 1)?,
                    _ => write!(f, "x{}^{}", i + 1, p)?,
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Poly4 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for Poly4 {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// All exponent vectors of total degree `d`, in decreasing lexicographic order.
pub fn monomials(d: u32) -> Vec<Exponent> {
    let mut out = Vec::new();
    for a in (0..=d).rev() {
        for b in (0..=d - a).rev() {
            for c in (0..=d - a - b).rev() {
                out.push([a, b, c, d - a - b - c]);
            }
        }
    }
    out
}

/// `F(g·x)`: each `x_i` becomes `Σ_j g_ij x_j`.
pub fn apply_matrix(g: &CycMatrix, f: &Poly4) -> Poly4 {
    assert_eq!(g.size(), 4, "substitution needs a 4×4 matrix");
    let images: [Poly4; 4] = std::array::from_fn(|i| {
        Poly4::from_terms((0..4).map(|j| {
            let mut e = [0; 4];
            e[j] = 1;
            (e, g.get(i, j).clone())
        }))
    });
    f.substitute(&images)
}

/// A point of P³, stored with its first nonzero coordinate equal to 1.
/// Points are ordered by the position of that coordinate, then by the rest.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PointP3([CycNumber; 4]);

impl PointP3 {
    fn lead(&self) -> usize {
        self.0.iter().position(|c| !c.is_zero()).expect("nonzero point")
    }
}

impl Ord for PointP3 {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.lead().cmp(&other.lead()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for PointP3 {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl PointP3 {
    pub fn new(coords: [CycNumber; 4]) -> Result<Self> {
        let lead = coords.iter().find(|c| !c.is_zero()).cloned().ok_or(Error::ZeroMatrix)?;
        let inv = lead.inv()?;
        Ok(PointP3(coords.map(|c| &c * &inv)))
    }

    pub fn from_ints(coords: [i64; 4]) -> Result<Self> {
        PointP3::new(coords.map(CycNumber::from_integer))
    }

    /// The coordinate point with a 1 in slot `i` (0-based).
    pub fn coordinate(i: usize) -> Self {
        PointP3(std::array::from_fn(|j| if i == j { CycNumber::one() } else { CycNumber::zero() }))
    }

    pub fn coords(&self) -> &[CycNumber; 4] {
        &self.0
    }
}

impl fmt::Display for PointP3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|c| c.to_string()).collect();
        write!(f, "[{}]", parts.join(" : "))
    }
}

impl fmt::Debug for PointP3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for PointP3 {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Whether every partial derivative of `f` vanishes at `p`.
pub fn singular_at(f: &Poly4, p: &PointP3) -> Result<bool> {
    if !f.is_homogeneous() {
        return Err(Error::Shape("singularity test needs a homogeneous form".into()));
    }
    if !f.eval(p.coords()).is_zero() {
        return Err(Error::PointNotOnSurface(format!("{p} is not on {f}")));
    }
    Ok(f.gradient().iter().all(|d| d.eval(p.coords()).is_zero()))
}

/// Whether `p` is a singular point of every form in the span of `basis`.
pub fn common_singular_point(basis: &[Poly4], p: &PointP3) -> bool {
    basis.iter().all(|f| f.eval(p.coords()).is_zero() && f.gradient().iter().all(|d| d.eval(p.coords()).is_zero()))
}

/// Coefficients `c_0..c_d` of a binary form `Σ c_k x^{d-k} y^k` in the
/// variables `x_{i+1}`, `x_{j+1}`.
fn binary_coefficients(f: &Poly4, i: usize, j: usize) -> Result<Vec<CycNumber>> {
    if f.is_zero() {
        return Err(Error::Shape("zero binary form".into()));
    }
    if !f.is_homogeneous() || f.variables().iter().any(|&v| v != i && v != j) {
        return Err(Error::Shape(format!("{f} is not a binary form in x{} and x{}", i + 1, j + 1)));
    }
    let d = f.degree();
    Ok((0..=d)
        .map(|k| {
            let mut e = [0; 4];
            e[i] = d - k;
            e[j] = k;
            f.coeff(&e)
        })
        .collect())
}

/// Sylvester resultant of two binary forms in `x_{i+1}`, `x_{j+1}`; it
/// vanishes exactly when the forms share a projective root.
pub fn binary_resultant(f: &Poly4, g: &Poly4, i: usize, j: usize) -> Result<CycNumber> {
    let a = binary_coefficients(f, i, j)?;
    let b = binary_coefficients(g, i, j)?;
    let (m, n) = (a.len() - 1, b.len() - 1);
    let size = m + n;
    if size == 0 {
        return Ok(CycNumber::one());
    }
    let mut rows = vec![vec![CycNumber::zero(); size]; size];
    for r in 0..n {
        for (k, c) in a.iter().enumerate() {
            rows[r][r + k] = c.clone();
        }
    }
    for r in 0..m {
        for (k, c) in b.iter().enumerate() {
            rows[n + r][r + k] = c.clone();
        }
    }
    Ok(CycMatrix::from_rows(rows).determinant())
}

/// Fixed points of a diagonal `g` on the surface `f = 0`.
///
/// Each eigenspace of `g` is a coordinate subspace. Points contribute when
/// on the surface; lines contribute the roots of `f` restricted to them,
/// which must have root-of-unity ratios. Planes or larger meet the surface in
/// curves and are reported as an infinite locus.
pub fn diagonal_fixed_points(g: &CycMatrix, f: &Poly4) -> Result<Vec<PointP3>> {
    if g.size() != 4 || !g.is_diagonal() {
        return Err(Error::Shape("fixed-point search needs a diagonal 4×4 matrix".into()));
    }
    if !f.is_homogeneous() || f.is_zero() {
        return Err(Error::Shape("surface must be a nonzero form".into()));
    }
    let mut spaces: Vec<(CycNumber, Vec<usize>)> = Vec::new();
    for i in 0..4 {
        let e = g.get(i, i).clone();
        match spaces.iter_mut().find(|(v, _)| *v == e) {
            Some((_, idx)) => idx.push(i),
            None => spaces.push((e, vec![i])),
        }
    }
    let mut out = Vec::new();
    for (_, idx) in &spaces {
        match idx.len() {
            1 => {
                let p = PointP3::coordinate(idx[0]);
                if f.eval(p.coords()).is_zero() {
                    out.push(p);
                }
            }
            2 => out.extend(line_points(f, idx[0], idx[1])?),
            _ => {
                return Err(Error::InfiniteLocus(format!(
                    "eigenspace spanned by x{:?} meets the surface in a curve",
                    idx.iter().map(|i| i + 1).collect::<Vec<_>>()
                )))
            }
        }
    }
    out.sort();
    Ok(out)
}

/// Zeros of `f` on the coordinate line spanned by `x_{i+1}`, `x_{j+1}`.
fn line_points(f: &Poly4, i: usize, j: usize) -> Result<Vec<PointP3>> {
    let restrict: [Poly4; 4] = std::array::from_fn(|k| if k == i || k == j { Poly4::var(k) } else { Poly4::zero() });
    let r = f.substitute(&restrict);
    if r.is_zero() {
        return Err(Error::InfiniteLocus(format!("the line x{} x{} lies on the surface", i + 1, j + 1)));
    }
    let coeffs = binary_coefficients(&r, i, j)?;
    let point = |s: CycNumber, t: CycNumber| {
        let mut c: [CycNumber; 4] = std::array::from_fn(|_| CycNumber::zero());
        c[i] = s;
        c[j] = t;
        PointP3::new(c)
    };
    let mut out = Vec::new();
    // x_j = 0 is a root when the leading coefficient vanishes, x_i = 0 when the trailing one does
    let lo = coeffs.iter().position(|c| !c.is_zero()).expect("nonzero");
    let hi = coeffs.iter().rposition(|c| !c.is_zero()).expect("nonzero");
    if lo > 0 {
        out.push(point(CycNumber::one(), CycNumber::zero())?);
    }
    if hi + 1 < coeffs.len() {
        out.push(point(CycNumber::zero(), CycNumber::one())?);
    }
    // remaining affine polynomial in z = x_j / x_i, coefficients by ascending power
    let mut poly: Vec<CycNumber> = coeffs[lo..=hi].to_vec();
    if poly.len() > 1 {
        let cond = poly.iter().map(CycNumber::conductor).fold(1u32, |a, b| a.lcm(&b));
        let n = (cond * (poly.len() as u32 - 1)).lcm(&24);
        for k in 0..n {
            let z = CycNumber::zeta(n, k as i64);
            let mut found = false;
            while poly.len() > 1 {
                let (q, rem) = deflate(&poly, &z);
                if !rem.is_zero() {
                    break;
                }
                poly = q;
                found = true;
            }
            if found {
                out.push(point(CycNumber::one(), z)?);
            }
            if poly.len() == 1 {
                break;
            }
        }
        if poly.len() > 1 {
            return Err(Error::UnsupportedRestriction(format!(
                "restriction of {f} to the x{} x{} line has roots off the unit circle",
                i + 1,
                j + 1
            )));
        }
    }
    Ok(out)
}

/// Divides `Σ poly[k] z^k` by `z - root`, returning quotient and remainder.
fn deflate(poly: &[CycNumber], root: &CycNumber) -> (Vec<CycNumber>, CycNumber) {
    let d = poly.len() - 1;
    let mut q = vec![CycNumber::zero(); d];
    let mut carry = poly[d].clone();
    for k in (0..d).rev() {
        q[k] = carry.clone();
        carry = &poly[k] + &(&carry * root);
    }
    (q, carry)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn monomial_counts() {
        assert_eq!(monomials(2).len(), 10);
        assert_eq!(monomials(4).len(), 35);
        assert_eq!(monomials(4)[0], [4, 0, 0, 0]);
    }

    #[test]
    fn derivative_and_display() {
        let f = Poly4::from_int_terms(&[([0, 0, 3, 1], 1), ([0, 0, 1, 3], 1)]);
        assert_eq!(f.derivative(2), Poly4::from_int_terms(&[([0, 0, 2, 1], 3), ([0, 0, 0, 3], 1)]));
        assert_eq!(f.to_string(), "x3^3x4 + x3x4^3");
    }

    #[test]
    fn deflation() {
        // z^2 - 1 = (z - 1)(z + 1)
        let p = vec![CycNumber::from_integer(-1), CycNumber::zero(), CycNumber::one()];
        let (q, r) = deflate(&p, &CycNumber::one());
        assert!(r.is_zero());
        assert_eq!(q, vec![CycNumber::one(), CycNumber::one()]);
    }
}
