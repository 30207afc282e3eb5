//! Exact arithmetic in cyclotomic fields.
//!
//! A [`CycNumber`] is stored in the power basis `1, ζ_n, …, ζ_n^{φ(n)-1}` of
//! `ℚ(ζ_n)`, reduced modulo the `n`-th cyclotomic polynomial. The conductor is
//! always the smallest one whose field contains the value (and never `≡ 2 mod
//! 4`, since `ℚ(ζ_{2m}) = ℚ(ζ_m)` for odd `m`), so structural equality is field
//! equality and values can be hashed. Mixed-conductor arithmetic promotes both
//! operands to the lcm conductor and then re-canonicalizes.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// Per-conductor tables: `Φ_n` and the reduced power basis images of `ζ_n^k`.
struct FieldData {
    phi: usize,
    /// `powers[k]` is `ζ_n^k` (0 ≤ k < n) in the power basis.
    powers: Vec<Vec<i64>>,
}

/// Data for testing membership of a value of `ℚ(ζ_n)` in the subfield `ℚ(ζ_d)`.
struct Embedding {
    /// Images of the `ℚ(ζ_d)` basis in `ℚ(ζ_n)` coordinates.
    rows: Vec<Vec<i64>>,
    pivots: Vec<usize>,
    /// Inverse of the pivot-column square block of `rows`.
    inv: Vec<Vec<Rational>>,
}

fn field_cache() -> &'static RwLock<HashMap<u32, Arc<FieldData>>> {
    static CACHE: OnceLock<RwLock<HashMap<u32, Arc<FieldData>>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

fn embedding_cache() -> &'static RwLock<HashMap<(u32, u32), Arc<Embedding>>> {
    static CACHE: OnceLock<RwLock<HashMap<(u32, u32), Arc<Embedding>>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

fn poly_cache() -> &'static RwLock<HashMap<u32, Arc<Vec<i64>>>> {
    static CACHE: OnceLock<RwLock<HashMap<u32, Arc<Vec<i64>>>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// Coefficients (low degree first) of the `n`-th cyclotomic polynomial.
pub fn cyclotomic_polynomial(n: u32) -> Arc<Vec<i64>> {
    assert!(n >= 1, "conductor must be positive");
    if let Some(p) = poly_cache().read().unwrap().get(&n) {
        return p.clone();
    }
    // x^n - 1 divided by Φ_d for every proper divisor d.
    let mut num = vec![0i64; n as usize + 1];
    num[0] = -1;
    num[n as usize] = 1;
    for d in 1..n {
        if n % d == 0 {
            num = exact_div(&num, &cyclotomic_polynomial(d));
        }
    }
    let poly = Arc::new(num);
    poly_cache().write().unwrap().insert(n, poly.clone());
    poly
}

/// Exact division of integer polynomials by a monic divisor.
fn exact_div(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let qd = num.len() - 1 - dd;
    let mut q = vec![0i64; qd + 1];
    for i in (0..=qd).rev() {
        let c = rem[i + dd];
        q[i] = c;
        for (j, &dj) in den.iter().enumerate() {
            rem[i + j] -= c * dj;
        }
    }
    debug_assert!(rem.iter().all(|&r| r == 0));
    q
}

fn field(n: u32) -> Arc<FieldData> {
    if let Some(f) = field_cache().read().unwrap().get(&n) {
        return f.clone();
    }
    let poly = cyclotomic_polynomial(n);
    let phi = poly.len() - 1;
    let mut powers = Vec::with_capacity(n as usize);
    let mut cur = vec![0i64; phi];
    cur[0] = 1;
    for _ in 0..n {
        powers.push(cur.clone());
        // multiply by x and reduce with the monic Φ_n
        let top = cur[phi - 1];
        for j in (1..phi).rev() {
            cur[j] = cur[j - 1];
        }
        cur[0] = 0;
        if top != 0 {
            for (j, c) in cur.iter_mut().enumerate() {
                *c -= top * poly[j];
            }
        }
    }
    let data = Arc::new(FieldData { phi, powers });
    field_cache().write().unwrap().insert(n, data.clone());
    data
}

fn embedding(n: u32, d: u32) -> Arc<Embedding> {
    if let Some(e) = embedding_cache().read().unwrap().get(&(n, d)) {
        return e.clone();
    }
    let big = field(n);
    let small = field(d);
    let step = (n / d) as usize;
    let rows: Vec<Vec<i64>> = (0..small.phi).map(|j| big.powers[j * step].clone()).collect();

    // column pivots via elimination on a rational copy
    let mut work: Vec<Vec<Rational>> = rows
        .iter()
        .map(|r| r.iter().map(|&x| Rational::from_integer(x.into())).collect())
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..big.phi {
        if r == work.len() {
            break;
        }
        let Some(p) = (r..work.len()).find(|&i| !work[i][c].is_zero()) else {
            continue;
        };
        work.swap(r, p);
        let pv = work[r][c].clone();
        for i in 0..work.len() {
            if i != r && !work[i][c].is_zero() {
                let f = &work[i][c] / &pv;
                for k in 0..big.phi {
                    let t = &f * &work[r][k];
                    work[i][k] -= t;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    assert_eq!(pivots.len(), small.phi, "embedding must have full rank");
    let block: Vec<Vec<Rational>> = rows
        .iter()
        .map(|row| pivots.iter().map(|&c| Rational::from_integer(row[c].into())).collect())
        .collect();
    let inv = invert_rational(&block).expect("embedding block is invertible");
    let emb = Arc::new(Embedding { rows, pivots, inv });
    embedding_cache().write().unwrap().insert((n, d), emb.clone());
    emb
}

fn invert_rational(m: &[Vec<Rational>]) -> Option<Vec<Vec<Rational>>> {
    let n = m.len();
    let mut a: Vec<Vec<Rational>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }));
            r
        })
        .collect();
    for c in 0..n {
        let p = (c..n).find(|&i| !a[i][c].is_zero())?;
        a.swap(c, p);
        let pv = a[c][c].clone();
        for k in 0..2 * n {
            a[c][k] = &a[c][k] / &pv;
        }
        for i in 0..n {
            if i != c && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                for k in 0..2 * n {
                    let t = &f * &a[c][k];
                    a[i][k] -= t;
                }
            }
        }
    }
    Some(a.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// `ℚ(ζ_{2m}) = ℚ(ζ_m)` for odd `m`; conductors are kept off `2 mod 4`.
pub fn normalize_conductor(n: u32) -> u32 {
    if n % 4 == 2 {
        n / 2
    } else {
        n
    }
}

fn prime_divisors(mut n: u32) -> Vec<u32> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            out.push(p);
            while n % p == 0 {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// An element of a cyclotomic field, in canonical form.
///
/// The derived ordering is structural and only meant for deterministic sorting.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CycNumber {
    conductor: u32,
    coeffs: Vec<Rational>,
}

impl CycNumber {
    fn from_parts(conductor: u32, coeffs: Vec<Rational>) -> Self {
        let mut n = conductor;
        let mut c = coeffs;
        loop {
            if n == 1 {
                break;
            }
            if c[1..].iter().all(Zero::is_zero) {
                c.truncate(1);
                n = 1;
                break;
            }
            let mut descended = false;
            for p in prime_divisors(n) {
                let d = normalize_conductor(n / p);
                if let Some(sub) = project(n, d, &c) {
                    n = d;
                    c = sub;
                    descended = true;
                    break;
                }
            }
            if !descended {
                break;
            }
        }
        CycNumber { conductor: n, coeffs: c }
    }

    pub fn zero() -> Self {
        CycNumber { conductor: 1, coeffs: vec![Rational::zero()] }
    }

    pub fn one() -> Self {
        Self::from_integer(1)
    }

    pub fn from_integer(v: i64) -> Self {
        Self::from_rational(Rational::from_integer(v.into()))
    }

    pub fn from_rational(q: Rational) -> Self {
        CycNumber { conductor: 1, coeffs: vec![q] }
    }

    pub fn from_ratio(num: i64, den: i64) -> Self {
        Self::from_rational(Rational::new(num.into(), den.into()))
    }

    /// `ζ_n^k` with `ζ_n = e^{2πi/n}`.
    pub fn zeta(n: u32, k: i64) -> Self {
        assert!(n >= 1, "zeta needs a positive order");
        let k = k.rem_euclid(n as i64) as u32;
        if n % 4 == 2 {
            // ζ_{2m} = -ζ_m^{(m+1)/2}
            let m = n / 2;
            let base = Self::zeta(m, (k as i64) * ((m as i64 + 1) / 2));
            return if k % 2 == 1 { -base } else { base };
        }
        let f = field(n);
        let coeffs = f.powers[k as usize].iter().map(|&x| Rational::from_integer(x.into())).collect();
        Self::from_parts(n, coeffs)
    }

    /// Builds `Σ coeffs[i]·ζ_n^i` from power-basis coordinates of length φ(n).
    pub fn from_coords(n: u32, coeffs: Vec<Rational>) -> Result<Self> {
        if n == 0 || n % 4 == 2 {
            return Err(Error::OutOfRange(format!("conductor {n} is not canonical")));
        }
        if coeffs.len() as u64 != euler_phi(n as u64) {
            return Err(Error::Shape(format!("expected {} coordinates for conductor {n}", euler_phi(n as u64))));
        }
        Ok(Self::from_parts(n, coeffs))
    }

    /// Compact text form `n:c0,c1,…` that [`CycNumber::parse_compact`] reads back.
    pub fn to_compact(&self) -> String {
        let cs: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
        format!("{}:{}", self.conductor, cs.join(","))
    }

    pub fn parse_compact(s: &str) -> Result<Self> {
        let (n, rest) = s.split_once(':').ok_or_else(|| Error::Parse(format!("missing ':' in {s:?}")))?;
        let n: u32 = n.trim().parse().map_err(|_| Error::Parse(format!("bad conductor in {s:?}")))?;
        let coeffs = rest
            .split(',')
            .map(|c| c.trim().parse::<Rational>().map_err(|_| Error::Parse(format!("bad coefficient {c:?}"))))
            .collect::<Result<Vec<_>>>()?;
        Self::from_coords(n, coeffs)
    }

    pub fn conductor(&self) -> u32 {
        self.conductor
    }

    /// Power-basis coordinates in `ℚ(ζ_conductor)`.
    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.conductor == 1 && self.coeffs[0].is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.conductor == 1 && self.coeffs[0].is_one()
    }

    pub fn is_rational(&self) -> bool {
        self.conductor == 1
    }

    pub fn to_rational(&self) -> Option<Rational> {
        self.is_rational().then(|| self.coeffs[0].clone())
    }

    /// Coordinates in the (normalized) conductor `m`, which must be a multiple
    /// of this value's conductor.
    pub fn coords_in(&self, m: u32) -> Vec<Rational> {
        assert!(m % self.conductor == 0, "conductor {m} does not contain ζ_{}", self.conductor);
        let big = field(m);
        if m == self.conductor {
            return self.coeffs.clone();
        }
        let step = (m / self.conductor) as usize;
        let mut out = vec![Rational::zero(); big.phi];
        for (j, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (o, &p) in out.iter_mut().zip(&big.powers[j * step]) {
                if p != 0 {
                    *o += c * Rational::from_integer(p.into());
                }
            }
        }
        out
    }

    fn common_conductor(&self, other: &Self) -> u32 {
        normalize_conductor(self.conductor.lcm(&other.conductor))
    }

    pub fn scale(&self, q: &Rational) -> Self {
        if q.is_zero() {
            return Self::zero();
        }
        CycNumber {
            conductor: self.conductor,
            coeffs: self.coeffs.iter().map(|c| c * q).collect(),
        }
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if self.conductor == 1 {
            return Ok(Self::from_rational(self.coeffs[0].recip()));
        }
        let n = self.conductor;
        let f = field(n);
        let phi = f.phi;
        // column j of the multiplication matrix is self·ζ^j
        let mut cols = Vec::with_capacity(phi);
        for j in 0..phi {
            cols.push(mul_coords(n, &self.coeffs, &unit_vector(phi, j)));
        }
        let m: Vec<Vec<Rational>> =
            (0..phi).map(|i| (0..phi).map(|j| cols[j][i].clone()).collect()).collect();
        let inv = invert_rational(&m).ok_or(Error::DivisionByZero)?;
        let coeffs = (0..phi).map(|i| inv[i][0].clone()).collect();
        Ok(Self::from_parts(n, coeffs))
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self> {
        Ok(self * &other.inv()?)
    }

    pub fn pow(&self, e: i64) -> Result<Self> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut e = e.unsigned_abs();
        let mut acc = Self::one();
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &sq;
            }
            e >>= 1;
            if e > 0 {
                sq = &sq * &sq;
            }
        }
        Ok(acc)
    }

    /// The Galois automorphism `ζ ↦ ζ^j` of the value's own field; `j` must be
    /// coprime to the conductor.
    pub fn galois(&self, j: i64) -> Self {
        let n = self.conductor;
        if n == 1 {
            return self.clone();
        }
        assert_eq!((j.rem_euclid(n as i64) as u32).gcd(&n), 1, "not a Galois element");
        let f = field(n);
        let mut out = vec![Rational::zero(); f.phi];
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let idx = (j * k as i64).rem_euclid(n as i64) as usize;
            for (o, &p) in out.iter_mut().zip(&f.powers[idx]) {
                if p != 0 {
                    *o += c * Rational::from_integer(p.into());
                }
            }
        }
        Self::from_parts(n, out)
    }

    /// Complex conjugation.
    pub fn conj(&self) -> Self {
        self.galois(-1)
    }

    /// `Some((m, k))` with `0 ≤ k < m` and `self = e^{2πik/m}`, where `m` is
    /// the multiplicative order.
    pub fn as_root_of_unity(&self) -> Option<(u32, u32)> {
        if self.is_zero() {
            return None;
        }
        // all roots of unity of ℚ(ζ_n) lie in μ_{lcm(2, n)}
        let big = 2 * self.conductor / self.conductor.gcd(&2);
        for k in 0..big {
            if Self::zeta(big, k as i64) == *self {
                let g = k.gcd(&big);
                return Some((big / g, k / g));
            }
        }
        None
    }

    pub fn root_of_unity_order(&self) -> Option<u32> {
        self.as_root_of_unity().map(|(m, _)| m)
    }

    /// The square root with argument in `[0, π)` of a root of unity.
    pub fn sqrt_of_root_of_unity(&self) -> Result<Self> {
        let (m, k) = self
            .as_root_of_unity()
            .ok_or_else(|| Error::UnsupportedRadicand(self.to_string()))?;
        Ok(Self::zeta(2 * m, k as i64))
    }

    /// Writes the value as `u·q` with `u` a root of unity and `q > 0` rational.
    pub fn as_unit_times_positive_rational(&self) -> Option<(CycNumber, Rational)> {
        if self.is_zero() {
            return None;
        }
        let big = 2 * self.conductor / self.conductor.gcd(&2);
        for k in 0..big {
            let u = Self::zeta(big, k as i64);
            let q = self * &Self::zeta(big, -(k as i64));
            if let Some(q) = q.to_rational() {
                if q.is_positive() {
                    return Some((u, q));
                }
            }
        }
        None
    }

    /// An `r`-th root of a value of the form `unit · q` where `q` is a positive
    /// rational perfect `r`-th power. The unit part uses the principal branch
    /// `e^{2πik/(rm)}` of `e^{2πik/m}`.
    pub fn nth_root_unit_rational(&self, r: u32) -> Result<Self> {
        let (u, q) = self
            .as_unit_times_positive_rational()
            .ok_or_else(|| Error::UnsupportedRadicand(self.to_string()))?;
        let (m, k) = u.as_root_of_unity().expect("unit is a root of unity");
        let num = integer_root(q.numer(), r).ok_or_else(|| Error::UnsupportedRadicand(self.to_string()))?;
        let den = integer_root(q.denom(), r).ok_or_else(|| Error::UnsupportedRadicand(self.to_string()))?;
        Ok(Self::zeta(r * m, k as i64).scale(&Rational::new(num, den)))
    }
}

fn integer_root(v: &BigInt, r: u32) -> Option<BigInt> {
    let root = v.nth_root(r);
    (num_traits::pow::pow(root.clone(), r as usize) == *v).then_some(root)
}

fn unit_vector(len: usize, j: usize) -> Vec<Rational> {
    (0..len).map(|i| if i == j { Rational::one() } else { Rational::zero() }).collect()
}

fn project(n: u32, d: u32, coords: &[Rational]) -> Option<Vec<Rational>> {
    let e = embedding(n, d);
    let small = e.rows.len();
    let mut x = vec![Rational::zero(); small];
    for (i, &p) in e.pivots.iter().enumerate() {
        if coords[p].is_zero() {
            continue;
        }
        for (xj, inv) in x.iter_mut().zip(&e.inv[i]) {
            if !inv.is_zero() {
                *xj += &coords[p] * inv;
            }
        }
    }
    // verify x·rows == coords
    for (col, target) in coords.iter().enumerate() {
        let mut acc = Rational::zero();
        for (xj, row) in x.iter().zip(&e.rows) {
            if row[col] != 0 && !xj.is_zero() {
                acc += xj * Rational::from_integer(row[col].into());
            }
        }
        if &acc != target {
            return None;
        }
    }
    Some(x)
}

fn mul_coords(n: u32, a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let f = field(n);
    let phi = f.phi;
    let mut prod = vec![Rational::zero(); 2 * phi - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if !y.is_zero() {
                prod[i + j] += x * y;
            }
        }
    }
    let mut out: Vec<Rational> = prod[..phi].to_vec();
    for (k, c) in prod.iter().enumerate().skip(phi) {
        if c.is_zero() {
            continue;
        }
        for (o, &p) in out.iter_mut().zip(&f.powers[k % n as usize]) {
            if p != 0 {
                *o += c * Rational::from_integer(p.into());
            }
        }
    }
    out
}

impl Add for &CycNumber {
    type Output = CycNumber;
    fn add(self, rhs: &CycNumber) -> CycNumber {
        if rhs.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return rhs.clone();
        }
        let m = self.common_conductor(rhs);
        let a = self.coords_in(m);
        let b = rhs.coords_in(m);
        CycNumber::from_parts(m, a.into_iter().zip(b).map(|(x, y)| x + y).collect())
    }
}

impl Sub for &CycNumber {
    type Output = CycNumber;
    fn sub(self, rhs: &CycNumber) -> CycNumber {
        self + &(-rhs)
    }
}

impl Mul for &CycNumber {
    type Output = CycNumber;
    fn mul(self, rhs: &CycNumber) -> CycNumber {
        if self.is_zero() || rhs.is_zero() {
            return CycNumber::zero();
        }
        if self.conductor == 1 {
            return rhs.scale(&self.coeffs[0]);
        }
        if rhs.conductor == 1 {
            return self.scale(&rhs.coeffs[0]);
        }
        let m = self.common_conductor(rhs);
        let a = self.coords_in(m);
        let b = rhs.coords_in(m);
        CycNumber::from_parts(m, mul_coords(m, &a, &b))
    }
}

impl Neg for &CycNumber {
    type Output = CycNumber;
    fn neg(self) -> CycNumber {
        CycNumber { conductor: self.conductor, coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for CycNumber {
            type Output = CycNumber;
            fn $m(self, rhs: CycNumber) -> CycNumber { (&self).$m(&rhs) }
        }
        impl $tr<&CycNumber> for CycNumber {
            type Output = CycNumber;
            fn $m(self, rhs: &CycNumber) -> CycNumber { (&self).$m(rhs) }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul);

impl Neg for CycNumber {
    type Output = CycNumber;
    fn neg(self) -> CycNumber {
        -&self
    }
}

impl From<i64> for CycNumber {
    fn from(v: i64) -> Self {
        CycNumber::from_integer(v)
    }
}

impl fmt::Display for CycNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let abs = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            match (k, abs.is_one()) {
                (0, _) => write!(f, "{abs}")?,
                (_, true) => write!(f, "z{}", self.conductor)?,
                (_, false) => write!(f, "{abs}*z{}", self.conductor)?,
            }
            if k > 1 {
                write!(f, "^{k}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for CycNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CycNumber({self})")
    }
}

/// Euler's totient.
pub fn euler_phi(n: u64) -> u64 {
    assert!(n >= 1);
    let mut result = n;
    let mut m = n;
    let mut p = 2;
    while p * p <= m {
        if m % p == 0 {
            while m % p == 0 {
                m /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if m > 1 {
        result -= result / m;
    }
    result
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(n: u32, k: i64) -> CycNumber {
        CycNumber::zeta(n, k)
    }

    #[test]
    fn cyclotomic_polynomials() {
        assert_eq!(*cyclotomic_polynomial(1), vec![-1, 1]);
        assert_eq!(*cyclotomic_polynomial(4), vec![1, 0, 1]);
        assert_eq!(*cyclotomic_polynomial(9), vec![1, 0, 0, 1, 0, 0, 1]);
        assert_eq!(*cyclotomic_polynomial(12), vec![1, 0, -1, 0, 1]);
    }

    #[test]
    fn zeta_examples() {
        let i = z(4, 1);
        assert_eq!(&i * &i, CycNumber::from_integer(-1));
        let w = z(9, 1);
        let lhs = &(&w.pow(6).unwrap() + &w.pow(3).unwrap()) + &CycNumber::one();
        assert!(lhs.is_zero());
        assert_eq!(z(6, 3), CycNumber::from_integer(-1));
        assert!(z(7, 0).is_one());
    }

    #[test]
    fn arithmetic_examples() {
        let one = CycNumber::one();
        let a = &one + &z(3, 1);
        let b = &one + &z(3, 2);
        assert_eq!(&a * &b, one);

        let c = &one - &z(9, -1);
        assert_eq!(&c.inv().unwrap() * &c, CycNumber::one());

        assert_eq!(z(12, 4), z(3, 1));
        assert_eq!(z(12, 4).conductor(), 3);
    }

    #[test]
    fn inverse_of_zero_fails() {
        assert_eq!(CycNumber::zero().inv(), Err(Error::DivisionByZero));
    }

    #[test]
    fn root_of_unity_orders() {
        assert_eq!(z(4, 1).root_of_unity_order(), Some(4));
        assert_eq!(CycNumber::from_integer(-1).root_of_unity_order(), Some(2));
        let v = &CycNumber::one() + &z(3, 1);
        assert_eq!(v.root_of_unity_order(), Some(6));
        assert_eq!(CycNumber::from_integer(2).root_of_unity_order(), None);
        assert_eq!((&z(8, 1) + &z(8, 2)).root_of_unity_order(), None);
    }

    #[test]
    fn square_roots() {
        assert_eq!(CycNumber::one().sqrt_of_root_of_unity().unwrap(), CycNumber::one());
        assert_eq!(CycNumber::from_integer(-1).sqrt_of_root_of_unity().unwrap(), z(4, 1));
        assert_eq!(z(4, 1).sqrt_of_root_of_unity().unwrap(), z(8, 1));
        assert!(matches!(
            CycNumber::from_integer(3).sqrt_of_root_of_unity(),
            Err(Error::UnsupportedRadicand(_))
        ));
    }

    #[test]
    fn fourth_roots() {
        let r = CycNumber::from_integer(-16).nth_root_unit_rational(4).unwrap();
        assert_eq!(r.pow(4).unwrap(), CycNumber::from_integer(-16));
        assert_eq!(r, z(8, 1).scale(&Rational::from_integer(2.into())));
    }

    #[test]
    fn conjugation() {
        assert_eq!(z(8, 1).conj(), z(8, -1));
        let v = &z(5, 1) + &CycNumber::from_integer(3);
        assert_eq!(v.conj().conj(), v);
    }

    #[test]
    fn totients() {
        assert_eq!(euler_phi(1), 1);
        assert_eq!(euler_phi(66), 20);
        assert_eq!(euler_phi(60), 16);
    }
}
