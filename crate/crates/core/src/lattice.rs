//! Integral lattices: Smith and Hermite normal forms, discriminant groups,
//! the Niemeier lattice with root system A1^24 glued by the Golay code,
//! sublattices fixed by root permutations, and the overlattice and
//! polarization case analysis for the invariant lattice of rank 3.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::ser::{SerializeSeq, Serializer};
use serde::{Deserialize, Serialize};

use crate::cyclotomic::Rational;
use crate::error::{Error, Result};
use crate::linalg;
use crate::mathieu::{Bitmask24, GolayCode};
use crate::perm::OrbitPartition;

// ---------------------------------------------------------------------------
// Integer matrices

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn new(rows: Vec<Vec<BigInt>>) -> Result<Self> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        if nrows == 0 || ncols == 0 {
            return Err(Error::Shape("matrix dimensions must be positive".into()));
        }
        if rows.iter().any(|r| r.len() != ncols) {
            return Err(Error::Shape("ragged rows".into()));
        }
        Ok(IntMatrix { rows: nrows, cols: ncols, data: rows.into_iter().flatten().collect() })
    }

    pub fn from_i64<R: AsRef<[i64]>>(rows: &[R]) -> Result<Self> {
        Self::new(rows.iter().map(|r| r.as_ref().iter().map(|&x| BigInt::from(x)).collect()).collect())
    }

    pub fn identity(n: usize) -> Self {
        Self::diagonal(&vec![BigInt::one(); n])
    }

    /// Panics on an empty diagonal.
    pub fn diagonal(entries: &[BigInt]) -> Self {
        let n = entries.len();
        assert!(n > 0, "empty diagonal");
        let mut data = vec![BigInt::zero(); n * n];
        for (i, e) in entries.iter().enumerate() {
            data[i * n + i] = e.clone();
        }
        IntMatrix { rows: n, cols: n, data }
    }

    pub fn diagonal_i64(entries: &[i64]) -> Self {
        Self::diagonal(&entries.iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>())
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square() && (0..self.rows).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn transpose(&self) -> Self {
        let data = (0..self.cols).flat_map(|j| (0..self.rows).map(move |i| (i, j))).map(|(i, j)| self.get(i, j).clone()).collect();
        IntMatrix { rows: self.cols, cols: self.rows, data }
    }

    pub fn mul(&self, other: &IntMatrix) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::Shape(format!("{}x{} times {}x{}", self.rows, self.cols, other.rows, other.cols)));
        }
        let mut data = Vec::with_capacity(self.rows * other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut s = BigInt::zero();
                for k in 0..self.cols {
                    s += self.get(i, k) * other.get(k, j);
                }
                data.push(s);
            }
        }
        Ok(IntMatrix { rows: self.rows, cols: other.cols, data })
    }

    pub fn negated(&self) -> Self {
        IntMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| -x).collect() }
    }

    /// Fraction-free Gaussian elimination.
    pub fn determinant(&self) -> Result<BigInt> {
        if !self.is_square() {
            return Err(Error::Shape("determinant of a non-square matrix".into()));
        }
        let n = self.rows;
        let mut a = self.to_rows();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n {
            let Some(p) = (k..n).find(|&i| !a[i][k].is_zero()) else {
                return Ok(BigInt::zero());
            };
            if p != k {
                a.swap(p, k);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                    a[i][j] = v / &prev;
                }
                a[i][k] = BigInt::zero();
            }
            prev = a[k][k].clone();
        }
        Ok(sign * &a[n - 1][n - 1])
    }

    /// Whitespace-separated rows.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for i in 0..self.rows {
            let line: Vec<String> = self.row(i).iter().map(ToString::to_string).collect();
            out.push_str(&line.join(" "));
            out.push('\n');
        }
        out
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = (0..self.rows)
            .map(|i| format!("[{}]", self.row(i).iter().map(ToString::to_string).collect::<Vec<_>>().join(", ")))
            .collect();
        write!(f, "[{}]", rows.join(", "))
    }
}

/// Serialized as nested arrays; entries outside the i64 range become strings.
impl Serialize for IntMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.rows))?;
        for i in 0..self.rows {
            seq.serialize_element(&self.row(i).iter().map(BigIntRepr).collect::<Vec<_>>())?;
        }
        seq.end()
    }
}

struct BigIntRepr<'a>(&'a BigInt);

impl Serialize for BigIntRepr<'_> {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self.0.to_i64() {
            Some(v) => serializer.serialize_i64(v),
            None => serializer.serialize_str(&self.0.to_string()),
        }
    }
}

fn serialize_bigints<S: Serializer>(v: &[BigInt], serializer: S) -> std::result::Result<S::Ok, S::Error> {
    serializer.collect_seq(v.iter().map(BigIntRepr))
}

// ---------------------------------------------------------------------------
// Normal forms

fn min_abs_position(a: &[Vec<BigInt>], cells: impl Iterator<Item = (usize, usize)>) -> Option<(usize, usize)> {
    cells.filter(|&(i, j)| !a[i][j].is_zero()).min_by(|&(i, j), &(k, l)| a[i][j].abs().cmp(&a[k][l].abs()))
}

/// Invariant factors `d1 | d2 | …` of an integer matrix, one per diagonal
/// position (trailing zeros for rank deficiency), all nonnegative.
pub fn smith_normal_form(m: &IntMatrix) -> Vec<BigInt> {
    let (r, c) = (m.nrows(), m.ncols());
    let mut a = m.to_rows();
    let n = r.min(c);
    for t in 0..n {
        let Some((pi, pj)) = min_abs_position(&a, (t..r).flat_map(|i| (t..c).map(move |j| (i, j)))) else {
            break;
        };
        a.swap(t, pi);
        for row in a.iter_mut() {
            row.swap(t, pj);
        }
        loop {
            let line = (t..r).map(|i| (i, t)).chain((t + 1..c).map(|j| (t, j)));
            let (pi, pj) = min_abs_position(&a, line).expect("pivot line is nonzero");
            if pi != t {
                a.swap(t, pi);
            } else if pj != t {
                for row in a.iter_mut() {
                    row.swap(t, pj);
                }
            }
            let p = a[t][t].clone();
            for i in t + 1..r {
                let q = a[i][t].div_floor(&p);
                if !q.is_zero() {
                    for j in t..c {
                        let v = &q * &a[t][j];
                        a[i][j] -= v;
                    }
                }
            }
            for j in t + 1..c {
                let q = a[t][j].div_floor(&p);
                if !q.is_zero() {
                    for row in a.iter_mut().skip(t) {
                        let v = &q * &row[t];
                        row[j] -= v;
                    }
                }
            }
            let clear = (t + 1..r).all(|i| a[i][t].is_zero()) && (t + 1..c).all(|j| a[t][j].is_zero());
            if !clear {
                continue;
            }
            let p = a[t][t].clone();
            match (t + 1..r).find(|&i| (t + 1..c).any(|j| !a[i][j].is_multiple_of(&p))) {
                Some(i) => {
                    for j in t..c {
                        let v = a[i][j].clone();
                        a[t][j] += v;
                    }
                }
                None => break,
            }
        }
    }
    (0..n).map(|i| a[i][i].abs()).collect()
}

/// Row Hermite form `H = U·A` with `U` unimodular. Nonzero rows of `H` come
/// first, with positive pivots and entries above each pivot in `[0, pivot)`.
fn hermite_with_transform(rows: &[Vec<BigInt>], ncols: usize) -> (Vec<Vec<BigInt>>, Vec<Vec<BigInt>>, usize) {
    let r = rows.len();
    let mut a = rows.to_vec();
    let mut u: Vec<Vec<BigInt>> =
        (0..r).map(|i| (0..r).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect()).collect();
    fn axpy(v: &mut [Vec<BigInt>], dst: usize, src: usize, q: &BigInt) {
        let s = v[src].clone();
        for (x, y) in v[dst].iter_mut().zip(s) {
            *x -= q * y;
        }
    }
    let mut pr = 0;
    for col in 0..ncols {
        if pr == r {
            break;
        }
        loop {
            let Some(p) = (pr..r).filter(|&i| !a[i][col].is_zero()).min_by_key(|&i| a[i][col].abs()) else {
                break;
            };
            a.swap(pr, p);
            u.swap(pr, p);
            let mut done = true;
            for i in pr + 1..r {
                if a[i][col].is_zero() {
                    continue;
                }
                let q = a[i][col].div_floor(&a[pr][col]);
                axpy(&mut a, i, pr, &q);
                axpy(&mut u, i, pr, &q);
                done &= a[i][col].is_zero();
            }
            if done {
                break;
            }
        }
        if a.get(pr).is_none_or(|row| row[col].is_zero()) {
            continue;
        }
        if a[pr][col].is_negative() {
            for x in a[pr].iter_mut().chain(u[pr].iter_mut()) {
                *x = -&*x;
            }
        }
        for k in 0..pr {
            let q = a[k][col].div_floor(&a[pr][col]);
            if !q.is_zero() {
                axpy(&mut a, k, pr, &q);
                axpy(&mut u, k, pr, &q);
            }
        }
        pr += 1;
    }
    (a, u, pr)
}

/// Nonzero rows of the row Hermite normal form; a canonical basis of the
/// integer row span.
pub fn hermite_normal_form(rows: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let ncols = rows.first().map_or(0, Vec::len);
    let (mut h, _, rank) = hermite_with_transform(rows, ncols);
    h.truncate(rank);
    h
}

/// Hermite basis of `{x ∈ ℤ^cols : M·x = 0}`.
pub fn integer_kernel(m: &IntMatrix) -> Vec<Vec<BigInt>> {
    let t = m.transpose().to_rows();
    let (_, u, rank) = hermite_with_transform(&t, m.nrows());
    hermite_normal_form(&u[rank..])
}

fn lcm_of_denominators<'a>(vs: impl Iterator<Item = &'a Rational>) -> BigInt {
    vs.fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
}

/// Hermite basis of the ℤ-span of rational vectors.
pub fn rational_span_basis(gens: &[Vec<Rational>]) -> Vec<Vec<Rational>> {
    let d = lcm_of_denominators(gens.iter().flatten());
    let scaled: Vec<Vec<BigInt>> =
        gens.iter().map(|v| v.iter().map(|x| (x * &d).to_integer()).collect()).collect();
    hermite_normal_form(&scaled)
        .into_iter()
        .map(|row| row.into_iter().map(|x| Rational::new(x, d.clone())).collect())
        .collect()
}

/// Integer coordinates of `v` in a basis of independent vectors, if any.
pub fn lattice_coordinates(basis: &[Vec<Rational>], v: &[Rational]) -> Option<Vec<BigInt>> {
    let dim = v.len();
    let rows: Vec<Vec<Rational>> = (0..dim).map(|j| basis.iter().map(|b| b[j].clone()).collect()).collect();
    let x = linalg::solve(&rows, v)?;
    x.into_iter().map(|c| c.is_integer().then(|| c.to_integer())).collect()
}

/// Gram matrix of rational coordinate vectors with respect to an ambient Gram;
/// fails when an inner product is not an integer.
pub fn gram_of_vectors(ambient: &IntMatrix, vectors: &[Vec<Rational>]) -> Result<IntMatrix> {
    let n = ambient.nrows();
    if vectors.iter().any(|v| v.len() != n) {
        return Err(Error::Shape("vector length differs from the ambient rank".into()));
    }
    let images: Vec<Vec<Rational>> = vectors
        .iter()
        .map(|v| (0..n).map(|j| (0..n).map(|i| &v[i] * Rational::from(ambient.get(i, j).clone())).sum()).collect())
        .collect();
    let mut rows = Vec::with_capacity(vectors.len());
    for a in &images {
        let mut row = Vec::with_capacity(vectors.len());
        for w in vectors {
            let s: Rational = a.iter().zip(w).map(|(x, y)| x * y).sum();
            if !s.is_integer() {
                return Err(Error::AuditFailed(format!("inner product {s} is not integral")));
            }
            row.push(s.to_integer());
        }
        rows.push(row);
    }
    IntMatrix::new(rows)
}

fn rational_determinant(rows: &[Vec<Rational>]) -> Rational {
    let n = rows.len();
    let mut a = rows.to_vec();
    let mut det = Rational::one();
    for k in 0..n {
        let Some(p) = (k..n).find(|&i| !a[i][k].is_zero()) else {
            return Rational::zero();
        };
        if p != k {
            a.swap(p, k);
            det = -det;
        }
        det *= &a[k][k];
        for i in k + 1..n {
            let f = &a[i][k] / &a[k][k];
            for j in k..n {
                let v = &f * &a[k][j];
                a[i][j] -= v;
            }
        }
    }
    det
}

fn q(x: i64) -> Rational {
    Rational::from_integer(BigInt::from(x))
}

fn half(x: i64) -> Rational {
    Rational::new(BigInt::from(x), BigInt::from(2))
}

// ---------------------------------------------------------------------------
// Lattices

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Signature {
    PositiveDefinite,
    NegativeDefinite,
    Unspecified,
}

impl Signature {
    fn keyword(self) -> &'static str {
        match self {
            Signature::PositiveDefinite => "positive",
            Signature::NegativeDefinite => "negative",
            Signature::Unspecified => "unspecified",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Lattice {
    gram: IntMatrix,
    labels: Vec<String>,
    signature: Signature,
}

/// Definiteness is decided by leading minors up to this rank; above it only
/// the diagonal signs are checked.
pub const MINOR_CHECK_RANK: usize = 5;

impl Lattice {
    pub fn new(gram: IntMatrix, labels: Vec<String>, signature: Signature) -> Result<Self> {
        if !gram.is_symmetric() {
            return Err(Error::Shape("Gram matrix is not symmetric".into()));
        }
        if labels.len() != gram.nrows() {
            return Err(Error::Shape(format!("{} labels for rank {}", labels.len(), gram.nrows())));
        }
        let sign = match signature {
            Signature::PositiveDefinite => 1,
            Signature::NegativeDefinite => -1,
            Signature::Unspecified => 0,
        };
        if sign != 0 {
            let n = gram.nrows();
            if (0..n).any(|i| gram.get(i, i).sign() != if sign > 0 { num_bigint::Sign::Plus } else { num_bigint::Sign::Minus }) {
                return Err(Error::OutOfRange(format!("diagonal contradicts the {} convention", signature.keyword())));
            }
            if n <= MINOR_CHECK_RANK {
                for k in 1..=n {
                    let minor = IntMatrix::new((0..k).map(|i| gram.row(i)[..k].to_vec()).collect())?.determinant()?;
                    let expected = if sign > 0 || k % 2 == 0 { 1 } else { -1 };
                    if minor.is_zero() || (minor.is_positive() != (expected > 0)) {
                        return Err(Error::OutOfRange(format!(
                            "leading minor of size {k} contradicts the {} convention",
                            signature.keyword()
                        )));
                    }
                }
            }
        }
        Ok(Lattice { gram, labels, signature })
    }

    /// Labels `b1, b2, …`.
    pub fn unlabeled(gram: IntMatrix, signature: Signature) -> Result<Self> {
        let labels = (1..=gram.nrows()).map(|i| format!("b{i}")).collect();
        Self::new(gram, labels, signature)
    }

    pub fn rank(&self) -> usize {
        self.gram.nrows()
    }

    pub fn gram(&self) -> &IntMatrix {
        &self.gram
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn signature(&self) -> Signature {
        self.signature
    }

    /// Gram matrix with the sign flipped for a negative-definite lattice.
    pub fn positive_gram(&self) -> IntMatrix {
        match self.signature {
            Signature::NegativeDefinite => self.gram.negated(),
            _ => self.gram.clone(),
        }
    }

    pub fn determinant(&self) -> BigInt {
        self.gram.determinant().expect("Gram matrix is square")
    }

    pub fn is_even(&self) -> bool {
        (0..self.rank()).all(|i| self.gram.get(i, i).is_even())
    }

    pub fn is_unimodular(&self) -> bool {
        self.determinant().abs().is_one()
    }

    pub fn norm(&self, x: &[BigInt]) -> BigInt {
        let n = self.rank();
        let mut s = BigInt::zero();
        for i in 0..n {
            for j in 0..n {
                s += &x[i] * self.gram.get(i, j) * &x[j];
            }
        }
        s
    }

    pub fn discriminant_group(&self) -> Result<DiscriminantGroup> {
        discriminant_group(self)
    }

    /// Header line `rank sign`, then the Gram rows.
    pub fn to_text(&self) -> String {
        format!("{} {}\n{}", self.rank(), self.signature.keyword(), self.gram.to_text())
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#'));
        let header = lines.next().ok_or_else(|| Error::Parse("missing header".into()))?;
        let mut parts = header.split_whitespace();
        let rank: usize = parts
            .next()
            .and_then(|s| s.parse().ok())
            .filter(|&r| r > 0)
            .ok_or_else(|| Error::Parse(format!("bad rank in header {header:?}")))?;
        let signature = match parts.next() {
            Some("positive") => Signature::PositiveDefinite,
            Some("negative") => Signature::NegativeDefinite,
            Some("unspecified") | None => Signature::Unspecified,
            Some(other) => return Err(Error::Parse(format!("unknown sign convention {other:?}"))),
        };
        let mut rows = Vec::with_capacity(rank);
        for line in lines {
            let row: Vec<BigInt> = line
                .split_whitespace()
                .map(|t| t.parse::<BigInt>().map_err(|_| Error::Parse(format!("bad entry {t:?}"))))
                .collect::<Result<_>>()?;
            if row.len() != rank {
                return Err(Error::Parse(format!("row of length {} in a rank {rank} file", row.len())));
            }
            rows.push(row);
        }
        if rows.len() != rank {
            return Err(Error::Parse(format!("{} rows in a rank {rank} file", rows.len())));
        }
        Self::unlabeled(IntMatrix::new(rows)?, signature)
    }
}

/// `L*/L` as its invariant factors greater than 1.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct DiscriminantGroup {
    #[serde(serialize_with = "serialize_bigints")]
    factors: Vec<BigInt>,
}

impl DiscriminantGroup {
    /// Rejects a list that is not a divisibility chain of integers above 1.
    pub fn from_factors(factors: &[u64]) -> Result<Self> {
        if factors.iter().any(|&f| f < 2) || factors.windows(2).any(|w| w[1] % w[0] != 0) {
            return Err(Error::OutOfRange(format!("{factors:?} is not an invariant factor chain")));
        }
        Ok(DiscriminantGroup { factors: factors.iter().map(|&f| BigInt::from(f)).collect() })
    }

    pub fn factors(&self) -> &[BigInt] {
        &self.factors
    }

    pub fn order(&self) -> BigInt {
        self.factors.iter().product()
    }

    pub fn is_trivial(&self) -> bool {
        self.factors.is_empty()
    }
}

impl fmt::Display for DiscriminantGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.factors.iter().map(|d| format!("Z/{d}")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

pub fn discriminant_group(lattice: &Lattice) -> Result<DiscriminantGroup> {
    if lattice.determinant().is_zero() {
        return Err(Error::DegenerateGram);
    }
    let factors = smith_normal_form(lattice.gram()).into_iter().filter(|d| !d.is_one()).collect();
    Ok(DiscriminantGroup { factors })
}

fn positive_factors(m: &IntMatrix) -> Vec<u64> {
    smith_normal_form(m).iter().map(|d| d.to_u64().expect("small invariant factor")).collect()
}

// ---------------------------------------------------------------------------
// The Niemeier lattice N(A1^24)

/// Overlattice of the root lattice `A1^24` (Gram `-2·I`) by the half-sums
/// of a doubly even binary code.
#[derive(Clone, Debug)]
pub struct GluedRootLattice {
    lattice: Lattice,
    /// Basis vectors in root coordinates.
    basis: Vec<Vec<Rational>>,
    /// Reduced echelon basis of the glue code.
    glue: Vec<Bitmask24>,
    root_index: BigInt,
}

/// Reduced echelon basis over F2; pivots are lowest set bits.
pub fn binary_echelon(words: &[Bitmask24]) -> Vec<Bitmask24> {
    let mut basis: Vec<u32> = Vec::new();
    for w in words {
        let mut x = w.bits();
        for &b in &basis {
            if x >> b.trailing_zeros() & 1 == 1 {
                x ^= b;
            }
        }
        if x != 0 {
            let pivot = x.trailing_zeros();
            for b in basis.iter_mut() {
                if *b >> pivot & 1 == 1 {
                    *b ^= x;
                }
            }
            basis.push(x);
        }
    }
    basis.sort_by_key(|b| b.trailing_zeros());
    basis.into_iter().map(|b| Bitmask24::new(b).expect("24-bit word")).collect()
}

/// Glues `A1^24` along the span of `words`.
pub fn glue_overlattice(words: &[Bitmask24]) -> Result<GluedRootLattice> {
    let glue = binary_echelon(words);
    for (i, a) in glue.iter().enumerate() {
        if a.weight() % 4 != 0 {
            return Err(Error::CorruptCode(format!("glue word {} has weight {}, not divisible by 4", a.to_hex(), a.weight())));
        }
        for b in &glue[..i] {
            if a.and(*b).weight() % 2 != 0 {
                return Err(Error::CorruptCode(format!("glue words {} and {} meet oddly", a.to_hex(), b.to_hex())));
            }
        }
    }
    let pivots: BTreeSet<u32> = glue.iter().map(|w| w.bits().trailing_zeros()).collect();
    let mut basis = Vec::with_capacity(24);
    let mut labels = Vec::with_capacity(24);
    for w in &glue {
        basis.push((1..=24).map(|p| if w.contains(p) { half(1) } else { q(0) }).collect::<Vec<_>>());
        labels.push(format!("glue {}", w.to_hex()));
    }
    for i in (0..24u32).filter(|i| !pivots.contains(i)) {
        basis.push((0..24).map(|j| q(i64::from(j == i))).collect());
        labels.push(format!("r{}", i + 1));
    }
    let gram = gram_of_vectors(&IntMatrix::diagonal_i64(&[-2; 24]), &basis)?;
    let lattice = Lattice::new(gram, labels, Signature::NegativeDefinite)?;
    if !lattice.is_even() {
        return Err(Error::CorruptCode("glued lattice is not even".into()));
    }
    let det = rational_determinant(&basis).abs();
    let index = det.recip();
    if !index.is_integer() {
        return Err(Error::AuditFailed("root lattice index is not integral".into()));
    }
    Ok(GluedRootLattice { lattice, basis, glue, root_index: index.to_integer() })
}

/// N(A1^24): the root lattice glued by the extended Golay code.
pub fn niemeier_a1_24(code: &GolayCode) -> Result<GluedRootLattice> {
    let n = glue_overlattice(code.words())?;
    if n.glue.len() != 12 {
        return Err(Error::CorruptCode(format!("glue code has dimension {}", n.glue.len())));
    }
    if !n.lattice.is_unimodular() {
        return Err(Error::CorruptCode("glued lattice is not unimodular".into()));
    }
    Ok(n)
}

impl GluedRootLattice {
    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn basis(&self) -> &[Vec<Rational>] {
        &self.basis
    }

    pub fn glue_basis(&self) -> &[Bitmask24] {
        &self.glue
    }

    /// `[N : A1^24]`.
    pub fn root_index(&self) -> &BigInt {
        &self.root_index
    }

    pub fn glue_words(&self) -> Vec<Bitmask24> {
        let k = self.glue.len();
        (0u32..1 << k)
            .map(|s| {
                let bits = (0..k).filter(|i| s >> i & 1 == 1).fold(0, |acc, i| acc ^ self.glue[i].bits());
                Bitmask24::new(bits).expect("24-bit word")
            })
            .collect()
    }

    /// Membership of a vector given in root coordinates.
    pub fn contains(&self, coords: &[Rational]) -> bool {
        if coords.len() != 24 {
            return false;
        }
        let mut odd = 0u32;
        for (i, c) in coords.iter().enumerate() {
            let d = c * BigInt::from(2);
            if !d.is_integer() {
                return false;
            }
            if d.to_integer().is_odd() {
                odd |= 1 << i;
            }
        }
        self.glue_words().iter().any(|w| w.bits() == odd)
    }

    /// Root-coordinate vectors of norm −2: integer vectors with one entry
    /// ±1, plus half-integral vectors whose support is a glue word of
    /// weight 4.
    pub fn roots(&self) -> Vec<Vec<Rational>> {
        let mut out = Vec::new();
        for w in self.glue_words() {
            match w.weight() {
                0 => {
                    for i in 0..24 {
                        for s in [1, -1] {
                            out.push((0..24).map(|j| q(if j == i { s } else { 0 })).collect());
                        }
                    }
                }
                4 => {
                    let pts = w.points();
                    for signs in 0u32..16 {
                        let mut v = vec![q(0); 24];
                        for (k, &p) in pts.iter().enumerate() {
                            v[p - 1] = half(if signs >> k & 1 == 1 { -1 } else { 1 });
                        }
                        out.push(v);
                    }
                }
                _ => {}
            }
        }
        out
    }

    /// Number of vectors of norm `−norm`, counted over glue classes.
    pub fn count_vectors_of_norm(&self, norm: u64) -> BigInt {
        // Doubled coordinates d = 2c: odd on the glue word, even elsewhere,
        // with Σ d² = 2·norm.
        let target = (2 * norm) as usize;
        let mut by_weight = std::collections::BTreeMap::<u32, BigInt>::new();
        let mut total = BigInt::zero();
        for w in self.glue_words() {
            let k = w.weight() as usize;
            if k <= target {
                total += &*by_weight.entry(w.weight()).or_insert_with(|| parity_square_count(k, 24 - k, target));
            }
        }
        total
    }
}

/// Integer vectors with `odd` odd and `even` even entries and square sum `s`.
fn parity_square_count(odd: usize, even: usize, s: usize) -> BigInt {
    let step = |dp: &[BigInt], want_odd: bool| -> Vec<BigInt> {
        let mut next = vec![BigInt::zero(); s + 1];
        for (acc, ways) in dp.iter().enumerate() {
            if ways.is_zero() {
                continue;
            }
            let mut d: i64 = if want_odd { 1 } else { 0 };
            while acc + (d * d) as usize <= s {
                let mult = if d == 0 { 1 } else { 2 };
                next[acc + (d * d) as usize] += ways * BigInt::from(mult);
                d += 2;
            }
        }
        next
    };
    let mut dp = vec![BigInt::zero(); s + 1];
    dp[0] = BigInt::one();
    for _ in 0..odd {
        dp = step(&dp, true);
    }
    for _ in 0..even {
        dp = step(&dp, false);
    }
    dp[s].clone()
}

// ---------------------------------------------------------------------------
// Root partitions and fixed sublattices

/// A partition of the 24 roots into blocks, ordered by size and then by
/// least point.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct RootPartition {
    blocks: Vec<Bitmask24>,
}

impl RootPartition {
    /// Blocks of 1-based points; they must be disjoint, nonempty and cover Ω.
    pub fn new(blocks: &[Vec<usize>]) -> Result<Self> {
        let mut seen = 0u32;
        let mut masks = Vec::with_capacity(blocks.len());
        for b in blocks {
            let m = Bitmask24::from_points(b)?;
            if m.weight() as usize != b.len() || m.weight() == 0 {
                return Err(Error::Shape("empty block or repeated point".into()));
            }
            if seen & m.bits() != 0 {
                return Err(Error::Shape("blocks overlap".into()));
            }
            seen |= m.bits();
            masks.push(m);
        }
        if seen != Bitmask24::FULL.bits() {
            return Err(Error::Shape("blocks do not cover all 24 points".into()));
        }
        masks.sort_by_key(|m| (m.weight(), m.bits().trailing_zeros()));
        Ok(RootPartition { blocks: masks })
    }

    /// Block labels for points 1..=24 in order.
    pub fn from_assignment(labels: &[usize]) -> Result<Self> {
        if labels.len() != 24 {
            return Err(Error::Shape(format!("{} labels for 24 points", labels.len())));
        }
        let mut groups = std::collections::BTreeMap::<usize, Vec<usize>>::new();
        for (i, &l) in labels.iter().enumerate() {
            groups.entry(l).or_default().push(i + 1);
        }
        Self::new(&groups.into_values().collect::<Vec<_>>())
    }

    pub fn from_orbits(orbits: &OrbitPartition) -> Result<Self> {
        Self::new(&orbits.blocks)
    }

    pub fn singletons() -> Self {
        Self::new(&(1..=24).map(|p| vec![p]).collect::<Vec<_>>()).expect("valid partition")
    }

    pub fn whole() -> Self {
        Self::new(&[(1..=24).collect()]).expect("valid partition")
    }

    pub fn blocks(&self) -> &[Bitmask24] {
        &self.blocks
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.blocks.iter().map(|b| b.weight() as usize).collect()
    }

    pub fn is_union_of_blocks(&self, w: Bitmask24) -> bool {
        self.blocks.iter().all(|b| {
            let meet = w.and(*b);
            meet == Bitmask24::EMPTY || meet == *b
        })
    }
}

/// Codewords constant on every block, by weight then bit pattern.
pub fn invariant_codewords(code: &GolayCode, partition: &RootPartition) -> Vec<Bitmask24> {
    let mut out: Vec<Bitmask24> = code.words().iter().copied().filter(|&w| partition.is_union_of_blocks(w)).collect();
    out.sort_by_key(|w| (w.weight(), w.bits()));
    out
}

/// The sublattice of N(A1^24) fixed by any root permutation group whose
/// orbits are the given blocks. Coordinates are taken in the orbit sums
/// `s_b = Σ_{i ∈ b} r_i`.
#[derive(Clone, Debug)]
pub struct InvariantSublattice {
    partition: RootPartition,
    codewords: Vec<Bitmask24>,
    basis: Vec<Vec<Rational>>,
    lattice: Lattice,
}

pub fn invariant_sublattice(code: &GolayCode, partition: &RootPartition) -> Result<InvariantSublattice> {
    let k = partition.blocks.len();
    let codewords = invariant_codewords(code, partition);
    let mut gens: Vec<Vec<Rational>> = (0..k).map(|b| (0..k).map(|j| q(i64::from(j == b))).collect()).collect();
    // Half-sums of an F2 basis suffice: half-sums of two words add up to the
    // half-sum of their sum modulo the orbit sums.
    for w in &binary_echelon(&codewords) {
        gens.push(partition.blocks.iter().map(|b| if w.and(*b) == *b { half(1) } else { q(0) }).collect());
    }
    let basis = rational_span_basis(&gens);
    let labels = basis.iter().map(|v| orbit_sum_label(v)).collect();
    let gram = gram_of_vectors(&orbit_sum_gram(partition), &basis)?;
    let lattice = Lattice::new(gram, labels, Signature::NegativeDefinite)?;
    Ok(InvariantSublattice { partition: partition.clone(), codewords, basis, lattice })
}

/// Gram matrix of the orbit sums: `diag(−2|b|)`.
pub fn orbit_sum_gram(partition: &RootPartition) -> IntMatrix {
    IntMatrix::diagonal(&partition.blocks.iter().map(|b| BigInt::from(-2 * i64::from(b.weight()))).collect::<Vec<_>>())
}

fn orbit_sum_label(v: &[Rational]) -> String {
    let d = lcm_of_denominators(v.iter());
    let terms: Vec<String> = v
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(i, c)| {
            let n = (c * &d).to_integer();
            match n.to_i64() {
                Some(1) => format!("s{}", i + 1),
                Some(-1) => format!("-s{}", i + 1),
                _ => format!("{n}s{}", i + 1),
            }
        })
        .collect();
    let sum = terms.join("+").replace("+-", "-");
    if d.is_one() {
        sum
    } else if terms.len() == 1 {
        format!("{sum}/{d}")
    } else {
        format!("({sum})/{d}")
    }
}

impl InvariantSublattice {
    pub fn partition(&self) -> &RootPartition {
        &self.partition
    }

    pub fn codewords(&self) -> &[Bitmask24] {
        &self.codewords
    }

    /// Hermite basis in orbit-sum coordinates.
    pub fn basis(&self) -> &[Vec<Rational>] {
        &self.basis
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn rank(&self) -> usize {
        self.lattice.rank()
    }

    pub fn root_coordinates(&self, v: &[Rational]) -> Vec<Rational> {
        let mut out = vec![q(0); 24];
        for (c, b) in v.iter().zip(&self.partition.blocks) {
            for p in b.points() {
                out[p - 1] = c.clone();
            }
        }
        out
    }

    pub fn contains(&self, v: &[Rational]) -> bool {
        lattice_coordinates(&self.basis, v).is_some()
    }

    /// Whether `gens` (orbit-sum coordinates) span exactly this lattice.
    pub fn is_spanned_by(&self, gens: &[Vec<Rational>]) -> bool {
        rational_span_basis(gens) == self.basis
    }

    /// Gram matrix of arbitrary vectors in orbit-sum coordinates.
    pub fn gram_of(&self, vectors: &[Vec<Rational>]) -> Result<IntMatrix> {
        gram_of_vectors(&orbit_sum_gram(&self.partition), vectors)
    }
}

/// Fixed vectors of N(A1^24) found by scanning orbit-sum coordinates in
/// `[−height, height]` with step ½, testing membership through the code.
pub fn enumerate_fixed_vectors(code: &GolayCode, partition: &RootPartition, height: u32) -> Result<Vec<Vec<Rational>>> {
    let k = partition.blocks.len();
    if k > 4 {
        return Err(Error::Capacity(format!("{k} blocks exceed the enumeration limit of 4")));
    }
    let h = 2 * height as i64;
    let span = (2 * h + 1) as usize;
    let mut out = Vec::new();
    for idx in 0..span.pow(k as u32) {
        let mut rest = idx;
        let mut doubled = Vec::with_capacity(k);
        for _ in 0..k {
            doubled.push((rest % span) as i64 - h);
            rest /= span;
        }
        let odd = partition
            .blocks
            .iter()
            .zip(&doubled)
            .filter(|(_, d)| d.rem_euclid(2) == 1)
            .fold(0u32, |acc, (b, _)| acc | b.bits());
        if code.contains(Bitmask24::new(odd)?) {
            out.push(doubled.iter().map(|&d| half(d)).collect());
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Selecting the Niemeier lattice

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NiemeierCandidate {
    pub lattice: String,
    pub symmetry_group: String,
    pub symmetry_order: u128,
    /// The subgroup a root-fixing group must lie in.
    pub root_stabilizer: String,
    pub stabilizer_order: u128,
    pub stabilizer_two_part: u128,
    pub admissible: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NiemeierSelection {
    pub required_two_part: u128,
    pub candidates: Vec<NiemeierCandidate>,
    pub verdict: Option<String>,
    pub passed: bool,
}

fn two_part(n: u128) -> u128 {
    1 << n.trailing_zeros()
}

/// Symmetry-group data for the non-Leech Niemeier lattices whose symmetry
/// group can contain a 2-group; everything else embeds in 2.S6 or 3.S6.
const NIEMEIER_SYMMETRIES: [(&str, &str, u128, &str, u128); 5] = [
    ("N(A1^24)", "M24", 244_823_040, "M23", 10_200_960),
    ("N(A2^12)", "C2.M12", 190_080, "M12", 95_040),
    ("N(A3^8)", "C2:(C2^3:L3(2))", 2_688, "C2.L3(2)", 336),
    ("other, inside 2.S6", "2.S6", 1_440, "2.S6", 1_440),
    ("other, inside 3.S6", "3.S6", 2_160, "3.S6", 2_160),
];

/// Which Niemeier lattices admit a root-fixing group of order `group_order`
/// (a power of two) inside their symmetry group.
pub fn niemeier_selection_for(group_order: u128) -> NiemeierSelection {
    let required = two_part(group_order);
    let candidates: Vec<NiemeierCandidate> = NIEMEIER_SYMMETRIES
        .iter()
        .map(|&(lattice, group, order, stab, stab_order)| NiemeierCandidate {
            lattice: lattice.into(),
            symmetry_group: group.into(),
            symmetry_order: order,
            root_stabilizer: stab.into(),
            stabilizer_order: stab_order,
            stabilizer_two_part: two_part(stab_order),
            admissible: order % required == 0 && stab_order % required == 0,
        })
        .collect();
    let survivors: Vec<&NiemeierCandidate> = candidates.iter().filter(|c| c.admissible).collect();
    let verdict = (survivors.len() == 1).then(|| survivors[0].lattice.clone());
    let passed = verdict.as_deref() == Some("N(A1^24)");
    NiemeierSelection { required_two_part: required, candidates, verdict, passed }
}

/// The selection for the symplectic group of order 2^7.
pub fn niemeier_selection_audit() -> NiemeierSelection {
    niemeier_selection_for(128)
}

// ---------------------------------------------------------------------------
// Norm congruences and invariant forms

/// Whether every vector of the lattice has norm divisible by `k`: exactly
/// when each diagonal entry is divisible by `k` and each doubled
/// off-diagonal entry is. Random vectors are sampled as a consistency check.
pub fn norm_divisibility_check(lattice: &Lattice, k: u64) -> Result<bool> {
    if k == 0 {
        return Err(Error::OutOfRange("modulus must be positive".into()));
    }
    let kb = BigInt::from(k);
    let g = lattice.gram();
    let n = lattice.rank();
    let criterion = (0..n).all(|i| {
        g.get(i, i).is_multiple_of(&kb) && (0..i).all(|j| (g.get(i, j) * BigInt::from(2)).is_multiple_of(&kb))
    });
    let mut rng = ChaCha8Rng::seed_from_u64(k);
    for _ in 0..256 {
        let x: Vec<BigInt> = (0..n).map(|_| BigInt::from(rng.gen_range(-9i64..=9))).collect();
        if criterion && !lattice.norm(&x).is_multiple_of(&kb) {
            return Err(Error::AuditFailed(format!("sampled vector violates the norm congruence mod {k}")));
        }
    }
    Ok(criterion)
}

/// Integral symmetric forms `G = Σ tᵢ·Bᵢ` (`tᵢ ∈ ℤ`).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GramFamily {
    pub generators: Vec<IntMatrix>,
}

impl GramFamily {
    pub fn dimension(&self) -> usize {
        self.generators.len()
    }

    pub fn evaluate(&self, params: &[BigInt]) -> Result<IntMatrix> {
        let first = self.generators.first().ok_or_else(|| Error::Shape("empty family".into()))?;
        if params.len() != self.generators.len() {
            return Err(Error::Shape("parameter count mismatch".into()));
        }
        let n = first.nrows();
        let rows = (0..n)
            .map(|i| (0..n).map(|j| self.generators.iter().zip(params).map(|(b, t)| b.get(i, j) * t).sum()).collect())
            .collect();
        IntMatrix::new(rows)
    }

    /// Coordinates of a symmetric matrix in the family, if it belongs.
    pub fn coordinates(&self, g: &IntMatrix) -> Option<Vec<BigInt>> {
        let n = g.nrows();
        let basis: Vec<Vec<Rational>> = self.generators.iter().map(|b| upper_entries(b, n)).collect();
        lattice_coordinates(&basis, &upper_entries(g, n))
    }

    /// The subfamily whose forms have all norms divisible by `k`.
    pub fn with_norms_divisible_by(&self, k: u64) -> Result<GramFamily> {
        if k == 0 {
            return Err(Error::OutOfRange("modulus must be positive".into()));
        }
        let Some(first) = self.generators.first() else {
            return Ok(self.clone());
        };
        let n = first.nrows();
        let d = self.generators.len();
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).collect();
        let e = pairs.len();
        // [A | k·I] (t, u) = 0 with A t the diagonal entries and doubled
        // off-diagonal entries.
        let rows: Vec<Vec<BigInt>> = pairs
            .iter()
            .enumerate()
            .map(|(r, &(i, j))| {
                let scale = if i == j { 1 } else { 2 };
                let mut row: Vec<BigInt> = self.generators.iter().map(|b| b.get(i, j) * scale).collect();
                row.extend((0..e).map(|c| if c == r { BigInt::from(k) } else { BigInt::zero() }));
                row
            })
            .collect();
        let kernel = integer_kernel(&IntMatrix::new(rows)?);
        let projected: Vec<Vec<BigInt>> = kernel.iter().map(|v| v[..d].to_vec()).collect();
        let params = hermite_normal_form(&projected);
        let generators = params.iter().map(|t| self.evaluate(t)).collect::<Result<_>>()?;
        Ok(GramFamily { generators })
    }
}

fn upper_entries(g: &IntMatrix, n: usize) -> Vec<Rational> {
    (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).map(|(i, j)| Rational::from(g.get(i, j).clone())).collect()
}

/// Largest order tried when confirming that an action has finite order.
pub const MAX_ACTION_ORDER: u32 = 60;

/// All integral symmetric `G` with `gᵀ·G·g = G`.
pub fn invariant_gram_solver(action: &IntMatrix) -> Result<GramFamily> {
    if !action.is_square() {
        return Err(Error::Shape("action must be square".into()));
    }
    let n = action.nrows();
    let id = IntMatrix::identity(n);
    let mut power = action.clone();
    let mut finite = false;
    for _ in 0..MAX_ACTION_ORDER {
        if power == id {
            finite = true;
            break;
        }
        power = power.mul(action)?;
    }
    if !finite {
        return Err(Error::OutOfRange(format!("action has no order up to {MAX_ACTION_ORDER}")));
    }
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).collect();
    let unit = |i: usize, j: usize| {
        let mut rows = vec![vec![BigInt::zero(); n]; n];
        rows[i][j] = BigInt::one();
        rows[j][i] = BigInt::one();
        IntMatrix::new(rows).expect("square")
    };
    let gt = action.transpose();
    let images: Vec<IntMatrix> = pairs
        .iter()
        .map(|&(i, j)| gt.mul(&unit(i, j)).and_then(|m| m.mul(action)))
        .collect::<Result<_>>()?;
    let rows: Vec<Vec<BigInt>> = pairs
        .iter()
        .map(|&(a, b)| {
            pairs
                .iter()
                .zip(&images)
                .map(|(&(i, j), img)| img.get(a, b) - unit(i, j).get(a, b))
                .collect()
        })
        .collect();
    let kernel = integer_kernel(&IntMatrix::new(rows)?);
    let generators = kernel
        .iter()
        .map(|t| {
            let mut m = vec![vec![BigInt::zero(); n]; n];
            for (&(i, j), c) in pairs.iter().zip(t) {
                m[i][j] = c.clone();
                m[j][i] = c.clone();
            }
            IntMatrix::new(m)
        })
        .collect::<Result<_>>()?;
    Ok(GramFamily { generators })
}

/// `e1 ↦ e2, e2 ↦ −e1` as a matrix acting on column vectors.
pub fn quarter_rotation() -> IntMatrix {
    IntMatrix::from_i64(&[[0, -1], [1, 0]]).expect("2x2")
}

// ---------------------------------------------------------------------------
// Overlattices of ℤH ⊕ T

/// An even overlattice of `ℤH ⊕ T` (`H² = 4n`, `T = diag(4m, 4m)`), in
/// coordinates `(H, v1, v2)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Overlattice {
    pub index: u64,
    /// Generators of the glue group, as coordinate triples.
    #[serde(serialize_with = "serialize_rational_rows")]
    pub glue: Vec<Vec<Rational>>,
    #[serde(serialize_with = "serialize_rational_rows")]
    pub basis: Vec<Vec<Rational>>,
    pub gram: IntMatrix,
}

fn serialize_rational_rows<S: Serializer>(rows: &[Vec<Rational>], serializer: S) -> std::result::Result<S::Ok, S::Error> {
    serializer.collect_seq(rows.iter().map(|r| r.iter().map(ToString::to_string).collect::<Vec<_>>()))
}

/// Limit on `|(ℤH ⊕ T)*/(ℤH ⊕ T)|` for the brute-force enumeration.
pub const MAX_DISCRIMINANT_ORDER: u64 = 1 << 20;

struct Discriminant {
    h: u64,
    t: u64,
}

impl Discriminant {
    fn size(&self) -> u64 {
        self.h * self.t * self.t
    }

    fn decode(&self, x: u64) -> (u64, u64, u64) {
        (x / (self.t * self.t), x / self.t % self.t, x % self.t)
    }

    fn encode(&self, (a, b, c): (u64, u64, u64)) -> u64 {
        (a % self.h) * self.t * self.t + (b % self.t) * self.t + c % self.t
    }

    fn add(&self, x: u64, y: u64) -> u64 {
        let (a, b, c) = self.decode(x);
        let (d, e, f) = self.decode(y);
        self.encode((a + d, b + e, c + f))
    }

    fn rotate(&self, x: u64) -> u64 {
        let (a, b, c) = self.decode(x);
        self.encode((a, (self.t - c) % self.t, b))
    }

    fn coords(&self, x: u64) -> Vec<Rational> {
        let (a, b, c) = self.decode(x);
        vec![
            Rational::new(BigInt::from(a), BigInt::from(self.h)),
            Rational::new(BigInt::from(b), BigInt::from(self.t)),
            Rational::new(BigInt::from(c), BigInt::from(self.t)),
        ]
    }

    /// Inner product of representatives: `aa'/4n + (bb' + cc')/4m`.
    fn inner(&self, x: u64, y: u64) -> Rational {
        let (a, b, c) = self.decode(x);
        let (d, e, f) = self.decode(y);
        Rational::new(BigInt::from(a * d), BigInt::from(self.h)) + Rational::new(BigInt::from(b * e + c * f), BigInt::from(self.t))
    }

    fn is_even(&self, x: u64) -> bool {
        let n = self.inner(x, x);
        n.is_integer() && n.to_integer().is_even()
    }

    fn join(&self, group: &BTreeSet<u64>, x: u64) -> BTreeSet<u64> {
        let mut out = group.clone();
        let mut frontier: Vec<u64> = group.iter().copied().collect();
        while let Some(y) = frontier.pop() {
            let z = self.add(y, x);
            if out.insert(z) {
                frontier.push(z);
            }
        }
        out
    }

    /// Even, meets neither summand, and integral against the generators.
    fn admissible(&self, group: &BTreeSet<u64>, gens: &[u64]) -> bool {
        group.iter().all(|&x| {
            let (a, b, c) = self.decode(x);
            x == 0 || (a != 0 && (b, c) != (0, 0)) && self.is_even(x)
        }) && gens.iter().all(|&x| gens.iter().all(|&y| self.inner(x, y).is_integer()))
    }
}

/// Even overlattices of `ℤH ⊕ T` in which `H` and `T` stay primitive and
/// which are stable under `H ↦ H`, `v1 ↦ v2`, `v2 ↦ −v1`; found by
/// brute force over subgroups of the discriminant group.
pub fn overlattice_enumeration(n: u64, m: u64) -> Result<Vec<Overlattice>> {
    if n == 0 || m == 0 {
        return Err(Error::OutOfRange("n and m must be positive".into()));
    }
    let disc = Discriminant { h: 4 * n, t: 4 * m };
    if disc.size() > MAX_DISCRIMINANT_ORDER {
        return Err(Error::Capacity(format!("discriminant group of order {}", disc.size())));
    }
    let trivial: BTreeSet<u64> = [0].into();
    let cyclic: Vec<u64> = (1..disc.size()).filter(|&x| disc.admissible(&disc.join(&trivial, x), &[x])).collect();
    let mut found: std::collections::BTreeMap<BTreeSet<u64>, Vec<u64>> = [(trivial, Vec::new())].into();
    let mut queue: Vec<(BTreeSet<u64>, Vec<u64>)> = found.iter().map(|(g, v)| (g.clone(), v.clone())).collect();
    while let Some((group, gens)) = queue.pop() {
        for &x in &cyclic {
            if group.contains(&x) {
                continue;
            }
            let joined = disc.join(&group, x);
            if found.contains_key(&joined) {
                continue;
            }
            let mut g = gens.clone();
            g.push(x);
            if disc.admissible(&joined, &g) {
                found.insert(joined.clone(), g.clone());
                queue.push((joined, g));
            }
        }
    }
    let ambient = IntMatrix::diagonal_i64(&[(4 * n) as i64, (4 * m) as i64, (4 * m) as i64]);
    let mut out = Vec::new();
    for group in found.keys() {
        if group.iter().any(|&x| !group.contains(&disc.rotate(x))) {
            continue;
        }
        let mut gens: Vec<u64> = Vec::new();
        let mut span: BTreeSet<u64> = [0].into();
        for &x in group {
            if !span.contains(&x) {
                span = disc.join(&span, x);
                gens.push(x);
            }
        }
        let glue: Vec<Vec<Rational>> = gens.iter().map(|&x| disc.coords(x)).collect();
        let mut spanning: Vec<Vec<Rational>> = (0..3).map(|i| (0..3).map(|j| q(i64::from(i == j))).collect()).collect();
        spanning.extend(glue.iter().cloned());
        let basis = rational_span_basis(&spanning);
        let gram = gram_of_vectors(&ambient, &basis)?;
        out.push(Overlattice { index: group.len() as u64, glue, basis, gram });
    }
    out.sort_by(|a, b| a.index.cmp(&b.index).then_with(|| a.basis.cmp(&b.basis)));
    Ok(out)
}

// ---------------------------------------------------------------------------
// The polarization degree

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CaseVerdict {
    Accepted,
    NormsNotDivisible,
    DiscriminantMismatch,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PolarizationCase {
    /// `[L : ℤH ⊕ T]`.
    pub index: u64,
    pub m: u64,
    pub n: u64,
    pub basis: Vec<String>,
    pub gram: IntMatrix,
    pub invariant_factors: Vec<u64>,
    /// Whether the overlattice enumeration produces this index.
    pub enumerated: bool,
    pub verdict: CaseVerdict,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PolarizationReport {
    pub target: DiscriminantGroup,
    pub cases: Vec<PolarizationCase>,
    pub h_squared: Option<u64>,
    pub passed: bool,
}

/// Discriminant group of the rank-3 invariant lattice.
pub fn invariant_lattice_discriminant() -> DiscriminantGroup {
    DiscriminantGroup::from_factors(&[4, 8, 8]).expect("valid chain")
}

/// Candidate `(index, m, n)` triples: index 1 or 2 and
/// `index²·|det L| = 4n·(4m)²`.
pub fn polarization_candidates(target_det: u64) -> Vec<(u64, u64, u64)> {
    let mut out = Vec::new();
    for index in [1u64, 2] {
        let lhs = index * index * target_det;
        if lhs % 64 != 0 {
            continue;
        }
        let nm2 = lhs / 64;
        for m in (1..).take_while(|m| m * m <= nm2) {
            if nm2 % (m * m) == 0 {
                out.push((index, m, nm2 / (m * m)));
            }
        }
    }
    out
}

fn polarization_case(index: u64, m: u64, n: u64, target: &DiscriminantGroup) -> Result<PolarizationCase> {
    let ambient = IntMatrix::diagonal_i64(&[(4 * n) as i64, (4 * m) as i64, (4 * m) as i64]);
    let (basis, labels): (Vec<Vec<Rational>>, Vec<String>) = if index == 1 {
        (vec![vec![q(1), q(0), q(0)], vec![q(0), q(1), q(0)], vec![q(0), q(0), q(1)]], vec!["H".into(), "v1".into(), "v2".into()])
    } else {
        (
            vec![vec![half(1), half(1), half(1)], vec![q(0), q(1), q(0)], vec![q(0), q(0), q(1)]],
            vec!["(H+v1+v2)/2".into(), "v1".into(), "v2".into()],
        )
    };
    let gram = gram_of_vectors(&ambient, &basis)?;
    let lattice = Lattice::new(gram.clone(), labels.clone(), Signature::PositiveDefinite)?;
    let invariant_factors = positive_factors(&gram);
    let enumerated = overlattice_enumeration(n, m)?.iter().any(|o| o.index == index);
    let verdict = if !norm_divisibility_check(&lattice, 4)? {
        CaseVerdict::NormsNotDivisible
    } else if &discriminant_group(&lattice)? != target {
        CaseVerdict::DiscriminantMismatch
    } else {
        CaseVerdict::Accepted
    };
    Ok(PolarizationCase { index, m, n, basis: labels, gram, invariant_factors, enumerated, verdict })
}

/// Evaluates the candidate cases in the given order (a permutation of
/// their positions).
pub fn h_squared_case_analysis_in_order(target: &DiscriminantGroup, order: &[usize]) -> Result<PolarizationReport> {
    let det = target.order().to_u64().ok_or_else(|| Error::OutOfRange("determinant too large".into()))?;
    let candidates = polarization_candidates(det);
    let mut sorted = order.to_vec();
    sorted.sort_unstable();
    if sorted != (0..candidates.len()).collect::<Vec<_>>() {
        return Err(Error::OutOfRange(format!("order is not a permutation of 0..{}", candidates.len())));
    }
    let cases = order
        .iter()
        .map(|&i| {
            let (index, m, n) = candidates[i];
            polarization_case(index, m, n, target)
        })
        .collect::<Result<Vec<_>>>()?;
    let accepted: Vec<&PolarizationCase> = cases.iter().filter(|c| c.verdict == CaseVerdict::Accepted).collect();
    let h_squared = (accepted.len() == 1).then(|| 4 * accepted[0].n);
    Ok(PolarizationReport { target: target.clone(), passed: h_squared.is_some() && accepted[0].enumerated, cases, h_squared })
}

pub fn h_squared_case_analysis() -> Result<PolarizationReport> {
    let target = invariant_lattice_discriminant();
    let count = polarization_candidates(target.order().to_u64().expect("small")).len();
    h_squared_case_analysis_in_order(&target, &(0..count).collect::<Vec<_>>())
}

// ---------------------------------------------------------------------------
// Rank relation

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RankRelation {
    pub invariant_rank: u32,
    pub niemeier_rank: u32,
    pub warning: Option<String>,
}

/// Largest invariant rank of a nontrivial symplectic group (an involution).
pub const MAX_SYMPLECTIC_INVARIANT_RANK: u32 = 14;

/// Rank of the invariant lattice on the Niemeier side: two more than on the
/// K3 side.
pub fn rank_relation_check(invariant_rank: u32) -> Result<RankRelation> {
    if invariant_rank == 0 {
        return Err(Error::OutOfRange("invariant rank must be positive".into()));
    }
    let niemeier_rank = invariant_rank + 2;
    if niemeier_rank > 24 {
        return Err(Error::OutOfRange(format!("rank {niemeier_rank} exceeds the Niemeier rank 24")));
    }
    let warning = (invariant_rank > MAX_SYMPLECTIC_INVARIANT_RANK).then(|| {
        format!(
            "invariant rank {invariant_rank} exceeds {MAX_SYMPLECTIC_INVARIANT_RANK}, the largest for a nontrivial symplectic group"
        )
    });
    Ok(RankRelation { invariant_rank, niemeier_rank, warning })
}

// ---------------------------------------------------------------------------
// The invariant lattice of the 2-group

/// Gram matrix of the invariant lattice of a `[1,1,2,4,16]` partition in
/// the basis `s1, s2, s3, (s1+s2+s3+s4)/2, s5/2`, sign flipped.
pub const REFERENCE_INVARIANT_GRAM: [[i64; 5]; 5] =
    [[2, 0, 0, 1, 0], [0, 2, 0, 1, 0], [0, 0, 4, 2, 0], [1, 1, 2, 4, 0], [0, 0, 0, 0, 8]];

/// The basis of [`REFERENCE_INVARIANT_GRAM`] in orbit-sum coordinates.
pub fn reference_invariant_basis() -> Vec<Vec<Rational>> {
    vec![
        vec![q(1), q(0), q(0), q(0), q(0)],
        vec![q(0), q(1), q(0), q(0), q(0)],
        vec![q(0), q(0), q(1), q(0), q(0)],
        vec![half(1), half(1), half(1), half(1), q(0)],
        vec![q(0), q(0), q(0), q(0), half(1)],
    ]
}

#[derive(Clone, Debug, Serialize)]
pub struct InvariantLatticeReport {
    /// Orbit types allowed for a 2-group fixing a root with 5 orbits.
    pub solver_types: Vec<Vec<u64>>,
    pub observed_type: Vec<usize>,
    pub types_agree: bool,
    /// Invariant codewords as hex.
    pub codewords: Vec<String>,
    pub octad_is_union_of_small_blocks: bool,
    pub complement_is_large_block: bool,
    pub gram: IntMatrix,
    pub invariant_factors: Vec<u64>,
    pub discriminant: DiscriminantGroup,
    pub reference_basis_spans: bool,
    pub reference_gram_matches: bool,
    pub rank: RankRelation,
    pub passed: bool,
}

/// Invariant lattice of N(A1^24) for the root partition `orbits` of a
/// 2-group, checked against the abstract orbit-type solver, the expected
/// glue and the reference Gram matrix. `invariant_rank` is the rank on the
/// K3 side.
pub fn invariant_lattice_audit(code: &GolayCode, orbits: &OrbitPartition, invariant_rank: u32) -> Result<InvariantLatticeReport> {
    let partition = RootPartition::from_orbits(orbits)?;
    let rank = rank_relation_check(invariant_rank)?;
    let solver_types = crate::mathieu::orbit_type_solver(24, rank.niemeier_rank as usize, true);
    let observed_type = partition.sizes();
    let types_agree =
        solver_types.len() == 1 && solver_types[0].iter().map(|&x| x as usize).collect::<Vec<_>>() == observed_type;
    let inv = invariant_sublattice(code, &partition)?;
    let blocks = partition.blocks();
    let small = blocks[..blocks.len() - 1].iter().fold(Bitmask24::EMPTY, |acc, b| acc.xor(*b));
    let large = blocks[blocks.len() - 1];
    let words = inv.codewords();
    let octad_is_union_of_small_blocks = words.iter().filter(|w| w.weight() == 8).eq([small].iter());
    let complement_is_large_block = words.iter().filter(|w| w.weight() == 16).eq([large].iter()) && small.xor(large) == Bitmask24::FULL;
    let gram = inv.lattice().positive_gram();
    let invariant_factors = positive_factors(&gram);
    let discriminant = discriminant_group(inv.lattice())?;
    let (reference_basis_spans, reference_gram_matches) = if inv.rank() == 5 {
        let basis = reference_invariant_basis();
        let expected = IntMatrix::from_i64(&REFERENCE_INVARIANT_GRAM)?;
        (inv.is_spanned_by(&basis), inv.gram_of(&basis)?.negated() == expected)
    } else {
        (false, false)
    };
    let passed = types_agree
        && inv.rank() as u32 == rank.niemeier_rank
        && words.len() == 4
        && octad_is_union_of_small_blocks
        && complement_is_large_block
        && invariant_factors == [1, 1, 4, 8, 8]
        && discriminant == invariant_lattice_discriminant()
        && reference_basis_spans
        && reference_gram_matches;
    Ok(InvariantLatticeReport {
        solver_types,
        observed_type,
        types_agree,
        codewords: words.iter().map(|w| w.to_hex()).collect(),
        octad_is_union_of_small_blocks,
        complement_is_large_block,
        gram,
        invariant_factors,
        discriminant,
        reference_basis_spans,
        reference_gram_matches,
        rank,
        passed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> IntMatrix {
        IntMatrix::from_i64(rows).unwrap()
    }

    #[test]
    fn snf_small() {
        assert_eq!(positive_factors(&m(&[&[2, 4], &[6, 8]])), vec![2, 4]);
        assert_eq!(positive_factors(&m(&[&[0, 0], &[0, 0]])), vec![0, 0]);
        assert_eq!(positive_factors(&m(&[&[2, 0], &[0, 3]])), vec![1, 6]);
        assert_eq!(positive_factors(&m(&[&[1, 2, 3]])), vec![1]);
    }

    #[test]
    fn determinant_bareiss() {
        assert_eq!(m(&[&[2, 1], &[1, 2]]).determinant().unwrap(), BigInt::from(3));
        assert_eq!(m(&[&[0, 1, 0], &[1, 0, 0], &[0, 0, 5]]).determinant().unwrap(), BigInt::from(-5));
    }

    #[test]
    fn kernel_is_saturated() {
        let k = integer_kernel(&m(&[&[2, 4]]));
        assert_eq!(k, vec![vec![BigInt::from(2), BigInt::from(-1)]]);
    }

    #[test]
    fn parity_counts() {
        assert_eq!(parity_square_count(0, 24, 4), BigInt::from(48));
        assert_eq!(parity_square_count(8, 16, 8), BigInt::from(256));
    }
}
