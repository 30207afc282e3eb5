//! Square matrices over cyclotomic fields.

use std::fmt;
use std::ops::Mul;

use crate::cyclotomic::CycNumber;
use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CycMatrix {
    size: usize,
    entries: Vec<CycNumber>,
}

impl CycMatrix {
    pub fn from_rows(rows: Vec<Vec<CycNumber>>) -> Self {
        let size = rows.len();
        assert!(size > 0 && rows.iter().all(|r| r.len() == size), "matrix must be square");
        CycMatrix { size, entries: rows.into_iter().flatten().collect() }
    }

    pub fn from_fn(size: usize, f: impl Fn(usize, usize) -> CycNumber) -> Self {
        let entries = (0..size * size).map(|k| f(k / size, k % size)).collect();
        CycMatrix { size, entries }
    }

    pub fn identity(size: usize) -> Self {
        Self::from_fn(size, |i, j| if i == j { CycNumber::one() } else { CycNumber::zero() })
    }

    pub fn diagonal(diag: Vec<CycNumber>) -> Self {
        let size = diag.len();
        Self::from_fn(size, |i, j| if i == j { diag[i].clone() } else { CycNumber::zero() })
    }

    /// Permutation matrix with `(i, j)` entry `δ_{i, σ(j)}`; `sigma` is 0-based.
    pub fn permutation(sigma: &[usize]) -> Self {
        Self::from_fn(sigma.len(), |i, j| if sigma[j] == i { CycNumber::one() } else { CycNumber::zero() })
    }

    /// Block diagonal sum.
    pub fn direct_sum(&self, other: &Self) -> Self {
        let n = self.size + other.size;
        Self::from_fn(n, |i, j| {
            if i < self.size && j < self.size {
                self.get(i, j).clone()
            } else if i >= self.size && j >= self.size {
                other.get(i - self.size, j - self.size).clone()
            } else {
                CycNumber::zero()
            }
        })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn get(&self, i: usize, j: usize) -> &CycNumber {
        &self.entries[i * self.size + j]
    }

    pub fn entries(&self) -> &[CycNumber] {
        &self.entries
    }

    pub fn rows(&self) -> Vec<Vec<CycNumber>> {
        self.entries.chunks(self.size).map(|r| r.to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(CycNumber::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.size)
    }

    pub fn scale(&self, c: &CycNumber) -> Self {
        CycMatrix { size: self.size, entries: self.entries.iter().map(|e| e * c).collect() }
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.size, |i, j| self.get(j, i).clone())
    }

    /// `Some(c)` when the matrix equals `c·I`.
    pub fn as_scalar(&self) -> Option<CycNumber> {
        let c = self.get(0, 0).clone();
        for i in 0..self.size {
            for j in 0..self.size {
                let e = self.get(i, j);
                if (i == j && *e != c) || (i != j && !e.is_zero()) {
                    return None;
                }
            }
        }
        Some(c)
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.size).all(|i| (0..self.size).all(|j| i == j || self.get(i, j).is_zero()))
    }

    pub fn trace(&self) -> CycNumber {
        (0..self.size).fold(CycNumber::zero(), |acc, i| &acc + self.get(i, i))
    }

    pub fn pow(&self, e: u64) -> Self {
        let mut acc = Self::identity(self.size);
        let mut sq = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &sq;
            }
            e >>= 1;
            if e > 0 {
                sq = &sq * &sq;
            }
        }
        acc
    }

    /// For a monomial matrix: `σ` (0-based, `σ(j) = row of the nonzero entry
    /// in column j`) and the nonzero entries by column.
    pub fn monomial_parts(&self) -> Result<(Vec<usize>, Vec<CycNumber>)> {
        let mut sigma = Vec::with_capacity(self.size);
        let mut vals = Vec::with_capacity(self.size);
        for j in 0..self.size {
            let nz: Vec<usize> = (0..self.size).filter(|&i| !self.get(i, j).is_zero()).collect();
            if nz.len() != 1 {
                return Err(Error::Shape(format!("column {j} has {} nonzero entries", nz.len())));
            }
            sigma.push(nz[0]);
            vals.push(self.get(nz[0], j).clone());
        }
        let mut seen = vec![false; self.size];
        for &i in &sigma {
            if std::mem::replace(&mut seen[i], true) {
                return Err(Error::Shape("two columns share a row".into()));
            }
        }
        Ok((sigma, vals))
    }

    pub fn determinant(&self) -> CycNumber {
        // fraction-free would be nicer; sizes here are at most 4
        let mut a = self.rows();
        let n = self.size;
        let mut det = CycNumber::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !a[i][c].is_zero()) else {
                return CycNumber::zero();
            };
            if p != c {
                a.swap(p, c);
                det = -det;
            }
            let pv = a[c][c].clone();
            det = &det * &pv;
            let pinv = pv.inv().expect("pivot is nonzero");
            for i in c + 1..n {
                if a[i][c].is_zero() {
                    continue;
                }
                let f = &a[i][c] * &pinv;
                for k in c..n {
                    let t = &f * &a[c][k];
                    a[i][k] = &a[i][k] - &t;
                }
            }
        }
        det
    }

    pub fn inverse(&self) -> Result<Self> {
        let n = self.size;
        let mut a = self.rows();
        let mut b = Self::identity(n).rows();
        for c in 0..n {
            let p = (c..n).find(|&i| !a[i][c].is_zero()).ok_or(Error::DivisionByZero)?;
            a.swap(p, c);
            b.swap(p, c);
            let pinv = a[c][c].inv()?;
            for k in 0..n {
                a[c][k] = &a[c][k] * &pinv;
                b[c][k] = &b[c][k] * &pinv;
            }
            for i in 0..n {
                if i == c || a[i][c].is_zero() {
                    continue;
                }
                let f = a[i][c].clone();
                for k in 0..n {
                    let ta = &f * &a[c][k];
                    a[i][k] = &a[i][k] - &ta;
                    let tb = &f * &b[c][k];
                    b[i][k] = &b[i][k] - &tb;
                }
            }
        }
        Ok(Self::from_rows(b))
    }
}

impl Mul for &CycMatrix {
    type Output = CycMatrix;
    fn mul(self, rhs: &CycMatrix) -> CycMatrix {
        assert_eq!(self.size, rhs.size, "size mismatch");
        let n = self.size;
        let mut entries = vec![CycNumber::zero(); n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = rhs.get(k, j);
                    if !b.is_zero() {
                        let t = a * b;
                        let e = &mut entries[i * n + j];
                        *e = &*e + &t;
                    }
                }
            }
        }
        CycMatrix { size: n, entries }
    }
}

impl Mul for CycMatrix {
    type Output = CycMatrix;
    fn mul(self, rhs: CycMatrix) -> CycMatrix {
        &self * &rhs
    }
}

impl fmt::Display for CycMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, row) in self.entries.chunks(self.size).enumerate() {
            if i > 0 {
                write!(f, "; ")?;
            }
            let cells: Vec<String> = row.iter().map(|c| c.to_string()).collect();
            write!(f, "{}", cells.join(", "))?;
        }
        write!(f, "]")
    }
}

impl fmt::Debug for CycMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CycMatrix{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(n: u32, k: i64) -> CycNumber {
        CycNumber::zeta(n, k)
    }

    #[test]
    fn permutation_matrix_convention() {
        // σ = (0 1): column 0 has its 1 in row 1
        let p = CycMatrix::permutation(&[1, 0, 2]);
        assert!(p.get(1, 0).is_one());
        assert!(p.get(0, 1).is_one());
        assert!(p.get(2, 2).is_one());
    }

    #[test]
    fn inverse_and_determinant() {
        let m = CycMatrix::from_rows(vec![
            vec![z(8, 1), CycNumber::from_integer(2)],
            vec![CycNumber::zero(), z(3, 1)],
        ]);
        let inv = m.inverse().unwrap();
        assert!((&m * &inv).is_identity());
        assert_eq!(m.determinant(), &z(8, 1) * &z(3, 1));
    }

    #[test]
    fn monomial_parts_rejects_dense() {
        let m = CycMatrix::from_fn(2, |_, _| CycNumber::one());
        assert!(matches!(m.monomial_parts(), Err(Error::Shape(_))));
    }
}
