//! Finite matrix groups, linear or projective, and the explicit monomial
//! groups acting on the Fermat quartic.

use std::collections::HashMap;
use std::fmt::Write as _;

use crate::cyclotomic::CycNumber;
use crate::error::{Error, Result};
use crate::finite_group::{CayleyTable, GroupInvariants, Isomorphism, OrderStructure};
use crate::matrix::CycMatrix;

/// Element orders in the groups handled here divide this.
pub const EXPONENT_BOUND: u64 = 24;

/// A matrix up to nonzero scalars, stored by its canonical representative
/// (first nonzero entry in row-major order equal to 1).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct ProjMatrix(CycMatrix);

impl ProjMatrix {
    pub fn new(m: &CycMatrix) -> Result<Self> {
        projective_normalize(m)
    }

    pub fn rep(&self) -> &CycMatrix {
        &self.0
    }

    pub fn identity(size: usize) -> Self {
        ProjMatrix(CycMatrix::identity(size))
    }

    pub fn mul(&self, other: &Self) -> Self {
        normalize_nonzero(&(&self.0 * &other.0))
    }

    pub fn is_identity(&self) -> bool {
        self.0.is_identity()
    }

    /// Projective order, searched among the divisors of [`EXPONENT_BOUND`].
    pub fn order(&self) -> Option<u64> {
        element_order(&self.0, GroupKind::Projective)
    }
}

pub fn projective_normalize(m: &CycMatrix) -> Result<ProjMatrix> {
    if m.is_zero() {
        return Err(Error::ZeroMatrix);
    }
    Ok(normalize_nonzero(m))
}

fn normalize_nonzero(m: &CycMatrix) -> ProjMatrix {
    let lead = m.entries().iter().find(|e| !e.is_zero()).expect("nonzero matrix");
    if lead.is_one() {
        return ProjMatrix(m.clone());
    }
    ProjMatrix(m.scale(&lead.inv().expect("nonzero lead")))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GroupKind {
    Linear,
    Projective,
}

impl GroupKind {
    fn canon(self, m: &CycMatrix) -> CycMatrix {
        match self {
            GroupKind::Linear => m.clone(),
            GroupKind::Projective => normalize_nonzero(m).0,
        }
    }

    fn is_trivial(self, m: &CycMatrix) -> bool {
        match self {
            GroupKind::Linear => m.is_identity(),
            GroupKind::Projective => m.as_scalar().is_some(),
        }
    }
}

/// Order of `m` as a linear or projective transformation, if it divides
/// [`EXPONENT_BOUND`].
pub fn element_order(m: &CycMatrix, kind: GroupKind) -> Option<u64> {
    (1..=EXPONENT_BOUND)
        .filter(|d| EXPONENT_BOUND % d == 0)
        .find(|&d| kind.is_trivial(&m.pow(d)))
}

/// `α(m) = sgn(σ)·∏ nonzero entries` of the canonical representative of a
/// monomial matrix. For monomial matrices this is the determinant.
pub fn alpha_multiplier(m: &ProjMatrix) -> Result<CycNumber> {
    let (sigma, vals) = m.rep().monomial_parts()?;
    let prod = vals.iter().fold(CycNumber::one(), |acc, v| &acc * v);
    Ok(if permutation_sign(&sigma) < 0 { -prod } else { prod })
}

pub fn permutation_sign(sigma: &[usize]) -> i32 {
    let mut seen = vec![false; sigma.len()];
    let mut sign = 1;
    for start in 0..sigma.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            i = sigma[i];
            len += 1;
        }
        if len % 2 == 0 {
            sign = -sign;
        }
    }
    sign
}

/// A finite group of invertible matrices, kept as its full element list.
#[derive(Clone, Debug)]
pub struct MatrixGroup {
    kind: GroupKind,
    size: usize,
    generators: Vec<CycMatrix>,
    elements: Vec<CycMatrix>,
    index: HashMap<CycMatrix, usize>,
}

impl MatrixGroup {
    /// Breadth-first closure of `gens`. Element 0 is always the identity.
    pub fn closure(kind: GroupKind, gens: &[CycMatrix], cap: usize) -> Result<Self> {
        let size = gens.first().map(CycMatrix::size).ok_or_else(|| Error::Shape("no generators".into()))?;
        let gens: Vec<CycMatrix> = gens.iter().map(|g| kind.canon(g)).collect();
        if gens.iter().any(|g| g.size() != size) {
            return Err(Error::Shape("generators of different sizes".into()));
        }
        if gens.iter().any(|g| g.determinant().is_zero()) {
            return Err(Error::Shape("singular generator".into()));
        }
        let id = CycMatrix::identity(size);
        let mut elements = vec![id.clone()];
        let mut index = HashMap::from([(id, 0)]);
        let mut i = 0;
        while i < elements.len() {
            for g in &gens {
                let p = kind.canon(&(&elements[i] * g));
                if !index.contains_key(&p) {
                    if elements.len() >= cap {
                        return Err(Error::ClosureOverflow { cap, partial: elements.len() });
                    }
                    index.insert(p.clone(), elements.len());
                    elements.push(p);
                }
            }
            i += 1;
        }
        Ok(MatrixGroup { kind, size, generators: gens, elements, index })
    }

    /// The subgroup on a subset of `self` already known to be closed.
    /// Generators are picked greedily in index order.
    fn subgroup_on(&self, subset: &[usize]) -> Self {
        let mut gens: Vec<CycMatrix> = Vec::new();
        let mut span = MatrixGroup::closure(self.kind, &[CycMatrix::identity(self.size)], 1).expect("trivial group");
        for &i in subset {
            if span.order() == subset.len() {
                break;
            }
            if !span.index.contains_key(&self.elements[i]) {
                gens.push(self.elements[i].clone());
                span = MatrixGroup::closure(self.kind, &gens, subset.len()).expect("subset is a subgroup");
            }
        }
        span.generators = gens;
        span
    }

    pub fn kind(&self) -> GroupKind {
        self.kind
    }

    pub fn matrix_size(&self) -> usize {
        self.size
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn generators(&self) -> &[CycMatrix] {
        &self.generators
    }

    pub fn elements(&self) -> &[CycMatrix] {
        &self.elements
    }

    pub fn contains(&self, m: &CycMatrix) -> bool {
        m.size() == self.size && self.index.contains_key(&self.kind.canon(m))
    }

    pub fn position(&self, m: &CycMatrix) -> Option<usize> {
        self.index.get(&self.kind.canon(m)).copied()
    }

    pub fn mul(&self, a: &CycMatrix, b: &CycMatrix) -> CycMatrix {
        self.kind.canon(&(a * b))
    }

    /// Same element set, regardless of generators.
    pub fn same_elements(&self, other: &MatrixGroup) -> bool {
        self.kind == other.kind
            && self.order() == other.order()
            && self.elements.iter().all(|e| other.index.contains_key(e))
    }

    pub fn cayley_table(&self) -> CayleyTable {
        let n = self.order();
        let mut table = vec![0u32; n * n];
        for (i, a) in self.elements.iter().enumerate() {
            for (j, b) in self.elements.iter().enumerate() {
                table[i * n + j] = self.index[&self.mul(a, b)] as u32;
            }
        }
        CayleyTable::from_table(n, table).expect("closed matrix group")
    }

    pub fn order_structure(&self) -> OrderStructure {
        let mut s = OrderStructure::default();
        for e in &self.elements {
            let o = element_order(e, self.kind).expect("element order divides the exponent bound");
            *s.0.entry(o).or_insert(0) += 1;
        }
        s
    }

    pub fn commutator_subgroup(&self) -> MatrixGroup {
        let table = self.cayley_table();
        self.subgroup_on(&table.commutator_subgroup())
    }

    /// Kernel of [`alpha_multiplier`]; requires monomial elements.
    pub fn symplectic_part(&self) -> Result<MatrixGroup> {
        let mut kernel = Vec::new();
        for (i, e) in self.elements.iter().enumerate() {
            let a = alpha_multiplier(&normalize_nonzero(e))?;
            let trivial = match self.kind {
                GroupKind::Projective => a.is_one(),
                // a linear monomial matrix acts on the 2-form by its determinant
                GroupKind::Linear => e.determinant().is_one(),
            };
            if trivial {
                kernel.push(i);
            }
        }
        Ok(self.subgroup_on(&kernel))
    }

    pub fn invariants(&self) -> GroupInvariants {
        self.cayley_table().invariants()
    }

    pub fn iso_search(&self, other: &CayleyTable) -> Result<Option<Isomorphism>> {
        if self.order() > crate::finite_group::ISO_SEARCH_CAP {
            return Err(Error::Capacity(format!("group of order {} exceeds the search cap", self.order())));
        }
        self.cayley_table().iso_search(other)
    }

    /// `x ↦ g x g⁻¹` applied to every element.
    pub fn conjugate(&self, g: &CycMatrix) -> Result<MatrixGroup> {
        let gi = g.inverse()?;
        let gens: Vec<CycMatrix> = self.generators.iter().map(|h| &(g * h) * &gi).collect();
        MatrixGroup::closure(self.kind, &gens, self.order())
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let kind = match self.kind {
            GroupKind::Linear => "linear",
            GroupKind::Projective => "projective",
        };
        writeln!(s, "matrix-group v1").unwrap();
        writeln!(s, "kind {kind}").unwrap();
        writeln!(s, "size {}", self.size).unwrap();
        writeln!(s, "generators {}", self.generators.len()).unwrap();
        for g in &self.generators {
            writeln!(s, "{}", matrix_line(g)).unwrap();
        }
        writeln!(s, "elements {}", self.elements.len()).unwrap();
        for e in &self.elements {
            writeln!(s, "{}", matrix_line(e)).unwrap();
        }
        s
    }

    /// Reads [`MatrixGroup::to_text`] output and checks closure.
    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.lines();
        let mut next = || lines.next().ok_or_else(|| Error::Parse("unexpected end of input".into()));
        if next()? != "matrix-group v1" {
            return Err(Error::Parse("unknown header".into()));
        }
        let kind = match header_value(next()?, "kind")? {
            "linear" => GroupKind::Linear,
            "projective" => GroupKind::Projective,
            k => return Err(Error::Parse(format!("unknown kind {k}"))),
        };
        let size: usize = parse_num(header_value(next()?, "size")?)?;
        let ng: usize = parse_num(header_value(next()?, "generators")?)?;
        let generators = (0..ng).map(|_| parse_matrix_line(next()?, size)).collect::<Result<Vec<_>>>()?;
        let ne: usize = parse_num(header_value(next()?, "elements")?)?;
        let elements = (0..ne).map(|_| parse_matrix_line(next()?, size)).collect::<Result<Vec<_>>>()?;
        let index: HashMap<CycMatrix, usize> = elements.iter().enumerate().map(|(i, e)| (e.clone(), i)).collect();
        if index.len() != ne || elements.first().map_or(true, |e| !e.is_identity()) {
            return Err(Error::Parse("element list is not a group listing".into()));
        }
        let g = MatrixGroup { kind, size, generators, elements, index };
        for a in &g.elements {
            for b in &g.generators {
                if !g.index.contains_key(&g.mul(a, b)) {
                    return Err(Error::Parse("element list is not closed".into()));
                }
            }
        }
        Ok(g)
    }
}

fn matrix_line(m: &CycMatrix) -> String {
    m.entries().iter().map(CycNumber::to_compact).collect::<Vec<_>>().join(" ")
}

fn parse_matrix_line(line: &str, size: usize) -> Result<CycMatrix> {
    let entries = line.split_whitespace().map(CycNumber::parse_compact).collect::<Result<Vec<_>>>()?;
    if entries.len() != size * size {
        return Err(Error::Parse(format!("expected {} entries, found {}", size * size, entries.len())));
    }
    Ok(CycMatrix::from_fn(size, |i, j| entries[i * size + j].clone()))
}

fn header_value<'a>(line: &'a str, key: &str) -> Result<&'a str> {
    line.strip_prefix(key)
        .and_then(|r| r.strip_prefix(' '))
        .ok_or_else(|| Error::Parse(format!("expected '{key} …', found {line:?}")))
}

fn parse_num(s: &str) -> Result<usize> {
    s.parse().map_err(|_| Error::Parse(format!("bad number {s:?}")))
}

/// The explicit matrices and groups acting on `x₁⁴ + x₂⁴ + x₃⁴ + x₄⁴`.
pub mod fermat {
    use super::*;

    const CAP: usize = 4096;

    fn i4() -> CycNumber {
        CycNumber::zeta(4, 1)
    }

    fn int(v: i64) -> CycNumber {
        CycNumber::from_integer(v)
    }

    /// `diag(1,…,ζ₄,…,1)` with `ζ₄` in slot `k`.
    pub fn zeta4_at(k: usize) -> CycMatrix {
        CycMatrix::diagonal((0..4).map(|i| if i == k { i4() } else { int(1) }).collect())
    }

    /// Permutation matrix of a permutation of {1,2,3,4} written 1-based.
    pub fn perm(images: [usize; 4]) -> CycMatrix {
        let sigma: Vec<usize> = images.iter().map(|&x| x - 1).collect();
        CycMatrix::permutation(&sigma)
    }

    pub fn f384_tilde_generators() -> Vec<CycMatrix> {
        vec![zeta4_at(0), zeta4_at(1), zeta4_at(2), perm([2, 1, 3, 4]), perm([2, 3, 4, 1])]
    }

    pub fn f128_tilde_generators() -> Vec<CycMatrix> {
        // (1324) and (34)
        vec![zeta4_at(0), zeta4_at(1), zeta4_at(2), perm([3, 4, 2, 1]), perm([1, 2, 4, 3])]
    }

    pub fn f384_tilde() -> MatrixGroup {
        MatrixGroup::closure(GroupKind::Projective, &f384_tilde_generators(), CAP).expect("finite group")
    }

    pub fn f128_tilde() -> MatrixGroup {
        MatrixGroup::closure(GroupKind::Projective, &f128_tilde_generators(), CAP).expect("finite group")
    }

    pub fn f384() -> MatrixGroup {
        f384_tilde().symplectic_part().expect("monomial group")
    }

    pub fn f128() -> MatrixGroup {
        f128_tilde().symplectic_part().expect("monomial group")
    }

    /// Diagonal `μ₄`-matrices modulo scalars.
    pub fn diagonal_mu4() -> MatrixGroup {
        MatrixGroup::closure(GroupKind::Projective, &[zeta4_at(0), zeta4_at(1), zeta4_at(2), zeta4_at(3)], CAP)
            .expect("finite group")
    }

    fn diag(d: [CycNumber; 4]) -> CycMatrix {
        CycMatrix::diagonal(d.to_vec())
    }

    /// Generators of the derived subgroup of `F128`:
    /// `diag(1,-1,1,-1)`, `diag(1,1,ζ₄,ζ₄⁻¹)` and the permutation matrix of `(12)(34)`.
    pub fn derived_generators() -> [CycMatrix; 3] {
        [
            diag([int(1), int(-1), int(1), int(-1)]),
            diag([int(1), int(1), i4(), CycNumber::zeta(4, -1)]),
            perm([2, 1, 4, 3]),
        ]
    }

    /// The same triple with coordinates 2 and 3 exchanged in the two diagonal
    /// matrices only: `diag(1,1,-1,-1)`, `diag(1,ζ₄,1,ζ₄⁻¹)`, `(12)(34)`. It
    /// generates a different group of order 16 whose abelianization is `C₂×C₄`.
    pub fn swapped_frame_generators() -> [CycMatrix; 3] {
        [
            diag([int(1), int(1), int(-1), int(-1)]),
            diag([int(1), i4(), int(1), CycNumber::zeta(4, -1)]),
            perm([2, 1, 4, 3]),
        ]
    }

    pub fn p() -> CycMatrix {
        let (o, z) = (int(1), int(0));
        CycMatrix::from_rows(vec![
            vec![z.clone(), o.clone(), z.clone(), z.clone()],
            vec![i4(), z.clone(), z.clone(), z.clone()],
            vec![z.clone(), z.clone(), o, z.clone()],
            vec![z.clone(), z.clone(), z, i4()],
        ])
    }

    pub fn q() -> CycMatrix {
        let (o, z) = (int(1), int(0));
        CycMatrix::from_rows(vec![
            vec![i4(), z.clone(), z.clone(), z.clone()],
            vec![z.clone(), i4(), z.clone(), z.clone()],
            vec![z.clone(), z.clone(), z.clone(), o.clone()],
            vec![z.clone(), z.clone(), o, z],
        ])
    }

    pub fn derived_group() -> MatrixGroup {
        MatrixGroup::closure(GroupKind::Projective, &derived_generators(), CAP).expect("finite group")
    }

    pub fn swapped_frame_group() -> MatrixGroup {
        MatrixGroup::closure(GroupKind::Projective, &swapped_frame_generators(), CAP).expect("finite group")
    }

    pub fn q16() -> MatrixGroup {
        MatrixGroup::closure(GroupKind::Projective, &[p(), q()], CAP).expect("finite group")
    }

    /// The Sylow 2-subgroups of `F̃384`: `F̃128` and its conjugates by the
    /// permutation matrices of `(123)` and `(132)`.
    pub fn sylow2_conjugates() -> Vec<MatrixGroup> {
        let base = f128_tilde();
        let mut out = vec![base.clone()];
        for g in [perm([2, 3, 1, 4]), perm([3, 1, 2, 4])] {
            out.push(base.conjugate(&g).expect("invertible"));
        }
        out
    }
}
