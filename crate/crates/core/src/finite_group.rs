//! Small finite groups as explicit multiplication tables.
//!
//! Every concrete group that needs structural comparison (matrix groups,
//! permutation groups, abstract models) is turned into a [`CayleyTable`], which
//! is where element orders, invariants and isomorphism search live.

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::fmt;
use std::hash::Hash;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Isomorphism search refuses groups larger than this.
pub const ISO_SEARCH_CAP: usize = 512;

/// Element order → number of elements of that order.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrderStructure(pub BTreeMap<u64, u64>);

impl OrderStructure {
    pub fn from_pairs(pairs: &[(u64, u64)]) -> Self {
        OrderStructure(pairs.iter().copied().collect())
    }

    pub fn group_order(&self) -> u64 {
        self.0.values().sum()
    }

    pub fn count(&self, order: u64) -> u64 {
        self.0.get(&order).copied().unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (u64, u64)> + '_ {
        self.0.iter().map(|(&k, &v)| (k, v))
    }
}

impl fmt::Display for OrderStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|(k, v)| format!("{k}:{v}")).collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupInvariants {
    pub order: usize,
    pub center_order: usize,
    pub exponent: u64,
    /// Invariant factors `d₁ | d₂ | …` of the abelianization (factors > 1).
    pub abelianization: Vec<u64>,
    /// Conjugacy class sizes, sorted ascending.
    pub class_sizes: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Isomorphism {
    /// Indices (in the source table) of the generators used.
    pub generators: Vec<usize>,
    /// Their images in the target table.
    pub images: Vec<usize>,
    /// Full element map, source index → target index.
    pub map: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct CayleyTable {
    n: usize,
    table: Vec<u32>,
    identity: usize,
    inverse: Vec<usize>,
}

impl CayleyTable {
    /// Builds the table of a finite set closed under `op`. Fails with a shape
    /// error when a product leaves the set or no identity exists.
    pub fn from_elements<T: Clone + Eq + Hash>(elements: &[T], op: impl Fn(&T, &T) -> T) -> Result<Self> {
        let n = elements.len();
        let index: HashMap<&T, usize> = elements.iter().enumerate().map(|(i, e)| (e, i)).collect();
        if index.len() != n {
            return Err(Error::Shape("duplicate elements".into()));
        }
        let mut table = vec![0u32; n * n];
        for (i, a) in elements.iter().enumerate() {
            for (j, b) in elements.iter().enumerate() {
                let c = op(a, b);
                let k = *index
                    .get(&c)
                    .ok_or_else(|| Error::Shape("element set is not closed under the operation".into()))?;
                table[i * n + j] = k as u32;
            }
        }
        Self::from_table(n, table)
    }

    pub fn from_table(n: usize, table: Vec<u32>) -> Result<Self> {
        assert_eq!(table.len(), n * n);
        let identity = (0..n)
            .find(|&e| (0..n).all(|x| table[e * n + x] as usize == x && table[x * n + e] as usize == x))
            .ok_or_else(|| Error::Shape("no identity element".into()))?;
        let mut inverse = vec![usize::MAX; n];
        for x in 0..n {
            inverse[x] = (0..n)
                .find(|&y| table[x * n + y] as usize == identity)
                .ok_or_else(|| Error::Shape("element without inverse".into()))?;
        }
        Ok(CayleyTable { n, table, identity, inverse })
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.n + b] as usize
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }

    pub fn pow(&self, a: usize, e: u64) -> usize {
        (0..e).fold(self.identity, |acc, _| self.mul(acc, a))
    }

    pub fn element_order(&self, a: usize) -> u64 {
        let mut k = 1;
        let mut x = a;
        while x != self.identity {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    pub fn order_structure(&self) -> OrderStructure {
        let mut m = BTreeMap::new();
        for a in 0..self.n {
            *m.entry(self.element_order(a)).or_insert(0) += 1;
        }
        OrderStructure(m)
    }

    pub fn exponent(&self) -> u64 {
        (0..self.n).map(|a| self.element_order(a)).fold(1, num_integer::lcm)
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.n).all(|a| (a..self.n).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn center(&self) -> Vec<usize> {
        (0..self.n)
            .filter(|&a| (0..self.n).all(|b| self.mul(a, b) == self.mul(b, a)))
            .collect()
    }

    /// Sorted element indices of the subgroup generated by `gens`.
    pub fn subgroup_generated(&self, gens: &[usize]) -> Vec<usize> {
        let mut seen = vec![false; self.n];
        let mut queue = VecDeque::from([self.identity]);
        seen[self.identity] = true;
        while let Some(x) = queue.pop_front() {
            for &g in gens {
                let y = self.mul(x, g);
                if !seen[y] {
                    seen[y] = true;
                    queue.push_back(y);
                }
            }
        }
        (0..self.n).filter(|&i| seen[i]).collect()
    }

    pub fn commutator(&self, a: usize, b: usize) -> usize {
        let t = self.mul(self.inv(a), self.inv(b));
        self.mul(self.mul(t, a), b)
    }

    pub fn commutator_subgroup(&self) -> Vec<usize> {
        let mut comms: Vec<usize> = Vec::new();
        let mut seen = vec![false; self.n];
        for a in 0..self.n {
            for b in 0..self.n {
                let c = self.commutator(a, b);
                if !seen[c] {
                    seen[c] = true;
                    comms.push(c);
                }
            }
        }
        self.subgroup_generated(&comms)
    }

    /// A small generating set, chosen greedily by decreasing element order.
    pub fn greedy_generators(&self, subset: &[usize]) -> Vec<usize> {
        let mut cands: Vec<usize> = subset.to_vec();
        cands.sort_by_key(|&a| (std::cmp::Reverse(self.element_order(a)), a));
        let mut gens = Vec::new();
        let mut span = vec![false; self.n];
        span[self.identity] = true;
        for a in cands {
            if span[a] {
                continue;
            }
            gens.push(a);
            for x in self.subgroup_generated(&gens) {
                span[x] = true;
            }
            if subset.iter().all(|&s| span[s]) {
                break;
            }
        }
        gens
    }

    /// The multiplication table of a subgroup given by sorted element indices.
    pub fn subtable(&self, elements: &[usize]) -> Result<CayleyTable> {
        let pos: HashMap<usize, usize> = elements.iter().enumerate().map(|(i, &e)| (e, i)).collect();
        let m = elements.len();
        let mut table = vec![0u32; m * m];
        for (i, &a) in elements.iter().enumerate() {
            for (j, &b) in elements.iter().enumerate() {
                let c = self.mul(a, b);
                table[i * m + j] =
                    *pos.get(&c).ok_or_else(|| Error::Shape("subset is not a subgroup".into()))? as u32;
            }
        }
        CayleyTable::from_table(m, table)
    }

    pub fn conjugacy_class_sizes(&self) -> Vec<usize> {
        let mut class_of = vec![usize::MAX; self.n];
        let mut sizes = Vec::new();
        for a in 0..self.n {
            if class_of[a] != usize::MAX {
                continue;
            }
            let id = sizes.len();
            let mut size = 0;
            for g in 0..self.n {
                let c = self.mul(self.mul(self.inv(g), a), g);
                if class_of[c] == usize::MAX {
                    class_of[c] = id;
                    size += 1;
                }
            }
            sizes.push(size);
        }
        sizes.sort_unstable();
        sizes
    }

    /// Quotient by a normal subgroup, as a table on cosets.
    pub fn quotient(&self, normal: &[usize]) -> Result<CayleyTable> {
        let mut coset = vec![usize::MAX; self.n];
        let mut reps = Vec::new();
        for a in 0..self.n {
            if coset[a] != usize::MAX {
                continue;
            }
            let id = reps.len();
            reps.push(a);
            for &h in normal {
                coset[self.mul(a, h)] = id;
            }
        }
        let q = reps.len();
        let mut table = vec![0u32; q * q];
        for (i, &a) in reps.iter().enumerate() {
            for (j, &b) in reps.iter().enumerate() {
                table[i * q + j] = coset[self.mul(a, b)] as u32;
            }
        }
        // well-definedness: every coset member multiplies consistently
        for a in 0..self.n {
            for (j, &b) in reps.iter().enumerate() {
                if table[coset[a] * q + j] as usize != coset[self.mul(a, b)] {
                    return Err(Error::Shape("subgroup is not normal".into()));
                }
            }
        }
        CayleyTable::from_table(q, table)
    }

    /// Invariant factors of an abelian group (factors > 1, ascending).
    pub fn abelian_invariants(&self) -> Vec<u64> {
        assert!(self.is_abelian(), "abelian_invariants needs an abelian table");
        let n = self.n as u64;
        let mut per_prime: Vec<(u64, Vec<u32>)> = Vec::new();
        for p in prime_factors(n) {
            // c_k = #{x : x^{p^k} = 1}; log_p c_k - log_p c_{k-1} = #{e_i ≥ k}
            let mut exps = Vec::new();
            let mut prev = 0u32;
            let mut k = 1u32;
            let pk_full = p_part(n, p);
            loop {
                let pk = p.pow(k);
                let c = (0..self.n).filter(|&x| self.pow(x, pk) == self.identity).count() as u64;
                let s = ilog(c, p);
                let at_least_k = s - prev;
                if at_least_k == 0 {
                    break;
                }
                exps.push(at_least_k);
                prev = s;
                if c == pk_full {
                    break;
                }
                k += 1;
            }
            // exps[k-1] = number of cyclic factors with exponent ≥ k
            let count = exps.first().copied().unwrap_or(0) as usize;
            let mut e = vec![0u32; count];
            for (k, &c) in exps.iter().enumerate() {
                for slot in e.iter_mut().take(c as usize) {
                    *slot = k as u32 + 1;
                }
            }
            per_prime.push((p, e));
        }
        let width = per_prime.iter().map(|(_, e)| e.len()).max().unwrap_or(0);
        let mut factors = vec![1u64; width];
        for (p, e) in &per_prime {
            // e is descending; align largest exponents with the last factor
            for (i, &x) in e.iter().enumerate() {
                factors[width - 1 - i] *= p.pow(x);
            }
        }
        factors.retain(|&d| d > 1);
        factors
    }

    pub fn abelianization(&self) -> Vec<u64> {
        let derived = self.commutator_subgroup();
        self.quotient(&derived).expect("derived subgroup is normal").abelian_invariants()
    }

    pub fn invariants(&self) -> GroupInvariants {
        GroupInvariants {
            order: self.n,
            center_order: self.center().len(),
            exponent: self.exponent(),
            abelianization: self.abelianization(),
            class_sizes: self.conjugacy_class_sizes(),
        }
    }

    /// Per-element data preserved by isomorphisms, used for pruning.
    fn signatures(&self) -> Vec<(u64, usize, usize)> {
        let mut square_roots = vec![0usize; self.n];
        for x in 0..self.n {
            square_roots[self.mul(x, x)] += 1;
        }
        (0..self.n)
            .map(|a| {
                let centralizer = (0..self.n).filter(|&b| self.mul(a, b) == self.mul(b, a)).count();
                (self.element_order(a), centralizer, square_roots[a])
            })
            .collect()
    }

    /// Backtracking search for an isomorphism onto `other`. `Ok(None)` is a
    /// definitive answer that none exists.
    pub fn iso_search(&self, other: &CayleyTable) -> Result<Option<Isomorphism>> {
        if self.n > ISO_SEARCH_CAP || other.n > ISO_SEARCH_CAP {
            return Err(Error::Capacity(format!(
                "isomorphism search is capped at order {ISO_SEARCH_CAP} (got {} and {})",
                self.n, other.n
            )));
        }
        if self.n != other.n || self.order_structure() != other.order_structure() {
            return Ok(None);
        }
        let sig_g = self.signatures();
        let sig_h = other.signatures();
        let mut sorted_g = sig_g.clone();
        let mut sorted_h = sig_h.clone();
        sorted_g.sort_unstable();
        sorted_h.sort_unstable();
        if sorted_g != sorted_h {
            return Ok(None);
        }
        let all: Vec<usize> = (0..self.n).collect();
        let gens = self.greedy_generators(&all);
        let mut state = PartialMap::new(self, other);
        let mut images = Vec::new();
        if self.extend(other, &gens, &sig_g, &sig_h, &mut state, &mut images) {
            let map: Vec<usize> = state.fwd.iter().map(|x| x.expect("map is total")).collect();
            Ok(Some(Isomorphism { generators: gens, images, map }))
        } else {
            Ok(None)
        }
    }

    fn extend(
        &self,
        other: &CayleyTable,
        gens: &[usize],
        sig_g: &[(u64, usize, usize)],
        sig_h: &[(u64, usize, usize)],
        state: &mut PartialMap,
        images: &mut Vec<usize>,
    ) -> bool {
        let k = images.len();
        if k == gens.len() {
            return state.fwd.iter().all(Option::is_some);
        }
        let g = gens[k];
        if let Some(y) = state.fwd[g] {
            // already determined by earlier generators
            images.push(y);
            if self.extend(other, gens, sig_g, sig_h, state, images) {
                return true;
            }
            images.pop();
            return false;
        }
        // index-preserving image first, then the rest in order
        let cands = std::iter::once(g).chain((0..other.n).filter(move |&y| y != g));
        for y in cands {
            if y >= other.n || sig_h[y] != sig_g[g] || state.bwd[y].is_some() {
                continue;
            }
            let saved = state.clone();
            images.push(y);
            if state.assign_generator(self, other, &gens[..=k], images)
                && self.extend(other, gens, sig_g, sig_h, state, images)
            {
                return true;
            }
            images.pop();
            *state = saved;
        }
        false
    }
}

#[derive(Clone)]
struct PartialMap {
    fwd: Vec<Option<usize>>,
    bwd: Vec<Option<usize>>,
}

impl PartialMap {
    fn new(g: &CayleyTable, h: &CayleyTable) -> Self {
        let mut fwd = vec![None; g.n];
        let mut bwd = vec![None; h.n];
        fwd[g.identity] = Some(h.identity);
        bwd[h.identity] = Some(g.identity);
        PartialMap { fwd, bwd }
    }

    /// Extends the map over the subgroup generated by `gens ↦ images`,
    /// returning false on any inconsistency.
    fn assign_generator(&mut self, g: &CayleyTable, h: &CayleyTable, gens: &[usize], images: &[usize]) -> bool {
        let (last_g, last_h) = (*gens.last().unwrap(), *images.last().unwrap());
        if !self.set(last_g, last_h) {
            return false;
        }
        let mut queue: VecDeque<usize> = (0..g.n).filter(|&x| self.fwd[x].is_some()).collect();
        while let Some(x) = queue.pop_front() {
            let fx = self.fwd[x].unwrap();
            for (&s, &t) in gens.iter().zip(images) {
                let y = g.mul(x, s);
                let fy = h.mul(fx, t);
                match self.fwd[y] {
                    Some(v) if v != fy => return false,
                    Some(_) => {}
                    None => {
                        if !self.set(y, fy) {
                            return false;
                        }
                        queue.push_back(y);
                    }
                }
            }
        }
        true
    }

    fn set(&mut self, x: usize, y: usize) -> bool {
        match (self.fwd[x], self.bwd[y]) {
            (Some(a), _) if a != y => false,
            (_, Some(b)) if b != x => false,
            _ => {
                self.fwd[x] = Some(y);
                self.bwd[y] = Some(x);
                true
            }
        }
    }
}

fn prime_factors(mut n: u64) -> Vec<u64> {
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

/// The largest power of `p` dividing `n`.
pub fn p_part(mut n: u64, p: u64) -> u64 {
    let mut r = 1;
    while n % p == 0 {
        n /= p;
        r *= p;
    }
    r
}

fn ilog(mut v: u64, p: u64) -> u32 {
    let mut k = 0;
    while v > 1 {
        debug_assert_eq!(v % p, 0);
        v /= p;
        k += 1;
    }
    k
}

/// Small abstract models built from permutations of a few points.
pub mod models {
    use super::*;

    /// Permutations composed left to right: `(a·b)(x) = b(a(x))`.
    fn compose(a: &Vec<usize>, b: &Vec<usize>) -> Vec<usize> {
        a.iter().map(|&x| b[x]).collect()
    }

    pub fn from_permutations(gens: &[Vec<usize>]) -> CayleyTable {
        let degree = gens[0].len();
        let id: Vec<usize> = (0..degree).collect();
        let mut elems = vec![id];
        let mut seen: HashMap<Vec<usize>, ()> = HashMap::new();
        seen.insert(elems[0].clone(), ());
        let mut i = 0;
        while i < elems.len() {
            for g in gens {
                let p = compose(&elems[i], g);
                if seen.insert(p.clone(), ()).is_none() {
                    elems.push(p);
                }
            }
            i += 1;
        }
        CayleyTable::from_elements(&elems, compose).expect("permutation group closes")
    }

    pub fn cyclic(n: usize) -> CayleyTable {
        let rot: Vec<usize> = (0..n).map(|i| (i + 1) % n).collect();
        from_permutations(&[rot])
    }

    /// Dihedral group of order `2n`, acting on an `n`-gon.
    pub fn dihedral(n: usize) -> CayleyTable {
        let rot: Vec<usize> = (0..n).map(|i| (i + 1) % n).collect();
        let refl: Vec<usize> = (0..n).map(|i| (n - i) % n).collect();
        from_permutations(&[rot, refl])
    }

    /// `C₂ × D₈` on 4 + 2 points.
    pub fn c2_times_d8() -> CayleyTable {
        let rot = vec![1, 2, 3, 0, 4, 5];
        let refl = vec![0, 3, 2, 1, 4, 5];
        let swap = vec![0, 1, 2, 3, 5, 4];
        from_permutations(&[rot, refl, swap])
    }

    /// The binary dihedral group of order `4m` via its regular action on
    /// pairs `(k, ε)` standing for `a^k b^ε`.
    pub fn binary_dihedral(m: usize) -> CayleyTable {
        let n = 2 * m;
        let idx = |k: usize, e: usize| e * n + k;
        // right multiplication by a and by b
        let mut ra = vec![0; 2 * n];
        let mut rb = vec![0; 2 * n];
        for k in 0..n {
            // a^k·a = a^{k+1};  a^k b·a = a^{k-1} b
            ra[idx(k, 0)] = idx((k + 1) % n, 0);
            ra[idx(k, 1)] = idx((k + n - 1) % n, 1);
            // a^k·b = a^k b;  a^k b·b = a^{k+m}
            rb[idx(k, 0)] = idx(k, 1);
            rb[idx(k, 1)] = idx((k + m) % n, 0);
        }
        from_permutations(&[ra, rb])
    }
}

#[cfg(test)]
mod tests {
    use super::models::*;
    use super::*;

    #[test]
    fn model_orders() {
        assert_eq!(cyclic(8).order(), 8);
        assert_eq!(dihedral(8).order(), 16);
        assert_eq!(c2_times_d8().order(), 16);
        let q16 = binary_dihedral(4);
        assert_eq!(q16.order(), 16);
        assert_eq!(q16.order_structure(), OrderStructure::from_pairs(&[(1, 1), (2, 1), (4, 10), (8, 4)]));
    }

    #[test]
    fn invariants_of_models() {
        assert_eq!(binary_dihedral(4).invariants().center_order, 2);
        assert_eq!(c2_times_d8().abelianization(), vec![2, 2, 2]);
        assert_eq!(cyclic(8).exponent(), 8);
        assert_eq!(cyclic(12).abelian_invariants(), vec![12]);
        let c2c4 = from_permutations(&[vec![1, 0, 2, 3, 4, 5], vec![0, 1, 3, 4, 5, 2]]);
        assert_eq!(c2c4.abelian_invariants(), vec![2, 4]);
    }

    #[test]
    fn q16_derived_subgroup_is_cyclic_of_order_4() {
        let q16 = binary_dihedral(4);
        let d = q16.commutator_subgroup();
        assert_eq!(d.len(), 4);
        let sub = q16.subtable(&d).unwrap();
        assert_eq!(sub.exponent(), 4);
    }

    #[test]
    fn iso_search_examples() {
        let q16 = binary_dihedral(4);
        let d16 = dihedral(8);
        assert!(q16.iso_search(&d16).unwrap().is_none());
        let iso = q16.iso_search(&q16).unwrap().unwrap();
        assert_eq!(iso.map, (0..16).collect::<Vec<_>>());
        assert!(c2_times_d8().iso_search(&c2_times_d8()).unwrap().is_some());
    }

    #[test]
    fn iso_search_cap() {
        let big = cyclic(600);
        assert!(matches!(big.iso_search(&big), Err(Error::Capacity(_))));
    }
}
