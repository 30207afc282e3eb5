//! Permutation groups with a base and strong generating set.
//!
//! Points are 0-based internally. Products read left to right:
//! `(a * b)(x) = b(a(x))`.

use std::collections::{HashSet, VecDeque};
use std::fmt::{self, Write as _};
use std::ops::Mul;

use num_integer::Integer;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::finite_group::{p_part, CayleyTable};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm(Vec<u8>);

impl Perm {
    pub fn identity(degree: usize) -> Self {
        assert!(degree <= 256, "degree above 256 is not supported");
        Perm((0..degree).map(|i| i as u8).collect())
    }

    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        if n > 256 {
            return Err(Error::OutOfRange(format!("degree {n} above 256")));
        }
        let mut seen = vec![false; n];
        for &x in &images {
            if x >= n || std::mem::replace(&mut seen[x], true) {
                return Err(Error::Shape("images do not form a bijection".into()));
            }
        }
        Ok(Perm(images.into_iter().map(|x| x as u8).collect()))
    }

    /// From disjoint cycles written with 1-based points.
    pub fn from_cycles(degree: usize, cycles: &[&[usize]]) -> Result<Self> {
        let mut img: Vec<usize> = (0..degree).collect();
        for c in cycles {
            for (k, &p) in c.iter().enumerate() {
                let q = c[(k + 1) % c.len()];
                if p == 0 || p > degree || q == 0 || q > degree {
                    return Err(Error::OutOfRange(format!("point outside 1..={degree}")));
                }
                img[p - 1] = q - 1;
            }
        }
        Self::from_images(img)
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.0[x] as usize
    }

    pub fn images(&self) -> Vec<usize> {
        self.0.iter().map(|&x| x as usize).collect()
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &x)| i == x as usize)
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0u8; self.0.len()];
        for (i, &x) in self.0.iter().enumerate() {
            inv[x as usize] = i as u8;
        }
        Perm(inv)
    }

    pub fn pow(&self, e: u64) -> Self {
        // cycle-wise: x ↦ the point e steps along its cycle
        let mut out = vec![0u8; self.0.len()];
        for c in self.cycles() {
            let len = c.len() as u64;
            let shift = (e % len) as usize;
            for (k, &p) in c.iter().enumerate() {
                out[p] = c[(k + shift) % c.len()] as u8;
            }
        }
        Perm(out)
    }

    /// All cycles including fixed points, each starting at its least point.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.0.len()];
        let mut out = Vec::new();
        for s in 0..self.0.len() {
            if seen[s] {
                continue;
            }
            let mut c = Vec::new();
            let mut x = s;
            while !seen[x] {
                seen[x] = true;
                c.push(x);
                x = self.apply(x);
            }
            out.push(c);
        }
        out
    }

    pub fn order(&self) -> u64 {
        self.cycles().iter().fold(1u64, |acc, c| acc.lcm(&(c.len() as u64)))
    }

    /// `g⁻¹ · self · g`.
    pub fn conjugate_by(&self, g: &Perm) -> Perm {
        let mut out = vec![0u8; self.0.len()];
        for i in 0..self.0.len() {
            out[g.apply(i)] = g.0[self.apply(i)];
        }
        Perm(out)
    }

    pub fn first_moved(&self) -> Option<usize> {
        self.0.iter().enumerate().find(|(i, &x)| *i != x as usize).map(|(i, _)| i)
    }
}

impl Mul for &Perm {
    type Output = Perm;
    fn mul(self, rhs: &Perm) -> Perm {
        Perm(self.0.iter().map(|&x| rhs.0[x as usize]).collect())
    }
}

impl fmt::Display for Perm {
    /// Cycle notation with 1-based points.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cs: Vec<Vec<usize>> = self.cycles().into_iter().filter(|c| c.len() > 1).collect();
        if cs.is_empty() {
            return write!(f, "()");
        }
        for c in cs {
            let pts: Vec<String> = c.iter().map(|p| (p + 1).to_string()).collect();
            write!(f, "({})", pts.join(","))?;
        }
        Ok(())
    }
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Perm{self}")
    }
}

#[derive(Clone, Debug)]
struct Level {
    base_point: usize,
    /// Strong generators fixing every earlier base point.
    gens: Vec<Perm>,
    /// Orbit in discovery order.
    orbit: Vec<usize>,
    /// `transversal[β]` maps the base point to `β`.
    transversal: Vec<Option<Perm>>,
}

impl Level {
    fn new(degree: usize, base_point: usize) -> Self {
        let mut transversal = vec![None; degree];
        transversal[base_point] = Some(Perm::identity(degree));
        Level { base_point, gens: Vec::new(), orbit: vec![base_point], transversal }
    }

    /// Extends the orbit under the current generators. Existing entries stay.
    fn grow_orbit(&mut self) {
        let mut queue: VecDeque<usize> = self.orbit.iter().copied().collect();
        while let Some(b) = queue.pop_front() {
            for g in &self.gens {
                let c = g.apply(b);
                if self.transversal[c].is_none() {
                    let u = self.transversal[b].as_ref().unwrap() * g;
                    self.transversal[c] = Some(u);
                    self.orbit.push(c);
                    queue.push_back(c);
                }
            }
        }
    }

    fn transversal_of(&self, b: usize) -> Option<&Perm> {
        self.transversal[b].as_ref()
    }
}

#[derive(Clone, Debug)]
pub struct PermGroup {
    degree: usize,
    generators: Vec<Perm>,
    levels: Vec<Level>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitPartition {
    /// Orbit sizes, ascending.
    pub sizes: Vec<usize>,
    /// Orbits as 1-based points, ordered by least element.
    pub blocks: Vec<Vec<usize>>,
}

/// Draw limit per ascent step in [`PermGroup::sylow2`].
pub const SYLOW_DRAW_BUDGET: u64 = 20_000_000;

impl PermGroup {
    pub fn new(degree: usize, generators: Vec<Perm>) -> Result<Self> {
        Self::with_base(degree, generators, &[])
    }

    /// Schreier–Sims with the given base prefix (0-based points).
    pub fn with_base(degree: usize, generators: Vec<Perm>, base_prefix: &[usize]) -> Result<Self> {
        if generators.iter().any(|g| g.degree() != degree) {
            return Err(Error::Shape("generator degree mismatch".into()));
        }
        if base_prefix.iter().any(|&b| b >= degree) {
            return Err(Error::OutOfRange("base point outside the domain".into()));
        }
        let mut g = PermGroup { degree, generators, levels: Vec::new() };
        g.schreier_sims(base_prefix);
        Ok(g)
    }

    pub fn trivial(degree: usize) -> Self {
        PermGroup { degree, generators: Vec::new(), levels: Vec::new() }
    }

    fn schreier_sims(&mut self, base_prefix: &[usize]) {
        let degree = self.degree;
        let gens: Vec<Perm> = self.generators.iter().filter(|g| !g.is_identity()).cloned().collect();
        let mut base: Vec<usize> = Vec::new();
        for &b in base_prefix {
            if !base.contains(&b) {
                base.push(b);
            }
        }
        for g in &gens {
            if base.iter().all(|&b| g.apply(b) == b) {
                base.push(g.first_moved().unwrap());
            }
        }
        let mut levels: Vec<Level> = base.iter().map(|&b| Level::new(degree, b)).collect();
        for (i, level) in levels.iter_mut().enumerate() {
            level.gens = gens.iter().filter(|g| base[..i].iter().all(|&b| g.apply(b) == b)).cloned().collect();
            level.grow_orbit();
        }
        let mut i = levels.len() as isize - 1;
        while i >= 0 {
            let iu = i as usize;
            let mut restart = None;
            'outer: for k in 0..levels[iu].orbit.len() {
                let beta = levels[iu].orbit[k];
                for j in 0..levels[iu].gens.len() {
                    let s = &levels[iu].gens[j];
                    let u_beta = levels[iu].transversal_of(beta).unwrap();
                    let g1 = u_beta * s;
                    let u1 = levels[iu].transversal_of(s.apply(beta)).unwrap();
                    if g1 == *u1 {
                        continue;
                    }
                    let schreier = &g1 * &u1.inverse();
                    let (h, reached) = strip(&levels, schreier, iu + 1);
                    if reached < levels.len() || !h.is_identity() {
                        if reached == levels.len() {
                            // h fixes every base point: extend the base
                            levels.push(Level::new(degree, h.first_moved().unwrap()));
                        }
                        let end = reached + 1;
                        for lvl in levels.iter_mut().take(end).skip(iu + 1) {
                            lvl.gens.push(h.clone());
                            lvl.grow_orbit();
                        }
                        restart = Some(end - 1);
                        break 'outer;
                    }
                }
            }
            match restart {
                Some(r) => i = r as isize,
                None => i -= 1,
            }
        }
        self.levels = levels;
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Perm] {
        &self.generators
    }

    pub fn base(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.base_point).collect()
    }

    /// All strong generators, deduplicated, in level order.
    pub fn strong_generators(&self) -> Vec<Perm> {
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        for l in &self.levels {
            for g in &l.gens {
                if seen.insert(g.clone()) {
                    out.push(g.clone());
                }
            }
        }
        out
    }

    pub fn order(&self) -> u128 {
        self.levels.iter().map(|l| l.orbit.len() as u128).product()
    }

    pub fn contains(&self, g: &Perm) -> bool {
        if g.degree() != self.degree {
            return false;
        }
        let (h, reached) = strip(&self.levels, g.clone(), 0);
        reached == self.levels.len() && h.is_identity()
    }

    /// Uniformly random element, as a product of random transversal entries.
    pub fn random_element(&self, rng: &mut impl Rng) -> Perm {
        let mut g = Perm::identity(self.degree);
        for l in self.levels.iter().rev() {
            let b = l.orbit[rng.gen_range(0..l.orbit.len())];
            g = &g * l.transversal_of(b).unwrap();
        }
        g
    }

    /// Stabilizer of a 1-based point.
    pub fn point_stabilizer(&self, point: usize) -> Result<PermGroup> {
        if point == 0 || point > self.degree {
            return Err(Error::OutOfRange(format!("point {point} outside 1..={}", self.degree)));
        }
        let rebased = PermGroup::with_base(self.degree, self.strong_generators(), &[point - 1])?;
        let Some(first) = rebased.levels.first() else {
            return Ok(PermGroup::trivial(self.degree));
        };
        if first.base_point != point - 1 {
            return Ok(rebased);
        }
        let levels: Vec<Level> = rebased.levels[1..].to_vec();
        let generators = levels.first().map(|l| l.gens.clone()).unwrap_or_default();
        Ok(PermGroup { degree: self.degree, generators, levels })
    }

    /// An element sending each `src[i]` to `dst[i]` (1-based points), if any.
    pub fn element_mapping(&self, src: &[usize], dst: &[usize]) -> Result<Option<Perm>> {
        if src.len() != dst.len() || src.iter().chain(dst).any(|&p| p == 0 || p > self.degree) {
            return Err(Error::OutOfRange("points must be 1-based and paired".into()));
        }
        let prefix: Vec<usize> = src.iter().map(|p| p - 1).collect();
        let g = PermGroup::with_base(self.degree, self.strong_generators(), &prefix)?;
        // g(x) = u_0(u_1(…(x))); peel one base point at a time
        let mut targets: Vec<usize> = dst.iter().map(|p| p - 1).collect();
        let mut result = Perm::identity(self.degree);
        for (i, &s) in prefix.iter().enumerate() {
            let Some(level) = g.levels.get(i).filter(|l| l.base_point == s) else {
                // remaining source points are fixed by the whole stabilizer
                if prefix[i..].iter().zip(&targets[i..]).all(|(a, b)| a == b) {
                    break;
                }
                return Ok(None);
            };
            let Some(u) = level.transversal_of(targets[i]) else {
                return Ok(None);
            };
            let ui = u.inverse();
            for t in targets.iter_mut() {
                *t = ui.apply(*t);
            }
            result = u * &result;
        }
        Ok(Some(result))
    }

    pub fn orbit_partition(&self) -> OrbitPartition {
        let gens = if self.generators.is_empty() { self.strong_generators() } else { self.generators.clone() };
        let mut block_of = vec![usize::MAX; self.degree];
        let mut blocks: Vec<Vec<usize>> = Vec::new();
        for s in 0..self.degree {
            if block_of[s] != usize::MAX {
                continue;
            }
            let id = blocks.len();
            let mut block = vec![s];
            block_of[s] = id;
            let mut k = 0;
            while k < block.len() {
                for g in &gens {
                    let y = g.apply(block[k]);
                    if block_of[y] == usize::MAX {
                        block_of[y] = id;
                        block.push(y);
                    }
                }
                k += 1;
            }
            block.sort_unstable();
            blocks.push(block.into_iter().map(|p| p + 1).collect());
        }
        let mut sizes: Vec<usize> = blocks.iter().map(Vec::len).collect();
        sizes.sort_unstable();
        OrbitPartition { sizes, blocks }
    }

    /// Every element, for groups no larger than `cap`.
    pub fn elements(&self, cap: usize) -> Result<Vec<Perm>> {
        let order = self.order();
        if order > cap as u128 {
            return Err(Error::Capacity(format!("group of order {order} exceeds enumeration cap {cap}")));
        }
        let mut out = vec![Perm::identity(self.degree)];
        for l in self.levels.iter().rev() {
            let mut next = Vec::with_capacity(out.len() * l.orbit.len());
            for &b in &l.orbit {
                let u = l.transversal_of(b).unwrap();
                for g in &out {
                    next.push(g * u);
                }
            }
            out = next;
        }
        out.sort();
        Ok(out)
    }

    pub fn cayley_table(&self, cap: usize) -> Result<CayleyTable> {
        let elems = self.elements(cap)?;
        CayleyTable::from_elements(&elems, |a, b| a * b)
    }

    /// A Sylow 2-subgroup by seeded ascent: keep a 2-subgroup `P`, draw random
    /// elements, take their 2-parts, and adjoin any that normalize `P` without
    /// lying in it.
    pub fn sylow2(&self, seed: u64) -> Result<PermGroup> {
        let order = self.order();
        let target = p_part_u128(order, 2);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut gens: Vec<Perm> = Vec::new();
        let mut members: HashSet<Perm> = HashSet::from([Perm::identity(self.degree)]);
        while (members.len() as u128) < target {
            let mut draws = 0u64;
            let h = loop {
                draws += 1;
                if draws > SYLOW_DRAW_BUDGET {
                    return Err(Error::SearchExhausted { seed });
                }
                let g = self.random_element(&mut rng);
                let o = g.order();
                let two = p_part(o, 2);
                if two == 1 {
                    continue;
                }
                let h = g.pow(o / two);
                if members.contains(&h) {
                    continue;
                }
                if gens.iter().all(|x| members.contains(&x.conjugate_by(&h))) {
                    break h;
                }
            };
            gens.push(h);
            members = closure_set(self.degree, &gens);
        }
        PermGroup::new(self.degree, gens)
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        writeln!(s, "bsgs v1").unwrap();
        writeln!(s, "degree {}", self.degree).unwrap();
        writeln!(s, "order {}", self.order()).unwrap();
        let base: Vec<String> = self.base().iter().map(|b| (b + 1).to_string()).collect();
        writeln!(s, "base {}", base.join(" ")).unwrap();
        let strong = self.strong_generators();
        writeln!(s, "strong {}", strong.len()).unwrap();
        for g in &strong {
            let imgs: Vec<String> = g.images().iter().map(|x| (x + 1).to_string()).collect();
            writeln!(s, "{}", imgs.join(" ")).unwrap();
        }
        s
    }

    /// Reads [`PermGroup::to_text`] output, rebuilding the chain and checking
    /// the recorded order.
    pub fn from_text(text: &str) -> Result<Self> {
        let bad = |m: &str| Error::InvalidCache(m.to_string());
        let mut lines = text.lines();
        if lines.next() != Some("bsgs v1") {
            return Err(bad("unknown header"));
        }
        let mut field = |key: &str| -> Result<String> {
            let l = lines.next().ok_or_else(|| bad("truncated"))?;
            l.strip_prefix(key)
                .map(|r| r.trim().to_string())
                .ok_or_else(|| bad(&format!("expected {key}")))
        };
        let degree: usize = field("degree")?.parse().map_err(|_| bad("degree"))?;
        let order: u128 = field("order")?.parse().map_err(|_| bad("order"))?;
        let base = field("base")?
            .split_whitespace()
            .map(|t| t.parse::<usize>().ok().filter(|&p| p >= 1 && p <= degree).map(|p| p - 1))
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| bad("base"))?;
        let count: usize = field("strong")?.parse().map_err(|_| bad("strong"))?;
        let mut gens = Vec::with_capacity(count);
        for _ in 0..count {
            let l = lines.next().ok_or_else(|| bad("truncated"))?;
            let imgs = l
                .split_whitespace()
                .map(|t| t.parse::<usize>().ok().filter(|&p| p >= 1).map(|p| p - 1))
                .collect::<Option<Vec<_>>>()
                .ok_or_else(|| bad("generator"))?;
            if imgs.len() != degree {
                return Err(bad("generator degree"));
            }
            gens.push(Perm::from_images(imgs).map_err(|_| bad("generator is not a permutation"))?);
        }
        let g = PermGroup::with_base(degree, gens, &base)?;
        if g.order() != order {
            return Err(bad(&format!("order {} does not match recorded {order}", g.order())));
        }
        Ok(g)
    }
}

fn p_part_u128(mut n: u128, p: u128) -> u128 {
    let mut r = 1;
    while n % p == 0 {
        n /= p;
        r *= p;
    }
    r
}

fn closure_set(degree: usize, gens: &[Perm]) -> HashSet<Perm> {
    let mut set = HashSet::from([Perm::identity(degree)]);
    let mut queue = VecDeque::from([Perm::identity(degree)]);
    while let Some(x) = queue.pop_front() {
        for g in gens {
            let y = &x * g;
            if set.insert(y.clone()) {
                queue.push_back(y);
            }
        }
    }
    set
}

/// Sifts `g` through levels `from..`; returns the residue and the index of
/// the first level it could not pass (`levels.len()` when it passed all).
fn strip(levels: &[Level], mut g: Perm, from: usize) -> (Perm, usize) {
    for (i, l) in levels.iter().enumerate().skip(from) {
        let beta = g.apply(l.base_point);
        if beta == l.base_point {
            continue;
        }
        match l.transversal_of(beta) {
            None => return (g, i),
            Some(u) => g = &g * &u.inverse(),
        }
    }
    (g, levels.len())
}
