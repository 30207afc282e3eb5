//! The extended binary Golay code, the Steiner system St(5,8,24) and the
//! Mathieu groups M24 ⊃ M23.
//!
//! Points of Ω are 1..=24. Point `p` is bit `p - 1` of a [`Bitmask24`]. Points
//! 1..=23 stand for the residues 0..=22 mod 23 and point 24 for ∞.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::perm::{Perm, PermGroup};

pub const M24_ORDER: u128 = 244_823_040;
pub const M23_ORDER: u128 = 10_200_960;
/// The point fixed by M23.
pub const INFINITY: usize = 24;

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Bitmask24(u32);

impl Bitmask24 {
    pub const FULL: Bitmask24 = Bitmask24((1 << 24) - 1);
    pub const EMPTY: Bitmask24 = Bitmask24(0);

    pub fn new(bits: u32) -> Result<Self> {
        if bits >> 24 != 0 {
            return Err(Error::OutOfRange(format!("{bits:#x} has bits above position 24")));
        }
        Ok(Bitmask24(bits))
    }

    /// From 1-based points.
    pub fn from_points(points: &[usize]) -> Result<Self> {
        let mut bits = 0u32;
        for &p in points {
            if !(1..=24).contains(&p) {
                return Err(Error::OutOfRange(format!("point {p} outside 1..=24")));
            }
            bits |= 1 << (p - 1);
        }
        Ok(Bitmask24(bits))
    }

    pub fn bits(self) -> u32 {
        self.0
    }

    pub fn points(self) -> Vec<usize> {
        (1..=24).filter(|&p| self.contains(p)).collect()
    }

    pub fn weight(self) -> u32 {
        self.0.count_ones()
    }

    pub fn contains(self, p: usize) -> bool {
        (1..=24).contains(&p) && self.0 >> (p - 1) & 1 == 1
    }

    pub fn is_subset_of(self, other: Bitmask24) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn xor(self, other: Bitmask24) -> Bitmask24 {
        Bitmask24(self.0 ^ other.0)
    }

    pub fn and(self, other: Bitmask24) -> Bitmask24 {
        Bitmask24(self.0 & other.0)
    }

    /// Image of the set under a permutation of degree 24.
    pub fn apply(self, g: &Perm) -> Bitmask24 {
        let mut out = 0;
        for i in 0..24 {
            if self.0 >> i & 1 == 1 {
                out |= 1 << g.apply(i);
            }
        }
        Bitmask24(out)
    }

    pub fn to_hex(self) -> String {
        format!("{:06x}", self.0)
    }
}

impl fmt::Debug for Bitmask24 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Bitmask24{:?}", self.points())
    }
}

/// Rows of the generator matrix: the first twelve cyclic shifts of the
/// quadratic-residue word mod 23, each extended by a parity bit on ∞.
pub const GOLAY_GENERATORS: [u32; 12] = [
    0x85335e, 0x8a66bc, 0x94cd78, 0xa99af0, 0xd335e0, 0xa66bc1, 0xccd782, 0x99af05, 0xb35e0a, 0xe6bc14, 0xcd7829,
    0x9af053,
];

pub const WEIGHT_SPECTRUM: [(u32, usize); 5] = [(0, 1), (8, 759), (12, 2576), (16, 759), (24, 1)];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GolayCode {
    /// All 4096 codewords, sorted.
    words: Vec<Bitmask24>,
    octads: Vec<Bitmask24>,
}

impl GolayCode {
    pub fn construct() -> Self {
        let mut words = vec![Bitmask24::EMPTY];
        for &g in &GOLAY_GENERATORS {
            let shifted: Vec<Bitmask24> = words.iter().map(|w| w.xor(Bitmask24(g))).collect();
            words.extend(shifted);
        }
        Self::from_words(words).expect("the fixed generator matrix spans the Golay code")
    }

    /// Validates a word list: 4096 distinct words, closed under symmetric
    /// difference, with the Golay weight spectrum.
    pub fn from_words(mut words: Vec<Bitmask24>) -> Result<Self> {
        words.sort_unstable();
        words.dedup();
        if words.len() != 4096 {
            return Err(Error::CorruptCode(format!("{} distinct words instead of 4096", words.len())));
        }
        let spectrum = weight_spectrum(&words);
        if spectrum != WEIGHT_SPECTRUM.to_vec() {
            return Err(Error::CorruptCode(format!("weight spectrum {spectrum:?}")));
        }
        let basis = gf2_basis(&words);
        if basis.len() != 12 {
            return Err(Error::CorruptCode(format!("span has dimension {}", basis.len())));
        }
        let octads = words.iter().copied().filter(|w| w.weight() == 8).collect();
        Ok(GolayCode { words, octads })
    }

    pub fn words(&self) -> &[Bitmask24] {
        &self.words
    }

    pub fn octads(&self) -> &[Bitmask24] {
        &self.octads
    }

    pub fn contains(&self, w: Bitmask24) -> bool {
        self.words.binary_search(&w).is_ok()
    }

    pub fn weight_spectrum(&self) -> Vec<(u32, usize)> {
        weight_spectrum(&self.words)
    }

    pub fn count_with_weight(&self, weight: u32) -> usize {
        self.words.iter().filter(|w| w.weight() == weight).count()
    }

    /// Number of octads containing `set`.
    pub fn octads_containing(&self, set: Bitmask24) -> usize {
        self.octads.iter().filter(|o| set.is_subset_of(**o)).count()
    }

    /// The unique octad containing a 5-set.
    pub fn steiner_query(&self, five_set: Bitmask24) -> Result<Bitmask24> {
        if five_set.weight() != 5 {
            return Err(Error::Shape(format!("expected a 5-set, got weight {}", five_set.weight())));
        }
        let hits: Vec<Bitmask24> = self.octads.iter().copied().filter(|o| five_set.is_subset_of(*o)).collect();
        match hits.as_slice() {
            [o] => Ok(*o),
            _ => Err(Error::CorruptCode(format!("{} octads contain {:?}", hits.len(), five_set))),
        }
    }

    pub fn preserves_octads(&self, g: &Perm) -> bool {
        self.octads.iter().all(|o| self.contains(o.apply(g)))
    }

    /// Sorted six-hex-digit lines, one word per line.
    pub fn to_hex_lines(&self) -> String {
        let mut s = String::with_capacity(4096 * 7);
        for w in &self.words {
            s.push_str(&w.to_hex());
            s.push('\n');
        }
        s
    }

    pub fn from_hex_lines(text: &str) -> Result<Self> {
        let words = text
            .lines()
            .filter(|l| !l.trim().is_empty())
            .map(|l| {
                let t = l.trim();
                if t.len() != 6 {
                    return Err(Error::InvalidCache(format!("bad line {t:?}")));
                }
                u32::from_str_radix(t, 16)
                    .map_err(|_| Error::InvalidCache(format!("bad hex {t:?}")))
                    .and_then(|b| Bitmask24::new(b).map_err(|e| Error::InvalidCache(e.to_string())))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_words(words).map_err(|e| Error::InvalidCache(e.to_string()))
    }
}

fn weight_spectrum(words: &[Bitmask24]) -> Vec<(u32, usize)> {
    let mut counts = [0usize; 25];
    for w in words {
        counts[w.weight() as usize] += 1;
    }
    (0..=24u32).filter(|&k| counts[k as usize] > 0).map(|k| (k, counts[k as usize])).collect()
}

fn gf2_basis(words: &[Bitmask24]) -> Vec<u32> {
    let mut basis: Vec<u32> = Vec::new();
    for w in words {
        let mut v = w.0;
        for &b in &basis {
            v = v.min(v ^ b);
        }
        if v != 0 {
            basis.push(v);
            basis.sort_unstable_by(|a, b| b.cmp(a));
        }
    }
    basis
}

/// Generators of M24 acting on residues mod 23 and ∞:
/// `x ↦ x+1`, `x ↦ 2x`, `x ↦ -1/x`, and the map fixing 0 and ∞ that sends a
/// nonzero residue `x` to `9x³` (squares) or `x³/9` (non-squares).
pub fn m24_generators() -> Vec<Perm> {
    const INF: usize = 23;
    let squares: Vec<usize> = (1..23).map(|x| x * x % 23).collect();
    let inv = |x: usize| (1..23).find(|y| x * y % 23 == 1).unwrap();
    let shift: Vec<usize> = (0..23).map(|x| (x + 1) % 23).chain([INF]).collect();
    let double: Vec<usize> = (0..23).map(|x| 2 * x % 23).chain([INF]).collect();
    let invert: Vec<usize> = (0..23).map(|x| if x == 0 { INF } else { (23 - inv(x)) % 23 }).chain([0]).collect();
    let delta: Vec<usize> = (0..23)
        .map(|x| match x {
            0 => 0,
            x if squares.contains(&x) => 9 * x * x * x % 23,
            x => x * x * x * inv(9) % 23,
        })
        .chain([INF])
        .collect();
    [shift, double, invert, delta].into_iter().map(|v| Perm::from_images(v).expect("bijection")).collect()
}

/// M24 from the fixed generators, each checked against the octads.
pub fn m24_construct(code: &GolayCode) -> Result<PermGroup> {
    let gens = m24_generators();
    for (index, g) in gens.iter().enumerate() {
        if !code.preserves_octads(g) {
            return Err(Error::GeneratorRejected { index });
        }
    }
    let g = PermGroup::new(24, gens)?;
    if g.order() != M24_ORDER {
        return Err(Error::AuditFailed(format!("M24 closure has order {}", g.order())));
    }
    Ok(g)
}

/// M23 as the stabilizer of ∞ in M24.
pub fn m23_construct(m24: &PermGroup) -> Result<PermGroup> {
    m24.point_stabilizer(INFINITY)
}

/// All sorted multisets of `count` positive integers (powers of two when
/// `powers_of_two` is set), at least one equal to 1, summing to `total`.
pub fn orbit_type_solver(total: u64, count: usize, powers_of_two: bool) -> Vec<Vec<u64>> {
    let parts: Vec<u64> = if powers_of_two {
        std::iter::successors(Some(1u64), |x| x.checked_mul(2)).take_while(|&x| x <= total).collect()
    } else {
        (1..=total).collect()
    };
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(parts: &[u64], start: usize, left: u64, slots: usize, cur: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if slots == 0 {
            if left == 0 && cur.first() == Some(&1) {
                out.push(cur.clone());
            }
            return;
        }
        for (i, &p) in parts.iter().enumerate().skip(start) {
            if p * slots as u64 > left {
                break;
            }
            cur.push(p);
            rec(parts, i, left - p, slots - 1, cur, out);
            cur.pop();
        }
    }
    rec(&parts, 0, total, count, &mut cur, &mut out);
    out
}
