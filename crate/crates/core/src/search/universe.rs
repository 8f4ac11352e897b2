//! Precomputed tables over all monomials of a shape: pairwise phases, pair
//! compatibility, triple compatibility and coefficient zero-ness by phase
//! pattern. Everything here is immutable once built and shared by workers.

use crate::cyclotomic::CyclotomicInteger;
use crate::error::{KummerError, Result};
use crate::kummer::{arrangement_phase_counts, compositions};
use crate::monomial::{phase_unchecked, AlgebraShape, ExponentVector};

use super::bits::Bits;

/// Largest `d^{2n}` the search will tabulate.
pub(crate) const MAX_UNIVERSE: u64 = 4096;
/// Largest universe for which the triple table is materialized.
const MAX_TRIPLE_TABLE: usize = 256;
/// Largest dense coefficient table per (subset size, composition).
const MAX_DENSE_PATTERNS: u64 = 1 << 16;

/// Zero-ness of the symmetric coefficient, keyed by the phase pattern of an
/// ordered subset. Pairs `(i, j)`, `i < j`, are enumerated column by column
/// (`(0,1), (0,2), (1,2), (0,3), …`) so the pairs touching the last element
/// come last.
struct ZeroTable {
    compositions: Vec<Vec<u32>>,
    /// `dense[k][pattern]` for composition `k`; empty when too large.
    dense: Vec<Vec<bool>>,
}

pub(crate) struct Universe {
    pub shape: AlgebraShape,
    pub d: u32,
    pub size: usize,
    width: usize,
    entries: Vec<u8>,
    phase: Vec<u8>,
    pub pair: Vec<Bits>,
    triple: Option<Vec<u64>>,
    triple_words: usize,
    /// `zeros[m]` for subsets of size `m`.
    zeros: Vec<Option<ZeroTable>>,
}

impl Universe {
    pub fn new(shape: AlgebraShape) -> Result<Self> {
        let size = shape
            .universe_size()
            .filter(|&s| s <= MAX_UNIVERSE)
            .ok_or_else(|| {
                KummerError::Capacity(format!("{shape} has more than {MAX_UNIVERSE} monomials"))
            })? as usize;
        let d = shape.degree();
        let width = shape.width();
        let mut entries = Vec::with_capacity(size * width);
        for i in 0..size {
            entries.extend_from_slice(shape.from_packed_index(i as u64).entries());
        }
        let mut phase = vec![0u8; size * size];
        for a in 0..size {
            for b in 0..size {
                phase[a * size + b] = phase_unchecked(
                    d,
                    &entries[a * width..(a + 1) * width],
                    &entries[b * width..(b + 1) * width],
                ) as u8;
            }
        }
        let zeros = (0..=d.min(8) as usize)
            .map(|m| (m >= 2).then(|| ZeroTable::new(d, m)))
            .collect();
        let mut u = Universe {
            shape,
            d,
            size,
            width,
            entries,
            phase,
            pair: Vec::new(),
            triple: None,
            triple_words: size.div_ceil(64),
            zeros,
        };
        u.pair = (0..size)
            .map(|a| {
                let mut bits = Bits::empty(size);
                if a != 0 {
                    for b in 1..size {
                        if b != a && u.extension_ok(&[], a, b) {
                            bits.insert(b);
                        }
                    }
                }
                bits
            })
            .collect();
        if d >= 3 && size <= MAX_TRIPLE_TABLE {
            u.build_triple_table();
        }
        Ok(u)
    }

    fn build_triple_table(&mut self) {
        let words = self.triple_words;
        let mut table = vec![0u64; self.size * self.size * words];
        for a in 1..self.size {
            for b in self.pair[a].iter().filter(|&b| b > a) {
                let mut row = self.pair[a].clone();
                row.and_assign(&self.pair[b]);
                for c in row.iter() {
                    if self.extension_ok(&[a], b, c) {
                        for (x, y) in [(a, b), (b, a)] {
                            table[(x * self.size + y) * words + (c >> 6)] |= 1 << (c & 63);
                        }
                    }
                }
            }
        }
        self.triple = Some(table);
    }

    pub fn vector(&self, i: usize) -> ExponentVector {
        ExponentVector::new(
            self.shape,
            self.entries[i * self.width..(i + 1) * self.width].to_vec(),
        )
        .expect("universe entries are valid")
    }

    pub fn index_of(&self, v: &ExponentVector) -> usize {
        self.shape.packed_index(v) as usize
    }

    #[inline]
    pub fn phase(&self, a: usize, b: usize) -> u32 {
        self.phase[a * self.size + b] as u32
    }

    fn exponent_vanishes(&self, elems: &[usize], mults: &[u32]) -> bool {
        (0..self.width).all(|k| {
            let s: u32 = elems
                .iter()
                .zip(mults)
                .map(|(&e, &m)| m * self.entries[e * self.width + k] as u32)
                .sum();
            s.is_multiple_of(self.d)
        })
    }

    /// Pattern index of the pairs among `elems[..m-1]`, without the last element.
    fn base_pattern(&self, elems: &[usize]) -> u64 {
        let d = self.d as u64;
        let mut idx = 0u64;
        let mut scale = 1u64;
        for j in 1..elems.len() - 1 {
            for i in 0..j {
                idx += self.phase(elems[i], elems[j]) as u64 * scale;
                scale *= d;
            }
        }
        idx
    }

    fn coefficient_is_zero(&self, elems: &[usize], comp: usize, pattern: u64) -> bool {
        let m = elems.len();
        let table = self.zeros[m].as_ref().expect("zero table for subset size");
        if let Some(&z) = table.dense[comp].get(pattern as usize) {
            return z;
        }
        let mut phases = vec![0u32; m * m];
        for i in 0..m {
            for j in 0..m {
                phases[i * m + j] = self.phase(elems[i], elems[j]);
            }
        }
        let counts = arrangement_phase_counts(self.d, &phases, &table.compositions[comp]);
        CyclotomicInteger::from_power_counts(self.d, &counts).is_zero()
    }

    /// Whether every multiset on exactly `T ∪ {z, c}` satisfies the Kummer
    /// condition. Assumes `T`, `z`, `c` distinct.
    pub fn extension_ok(&self, tail: &[usize], z: usize, c: usize) -> bool {
        let mut elems: Vec<usize> = tail.to_vec();
        elems.push(z);
        elems.push(c);
        let m = elems.len();
        if m > self.d as usize {
            return true;
        }
        let d = self.d as u64;
        let base = self.base_pattern(&elems);
        let mut scale = d.pow(((m - 1) * (m - 2) / 2) as u32);
        let mut pattern = base;
        for i in 0..m - 1 {
            pattern += self.phase(elems[i], c) as u64 * scale;
            scale *= d;
        }
        let table = self.zeros[m].as_ref().expect("zero table for subset size");
        for (k, comp) in table.compositions.iter().enumerate() {
            if !self.coefficient_is_zero(&elems, k, pattern)
                && !self.exponent_vanishes(&elems, comp)
            {
                return false;
            }
        }
        true
    }

    /// `cand ∩ pair[z]` filtered so that each survivor `c` keeps
    /// `chosen ∪ {z, c}` Kummer, given `chosen ∪ {z}` and `chosen ∪ {c}` are.
    pub fn filter_extension(&self, chosen: &[usize], z: usize, cand: &Bits) -> Bits {
        let mut out = cand.clone();
        out.and_assign(&self.pair[z]);
        out.remove(z);
        if self.d < 3 || out.is_empty() {
            return out;
        }
        match &self.triple {
            Some(table) => {
                let w = self.triple_words;
                for &s in chosen {
                    let start = (s * self.size + z) * w;
                    for (k, word) in table[start..start + w].iter().enumerate() {
                        out.words_mut()[k] &= word;
                    }
                }
            }
            None => {
                let drop: Vec<usize> = out
                    .iter()
                    .filter(|&c| chosen.iter().any(|&s| !self.extension_ok(&[s], z, c)))
                    .collect();
                for c in drop {
                    out.remove(c);
                }
            }
        }
        let max_tail = (self.d as usize - 2).min(chosen.len());
        for t in 2..=max_tail {
            if out.is_empty() {
                break;
            }
            for_each_subset(chosen, t, |tail| {
                let drop: Vec<usize> = out
                    .iter()
                    .filter(|&c| !self.extension_ok(tail, z, c))
                    .collect();
                for c in drop {
                    out.remove(c);
                }
            });
        }
        out
    }
}

impl ZeroTable {
    fn new(d: u32, m: usize) -> Self {
        let compositions = compositions(d, m as u32);
        let pairs = (m * (m - 1) / 2) as u32;
        let dense_len = (d as u64)
            .checked_pow(pairs)
            .filter(|&n| n <= MAX_DENSE_PATTERNS);
        let dense = compositions
            .iter()
            .map(|comp| match dense_len {
                Some(len) => (0..len)
                    .map(|p| pattern_coefficient_zero(d, m, p, comp))
                    .collect(),
                None => Vec::new(),
            })
            .collect();
        ZeroTable {
            compositions,
            dense,
        }
    }
}

fn pattern_coefficient_zero(d: u32, m: usize, mut pattern: u64, comp: &[u32]) -> bool {
    let mut phases = vec![0u32; m * m];
    for j in 1..m {
        for i in 0..j {
            let t = (pattern % d as u64) as u32;
            pattern /= d as u64;
            phases[i * m + j] = t;
            phases[j * m + i] = (d - t) % d;
        }
    }
    let counts = arrangement_phase_counts(d, &phases, comp);
    CyclotomicInteger::from_power_counts(d, &counts).is_zero()
}

/// Calls `f` on every `k`-subset of `items` (as a slice, in order).
pub(crate) fn for_each_subset(items: &[usize], k: usize, mut f: impl FnMut(&[usize])) {
    fn rec(
        items: &[usize],
        k: usize,
        start: usize,
        cur: &mut Vec<usize>,
        f: &mut dyn FnMut(&[usize]),
    ) {
        if cur.len() == k {
            f(cur);
            return;
        }
        for i in start..items.len() {
            if items.len() - i < k - cur.len() {
                break;
            }
            cur.push(items[i]);
            rec(items, k, i + 1, cur, f);
            cur.pop();
        }
    }
    rec(items, k, 0, &mut Vec::with_capacity(k), &mut f);
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kummer::is_kummer_set;

    #[test]
    fn pair_table_matches_predicate() {
        for (d, n) in [(2, 2), (3, 1), (4, 1)] {
            let s = AlgebraShape::new(d, n).unwrap();
            let u = Universe::new(s).unwrap();
            for a in 1..u.size {
                for b in 1..u.size {
                    if a == b {
                        continue;
                    }
                    let want = is_kummer_set(s, &[u.vector(a), u.vector(b)])
                        .unwrap()
                        .is_ok();
                    assert_eq!(u.pair[a].contains(b), want, "d={d} a={a} b={b}");
                }
            }
        }
    }

    #[test]
    fn filter_matches_predicate() {
        let s = AlgebraShape::new(4, 1).unwrap();
        let u = Universe::new(s).unwrap();
        let chosen = [u.index_of(&ExponentVector::new(s, vec![1, 0]).unwrap())];
        let z = u.index_of(&ExponentVector::new(s, vec![0, 1]).unwrap());
        let mut cand = u.pair[chosen[0]].clone();
        cand.remove(z);
        let got = u.filter_extension(&chosen, z, &cand);
        for c in 1..u.size {
            if c == z || c == chosen[0] {
                continue;
            }
            let want = is_kummer_set(s, &[u.vector(chosen[0]), u.vector(z), u.vector(c)])
                .unwrap()
                .is_ok();
            assert_eq!(got.contains(c), want, "c={}", u.vector(c));
        }
    }

    /// The incremental filter must agree with the full predicate on random
    /// Kummer sets grown greedily.
    #[test]
    fn filter_agrees_with_full_predicate_on_random_sets() {
        use rand::seq::SliceRandom;
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for (d, n, trials) in [(4, 2, 30), (3, 2, 30), (4, 1, 20)] {
            let s = AlgebraShape::new(d, n).unwrap();
            let u = Universe::new(s).unwrap();
            for _ in 0..trials {
                let mut order: Vec<usize> = (1..u.size).collect();
                order.shuffle(&mut rng);
                let want = rng.gen_range(1..=(d * n) as usize);
                let mut chosen: Vec<usize> = Vec::new();
                let kummer = |idx: &[usize]| {
                    let vs: Vec<_> = idx.iter().map(|&i| u.vector(i)).collect();
                    is_kummer_set(s, &vs).unwrap().is_ok()
                };
                for &c in &order {
                    if chosen.len() == want {
                        break;
                    }
                    chosen.push(c);
                    if !kummer(&chosen) {
                        chosen.pop();
                    }
                }
                let Some(&z) = order.iter().find(|&&z| {
                    !chosen.contains(&z) && kummer(&[chosen.clone(), vec![z]].concat())
                }) else {
                    continue;
                };
                let mut cand = Bits::empty(u.size);
                for c in 1..u.size {
                    if c != z && !chosen.contains(&c) && kummer(&[chosen.clone(), vec![c]].concat())
                    {
                        cand.insert(c);
                    }
                }
                let got = u.filter_extension(&chosen, z, &cand);
                for c in cand.iter() {
                    let full = kummer(&[chosen.clone(), vec![z, c]].concat());
                    assert_eq!(
                        got.contains(c),
                        full,
                        "d={d} n={n} S={chosen:?} z={z} c={c}"
                    );
                }
            }
        }
    }

    #[test]
    fn oversized_universe_rejected() {
        let s = AlgebraShape::new(5, 3).unwrap();
        assert!(matches!(Universe::new(s), Err(KummerError::Capacity(_))));
    }
}
