#![allow(dead_code)]

use std::collections::HashSet;

use rand::seq::SliceRandom;
use rand::Rng;

use kummer::cyclotomic::CyclotomicInteger;
use kummer::kummer::extends_kummer;
use kummer::monomial::{AlgebraShape, ExponentVector};

pub fn shape(d: u32, n: u32) -> AlgebraShape {
    AlgebraShape::new(d, n).unwrap()
}

pub fn random_vector(rng: &mut impl Rng, s: AlgebraShape) -> ExponentVector {
    let e: Vec<i64> = (0..s.width())
        .map(|_| rng.gen_range(0..s.degree() as i64))
        .collect();
    ExponentVector::from_ints(s, &e).unwrap()
}

pub fn random_nonzero(rng: &mut impl Rng, s: AlgebraShape) -> ExponentVector {
    loop {
        let v = random_vector(rng, s);
        if !v.is_zero() {
            return v;
        }
    }
}

/// A random phase-preserving automorphism, as a list of transvection
/// directions applied in order.
pub struct SymplecticMap {
    shape: AlgebraShape,
    directions: Vec<ExponentVector>,
}

impl SymplecticMap {
    pub fn random(rng: &mut impl Rng, s: AlgebraShape, steps: usize) -> Self {
        SymplecticMap {
            shape: s,
            directions: (0..steps).map(|_| random_vector(rng, s)).collect(),
        }
    }

    pub fn apply(&self, v: &ExponentVector) -> ExponentVector {
        self.directions
            .iter()
            .fold(v.clone(), |acc, w| self.shape.transvect(w, &acc))
    }
}

/// Random Kummer set grown greedily from a shuffled universe.
pub fn random_kummer_set(
    rng: &mut impl Rng,
    s: AlgebraShape,
    max_len: usize,
) -> Vec<ExponentVector> {
    let mut all = s.nonzero_vectors().unwrap();
    all.shuffle(rng);
    let mut set: Vec<ExponentVector> = Vec::new();
    for v in all {
        if set.len() >= max_len {
            break;
        }
        if extends_kummer(s, &set, &v).unwrap().is_ok() {
            set.push(v);
        }
    }
    set
}

/// `[n choose k]_q` as an integer polynomial in `q`, from the recurrence
/// `[n, k] = [n−1, k−1] + q^k [n−1, k]`.
pub fn q_binomial(n: usize, k: usize) -> Vec<i64> {
    let mut table: Vec<Vec<Vec<i64>>> = vec![vec![vec![]; n + 1]; n + 1];
    for m in 0..=n {
        for j in 0..=m {
            table[m][j] = if j == 0 || j == m {
                vec![1]
            } else {
                let a = &table[m - 1][j - 1];
                let b = &table[m - 1][j];
                let mut out = vec![0i64; a.len().max(b.len() + j)];
                for (i, c) in a.iter().enumerate() {
                    out[i] += c;
                }
                for (i, c) in b.iter().enumerate() {
                    out[i + j] += c;
                }
                out
            };
        }
    }
    table[n][k].clone()
}

/// `[d choose k]_q` evaluated at `q = ζ_d^{exp}`.
pub fn q_binomial_at_root(d: u32, k: usize, exp: i64) -> CyclotomicInteger {
    let poly = q_binomial(d as usize, k);
    let mut counts = vec![0i64; d as usize];
    for (j, c) in poly.iter().enumerate() {
        counts[(exp * j as i64).rem_euclid(d as i64) as usize] += c;
    }
    CyclotomicInteger::from_power_counts(d, &counts)
}

/// Subgroup of `(Z/d)^{2n}` generated by `gens`.
pub fn generated_subgroup(s: AlgebraShape, gens: &[ExponentVector]) -> HashSet<ExponentVector> {
    let mut seen: HashSet<ExponentVector> = HashSet::from([s.zero()]);
    let mut frontier = vec![s.zero()];
    while let Some(v) = frontier.pop() {
        for g in gens {
            let w = s.add(&v, g);
            if seen.insert(w.clone()) {
                frontier.push(w);
            }
        }
    }
    seen
}

/// Antisymmetric phase matrix from `(i, j, phase)` entries (`i → j` for 1).
pub fn phase_matrix(size: usize, d: u32, entries: &[(usize, usize, u32)]) -> Vec<Vec<u32>> {
    let mut m = vec![vec![0u32; size]; size];
    for &(i, j, t) in entries {
        m[i][j] = t % d;
        m[j][i] = (d - t % d) % d;
    }
    m
}

/// Arrow chain `v_1 → ⋯ → v_len` followed by the partner `w`.
pub fn partner_hypothesis(n: usize, r: usize) -> Vec<Vec<u32>> {
    let len = 2 * n + 1;
    let mut entries = Vec::new();
    for a in 0..len {
        for b in a + 1..len {
            entries.push((a, b, 1));
        }
        let k = a + 1;
        if k < r {
            entries.push((a, len, 1));
        } else if k == r {
            entries.push((a, len, 2));
        } else {
            entries.push((len, a, 1));
        }
    }
    phase_matrix(len + 1, 4, &entries)
}

pub fn chain_hypothesis(len: usize) -> Vec<Vec<u32>> {
    let mut entries = Vec::new();
    for a in 0..len {
        for b in a + 1..len {
            entries.push((a, b, 1));
        }
    }
    phase_matrix(len, 4, &entries)
}
