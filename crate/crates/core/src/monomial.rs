//! Monomials of a tensor product of symbol algebras, tracked up to scalars.
//!
//! A monomial `x_1^{a_1} y_1^{b_1} ⋯ x_n^{a_n} y_n^{b_n}` is stored as its
//! exponent vector `(a_1, b_1, …, a_n, b_n)` with entries in `Z/d`. Two
//! monomials `u`, `v` satisfy `uv = ρ^t vu` where `t` is the symplectic phase
//! `Σ_k (a_k b'_k − b_k a'_k) mod d`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{KummerError, Result};

/// Degree `d` and number of tensor factors `n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AlgebraShape {
    degree: u32,
    factors: u32,
}

impl AlgebraShape {
    pub fn new(degree: u32, factors: u32) -> Result<Self> {
        if !(2..=255).contains(&degree) {
            return Err(KummerError::Shape(format!(
                "degree must lie in [2, 255], got {degree}"
            )));
        }
        if factors == 0 {
            return Err(KummerError::Shape(
                "at least one tensor factor is required".into(),
            ));
        }
        Ok(AlgebraShape { degree, factors })
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn factors(&self) -> u32 {
        self.factors
    }

    /// Length of an exponent vector, `2n`.
    pub fn width(&self) -> usize {
        2 * self.factors as usize
    }

    /// Number of monomials up to scalar, `d^{2n}`, if it fits in a `u64`.
    pub fn universe_size(&self) -> Option<u64> {
        (self.degree as u64).checked_pow(self.width() as u32)
    }

    pub fn check(&self, v: &ExponentVector) -> Result<()> {
        if v.entries.len() != self.width() {
            return Err(KummerError::Shape(format!(
                "exponent vector of length {} for n={} (expected {})",
                v.entries.len(),
                self.factors,
                self.width()
            )));
        }
        if let Some(&bad) = v.entries.iter().find(|&&e| e as u32 >= self.degree) {
            return Err(KummerError::Shape(format!(
                "entry {bad} out of range for d={}",
                self.degree
            )));
        }
        Ok(())
    }

    pub fn zero(&self) -> ExponentVector {
        ExponentVector {
            entries: vec![0; self.width()],
        }
    }

    /// Exponent vector of `x_k` (1-based factor index).
    pub fn x(&self, k: usize) -> ExponentVector {
        let mut v = self.zero();
        v.entries[2 * (k - 1)] = 1;
        v
    }

    /// Exponent vector of `y_k` (1-based factor index).
    pub fn y(&self, k: usize) -> ExponentVector {
        let mut v = self.zero();
        v.entries[2 * (k - 1) + 1] = 1;
        v
    }

    pub fn add(&self, u: &ExponentVector, v: &ExponentVector) -> ExponentVector {
        let d = self.degree;
        let entries = u
            .entries
            .iter()
            .zip(&v.entries)
            .map(|(&a, &b)| ((a as u32 + b as u32) % d) as u8)
            .collect();
        ExponentVector { entries }
    }

    pub fn neg(&self, u: &ExponentVector) -> ExponentVector {
        let d = self.degree;
        let entries = u
            .entries
            .iter()
            .map(|&a| ((d - a as u32) % d) as u8)
            .collect();
        ExponentVector { entries }
    }

    pub fn sub(&self, u: &ExponentVector, v: &ExponentVector) -> ExponentVector {
        self.add(u, &self.neg(v))
    }

    /// `k·u` for any integer `k`.
    pub fn scale(&self, k: i64, u: &ExponentVector) -> ExponentVector {
        let d = self.degree as i64;
        let k = k.rem_euclid(d);
        let entries = u
            .entries
            .iter()
            .map(|&a| ((k * a as i64) % d) as u8)
            .collect();
        ExponentVector { entries }
    }

    /// Symplectic transvection `u ↦ u + phase(u, w)·w`; preserves all phases.
    pub fn transvect(&self, w: &ExponentVector, u: &ExponentVector) -> ExponentVector {
        let t = phase_unchecked(self.degree, u.entries(), w.entries());
        self.add(u, &self.scale(t as i64, w))
    }

    /// Base-`d` little-endian index, `Σ_i entries[i]·d^i`. This is the
    /// canonical candidate order used throughout the search.
    pub fn packed_index(&self, v: &ExponentVector) -> u64 {
        v.entries
            .iter()
            .rev()
            .fold(0u64, |acc, &e| acc * self.degree as u64 + e as u64)
    }

    pub fn from_packed_index(&self, mut index: u64) -> ExponentVector {
        let d = self.degree as u64;
        let entries = (0..self.width())
            .map(|_| {
                let e = (index % d) as u8;
                index /= d;
                e
            })
            .collect();
        ExponentVector { entries }
    }

    /// All nonzero exponent vectors in packed-index order.
    pub fn nonzero_vectors(&self) -> Result<Vec<ExponentVector>> {
        let size = self
            .universe_size()
            .filter(|&s| s <= 1 << 24)
            .ok_or_else(|| KummerError::Capacity(format!("d^{{2n}} too large for {self}")))?;
        Ok((1..size).map(|i| self.from_packed_index(i)).collect())
    }
}

impl fmt::Display for AlgebraShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(d={}, n={})", self.degree, self.factors)
    }
}

/// A monomial up to scalar: `2n` residues mod `d`, ordered `a_1, b_1, …, a_n, b_n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ExponentVector {
    entries: Vec<u8>,
}

impl ExponentVector {
    pub fn new(shape: AlgebraShape, entries: Vec<u8>) -> Result<Self> {
        let v = ExponentVector { entries };
        shape.check(&v)?;
        Ok(v)
    }

    /// Builds a vector from arbitrary integers, reducing each mod `d`.
    pub fn from_ints(shape: AlgebraShape, entries: &[i64]) -> Result<Self> {
        let d = shape.degree() as i64;
        let v = ExponentVector {
            entries: entries.iter().map(|&e| e.rem_euclid(d) as u8).collect(),
        };
        shape.check(&v)?;
        Ok(v)
    }

    pub fn entries(&self) -> &[u8] {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|&e| e == 0)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

impl fmt::Display for ExponentVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, e) in self.entries.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, ")")
    }
}

/// The residue `t ∈ [0, d)` with `uv = ρ^t vu`.
pub fn symplectic_phase(
    shape: AlgebraShape,
    u: &ExponentVector,
    v: &ExponentVector,
) -> Result<u32> {
    shape.check(u)?;
    shape.check(v)?;
    Ok(phase_unchecked(shape.degree(), u.entries(), v.entries()))
}

pub(crate) fn phase_unchecked(d: u32, u: &[u8], v: &[u8]) -> u32 {
    let d = d as i64;
    let mut t = 0i64;
    for (uu, vv) in u.chunks_exact(2).zip(v.chunks_exact(2)) {
        t += uu[0] as i64 * vv[1] as i64 - uu[1] as i64 * vv[0] as i64;
    }
    t.rem_euclid(d) as u32
}

/// Exponent of `v_1^{d_1} ⋯ v_m^{d_m}`, reduced mod `d`. The product is a
/// scalar iff the result is the zero vector.
pub fn product_exponent(
    shape: AlgebraShape,
    items: &[(ExponentVector, u32)],
) -> Result<ExponentVector> {
    let mut acc = shape.zero();
    for (v, mult) in items {
        shape.check(v)?;
        acc = shape.add(&acc, &shape.scale(*mult as i64, v));
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ev(shape: AlgebraShape, e: &[u8]) -> ExponentVector {
        ExponentVector::new(shape, e.to_vec()).unwrap()
    }

    #[test]
    fn phase_of_generators() {
        let s = AlgebraShape::new(4, 1).unwrap();
        assert_eq!(
            symplectic_phase(s, &ev(s, &[1, 0]), &ev(s, &[0, 1])).unwrap(),
            1
        );
        assert_eq!(
            symplectic_phase(s, &ev(s, &[0, 1]), &ev(s, &[1, 0])).unwrap(),
            3
        );
        assert_eq!(
            symplectic_phase(s, &ev(s, &[2, 3]), &ev(s, &[2, 3])).unwrap(),
            0
        );

        let s2 = AlgebraShape::new(4, 2).unwrap();
        assert_eq!(symplectic_phase(s2, &s2.x(1), &s2.y(2)).unwrap(), 0);
        assert_eq!(symplectic_phase(s2, &s2.x(2), &s2.y(2)).unwrap(), 1);
    }

    #[test]
    fn phase_rejects_length_mismatch() {
        let s = AlgebraShape::new(4, 2).unwrap();
        let short = ExponentVector {
            entries: vec![1, 0],
        };
        assert!(matches!(
            symplectic_phase(s, &short, &s.x(1)),
            Err(KummerError::Shape(_))
        ));
    }

    #[test]
    fn shape_bounds() {
        assert!(AlgebraShape::new(1, 1).is_err());
        assert!(AlgebraShape::new(4, 0).is_err());
        assert!(ExponentVector::new(AlgebraShape::new(4, 1).unwrap(), vec![4, 0]).is_err());
    }

    #[test]
    fn product_exponents() {
        let s = AlgebraShape::new(4, 1).unwrap();
        let x = ev(s, &[1, 0]);
        let x3 = ev(s, &[3, 0]);
        assert_eq!(
            product_exponent(s, &[(x.clone(), 1), (x3.clone(), 3)]).unwrap(),
            ev(s, &[2, 0])
        );
        assert!(product_exponent(s, &[(x, 2), (x3, 2)]).unwrap().is_zero());
        assert!(product_exponent(s, &[]).unwrap().is_zero());
    }

    #[test]
    fn transvections_preserve_phase() {
        let s = AlgebraShape::new(4, 2).unwrap();
        let all = s.nonzero_vectors().unwrap();
        let w = ev(s, &[1, 2, 3, 1]);
        for u in all.iter().step_by(7) {
            for v in all.iter().step_by(11) {
                let (tu, tv) = (s.transvect(&w, u), s.transvect(&w, v));
                assert_eq!(
                    symplectic_phase(s, &tu, &tv).unwrap(),
                    symplectic_phase(s, u, v).unwrap()
                );
            }
        }
    }

    #[test]
    fn packed_index_round_trip() {
        let s = AlgebraShape::new(3, 2).unwrap();
        for i in 0..81 {
            assert_eq!(s.packed_index(&s.from_packed_index(i)), i);
        }
        let s4 = AlgebraShape::new(4, 1).unwrap();
        assert_eq!(s4.packed_index(&ev(s4, &[1, 0])), 1);
        assert_eq!(s4.packed_index(&ev(s4, &[0, 1])), 4);
    }
}
