//! Orbits of nonzero monomials under symplectic linear maps of `(Z/d)^{2n}`.
//!
//! The Kummer predicate depends only on pairwise phases and on whether
//! integer combinations vanish, so any phase-preserving automorphism maps
//! Kummer sets to Kummer sets. Orbits are computed by closure under the
//! transvections `u ↦ u + phase(u, w)·w` for `w` ranging over the basis
//! vectors and sums of two basis vectors; no transitivity is assumed.

use crate::error::{KummerError, Result};
use crate::monomial::{AlgebraShape, ExponentVector};

/// Orbit closure is refused beyond this many monomials.
pub const MAX_ORBIT_UNIVERSE: u64 = 1 << 20;

/// Generating transvection directions.
fn generators(shape: AlgebraShape) -> Vec<ExponentVector> {
    let w = shape.width();
    let unit = |i: usize| {
        let mut e = vec![0i64; w];
        e[i] = 1;
        e
    };
    let mut out = Vec::new();
    for i in 0..w {
        out.push(ExponentVector::from_ints(shape, &unit(i)).unwrap());
        for j in i + 1..w {
            let mut e = unit(i);
            e[j] = 1;
            out.push(ExponentVector::from_ints(shape, &e).unwrap());
        }
    }
    out
}

/// Orbits of nonzero vectors, each sorted by packed index, ordered by their
/// smallest member.
pub fn symplectic_orbits(shape: AlgebraShape) -> Result<Vec<Vec<ExponentVector>>> {
    let size = shape
        .universe_size()
        .filter(|&s| s <= MAX_ORBIT_UNIVERSE)
        .ok_or_else(|| {
            KummerError::Capacity(format!("orbit closure for {shape} exceeds memory cap"))
        })?;
    let gens = generators(shape);
    let mut orbit_of = vec![usize::MAX; size as usize];
    let mut orbits: Vec<Vec<ExponentVector>> = Vec::new();
    for start in 1..size {
        if orbit_of[start as usize] != usize::MAX {
            continue;
        }
        let id = orbits.len();
        orbit_of[start as usize] = id;
        let mut members = vec![shape.from_packed_index(start)];
        let mut head = 0;
        while head < members.len() {
            let u = members[head].clone();
            head += 1;
            for w in &gens {
                // the inverse transvection is u ↦ u − phase(u, w)·w; both generate
                for img in [shape.transvect(w, &u), shape.transvect(&shape.neg(w), &u)] {
                    let k = shape.packed_index(&img) as usize;
                    if orbit_of[k] == usize::MAX {
                        orbit_of[k] = id;
                        members.push(img);
                    }
                }
            }
        }
        members.sort_by_key(|v| shape.packed_index(v));
        orbits.push(members);
    }
    Ok(orbits)
}

/// One representative (smallest packed index) per orbit.
pub fn symmetry_representatives(shape: AlgebraShape) -> Result<Vec<ExponentVector>> {
    Ok(symplectic_orbits(shape)?
        .into_iter()
        .map(|o| o[0].clone())
        .collect())
}
