//! Exact arithmetic in `Z[ζ_d]`.
//!
//! Elements are kept in the power basis `1, ζ, …, ζ^{φ(d)−1}` after reduction
//! modulo the cyclotomic polynomial `Φ_d`, so equality and zero-testing are
//! plain coefficient comparisons.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use crate::error::{KummerError, Result};

/// Integer polynomial, lowest degree first.
pub type IntPoly = Vec<i64>;

/// `Φ_d`, computed as `(x^d − 1) / ∏_{e | d, e < d} Φ_e` by exact division.
pub fn cyclotomic_polynomial(d: u32) -> IntPoly {
    assert!(d >= 1, "cyclotomic_polynomial needs d >= 1");
    cached_cyclotomic(d).as_ref().clone()
}

fn cached_cyclotomic(d: u32) -> Arc<IntPoly> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Arc<IntPoly>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(p) = cache.lock().unwrap().get(&d) {
        return p.clone();
    }
    let mut num = vec![0i64; d as usize + 1];
    num[0] = -1;
    num[d as usize] = 1;
    for e in (1..d).filter(|e| d.is_multiple_of(*e)) {
        let (q, r) = divrem_monic(&num, &cached_cyclotomic(e));
        debug_assert!(r.iter().all(|&c| c == 0));
        num = q;
    }
    let p = Arc::new(num);
    cache.lock().unwrap().insert(d, p.clone());
    p
}

/// Quotient and remainder of `a` by a monic polynomial `m`.
pub fn divrem_monic(a: &[i64], m: &[i64]) -> (IntPoly, IntPoly) {
    let dm = m.len() - 1;
    debug_assert_eq!(m[dm], 1);
    let mut r = a.to_vec();
    if r.len() <= dm {
        r.resize(dm, 0);
        return (vec![0], r);
    }
    let mut q = vec![0i64; r.len() - dm];
    for i in (dm..r.len()).rev() {
        let c = r[i];
        if c == 0 {
            continue;
        }
        q[i - dm] = c;
        for (j, &mj) in m.iter().enumerate() {
            r[i - dm + j] -= c * mj;
        }
    }
    r.truncate(dm);
    (q, r)
}

pub fn poly_mul(a: &[i64], b: &[i64]) -> IntPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0i64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// An element of `Z[ζ_d]` in canonical reduced form.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CyclotomicInteger {
    d: u32,
    coeffs: Vec<i64>,
}

impl CyclotomicInteger {
    pub fn zero(d: u32) -> Self {
        let phi = cached_cyclotomic(d);
        CyclotomicInteger {
            d,
            coeffs: vec![0; phi.len() - 1],
        }
    }

    pub fn from_int(d: u32, k: i64) -> Self {
        let mut z = Self::zero(d);
        z.coeffs[0] = k;
        z
    }

    /// `ζ_d^k`, with `k` reduced mod `d`.
    pub fn root_power(d: u32, k: i64) -> Self {
        let mut counts = vec![0i64; d as usize];
        counts[k.rem_euclid(d as i64) as usize] = 1;
        Self::from_power_counts(d, &counts)
    }

    /// `Σ_t counts[t]·ζ^t`, for any length of `counts`.
    pub fn from_power_counts(d: u32, counts: &[i64]) -> Self {
        Self::from_poly(d, counts)
    }

    /// Reduces an arbitrary integer polynomial in `ζ` modulo `Φ_d`.
    pub fn from_poly(d: u32, poly: &[i64]) -> Self {
        let phi = cached_cyclotomic(d);
        let (_, r) = divrem_monic(poly, &phi);
        CyclotomicInteger { d, coeffs: r }
    }

    pub fn degree(&self) -> u32 {
        self.d
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    fn same_ring(&self, other: &Self) -> Result<()> {
        if self.d != other.d {
            return Err(KummerError::Shape(format!(
                "cannot combine elements of Z[ζ_{}] and Z[ζ_{}]",
                self.d, other.d
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_ring(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a + b)
            .collect();
        Ok(CyclotomicInteger { d: self.d, coeffs })
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.same_ring(other)?;
        Ok(Self::from_poly(
            self.d,
            &poly_mul(&self.coeffs, &other.coeffs),
        ))
    }

    pub fn neg(&self) -> Self {
        CyclotomicInteger {
            d: self.d,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl fmt::Display for CyclotomicInteger {
    /// Gaussian integers print as `a+bi`; other rings as a sum of `ζ` powers.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.d == 4 {
            let (re, im) = (self.coeffs[0], self.coeffs[1]);
            let imag = |im: i64| match im.abs() {
                1 => "i".to_string(),
                m => format!("{m}i"),
            };
            return match (re, im) {
                (_, 0) => write!(f, "{re}"),
                (0, _) => write!(f, "{}{}", if im < 0 { "-" } else { "" }, imag(im)),
                _ => write!(f, "{re}{}{}", if im < 0 { "-" } else { "+" }, imag(im)),
            };
        }
        let mut wrote = false;
        for (k, &c) in self.coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let sign = if c < 0 {
                "-"
            } else if wrote {
                "+"
            } else {
                ""
            };
            let mag = c.abs();
            let term = match (k, mag) {
                (0, _) => format!("{mag}"),
                (1, 1) => "ζ".to_string(),
                (1, _) => format!("{mag}ζ"),
                (_, 1) => format!("ζ^{k}"),
                _ => format!("{mag}ζ^{k}"),
            };
            write!(f, "{sign}{term}")?;
            wrote = true;
        }
        if !wrote {
            write!(f, "0")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_cyclotomic_polynomials() {
        assert_eq!(cyclotomic_polynomial(1), vec![-1, 1]);
        assert_eq!(cyclotomic_polynomial(2), vec![1, 1]);
        assert_eq!(cyclotomic_polynomial(3), vec![1, 1, 1]);
        assert_eq!(cyclotomic_polynomial(4), vec![1, 0, 1]);
        assert_eq!(cyclotomic_polynomial(6), vec![1, -1, 1]);
        assert_eq!(cyclotomic_polynomial(12), vec![1, 0, -1, 0, 1]);
    }

    #[test]
    fn phi_divides_x_d_minus_one() {
        for d in 1..=30u32 {
            let phi = cyclotomic_polynomial(d);
            // multiply back all Φ_e for e | d
            let mut prod = vec![1i64];
            for e in (1..=d).filter(|e| d % e == 0) {
                prod = poly_mul(&prod, &cyclotomic_polynomial(e));
            }
            let mut expected = vec![0i64; d as usize + 1];
            expected[0] = -1;
            expected[d as usize] = 1;
            assert_eq!(prod, expected, "d={d}");
            assert_eq!(*phi.last().unwrap(), 1);
        }
    }

    #[test]
    fn root_sums() {
        let i = CyclotomicInteger::root_power(4, 1);
        let minus_i = CyclotomicInteger::root_power(4, 3);
        assert!(i.add(&minus_i).unwrap().is_zero());
        assert_eq!(CyclotomicInteger::root_power(4, 2).coeffs(), &[-1, 0]);

        let s = (0..3)
            .map(|k| CyclotomicInteger::root_power(3, k))
            .reduce(|a, b| a.add(&b).unwrap())
            .unwrap();
        assert!(s.is_zero());
        assert_eq!(CyclotomicInteger::root_power(2, 1).coeffs(), &[-1]);
    }

    #[test]
    fn mixing_rings_is_an_error() {
        let a = CyclotomicInteger::root_power(4, 1);
        let b = CyclotomicInteger::root_power(3, 1);
        assert!(matches!(a.add(&b), Err(KummerError::Shape(_))));
        assert!(matches!(a.mul(&b), Err(KummerError::Shape(_))));
    }

    #[test]
    fn root_powers_multiply_by_adding_exponents() {
        for d in 2..=12u32 {
            for a in -3..(d as i64 + 3) {
                for b in 0..d as i64 {
                    let lhs = CyclotomicInteger::root_power(d, a)
                        .mul(&CyclotomicInteger::root_power(d, b))
                        .unwrap();
                    assert_eq!(lhs, CyclotomicInteger::root_power(d, a + b));
                }
            }
        }
    }

    #[test]
    fn gaussian_rendering() {
        let g = |re, im| CyclotomicInteger::from_power_counts(4, &[re, im]);
        assert_eq!(g(4, -4).to_string(), "4-4i");
        assert_eq!(g(-4, -4).to_string(), "-4-4i");
        assert_eq!(g(0, -4).to_string(), "-4i");
        assert_eq!(g(2, 0).to_string(), "2");
        assert_eq!(g(0, 0).to_string(), "0");
        assert_eq!(g(1, 1).to_string(), "1+i");
    }
}
