//! The standard `dn+1` Kummer basis and the explicit tensor decompositions
//! generated by arrow chains.
//!
//! Products such as `v_1 v_2^{-1} v_3` are written additively on exponent
//! vectors (`e_1 − e_2 + e_3`), scalars dropped. Each decomposition verifies
//! its own phase matrix before returning.

use crate::error::{KummerError, Result};
use crate::monomial::{symplectic_phase, AlgebraShape, ExponentVector};

/// Unrolls `V_k = F[x_k] y_k + V_{k−1} x_k` from `V_0 = F`.
///
/// Order: `x_n^j y_n` for `j = 0..d`, then the previous basis times `x_n`.
pub fn standard_basis(shape: AlgebraShape) -> Vec<ExponentVector> {
    let mut basis = vec![shape.zero()];
    for k in 1..=shape.factors() as usize {
        let xk = shape.x(k);
        let yk = shape.y(k);
        let mut next: Vec<_> = (0..shape.degree() as i64)
            .map(|j| shape.add(&shape.scale(j, &xk), &yk))
            .collect();
        next.extend(basis.iter().map(|b| shape.add(b, &xk)));
        basis = next;
    }
    basis
}

/// `Σ coeff·v` over `(coeff, vector)` terms.
fn combine(shape: AlgebraShape, terms: &[(i64, &ExponentVector)]) -> ExponentVector {
    terms.iter().fold(shape.zero(), |acc, (c, v)| {
        shape.add(&acc, &shape.scale(*c, v))
    })
}

fn phase(shape: AlgebraShape, u: &ExponentVector, v: &ExponentVector) -> u32 {
    symplectic_phase(shape, u, v).expect("vectors validated against shape")
}

/// Checks that pair `j` has phase `expected[j]` internally and that members
/// of distinct pairs commute.
fn certify_pairs(
    shape: AlgebraShape,
    pairs: &[(ExponentVector, ExponentVector)],
    expected: impl Fn(usize) -> u32,
) -> Result<()> {
    for (j, (p, q)) in pairs.iter().enumerate() {
        let t = phase(shape, p, q);
        if t != expected(j) {
            return Err(KummerError::Certificate(format!(
                "pair {} has phase {t}, expected {}",
                j + 1,
                expected(j)
            )));
        }
        for (k, (p2, q2)) in pairs.iter().enumerate().skip(j + 1) {
            for (a, b) in [(p, p2), (p, q2), (q, p2), (q, q2)] {
                let t = phase(shape, a, b);
                if t != 0 {
                    return Err(KummerError::Certificate(format!(
                        "pairs {} and {} do not commute (phase {t})",
                        j + 1,
                        k + 1
                    )));
                }
            }
        }
    }
    Ok(())
}

/// Splits an arrow chain `v_1 → ⋯ → v_{2m}` (all `phase(v_k, v_j) = 1` for
/// `k < j`) into `m` mutually commuting pairs `(p_j, q_j)` with
/// `phase(p_j, q_j) = 1`, where
/// `p_j = Σ_{k<j} (e_{2k−1} − e_{2k}) + e_{2j−1}` and `q_j` ends in `e_{2j}`.
pub fn decompose_even_chain(
    shape: AlgebraShape,
    chain: &[ExponentVector],
) -> Result<Vec<(ExponentVector, ExponentVector)>> {
    if chain.is_empty() || !chain.len().is_multiple_of(2) {
        return Err(KummerError::InvalidChain(format!(
            "chain length must be even and positive, got {}",
            chain.len()
        )));
    }
    for v in chain {
        shape.check(v)?;
    }
    for a in 0..chain.len() {
        for b in a + 1..chain.len() {
            let t = phase(shape, &chain[a], &chain[b]);
            if t != 1 {
                return Err(KummerError::InvalidChain(format!(
                    "phase(v_{}, v_{}) = {t}, expected 1",
                    a + 1,
                    b + 1
                )));
            }
        }
    }
    let e = |k: usize| &chain[k - 1];
    let m = chain.len() / 2;
    let mut pairs = Vec::with_capacity(m);
    let mut prefix = shape.zero();
    for j in 1..=m {
        pairs.push((
            shape.add(&prefix, e(2 * j - 1)),
            shape.add(&prefix, e(2 * j)),
        ));
        prefix = combine(shape, &[(1, &prefix), (1, e(2 * j - 1)), (-1, e(2 * j))]);
    }
    certify_pairs(shape, &pairs, |_| 1)?;
    Ok(pairs)
}

/// Given an arrow chain `v_1, …, v_{2n+1}` and `w` with `v_k → w` for `k < r`,
/// `v_r -- w`, `w → v_k` for `k > r` (`r` odd, 1-based), returns
/// `(μ_1, η_1), …, (μ_{n+1}, η_{n+1})`: the first `n` pairs have phase 1, the
/// last has phase 2, and distinct pairs commute. Only defined for `d = 4`.
pub fn decompose_chain_with_partner(
    shape: AlgebraShape,
    chain: &[ExponentVector],
    w: &ExponentVector,
    r: usize,
) -> Result<Vec<(ExponentVector, ExponentVector)>> {
    if shape.degree() != 4 {
        return Err(KummerError::UnsupportedDegree(shape.degree()));
    }
    if chain.len() % 2 != 1 {
        return Err(KummerError::InvalidHypothesis(format!(
            "chain length must be odd, got {}",
            chain.len()
        )));
    }
    if r % 2 != 1 || r > chain.len() {
        return Err(KummerError::InvalidHypothesis(format!(
            "r must be odd and at most {}, got {r}",
            chain.len()
        )));
    }
    for v in chain.iter().chain(std::iter::once(w)) {
        shape.check(v)?;
    }
    let fail = |what: String, t: u32, want: u32| {
        Err(KummerError::InvalidHypothesis(format!(
            "{what} = {t}, expected {want}"
        )))
    };
    for a in 0..chain.len() {
        for b in a + 1..chain.len() {
            let t = phase(shape, &chain[a], &chain[b]);
            if t != 1 {
                return fail(format!("phase(v_{}, v_{})", a + 1, b + 1), t, 1);
            }
        }
        let k = a + 1;
        let (t, want) = if k < r {
            (phase(shape, &chain[a], w), 1)
        } else if k == r {
            (phase(shape, &chain[a], w), 2)
        } else {
            (phase(shape, w, &chain[a]), 1)
        };
        if t != want {
            let what = if k > r {
                format!("phase(w, v_{k})")
            } else {
                format!("phase(v_{k}, w)")
            };
            return fail(what, t, want);
        }
    }

    let n = (chain.len() - 1) / 2;
    let ell = (r - 1) / 2;
    let e = |k: usize| &chain[k - 1];

    // Σ_{k=1}^{upto} (e_{2k−1} − e_{2k})
    let lower = |upto: usize| {
        let mut acc = shape.zero();
        for k in 1..=upto {
            acc = combine(shape, &[(1, &acc), (1, e(2 * k - 1)), (-1, e(2 * k))]);
        }
        acc
    };
    // Σ_{k=ℓ+1}^{upto} sign·(e_{2k} − e_{2k+1})
    let upper = |upto: usize, sign: i64| {
        let mut acc = shape.zero();
        for k in ell + 1..=upto {
            acc = combine(shape, &[(1, &acc), (sign, e(2 * k)), (-sign, e(2 * k + 1))]);
        }
        acc
    };

    let mut pairs = Vec::with_capacity(n + 1);
    for j in 1..=n {
        let (prefix, mu_last, eta_last) = if j <= ell {
            (lower(j - 1), e(2 * j - 1), e(2 * j))
        } else {
            (
                shape.add(&lower(ell), &upper(j - 1, 1)),
                e(2 * j),
                e(2 * j + 1),
            )
        };
        pairs.push((shape.add(&prefix, mu_last), shape.add(&prefix, eta_last)));
    }
    let prefix = shape.add(&lower(ell), &upper(n, -1));
    pairs.push((shape.add(&prefix, e(r)), shape.add(&prefix, w)));

    certify_pairs(shape, &pairs, |j| if j < n { 1 } else { 2 })?;
    Ok(pairs)
}

/// Vectors `v_1, …, v_m` in `(Z/d)^{2m}` whose phase matrix is `matrix`
/// (antisymmetric mod `d`): `v_i = x_i − Σ_{j>i} matrix[i][j]·y_j`.
pub fn realize_phase_matrix(
    d: u32,
    matrix: &[Vec<u32>],
) -> Result<(AlgebraShape, Vec<ExponentVector>)> {
    let m = matrix.len();
    let shape = AlgebraShape::new(d, m.max(1) as u32)?;
    for i in 0..m {
        for j in 0..m {
            if !(matrix[i][j] + matrix[j][i]).is_multiple_of(d) {
                return Err(KummerError::InvalidInput(format!(
                    "phase matrix not antisymmetric at ({i},{j})"
                )));
            }
        }
    }
    let vectors = (0..m)
        .map(|i| {
            let mut terms = vec![(1i64, shape.x(i + 1))];
            for (j, &t) in matrix[i].iter().enumerate().skip(i + 1) {
                terms.push((-(t as i64), shape.y(j + 1)));
            }
            terms.iter().fold(shape.zero(), |acc, (c, v)| {
                shape.add(&acc, &shape.scale(*c, v))
            })
        })
        .collect();
    Ok((shape, vectors))
}
