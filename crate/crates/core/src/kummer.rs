//! The symmetric-product coefficient and the monomial Kummer predicate.
//!
//! For monomials `v_1, …, v_m` and multiplicities `d_1 + … + d_m = d`, the
//! symmetric product `v_1^{d_1} * ⋯ * v_m^{d_m}` equals `c · v_1^{d_1} ⋯ v_m^{d_m}`
//! with `c ∈ Z[ζ_d]`. A set of monomials spans a Kummer space iff for every
//! such multiset either `c = 0` or the product exponent vanishes mod `d`.

use std::collections::HashSet;

use serde::Serialize;

use crate::cyclotomic::CyclotomicInteger;
use crate::error::{KummerError, Result};
use crate::monomial::{phase_unchecked, product_exponent, AlgebraShape, ExponentVector};

/// Outcome of a mathematical check: `Ok(())` or a witness of failure.
pub type Check<W> = std::result::Result<(), W>;

/// All tuples of `m` positive integers summing to `d`, lexicographically.
pub fn compositions(d: u32, m: u32) -> Vec<Vec<u32>> {
    fn rec(left: u32, parts: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if parts == 1 {
            cur.push(left);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        for first in 1..=left.saturating_sub(parts - 1) {
            cur.push(first);
            rec(left - first, parts - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if m == 0 || m > d {
        return out;
    }
    rec(d, m, &mut Vec::with_capacity(m as usize), &mut out);
    out
}

/// Distinct monomials with positive multiplicities summing to `d`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultisetSpec {
    elements: Vec<ExponentVector>,
    multiplicities: Vec<u32>,
}

impl MultisetSpec {
    pub fn new(
        shape: AlgebraShape,
        elements: Vec<ExponentVector>,
        multiplicities: Vec<u32>,
    ) -> Result<Self> {
        if elements.is_empty() {
            return Err(KummerError::InvalidInput("empty multiset".into()));
        }
        if elements.len() != multiplicities.len() {
            return Err(KummerError::InvalidInput(format!(
                "{} elements but {} multiplicities",
                elements.len(),
                multiplicities.len()
            )));
        }
        if multiplicities.contains(&0) {
            return Err(KummerError::InvalidInput(
                "multiplicities must be positive".into(),
            ));
        }
        let total: u32 = multiplicities.iter().sum();
        if total != shape.degree() {
            return Err(KummerError::InvalidInput(format!(
                "multiplicities sum to {total}, expected d={}",
                shape.degree()
            )));
        }
        for v in &elements {
            shape.check(v)?;
        }
        let distinct: HashSet<_> = elements.iter().collect();
        if distinct.len() != elements.len() {
            return Err(KummerError::InvalidInput(
                "multiset elements must be distinct".into(),
            ));
        }
        Ok(MultisetSpec {
            elements,
            multiplicities,
        })
    }

    pub fn elements(&self) -> &[ExponentVector] {
        &self.elements
    }

    pub fn multiplicities(&self) -> &[u32] {
        &self.multiplicities
    }

    fn items(&self) -> Vec<(ExponentVector, u32)> {
        self.elements
            .iter()
            .cloned()
            .zip(self.multiplicities.iter().copied())
            .collect()
    }
}

/// Counts of arrangements by total phase: `out[t]` is the number of distinct
/// words whose reordering into listing order picks up `ρ^t`.
///
/// `phases` is the row-major `m × m` matrix of pairwise phases.
pub(crate) fn arrangement_phase_counts(d: u32, phases: &[u32], mults: &[u32]) -> Vec<i64> {
    let m = mults.len();
    let mut remaining = mults.to_vec();
    let mut placed = vec![0u32; m];
    let mut counts = vec![0i64; d as usize];
    let total: u32 = mults.iter().sum();

    #[allow(clippy::too_many_arguments)]
    fn rec(
        d: u32,
        m: usize,
        phases: &[u32],
        left: u32,
        acc: u32,
        remaining: &mut [u32],
        placed: &mut [u32],
        counts: &mut [i64],
    ) {
        if left == 0 {
            counts[acc as usize] += 1;
            return;
        }
        for i in 0..m {
            if remaining[i] == 0 {
                continue;
            }
            // every earlier letter with a larger index is out of order w.r.t. i
            let mut add = 0u32;
            for j in (i + 1)..m {
                add += placed[j] * phases[j * m + i];
            }
            remaining[i] -= 1;
            placed[i] += 1;
            rec(
                d,
                m,
                phases,
                left - 1,
                (acc + add) % d,
                remaining,
                placed,
                counts,
            );
            placed[i] -= 1;
            remaining[i] += 1;
        }
    }
    rec(
        d,
        m,
        phases,
        total,
        0,
        &mut remaining,
        &mut placed,
        &mut counts,
    );
    counts
}

pub(crate) fn coefficient_from_phases(d: u32, phases: &[u32], mults: &[u32]) -> CyclotomicInteger {
    CyclotomicInteger::from_power_counts(d, &arrangement_phase_counts(d, phases, mults))
}

fn phase_matrix(shape: AlgebraShape, elements: &[ExponentVector]) -> Vec<u32> {
    let m = elements.len();
    let mut out = vec![0u32; m * m];
    for i in 0..m {
        for j in 0..m {
            out[i * m + j] =
                phase_unchecked(shape.degree(), elements[i].entries(), elements[j].entries());
        }
    }
    out
}

/// `c` in `v_1^{d_1} * ⋯ * v_m^{d_m} = c · v_1^{d_1} ⋯ v_m^{d_m}`.
pub fn symmetric_coefficient(
    shape: AlgebraShape,
    spec: &MultisetSpec,
) -> Result<CyclotomicInteger> {
    for v in spec.elements() {
        shape.check(v)?;
    }
    let total: u32 = spec.multiplicities().iter().sum();
    if total != shape.degree() {
        return Err(KummerError::InvalidInput(format!(
            "multiplicities sum to {total}, expected d={}",
            shape.degree()
        )));
    }
    let phases = phase_matrix(shape, spec.elements());
    Ok(coefficient_from_phases(
        shape.degree(),
        &phases,
        spec.multiplicities(),
    ))
}

/// True iff `c = 0` or the product monomial is a scalar.
pub fn multiset_condition_holds(shape: AlgebraShape, spec: &MultisetSpec) -> Result<bool> {
    Ok(evaluate(shape, spec)?.is_none())
}

fn evaluate(shape: AlgebraShape, spec: &MultisetSpec) -> Result<Option<KummerViolation>> {
    let exponent = product_exponent(shape, &spec.items())?;
    if exponent.is_zero() {
        return Ok(None);
    }
    let coefficient = symmetric_coefficient(shape, spec)?;
    if coefficient.is_zero() {
        return Ok(None);
    }
    Ok(Some(KummerViolation {
        subset: spec.elements.clone(),
        multiplicities: spec.multiplicities.clone(),
        coefficient,
        exponent,
    }))
}

/// A multiset whose symmetric product is not a scalar.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KummerViolation {
    pub subset: Vec<ExponentVector>,
    pub multiplicities: Vec<u32>,
    pub coefficient: CyclotomicInteger,
    pub exponent: ExponentVector,
}

impl KummerViolation {
    /// Recomputes `c` and the exponent and confirms both are nonzero and
    /// match the stored values.
    pub fn verify(&self, shape: AlgebraShape) -> Result<bool> {
        let spec = MultisetSpec::new(shape, self.subset.clone(), self.multiplicities.clone())?;
        let c = symmetric_coefficient(shape, &spec)?;
        let e = product_exponent(shape, &spec.items())?;
        Ok(!c.is_zero() && !e.is_zero() && c == self.coefficient && e == self.exponent)
    }
}

/// JSON form of a violation: integer arrays only.
#[derive(Debug, Clone, Serialize)]
pub struct ViolationRecord {
    pub subset: Vec<Vec<u8>>,
    pub multiplicities: Vec<u32>,
    pub coefficient: Vec<i64>,
    pub exponent: Vec<u8>,
}

impl From<&KummerViolation> for ViolationRecord {
    fn from(v: &KummerViolation) -> Self {
        ViolationRecord {
            subset: v.subset.iter().map(|e| e.entries().to_vec()).collect(),
            multiplicities: v.multiplicities.clone(),
            coefficient: v.coefficient.coeffs().to_vec(),
            exponent: v.exponent.entries().to_vec(),
        }
    }
}

fn validate_basis(shape: AlgebraShape, basis: &[ExponentVector]) -> Result<()> {
    let mut seen = HashSet::new();
    for v in basis {
        shape.check(v)?;
        if v.is_zero() {
            return Err(KummerError::InvalidInput(format!(
                "scalar monomial {v} in basis"
            )));
        }
        if !seen.insert(v) {
            return Err(KummerError::InvalidInput(format!("duplicate monomial {v}")));
        }
    }
    Ok(())
}

/// Calls `f` on every `k`-subset of `0..n` as sorted indices, lexicographically.
/// Stops early when `f` returns `Some`.
fn for_each_subset<T>(n: usize, k: usize, mut f: impl FnMut(&[usize]) -> Option<T>) -> Option<T> {
    if k > n {
        return None;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        if let Some(t) = f(&idx) {
            return Some(t);
        }
        let mut i = k;
        loop {
            if i == 0 {
                return None;
            }
            i -= 1;
            if idx[i] != i + n - k {
                break;
            }
            if i == 0 {
                return None;
            }
        }
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

fn first_violation_among(
    shape: AlgebraShape,
    elements: Vec<ExponentVector>,
) -> Result<Option<KummerViolation>> {
    let m = elements.len() as u32;
    for mults in compositions(shape.degree(), m) {
        let spec = MultisetSpec {
            elements: elements.clone(),
            multiplicities: mults,
        };
        if let Some(v) = evaluate(shape, &spec)? {
            return Ok(Some(v));
        }
    }
    Ok(None)
}

/// Checks every subset of size `2..=d` and every positive composition.
/// Returns the first violation in (subset size, subset, composition) order.
pub fn is_kummer_set(
    shape: AlgebraShape,
    basis: &[ExponentVector],
) -> Result<Check<KummerViolation>> {
    if basis.is_empty() {
        return Err(KummerError::InvalidInput("empty basis".into()));
    }
    validate_basis(shape, basis)?;
    let top = basis.len().min(shape.degree() as usize);
    for k in 2..=top {
        let mut err = None;
        let found = for_each_subset(basis.len(), k, |idx| {
            let elems = idx.iter().map(|&i| basis[i].clone()).collect();
            match first_violation_among(shape, elems) {
                Ok(v) => v,
                Err(e) => {
                    err = Some(e);
                    None
                }
            }
        });
        if let Some(e) = err {
            return Err(e);
        }
        if let Some(v) = found {
            return Ok(Err(v));
        }
    }
    Ok(Ok(()))
}

/// Incremental check: assuming `base` is already Kummer, decides whether
/// `base ∪ {z}` is, looking only at multisets that contain `z`.
pub fn extends_kummer(
    shape: AlgebraShape,
    base: &[ExponentVector],
    z: &ExponentVector,
) -> Result<Check<KummerViolation>> {
    let mut all = base.to_vec();
    all.push(z.clone());
    validate_basis(shape, &all)?;
    let top = base.len().min(shape.degree() as usize - 1);
    for k in 1..=top {
        let mut err = None;
        let found = for_each_subset(base.len(), k, |idx| {
            let mut elems: Vec<_> = idx.iter().map(|&i| base[i].clone()).collect();
            elems.push(z.clone());
            match first_violation_among(shape, elems) {
                Ok(v) => v,
                Err(e) => {
                    err = Some(e);
                    None
                }
            }
        });
        if let Some(e) = err {
            return Err(e);
        }
        if let Some(v) = found {
            return Ok(Err(v));
        }
    }
    Ok(Ok(()))
}

/// `table[i][j]` is whether `{candidates[i], candidates[j]}` is Kummer.
pub fn pair_compatibility_table(
    shape: AlgebraShape,
    candidates: &[ExponentVector],
) -> Result<Vec<Vec<bool>>> {
    validate_basis(shape, candidates)?;
    let n = candidates.len();
    let mut table = vec![vec![true; n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let ok =
                first_violation_among(shape, vec![candidates[i].clone(), candidates[j].clone()])?
                    .is_none();
            table[i][j] = ok;
            table[j][i] = ok;
        }
    }
    Ok(table)
}
