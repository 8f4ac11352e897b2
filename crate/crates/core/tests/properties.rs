use proptest::prelude::*;

use kummer::cyclotomic::CyclotomicInteger;
use kummer::kummer::{is_kummer_set, symmetric_coefficient, MultisetSpec};
use kummer::monomial::{symplectic_phase, AlgebraShape, ExponentVector};

fn shape_and_vectors(count: usize) -> impl Strategy<Value = (AlgebraShape, Vec<ExponentVector>)> {
    (2u32..=7, 1u32..=3).prop_flat_map(move |(d, n)| {
        let s = AlgebraShape::new(d, n).unwrap();
        let width = s.width();
        prop::collection::vec(prop::collection::vec(0..d as i64, width), count).prop_map(
            move |rows| {
                (
                    s,
                    rows.iter()
                        .map(|r| ExponentVector::from_ints(s, r).unwrap())
                        .collect(),
                )
            },
        )
    })
}

fn cyclotomic(d: u32) -> impl Strategy<Value = CyclotomicInteger> {
    prop::collection::vec(-20i64..=20, d as usize)
        .prop_map(move |c| CyclotomicInteger::from_poly(d, &c))
}

fn factorial(k: u32) -> i64 {
    (1..=k as i64).product()
}

proptest! {
    #[test]
    fn phase_is_alternating_and_bilinear((s, v) in shape_and_vectors(3), k in -5i64..5) {
        let d = s.degree();
        let ph = |a: &ExponentVector, b: &ExponentVector| symplectic_phase(s, a, b).unwrap();
        prop_assert_eq!(ph(&v[0], &v[0]), 0);
        prop_assert_eq!((ph(&v[0], &v[1]) + ph(&v[1], &v[0])) % d, 0);
        let sum = s.add(&v[0], &v[1]);
        prop_assert_eq!(ph(&sum, &v[2]), (ph(&v[0], &v[2]) + ph(&v[1], &v[2])) % d);
        let scaled = s.scale(k, &v[0]);
        prop_assert_eq!(ph(&scaled, &v[1]) as i64, (k * ph(&v[0], &v[1]) as i64).rem_euclid(d as i64));
    }

    #[test]
    fn transvections_preserve_phase((s, v) in shape_and_vectors(3)) {
        let t = |u: &ExponentVector| s.transvect(&v[2], u);
        prop_assert_eq!(
            symplectic_phase(s, &t(&v[0]), &t(&v[1])).unwrap(),
            symplectic_phase(s, &v[0], &v[1]).unwrap()
        );
    }

    #[test]
    fn packed_index_round_trip((s, v) in shape_and_vectors(1)) {
        prop_assert_eq!(s.from_packed_index(s.packed_index(&v[0])), v[0].clone());
    }

    #[test]
    fn cyclotomic_ring_laws((a, b, c) in (2u32..=12).prop_flat_map(|d| (cyclotomic(d), cyclotomic(d), cyclotomic(d)))) {
        let d = a.degree();
        prop_assert_eq!(a.mul(&b).unwrap(), b.mul(&a).unwrap());
        prop_assert_eq!(
            a.mul(&b.add(&c).unwrap()).unwrap(),
            a.mul(&b).unwrap().add(&a.mul(&c).unwrap()).unwrap()
        );
        prop_assert!(a.add(&a.neg()).unwrap().is_zero());
        // ζ^d = 1 and Σ_k ζ^k = 0 for d > 1.
        prop_assert_eq!(CyclotomicInteger::root_power(d, d as i64), CyclotomicInteger::from_int(d, 1));
        prop_assert!(CyclotomicInteger::from_power_counts(d, &vec![1; d as usize]).is_zero());
    }

    #[test]
    fn commuting_elements_give_multinomial(d in 2u32..=7, parts in prop::collection::vec(1u32..=3, 1..=4)) {
        // Multiples of x_1 commute pairwise.
        let s = AlgebraShape::new(d, 1).unwrap();
        let m = parts.len().min(d as usize - 1).max(1);
        let mut mults = parts[..m].to_vec();
        let total: u32 = mults.iter().sum();
        prop_assume!(total <= d);
        mults[0] += d - total;
        let elements: Vec<_> = (1..=m as i64).map(|k| ExponentVector::from_ints(s, &[k, 0]).unwrap()).collect();
        prop_assume!(elements.iter().all(|e| !e.is_zero()));
        let spec = MultisetSpec::new(s, elements, mults.clone()).unwrap();
        let want = factorial(d) / mults.iter().map(|&k| factorial(k)).product::<i64>();
        prop_assert_eq!(symmetric_coefficient(s, &spec).unwrap(), CyclotomicInteger::from_int(d, want));
    }

    #[test]
    fn compatible_pairs_in_degree_four(u in prop::collection::vec(0i64..4, 4), v in prop::collection::vec(0i64..4, 4)) {
        let s = AlgebraShape::new(4, 2).unwrap();
        let u = ExponentVector::from_ints(s, &u).unwrap();
        let v = ExponentVector::from_ints(s, &v).unwrap();
        prop_assume!(!u.is_zero() && !v.is_zero() && u != v);
        if is_kummer_set(s, &[u.clone(), v.clone()]).unwrap().is_ok() {
            let t = symplectic_phase(s, &u, &v).unwrap();
            prop_assert!(t != 0);
            if t == 2 {
                prop_assert!(s.scale(2, &s.add(&u, &v)).is_zero());
            }
        }
    }
}
