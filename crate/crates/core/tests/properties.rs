use iepoly::analysis::{chain_identity_holds, limit_constant, normalized_ratio};
use iepoly::oracle::{dense_mul, exact_div, oracle_expand, DensePoly, DEFAULT_ORACLE_CAP};
use iepoly::poly::expand_in_order;
use iepoly::real::HighPrecision;
use iepoly::{expand, factor_system, CoprimeTuple, ExpandOptions};
use num_bigint::{BigInt, BigUint};
use num_traits::One;
use proptest::prelude::*;

fn tuple_strategy(max_k: usize, max_q: u64) -> impl Strategy<Value = CoprimeTuple> {
    prop::collection::vec(2..=max_q, 1..=max_k).prop_filter_map("pairwise coprime", |mut v| {
        v.sort_unstable();
        v.dedup();
        CoprimeTuple::from_u64s(&v).ok()
    })
}

fn poly_strategy() -> impl Strategy<Value = DensePoly> {
    prop::collection::vec(-20i64..=20, 0..8).prop_map(|v| DensePoly::from_i64s(&v))
}

/// Polynomial with leading coefficient +-1.
fn unit_lead_strategy() -> impl Strategy<Value = DensePoly> {
    (prop::collection::vec(-20i64..=20, 0..6), prop::bool::ANY).prop_map(|(mut v, neg)| {
        v.push(if neg { -1 } else { 1 });
        DensePoly::from_i64s(&v)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn structure_of_expansion(rho in tuple_strategy(4, 30)) {
        let p = expand(&rho, &ExpandOptions::default()).unwrap();
        prop_assert_eq!(BigUint::from(p.degree()), rho.degree());
        prop_assert!(p.coeff(0).is_one());
        prop_assert!(p.coeff(p.degree()).is_one());
        prop_assert!(p.is_palindromic());
        let expected = if rho.k() == 1 { BigInt::from(rho.qs()[0].clone()) } else { BigInt::one() };
        prop_assert_eq!(p.eval_at_one(), expected);
    }

    #[test]
    fn factor_order_is_irrelevant(rho in tuple_strategy(4, 25), seed in any::<u64>()) {
        let opts = ExpandOptions::default();
        let base = expand(&rho, &opts).unwrap();
        let n = factor_system(&rho, opts.subset_cap).unwrap().len();
        let mut order: Vec<usize> = (0..n).collect();
        // Fisher-Yates driven by a simple LCG so the permutation is reproducible from the seed.
        let mut s = seed;
        for i in (1..n).rev() {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            order.swap(i, (s >> 33) as usize % (i + 1));
        }
        prop_assert_eq!(expand_in_order(&rho, &order, &opts).unwrap(), base);
    }

    #[test]
    fn binary_heights_for_pairs(rho in tuple_strategy(2, 60).prop_filter("k = 2", |t| t.k() == 2)) {
        let p = expand(&rho, &ExpandOptions::default()).unwrap();
        prop_assert!(p.iter().all(|c| c >= BigInt::from(-1) && c <= BigInt::one()));
        prop_assert!(p.height().is_one());
    }

    #[test]
    fn oracle_agrees(rho in tuple_strategy(3, 40)) {
        prop_assume!(rho.m() <= &BigUint::from(DEFAULT_ORACLE_CAP));
        let fast = expand(&rho, &ExpandOptions::default()).unwrap();
        prop_assert_eq!(oracle_expand(&rho, DEFAULT_ORACLE_CAP).unwrap(), fast);
    }

    #[test]
    fn division_undoes_multiplication(a in poly_strategy(), b in unit_lead_strategy()) {
        prop_assert_eq!(exact_div(&dense_mul(&a, &b), &b).unwrap(), a);
    }

    #[test]
    fn chain_identity_is_exact(rho in tuple_strategy(6, 200)) {
        prop_assert!(chain_identity_holds(&rho));
    }

    #[test]
    fn ratio_of_perfect_powers(base in 1u64..50, k in 1usize..6) {
        let mut hp = HighPrecision::new(128).unwrap();
        let a = num_traits::pow(BigUint::from(base), 1 << k);
        let r = normalized_ratio(&a, &BigUint::one(), k, &mut hp).unwrap().to_f64();
        prop_assert!((r - base as f64).abs() <= 1e-12 * base as f64);
    }
}

#[test]
fn partial_constants_strictly_decrease() {
    let values: Vec<_> = (1..=40)
        .map(|t| limit_constant(t, 128).unwrap().value)
        .collect();
    for w in values.windows(2) {
        assert!(w[1] < w[0]);
    }
    assert!(values.iter().all(|v| v.to_f64() > 0.48));
}
