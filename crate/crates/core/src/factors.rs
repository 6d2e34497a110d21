//! The signed divisor system behind the product formula.
//!
//! Each subset `S` of the tuple contributes a binomial `1 - x^d` with
//! `d = m / prod_{i in S} q_i`. Even subsets sit in the numerator, odd subsets
//! in the denominator.

use num_bigint::{BigInt, BigUint};

use crate::error::{Error, Result};
use crate::tuple::CoprimeTuple;

pub const DEFAULT_SUBSET_CAP: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    /// Binomial in the denominator.
    Minus,
    /// Binomial in the numerator.
    Plus,
}

impl Sign {
    fn of_subset_size(n: u32) -> Sign {
        if n % 2 == 0 {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }

    pub fn as_i32(self) -> i32 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }
}

/// One binomial `1 - x^d`, multiplied in (`Plus`) or divided out (`Minus`).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Factor {
    pub d: BigUint,
    pub sign: Sign,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactorSystem {
    factors: Vec<Factor>,
}

impl FactorSystem {
    /// Factors in subset-bitmask order: bit `i` of the index selects `q_i`.
    pub fn factors(&self) -> &[Factor] {
        &self.factors
    }

    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    /// `sum sign * d`; telescopes to `prod (q_j - 1)`.
    pub fn signed_degree_sum(&self) -> BigInt {
        self.factors
            .iter()
            .map(|f| match f.sign {
                Sign::Plus => BigInt::from(f.d.clone()),
                Sign::Minus => -BigInt::from(f.d.clone()),
            })
            .sum()
    }

    /// Denominator factors ascending by `d`, then numerator factors ascending by `d`.
    pub fn default_order(&self) -> Vec<Factor> {
        let mut v = self.factors.clone();
        v.sort_by(|a, b| a.sign.cmp(&b.sign).then_with(|| a.d.cmp(&b.d)));
        v
    }
}

pub fn factor_system(rho: &CoprimeTuple, subset_cap: usize) -> Result<FactorSystem> {
    let k = rho.k();
    if k > subset_cap {
        return Err(Error::TupleTooLarge { k, cap: subset_cap });
    }
    let qs = rho.qs();
    let factors = (0u64..1 << k)
        .map(|mask| {
            let divisor: BigUint = (0..k)
                .filter(|i| mask >> i & 1 == 1)
                .map(|i| &qs[i])
                .product();
            Factor {
                d: rho.m() / divisor,
                sign: Sign::of_subset_size(mask.count_ones()),
            }
        })
        .collect();
    Ok(FactorSystem { factors })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    fn sys(v: &[u64]) -> FactorSystem {
        factor_system(&CoprimeTuple::from_u64s(v).unwrap(), DEFAULT_SUBSET_CAP).unwrap()
    }

    fn pairs(s: &FactorSystem) -> Vec<(u64, i32)> {
        s.factors()
            .iter()
            .map(|f| (u64::try_from(&f.d).unwrap(), f.sign.as_i32()))
            .collect()
    }

    #[test]
    fn two_three() {
        assert_eq!(pairs(&sys(&[2, 3])), vec![(6, 1), (3, -1), (2, -1), (1, 1)]);
    }

    #[test]
    fn single_entry() {
        assert_eq!(pairs(&sys(&[7])), vec![(7, 1), (1, -1)]);
    }

    #[test]
    fn three_five_seven() {
        let s = sys(&[3, 5, 7]);
        assert_eq!(s.len(), 8);
        assert_eq!(s.signed_degree_sum(), BigInt::from(48));
        let plus = s.factors().iter().filter(|f| f.sign == Sign::Plus).count();
        assert_eq!(plus, 4);
        let distinct: HashSet<_> = s.factors().iter().map(|f| f.d.clone()).collect();
        assert_eq!(distinct.len(), 8);
        assert!(s
            .factors()
            .iter()
            .all(|f| (rho_m(&[3, 5, 7]) % &f.d) == BigUint::from(0u32)));
    }

    fn rho_m(v: &[u64]) -> BigUint {
        CoprimeTuple::from_u64s(v).unwrap().m().clone()
    }

    #[test]
    fn default_order_puts_denominator_first() {
        let order = sys(&[2, 3]).default_order();
        let got: Vec<_> = order
            .iter()
            .map(|f| (u64::try_from(&f.d).unwrap(), f.sign.as_i32()))
            .collect();
        assert_eq!(got, vec![(2, -1), (3, -1), (1, 1), (6, 1)]);
    }

    #[test]
    fn subset_cap_is_enforced() {
        let rho = CoprimeTuple::from_u64s(&[2, 3, 5, 7]).unwrap();
        assert_eq!(
            factor_system(&rho, 3),
            Err(Error::TupleTooLarge { k: 4, cap: 3 })
        );
    }
}
