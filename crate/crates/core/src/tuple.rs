//! Pairwise coprime tuples `q_1 < q_2 < ... < q_k`.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive};

use crate::error::{Error, Result};

/// A validated, strictly increasing tuple of pairwise coprime integers, each at least 2.
///
/// The product `m = q_1 q_2 ... q_k` is cached at construction.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CoprimeTuple {
    qs: Vec<BigUint>,
    m: BigUint,
}

impl CoprimeTuple {
    /// Validates raw, possibly signed input.
    pub fn validate(values: &[BigInt]) -> Result<Self> {
        let mut qs = Vec::with_capacity(values.len());
        for (index, v) in values.iter().enumerate() {
            match v.to_biguint() {
                Some(q) if q >= BigUint::from(2u32) => qs.push(q),
                _ => {
                    return Err(Error::EntryBelowTwo {
                        index,
                        value: v.clone(),
                    })
                }
            }
        }
        Self::new(qs)
    }

    pub fn new(qs: Vec<BigUint>) -> Result<Self> {
        if qs.is_empty() {
            return Err(Error::EmptyTuple);
        }
        let two = BigUint::from(2u32);
        for (index, q) in qs.iter().enumerate() {
            if *q < two {
                return Err(Error::EntryBelowTwo {
                    index,
                    value: BigInt::from(q.clone()),
                });
            }
        }
        for (index, w) in qs.windows(2).enumerate() {
            if w[1] <= w[0] {
                return Err(Error::NotIncreasing {
                    index: index + 1,
                    value: w[1].clone(),
                });
            }
        }
        for i in 0..qs.len() {
            for j in i + 1..qs.len() {
                let gcd = qs[i].gcd(&qs[j]);
                if !gcd.is_one() {
                    return Err(Error::NotCoprime {
                        i,
                        j,
                        a: qs[i].clone(),
                        b: qs[j].clone(),
                        gcd,
                    });
                }
            }
        }
        let m = qs.iter().product();
        Ok(CoprimeTuple { qs, m })
    }

    pub fn from_u64s(values: &[u64]) -> Result<Self> {
        Self::new(values.iter().map(|&v| BigUint::from(v)).collect())
    }

    pub fn qs(&self) -> &[BigUint] {
        &self.qs
    }

    pub fn k(&self) -> usize {
        self.qs.len()
    }

    /// The product of all entries.
    pub fn m(&self) -> &BigUint {
        &self.m
    }

    /// Entries as `u64` when every entry fits.
    pub fn to_u64s(&self) -> Option<Vec<u64>> {
        self.qs.iter().map(|q| q.to_u64()).collect()
    }

    /// `prod (q_j - 1)`, the degree of the associated polynomial.
    pub fn degree(&self) -> BigUint {
        self.qs.iter().map(|q| q - 1u32).product()
    }
}

impl fmt::Display for CoprimeTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, q) in self.qs.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{q}")?;
        }
        f.write_str("}")
    }
}

/// Validates a raw list of integers into a [`CoprimeTuple`].
pub fn validate_tuple(values: &[BigInt]) -> Result<CoprimeTuple> {
    CoprimeTuple::validate(values)
}

pub fn degree_of(rho: &CoprimeTuple) -> BigUint {
    rho.degree()
}

/// All pairwise coprime tuples with `k` entries, all `>= 2`, and product at most `m_cap`,
/// in lexicographic order.
///
/// Candidates are extended one entry at a time; a branch is cut as soon as the partial
/// product times the smallest possible completion exceeds the cap.
pub fn coprime_tuples(k: usize, m_cap: u64) -> Vec<Vec<u64>> {
    let mut out = Vec::new();
    if k == 0 {
        return out;
    }
    let mut prefix = Vec::with_capacity(k);
    extend(&mut prefix, 1, 2, k, m_cap, &mut out);
    out
}

fn extend(
    prefix: &mut Vec<u64>,
    product: u64,
    start: u64,
    remaining: usize,
    m_cap: u64,
    out: &mut Vec<Vec<u64>>,
) {
    if remaining == 0 {
        out.push(prefix.clone());
        return;
    }
    let mut q = start;
    loop {
        // The remaining entries are all >= q, so product * q^remaining bounds the result.
        let Some(floor) = q
            .checked_pow(remaining as u32)
            .and_then(|p| p.checked_mul(product))
        else {
            break;
        };
        if floor > m_cap {
            break;
        }
        if prefix.iter().all(|&p| p.gcd(&q) == 1) {
            prefix.push(q);
            extend(prefix, product * q, q + 1, remaining - 1, m_cap, out);
            prefix.pop();
        }
        q += 1;
    }
}
