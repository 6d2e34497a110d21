//! Brute-force reference for the product formula.
//!
//! Multiplies out every numerator binomial with schoolbook multiplication and then
//! removes the denominator binomials one at a time by exact long division. It
//! shares nothing with the windowed engine in [`crate::poly`] beyond the factor
//! list, so agreement between the two is meaningful.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::factors::{factor_system, Sign, DEFAULT_SUBSET_CAP};
use crate::poly::IEPolynomial;
use crate::tuple::CoprimeTuple;

pub const DEFAULT_ORACLE_CAP: u64 = 10_000;

/// Integer polynomial with no trailing zero coefficients; the zero polynomial is empty.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct DensePoly {
    coeffs: Vec<BigInt>,
}

impl DensePoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        DensePoly { coeffs }
    }

    pub fn from_i64s(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn one() -> Self {
        Self::from_i64s(&[1])
    }

    /// `1 - x^d`
    pub fn binomial(d: usize) -> Self {
        let mut c = vec![BigInt::zero(); d + 1];
        c[0] += 1;
        c[d] -= 1;
        Self::new(c)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }
}

pub fn dense_mul(a: &DensePoly, b: &DensePoly) -> DensePoly {
    if a.is_zero() || b.is_zero() {
        return DensePoly::default();
    }
    let mut out = vec![BigInt::zero(); a.coeffs.len() + b.coeffs.len() - 1];
    for (i, x) in a.coeffs.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.coeffs.iter().enumerate() {
            if !y.is_zero() {
                out[i + j] += x * y;
            }
        }
    }
    DensePoly::new(out)
}

/// Long division that must leave no remainder.
pub fn exact_div(num: &DensePoly, den: &DensePoly) -> Result<DensePoly> {
    let Some(den_deg) = den.degree() else {
        return Err(Error::InvalidParameter(
            "division by the zero polynomial".into(),
        ));
    };
    let lead = &den.coeffs[den_deg];
    if !lead.abs().is_one() {
        return Err(Error::NonInvertibleLeading(lead.clone()));
    }
    let Some(num_deg) = num.degree() else {
        return Ok(DensePoly::default());
    };
    if num_deg < den_deg {
        return Err(Error::NonzeroRemainder);
    }
    let mut rem = num.coeffs.clone();
    let mut quot = vec![BigInt::zero(); num_deg - den_deg + 1];
    for shift in (0..quot.len()).rev() {
        let top = &rem[shift + den_deg];
        if top.is_zero() {
            continue;
        }
        // lead is +-1, so dividing is multiplying
        let q = top * lead;
        for (j, c) in den.coeffs.iter().enumerate() {
            if !c.is_zero() {
                rem[shift + j] -= &q * c;
            }
        }
        quot[shift] = q;
    }
    if rem.iter().any(|c| !c.is_zero()) {
        return Err(Error::NonzeroRemainder);
    }
    Ok(DensePoly::new(quot))
}

/// Reference expansion of `Q_rho`. Refuses tuples with `m > oracle_cap`.
pub fn oracle_expand(rho: &CoprimeTuple, oracle_cap: u64) -> Result<IEPolynomial> {
    let m = rho.m();
    if m.to_u64().is_none_or(|m| m > oracle_cap) {
        return Err(Error::OracleCapExceeded {
            m: m.clone(),
            cap: oracle_cap,
        });
    }
    let system = factor_system(rho, DEFAULT_SUBSET_CAP)?;
    let mut numerator = DensePoly::one();
    let mut denominators = Vec::new();
    for f in system.factors() {
        let d = f.d.to_usize().expect("divisor of a capped m");
        match f.sign {
            Sign::Plus => numerator = dense_mul(&numerator, &DensePoly::binomial(d)),
            Sign::Minus => denominators.push(d),
        }
    }
    denominators.sort_unstable_by(|a, b| b.cmp(a));
    let mut q = numerator;
    for d in denominators {
        q = exact_div(&q, &DensePoly::binomial(d))?;
    }
    Ok(IEPolynomial::from_coeffs(q.coeffs))
}
