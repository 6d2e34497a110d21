//! Dense exact expansion of inclusion-exclusion polynomials.
//!
//! The polynomial is built in a single coefficient window of length `degree + 1`
//! starting from the constant 1. A numerator factor `1 - x^d` is applied in place
//! from high to low index (`c[i] -= c[i - d]`); a denominator factor is applied as
//! multiplication by the truncated geometric series `sum x^(t d)`, low to high
//! (`c[i] += c[i - d]`). Since every step only reads lower indices, the window is
//! exact for any truncation length, which is what makes the half-degree mode valid.

use std::fmt;

use num_bigint::{BigInt, BigUint, Sign as BigSign};
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::factors::{factor_system, Factor, Sign, DEFAULT_SUBSET_CAP};
use crate::tuple::CoprimeTuple;

pub const DEFAULT_MEMORY_CAP: usize = 1 << 28;

/// Coefficient arithmetic used by [`expand`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Arithmetic {
    /// Arbitrary precision throughout.
    Big,
    /// 64-bit signed coefficients with overflow detection. On overflow the
    /// computation restarts in arbitrary precision when `promote` is set and
    /// fails with [`Error::OverflowInFastPath`] otherwise.
    Fast { promote: bool },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExpandOptions {
    /// Maximum number of coefficients held in the window.
    pub memory_cap: usize,
    pub subset_cap: usize,
    pub arithmetic: Arithmetic,
    /// Compute only the lower half of the coefficients and mirror the rest.
    pub half_degree: bool,
}

impl Default for ExpandOptions {
    fn default() -> Self {
        ExpandOptions {
            memory_cap: DEFAULT_MEMORY_CAP,
            subset_cap: DEFAULT_SUBSET_CAP,
            arithmetic: Arithmetic::Fast { promote: true },
            half_degree: false,
        }
    }
}

#[derive(Debug, Clone)]
enum Coefficients {
    Small(Vec<i64>),
    Big(Vec<BigInt>),
}

/// A dense integer polynomial, index `i` holding the coefficient of `x^i`.
///
/// Values produced by [`expand`] are monic with unit constant term and have degree
/// `prod (q_j - 1)`; [`IEPolynomial::from_coeffs`] accepts arbitrary coefficients.
#[derive(Debug, Clone)]
pub struct IEPolynomial {
    coeffs: Coefficients,
}

impl IEPolynomial {
    pub fn from_coeffs(mut coeffs: Vec<BigInt>) -> Self {
        if coeffs.is_empty() {
            coeffs.push(BigInt::zero());
        }
        IEPolynomial {
            coeffs: Coefficients::Big(coeffs),
        }
    }

    pub fn from_i64s(coeffs: &[i64]) -> Self {
        let mut c = coeffs.to_vec();
        if c.is_empty() {
            c.push(0);
        }
        IEPolynomial {
            coeffs: Coefficients::Small(c),
        }
    }

    pub fn len(&self) -> usize {
        match &self.coeffs {
            Coefficients::Small(c) => c.len(),
            Coefficients::Big(c) => c.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn degree(&self) -> usize {
        self.len() - 1
    }

    /// Whether the coefficients are stored as 64-bit integers.
    pub fn is_fixed_width(&self) -> bool {
        matches!(self.coeffs, Coefficients::Small(_))
    }

    /// Coefficient of `x^i`; zero past the degree.
    pub fn coeff(&self, i: usize) -> BigInt {
        match &self.coeffs {
            Coefficients::Small(c) => c.get(i).map_or_else(BigInt::zero, |&v| BigInt::from(v)),
            Coefficients::Big(c) => c.get(i).cloned().unwrap_or_default(),
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = BigInt> + '_ {
        (0..self.len()).map(move |i| self.coeff(i))
    }

    pub fn to_vec(&self) -> Vec<BigInt> {
        self.iter().collect()
    }

    /// Largest absolute value of a coefficient.
    pub fn height(&self) -> BigUint {
        match &self.coeffs {
            Coefficients::Small(c) => {
                BigUint::from(c.iter().map(|v| v.unsigned_abs()).max().unwrap_or(0))
            }
            Coefficients::Big(c) => c
                .iter()
                .map(|v| v.magnitude())
                .max()
                .cloned()
                .unwrap_or_default(),
        }
    }

    pub fn is_palindromic(&self) -> bool {
        fn check<T: PartialEq>(c: &[T]) -> bool {
            c.iter().eq(c.iter().rev())
        }
        match &self.coeffs {
            Coefficients::Small(c) => check(c),
            Coefficients::Big(c) => check(c),
        }
    }

    /// Sum of coefficients.
    pub fn eval_at_one(&self) -> BigInt {
        match &self.coeffs {
            Coefficients::Small(c) => c.iter().map(|&v| BigInt::from(v)).sum(),
            Coefficients::Big(c) => c.iter().sum(),
        }
    }
}

impl PartialEq for IEPolynomial {
    fn eq(&self, other: &Self) -> bool {
        match (&self.coeffs, &other.coeffs) {
            (Coefficients::Small(a), Coefficients::Small(b)) => a == b,
            (Coefficients::Big(a), Coefficients::Big(b)) => a == b,
            _ => self.len() == other.len() && self.iter().eq(other.iter()),
        }
    }
}

impl Eq for IEPolynomial {}

impl fmt::Display for IEPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.sign() == BigSign::Minus { "-" } else { "+" };
            if first {
                if sign == "-" {
                    f.write_str("-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let mag = c.magnitude();
            match (i, mag.is_one()) {
                (0, _) => write!(f, "{mag}")?,
                (1, true) => f.write_str("x")?,
                (1, false) => write!(f, "{mag}x")?,
                (_, true) => write!(f, "x^{i}")?,
                (_, false) => write!(f, "{mag}x^{i}")?,
            }
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

/// Computes `Q_rho` exactly, applying factors in the default order.
pub fn expand(rho: &CoprimeTuple, opts: &ExpandOptions) -> Result<IEPolynomial> {
    let system = factor_system(rho, opts.subset_cap)?;
    run(rho, &system.default_order(), opts)
}

/// Like [`expand`], but applies the factors of
/// [`factor_system`](crate::factors::factor_system) in the given permutation of
/// their subset-bitmask indices.
pub fn expand_in_order(
    rho: &CoprimeTuple,
    order: &[usize],
    opts: &ExpandOptions,
) -> Result<IEPolynomial> {
    let system = factor_system(rho, opts.subset_cap)?;
    let n = system.len();
    let mut seen = vec![false; n];
    if order.len() != n {
        return Err(Error::InvalidParameter(format!(
            "factor order has {} entries, expected {n}",
            order.len()
        )));
    }
    for &i in order {
        if i >= n || std::mem::replace(&mut seen[i], true) {
            return Err(Error::InvalidParameter(format!(
                "factor order is not a permutation of 0..{n}"
            )));
        }
    }
    let factors: Vec<Factor> = order.iter().map(|&i| system.factors()[i].clone()).collect();
    run(rho, &factors, opts)
}

fn run(rho: &CoprimeTuple, factors: &[Factor], opts: &ExpandOptions) -> Result<IEPolynomial> {
    let degree = rho.degree();
    let len = degree
        .to_usize()
        .and_then(|d| d.checked_add(1))
        .filter(|&len| len <= opts.memory_cap)
        .ok_or_else(|| Error::DegreeCapExceeded {
            degree: degree.clone(),
            cap: opts.memory_cap,
        })?;
    let window = if opts.half_degree {
        len.div_ceil(2)
    } else {
        len
    };

    // A factor whose exponent reaches past the window is the identity on it.
    let steps: Vec<(usize, Sign)> = factors
        .iter()
        .filter_map(|f| f.d.to_usize().filter(|&d| d < window).map(|d| (d, f.sign)))
        .collect();

    let coeffs = match opts.arithmetic {
        Arithmetic::Big => Coefficients::Big(run_big(window, &steps)),
        Arithmetic::Fast { promote } => match run_fixed(window, &steps) {
            Some(c) => Coefficients::Small(c),
            None if promote => Coefficients::Big(run_big(window, &steps)),
            None => return Err(Error::OverflowInFastPath),
        },
    };
    let coeffs = if window < len {
        match coeffs {
            Coefficients::Small(c) => Coefficients::Small(mirror(c, len)),
            Coefficients::Big(c) => Coefficients::Big(mirror(c, len)),
        }
    } else {
        coeffs
    };
    Ok(IEPolynomial { coeffs })
}

fn mirror<T: Clone>(mut c: Vec<T>, len: usize) -> Vec<T> {
    let degree = len - 1;
    c.reserve(len - c.len());
    for i in c.len()..len {
        let v = c[degree - i].clone();
        c.push(v);
    }
    c
}

fn run_fixed(window: usize, steps: &[(usize, Sign)]) -> Option<Vec<i64>> {
    let mut c = vec![0i64; window];
    c[0] = 1;
    for &(d, sign) in steps {
        match sign {
            Sign::Plus => {
                for i in (d..window).rev() {
                    c[i] = c[i].checked_sub(c[i - d])?;
                }
            }
            Sign::Minus => {
                for i in d..window {
                    c[i] = c[i].checked_add(c[i - d])?;
                }
            }
        }
    }
    Some(c)
}

fn run_big(window: usize, steps: &[(usize, Sign)]) -> Vec<BigInt> {
    let mut c = vec![BigInt::zero(); window];
    c[0] = BigInt::one();
    for &(d, sign) in steps {
        match sign {
            Sign::Plus => {
                for i in (d..window).rev() {
                    let (lo, hi) = c.split_at_mut(i);
                    if !lo[i - d].is_zero() {
                        hi[0] -= &lo[i - d];
                    }
                }
            }
            Sign::Minus => {
                for i in d..window {
                    let (lo, hi) = c.split_at_mut(i);
                    if !lo[i - d].is_zero() {
                        hi[0] += &lo[i - d];
                    }
                }
            }
        }
    }
    c
}

/// Maximum coefficient magnitude.
pub fn height(p: &IEPolynomial) -> BigUint {
    p.height()
}

pub fn is_palindromic(p: &IEPolynomial) -> bool {
    p.is_palindromic()
}

pub fn eval_at_one(p: &IEPolynomial) -> BigInt {
    p.eval_at_one()
}
