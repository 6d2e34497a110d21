//! Multi-precision reals for logarithmic-domain evaluation.
//!
//! Thin wrapper around `astro-float`. Every operation rounds to nearest at the
//! context precision unless its name ends in `_up`, in which case the result is
//! rounded towards positive infinity (used when accumulating error bounds).

use std::cmp::Ordering;
use std::fmt;

use astro_float::{BigFloat, Consts, Radix, RoundingMode, Sign};
use num_bigint::BigUint;
use num_traits::Zero;

use crate::error::{Error, Result};

pub const DEFAULT_MANTISSA_BITS: usize = 128;
pub const MIN_MANTISSA_BITS: usize = 64;

#[derive(Debug, Clone)]
pub struct Real(BigFloat);

impl Real {
    pub fn to_f64(&self) -> f64 {
        let mut cc = Consts::new().expect("constant cache");
        let s = self
            .0
            .format(Radix::Dec, RoundingMode::ToEven, &mut cc)
            .unwrap_or_else(|_| "NaN".into());
        s.parse().unwrap_or(f64::NAN)
    }

    /// Decimal rendering rounded to `digits` significant digits.
    ///
    /// Fixed-point notation for magnitudes in `[1e-6, 1e21)`, scientific otherwise.
    pub fn to_decimal(&self, digits: usize) -> String {
        let mut cc = Consts::new().expect("constant cache");
        let s = self
            .0
            .format(Radix::Dec, RoundingMode::ToEven, &mut cc)
            .unwrap_or_else(|_| "NaN".into());
        round_scientific(&s, digits.max(1)).unwrap_or(s)
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive() && !self.0.is_zero()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_finite(&self) -> bool {
        !self.0.is_nan() && !self.0.is_inf()
    }

    pub fn neg(&self) -> Real {
        Real(self.0.neg())
    }

    pub fn abs(&self) -> Real {
        Real(self.0.abs())
    }
}

impl PartialEq for Real {
    fn eq(&self, other: &Self) -> bool {
        self.partial_cmp(other) == Some(Ordering::Equal)
    }
}

impl PartialOrd for Real {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.0.cmp(&other.0).map(|c| c.cmp(&0))
    }
}

impl fmt::Display for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_decimal(30))
    }
}

/// Working precision plus the constant cache needed by `ln`/`exp`.
pub struct HighPrecision {
    bits: usize,
    consts: Consts,
}

impl fmt::Debug for HighPrecision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("HighPrecision")
            .field("bits", &self.bits)
            .finish()
    }
}

const RM: RoundingMode = RoundingMode::ToEven;
const UP: RoundingMode = RoundingMode::Up;

impl HighPrecision {
    pub fn new(bits: usize) -> Result<Self> {
        if bits < MIN_MANTISSA_BITS {
            return Err(Error::InvalidParameter(format!(
                "mantissa_bits must be at least {MIN_MANTISSA_BITS}, got {bits}"
            )));
        }
        let consts = Consts::new().map_err(|e| Error::InvalidParameter(format!("{e:?}")))?;
        Ok(HighPrecision { bits, consts })
    }

    pub fn bits(&self) -> usize {
        self.bits
    }

    pub fn from_u64(&self, v: u64) -> Real {
        Real(BigFloat::from_u64(v, self.bits))
    }

    pub fn from_f64(&self, v: f64) -> Real {
        Real(BigFloat::from_f64(v, self.bits))
    }

    pub fn from_uint(&self, n: &BigUint) -> Real {
        if n.is_zero() {
            return Real(BigFloat::from_u64(0, self.bits));
        }
        let (top, shift) = self.leading_bits(n);
        let x = words_to_float(&top);
        let x = x.mul(&BigFloat::from_u64(1, self.bits), self.bits, RM);
        Real(scale2_raw(&x, shift as i64))
    }

    pub fn add(&self, a: &Real, b: &Real) -> Real {
        Real(a.0.add(&b.0, self.bits, RM))
    }

    pub fn add_up(&self, a: &Real, b: &Real) -> Real {
        Real(a.0.add(&b.0, self.bits, UP))
    }

    pub fn sub(&self, a: &Real, b: &Real) -> Real {
        Real(a.0.sub(&b.0, self.bits, RM))
    }

    pub fn mul(&self, a: &Real, b: &Real) -> Real {
        Real(a.0.mul(&b.0, self.bits, RM))
    }

    pub fn mul_up(&self, a: &Real, b: &Real) -> Real {
        Real(a.0.mul(&b.0, self.bits, UP))
    }

    pub fn div(&self, a: &Real, b: &Real) -> Real {
        Real(a.0.div(&b.0, self.bits, RM))
    }

    /// `a * 2^e`, exact.
    pub fn scale2(&self, a: &Real, e: i64) -> Real {
        Real(scale2_raw(&a.0, e))
    }

    pub fn ln(&mut self, a: &Real) -> Real {
        Real(a.0.ln(self.bits, RM, &mut self.consts))
    }

    pub fn ln_up(&mut self, a: &Real) -> Real {
        Real(a.0.ln(self.bits, UP, &mut self.consts))
    }

    pub fn exp(&mut self, a: &Real) -> Real {
        Real(a.0.exp(self.bits, RM, &mut self.consts))
    }

    pub fn exp_up(&mut self, a: &Real) -> Real {
        Real(a.0.exp(self.bits, UP, &mut self.consts))
    }

    pub fn ln2(&mut self) -> Real {
        Real(self.consts.ln_2(self.bits, RM))
    }

    pub fn ln_u64(&mut self, v: u64) -> Real {
        // ln(1) must come out as an exact zero.
        if v == 1 {
            return self.from_u64(0);
        }
        let x = self.from_u64(v);
        self.ln(&x)
    }

    /// Natural logarithm of an exact integer of any size.
    ///
    /// Only the leading `bits + 64` bits enter the logarithm; the rest is carried as
    /// `shift * ln 2`, so the truncation error stays below `2^-(bits + 63)`.
    pub fn ln_uint(&mut self, n: &BigUint) -> Real {
        assert!(!n.is_zero(), "logarithm of zero");
        if n.bits() <= 64 {
            return self.ln_u64(u64::try_from(n).expect("fits"));
        }
        let (top, shift) = self.leading_bits(n);
        let x = words_to_float(&top);
        let l = Real(x.ln(self.bits, RM, &mut self.consts));
        if shift == 0 {
            return l;
        }
        let ln2 = self.ln2();
        let tail = self.mul(&self.from_u64(shift), &ln2);
        self.add(&l, &tail)
    }

    fn leading_bits(&self, n: &BigUint) -> (BigUint, u64) {
        let keep = (self.bits as u64 + 64).div_ceil(64) * 64;
        let bits = n.bits();
        if bits > keep {
            (n >> (bits - keep), bits - keep)
        } else {
            (n.clone(), 0)
        }
    }
}

fn words_to_float(n: &BigUint) -> BigFloat {
    let words = n.to_u64_digits();
    BigFloat::from_words(&words, Sign::Pos, (64 * words.len()) as i32)
}

fn scale2_raw(a: &BigFloat, e: i64) -> BigFloat {
    if a.is_zero() || e == 0 {
        return a.clone();
    }
    let mut out = a.clone();
    let cur = out.exponent().expect("finite value") as i64;
    out.set_exponent((cur + e) as i32);
    out
}

/// Rounds a `d.ddd e±x` string to `digits` significant digits.
fn round_scientific(s: &str, digits: usize) -> Option<String> {
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s),
    };
    let (mant, exp) = body.split_once('e')?;
    let mut exp: i64 = exp.parse().ok()?;
    let mut ds: Vec<u8> = mant
        .bytes()
        .filter(u8::is_ascii_digit)
        .map(|b| b - b'0')
        .collect();
    if ds.iter().all(|&d| d == 0) {
        return Some("0".into());
    }
    while ds.first() == Some(&0) {
        ds.remove(0);
        exp -= 1;
    }
    if ds.len() > digits {
        let round_up = ds[digits] >= 5;
        ds.truncate(digits);
        if round_up {
            let mut i = digits;
            loop {
                if i == 0 {
                    ds.insert(0, 1);
                    ds.truncate(digits);
                    exp += 1;
                    break;
                }
                i -= 1;
                if ds[i] == 9 {
                    ds[i] = 0;
                } else {
                    ds[i] += 1;
                    break;
                }
            }
        }
    }
    while ds.len() > 1 && ds.last() == Some(&0) {
        ds.pop();
    }
    let digits_str: String = ds.iter().map(|d| char::from(b'0' + d)).collect();
    let mut out = String::new();
    if neg {
        out.push('-');
    }
    if (-6..21).contains(&exp) {
        if exp < 0 {
            out.push_str("0.");
            out.extend(std::iter::repeat_n('0', (-exp - 1) as usize));
            out.push_str(&digits_str);
        } else {
            let int_len = exp as usize + 1;
            if digits_str.len() <= int_len {
                out.push_str(&digits_str);
                out.extend(std::iter::repeat_n('0', int_len - digits_str.len()));
            } else {
                out.push_str(&digits_str[..int_len]);
                out.push('.');
                out.push_str(&digits_str[int_len..]);
            }
        }
    } else {
        out.push_str(&digits_str[..1]);
        if digits_str.len() > 1 {
            out.push('.');
            out.push_str(&digits_str[1..]);
        }
        out.push_str(&format!("e{exp}"));
    }
    Some(out)
}
