//! Normalized heights `(A / M)^(2^-k)`, the two evaluations of the extremal
//! family's lower bound, the limit constant `prod_j (4j - 2)^(-2^(-j-1))`, and an
//! exhaustive small-tuple search.
//!
//! All ratios of large integers are formed in the logarithmic domain from exact
//! integers; nothing is converted to a machine float before the final `exp`.

use std::cmp::Ordering;

use num_bigint::BigUint;
use num_traits::Zero;
use rayon::prelude::*;

use crate::construction::bpv_family;
use crate::error::{Error, Result};
use crate::factors::DEFAULT_SUBSET_CAP;
use crate::poly::{expand, ExpandOptions, IEPolynomial, DEFAULT_MEMORY_CAP};
use crate::real::{HighPrecision, Real, DEFAULT_MANTISSA_BITS};
use crate::tuple::{coprime_tuples, CoprimeTuple};

/// Approximate value of the limit constant, used for report annotation.
pub const LIMIT_CONSTANT_APPROX: f64 = 0.487;
/// Published upper bound on the supremum constant, used for report annotation.
pub const SUPREMUM_UPPER_BOUND: f64 = 0.9541;

/// Tolerance for the two evaluation routes of [`proof_chain_value`].
pub const CHAIN_RELATIVE_TOLERANCE: f64 = 1e-9;

/// Numerators above this many bits are handled through `E ln r` rather than
/// materialized as integers in [`proof_chain_value`].
pub const CHAIN_EXACT_BITS: u128 = 1 << 22;

/// Exponent of `q_j` (1-based) in the normalizer for a tuple of size `k`.
fn normalizer_exponent(k: usize, j: usize) -> u64 {
    (1u64 << (k - j - 1)) - 1
}

/// `M = prod_{j=1}^{k-2} q_j^(2^(k-j-1) - 1)`; 1 for `k <= 2`.
pub fn m_rho(tuple: &CoprimeTuple) -> BigUint {
    let k = tuple.k();
    assert!(k <= 64, "normalizer exponent overflows for k = {k}");
    (1..=k.saturating_sub(2))
        .map(|j| {
            num_traits::pow(
                tuple.qs()[j - 1].clone(),
                normalizer_exponent(k, j) as usize,
            )
        })
        .product()
}

/// `ln M`, without materializing `M`.
pub fn ln_m_rho(tuple: &CoprimeTuple, hp: &mut HighPrecision) -> Real {
    let k = tuple.k();
    let mut acc = hp.from_u64(0);
    for j in 1..=k.saturating_sub(2) {
        let lq = hp.ln_uint(&tuple.qs()[j - 1]);
        // (2^e - 1) ln q = 2^e ln q - ln q, both exact up to rounding of ln q
        let e = (k - j - 1) as i64;
        let term = hp.sub(&hp.scale2(&lq, e), &lq);
        acc = hp.add(&acc, &term);
    }
    acc
}

/// Exact check of `m M = q_k prod_{j=1}^{k-1} q_j^(2^(k-j-1))`.
pub fn chain_identity_holds(tuple: &CoprimeTuple) -> bool {
    let k = tuple.k();
    let qs = tuple.qs();
    let lhs = tuple.m() * m_rho(tuple);
    let rhs: BigUint = (1..k)
        .map(|j| num_traits::pow(qs[j - 1].clone(), 1usize << (k - j - 1)))
        .product::<BigUint>()
        * &qs[k - 1];
    lhs == rhs
}

/// `(a / m)^(2^-k)` evaluated as `exp(2^-k (ln a - ln m))`.
pub fn normalized_ratio(
    a: &BigUint,
    m: &BigUint,
    k: usize,
    hp: &mut HighPrecision,
) -> Result<Real> {
    if a.is_zero() || m.is_zero() || k == 0 {
        return Err(Error::InvalidParameter(format!(
            "normalized ratio needs A >= 1, M >= 1, k >= 1 (got {a}, {m}, {k})"
        )));
    }
    let la = hp.ln_uint(a);
    let lm = hp.ln_uint(m);
    Ok(ratio_from_logs(&la, &lm, k, hp))
}

fn ratio_from_logs(ln_a: &Real, ln_m: &Real, k: usize, hp: &mut HighPrecision) -> Real {
    let diff = hp.sub(ln_a, ln_m);
    let scaled = hp.scale2(&diff, -(k as i64));
    hp.exp(&scaled)
}

#[derive(Debug, Clone)]
pub struct HeightReport {
    pub tuple: CoprimeTuple,
    /// `A`, the largest coefficient magnitude.
    pub height: BigUint,
    /// `M`
    pub normalizer: BigUint,
    pub degree: usize,
    /// `(A / M)^(2^-k)`
    pub normalized_ratio: Real,
}

impl HeightReport {
    pub fn new(tuple: &CoprimeTuple, poly: &IEPolynomial, hp: &mut HighPrecision) -> Result<Self> {
        let height = poly.height();
        let normalizer = m_rho(tuple);
        let normalized_ratio = normalized_ratio(&height, &normalizer, tuple.k(), hp)?;
        Ok(HeightReport {
            tuple: tuple.clone(),
            height,
            normalizer,
            degree: poly.degree(),
            normalized_ratio,
        })
    }
}

/// Both evaluations of `((r^(2^(k-1)) / m) / M)^(2^-k)` for a constructed family.
#[derive(Debug, Clone)]
pub struct ProofChain {
    /// From logarithms of the integers `r^(2^(k-1))`, `m` and `M`.
    pub direct: Real,
    /// From `(r/q_k) prod_{j<k} (r/q_j)^(2^(k-j-1))`, raised to `2^-k`.
    pub product: Real,
    pub relative_gap: f64,
    /// Whether route `direct` materialized `r^(2^(k-1))` and `M` as integers.
    pub exact_integers: bool,
}

impl ProofChain {
    pub fn value(&self) -> &Real {
        &self.direct
    }
}

pub fn proof_chain_value(n: &BigUint, k: usize, hp: &mut HighPrecision) -> Result<ProofChain> {
    let family = bpv_family(n, k)?;
    let tuple = &family.tuple;
    let qs = tuple.qs();
    let r = &family.r;

    let normalizer_bits: u128 = (1..=k.saturating_sub(2))
        .map(|j| qs[j - 1].bits() as u128 * normalizer_exponent(k, j) as u128)
        .sum();
    let exact_integers = family.lemma_bound.numerator_bits() <= CHAIN_EXACT_BITS
        && normalizer_bits <= CHAIN_EXACT_BITS;

    let ln_num = match family.lemma_bound.numerator(CHAIN_EXACT_BITS as u64) {
        Some(num) if exact_integers => hp.ln_uint(&num),
        _ => {
            let lr = hp.ln_uint(r);
            hp.scale2(&lr, k as i64 - 1)
        }
    };
    let ln_m = hp.ln_uint(tuple.m());
    let ln_norm = if exact_integers {
        hp.ln_uint(&m_rho(tuple))
    } else {
        ln_m_rho(tuple, hp)
    };
    let ln_bound = hp.sub(&ln_num, &ln_m);
    let direct = ratio_from_logs(&ln_bound, &ln_norm, k, hp);

    let lr = hp.ln_uint(r);
    let last = hp.ln_uint(&qs[k - 1]);
    let mut total = hp.sub(&lr, &last);
    for j in 1..k {
        let lq = hp.ln_uint(&qs[j - 1]);
        let term = hp.scale2(&hp.sub(&lr, &lq), (k - j - 1) as i64);
        total = hp.add(&total, &term);
    }
    let scaled = hp.scale2(&total, -(k as i64));
    let product = hp.exp(&scaled);

    let gap = hp.div(&hp.sub(&direct, &product).abs(), &direct).to_f64();
    if gap.is_nan() || gap > CHAIN_RELATIVE_TOLERANCE {
        return Err(Error::IdentityMismatch {
            direct: direct.to_f64(),
            product: product.to_f64(),
        });
    }
    Ok(ProofChain {
        direct,
        product,
        relative_gap: gap,
        exact_integers,
    })
}

#[derive(Debug, Clone)]
pub struct ConstantResult {
    pub value: Real,
    pub terms_used: usize,
    /// Rigorous bound on `|value - limit|`, covering the truncated tail and rounding.
    pub error_bound: Real,
}

/// Upper bound for `sum_{j > terms} 2^(-j-1) ln(4j - 2)`.
///
/// Writing `j = T + i` and `ln(4j - 2) = ln(4T + 2) + ln(1 + 4(i - 1)/(4T + 2))`,
/// the second logarithm is at most `4(i - 1)/(4T + 2)`. Summing against
/// `2^(-T-1-i)` with `sum 2^-i = 1` and `sum (i - 1) 2^-i = 1` gives
/// `2^(-T-1) (ln(4T + 2) + 4/(4T + 2))`, which is below `2^(-T-1) (ln(4T + 2) + 2)`.
/// Rounded upwards.
pub fn tail_majorant(terms: usize, hp: &mut HighPrecision) -> Real {
    let arg = hp.from_u64(4 * terms as u64 + 2);
    let l = hp.ln_up(&arg);
    let s = hp.add_up(&l, &hp.from_u64(2));
    hp.scale2(&s, -(terms as i64) - 1)
}

/// `sum_{j=from+1}^{to} 2^(-j-1) ln(4j - 2)`, summed directly.
pub fn tail_sum(from: usize, to: usize, hp: &mut HighPrecision) -> Real {
    let mut acc = hp.from_u64(0);
    for j in from + 1..=to {
        let t = hp.ln_u64(4 * j as u64 - 2);
        acc = hp.add(&acc, &hp.scale2(&t, -(j as i64) - 1));
    }
    acc
}

/// Partial product `prod_{j=1}^{terms} (4j - 2)^(-2^(-j-1))` with an error bar for the
/// full infinite product.
pub fn limit_constant(terms: usize, mantissa_bits: usize) -> Result<ConstantResult> {
    if terms == 0 {
        return Err(Error::InvalidParameter("terms must be at least 1".into()));
    }
    let mut hp = HighPrecision::new(mantissa_bits)?;
    let sum = tail_sum(0, terms, &mut hp);
    let value = hp.exp(&sum.neg());

    // |value - c| <= value (1 - e^-tail) + rounding <= value (tail + (8T + 16) 2^-p).
    // Each of the T logarithms, T additions and the final exp contributes at most one
    // relative ulp; the factor 8 leaves room for the error propagated through exp.
    let tail = tail_majorant(terms, &mut hp);
    let rounding = hp.scale2(&hp.from_u64(8 * terms as u64 + 16), -(mantissa_bits as i64));
    let rel = hp.add_up(&tail, &rounding);
    let error_bound = hp.mul_up(&value, &rel);
    Ok(ConstantResult {
        value,
        terms_used: terms,
        error_bound,
    })
}

#[derive(Debug, Clone, Copy)]
pub struct SearchOptions {
    pub memory_cap: usize,
    pub subset_cap: usize,
    pub mantissa_bits: usize,
    /// Worker threads; 0 picks the rayon default.
    pub jobs: usize,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            memory_cap: DEFAULT_MEMORY_CAP,
            subset_cap: DEFAULT_SUBSET_CAP,
            mantissa_bits: DEFAULT_MANTISSA_BITS,
            jobs: 0,
        }
    }
}

/// Finite-sample normalized heights over every tuple in range, best first.
///
/// This is a statistic of the enumerated set only; it says nothing about the limit.
#[derive(Debug, Clone)]
pub struct SearchReport {
    pub k: usize,
    pub m_cap: u64,
    pub expand_cap: usize,
    pub enumerated: usize,
    /// Tuples left out because their degree exceeds `expand_cap`.
    pub skipped: usize,
    pub entries: Vec<HeightReport>,
}

pub fn search_max_ratio(
    m_cap: u64,
    k: usize,
    expand_cap: usize,
    opts: &SearchOptions,
) -> Result<SearchReport> {
    if k == 0 {
        return Err(Error::InvalidParameter("k must be at least 1".into()));
    }
    if k > opts.subset_cap {
        return Err(Error::CapExceeded(format!(
            "k = {k} exceeds the subset cap {}",
            opts.subset_cap
        )));
    }
    if expand_cap >= opts.memory_cap {
        return Err(Error::CapExceeded(format!(
            "expand cap {expand_cap} needs more than the memory cap of {} coefficients",
            opts.memory_cap
        )));
    }
    HighPrecision::new(opts.mantissa_bits)?;

    let all = coprime_tuples(k, m_cap);
    let enumerated = all.len();
    let tuples: Vec<CoprimeTuple> = all
        .iter()
        .map(|v| CoprimeTuple::from_u64s(v).expect("enumerator yields valid tuples"))
        .filter(|t| t.degree() <= BigUint::from(expand_cap))
        .collect();
    let skipped = enumerated - tuples.len();

    let expand_opts = ExpandOptions {
        memory_cap: opts.memory_cap,
        subset_cap: opts.subset_cap,
        ..Default::default()
    };
    let evaluate = |t: &CoprimeTuple| -> Result<HeightReport> {
        let mut hp = HighPrecision::new(opts.mantissa_bits)?;
        let poly = expand(t, &expand_opts)?;
        HeightReport::new(t, &poly, &mut hp)
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(opts.jobs)
        .build()
        .map_err(|e| Error::InvalidParameter(e.to_string()))?;
    let mut entries =
        pool.install(|| tuples.par_iter().map(evaluate).collect::<Result<Vec<_>>>())?;

    entries.sort_by(|a, b| {
        b.normalized_ratio
            .partial_cmp(&a.normalized_ratio)
            .unwrap_or(Ordering::Equal)
            .then_with(|| a.tuple.qs().cmp(b.tuple.qs()))
    });
    Ok(SearchReport {
        k,
        m_cap,
        expand_cap,
        enumerated,
        skipped,
        entries,
    })
}

impl SearchReport {
    /// Entries sharing the best ratio.
    pub fn leaders(&self) -> &[HeightReport] {
        let Some(first) = self.entries.first() else {
            return &[];
        };
        let n = self
            .entries
            .iter()
            .take_while(|e| e.normalized_ratio == first.normalized_ratio)
            .count();
        &self.entries[..n]
    }
}
