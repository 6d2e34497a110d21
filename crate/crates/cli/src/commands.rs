use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;

use iepoly::analysis::{
    limit_constant, proof_chain_value, search_max_ratio, HeightReport, SearchOptions,
    LIMIT_CONSTANT_APPROX, SUPREMUM_UPPER_BOUND,
};
use iepoly::construction::{
    bpv_family, check_congruence, lemma_lower_bound, Branch, LemmaBound, DEFAULT_EXACT_BITS,
};
use iepoly::oracle::oracle_expand;
use iepoly::real::HighPrecision;
use iepoly::tuple::coprime_tuples;
use iepoly::{expand, CoprimeTuple, Error, ErrorClass, IEPolynomial};
use num_bigint::{BigInt, BigUint};
use serde::Serialize;

use crate::config::RunConfig;

/// Coefficient lists longer than this need `--force-coeffs` or `--out`.
pub const COEFF_DUMP_LIMIT: usize = 10_000;

/// Significant digits of decimal strings for high-precision values.
const DECIMAL_DIGITS: usize = 30;

#[derive(Debug)]
pub enum Failure {
    Invalid(String),
    Capacity(String),
    Verification(String),
}

impl Failure {
    pub fn exit_code(&self) -> u8 {
        match self {
            Failure::Verification(_) => 1,
            Failure::Invalid(_) => 2,
            Failure::Capacity(_) => 3,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            Failure::Invalid(m) | Failure::Capacity(m) | Failure::Verification(m) => m,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let msg = e.to_string();
        match e.class() {
            ErrorClass::InvalidInput => Failure::Invalid(msg),
            ErrorClass::Capacity => Failure::Capacity(msg),
            ErrorClass::Verification => Failure::Verification(msg),
        }
    }
}

/// A rendered report plus whether every checked predicate held.
pub struct Outcome {
    pub report: serde_json::Value,
    pub verified: bool,
}

impl Outcome {
    fn ok<T: Serialize>(report: &T) -> Self {
        Self::checked(report, true)
    }

    fn checked<T: Serialize>(report: &T, verified: bool) -> Self {
        Outcome {
            report: serde_json::to_value(report).expect("reports serialize"),
            verified,
        }
    }
}

pub fn parse_int_list(s: &str) -> Result<Vec<BigInt>, Failure> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.parse::<BigInt>()
                .map_err(|_| Failure::Invalid(format!("not an integer: {t:?}")))
        })
        .collect()
}

pub fn parse_positive(s: &str, name: &str) -> Result<BigUint, Failure> {
    match s.trim().parse::<BigUint>() {
        Ok(v) if v > BigUint::ZERO => Ok(v),
        _ => Err(Failure::Invalid(format!(
            "{name} must be a positive integer, got {s:?}"
        ))),
    }
}

fn strings<T: ToString>(v: &[T]) -> Vec<String> {
    v.iter().map(ToString::to_string).collect()
}

#[derive(Serialize)]
struct HeightJson {
    tuple: Vec<String>,
    k: usize,
    m: String,
    degree: usize,
    height: String,
    normalizer: String,
    normalized_ratio: f64,
}

impl From<&HeightReport> for HeightJson {
    fn from(r: &HeightReport) -> Self {
        HeightJson {
            tuple: strings(r.tuple.qs()),
            k: r.tuple.k(),
            m: r.tuple.m().to_string(),
            degree: r.degree,
            height: r.height.to_string(),
            normalizer: r.normalizer.to_string(),
            normalized_ratio: r.normalized_ratio.to_f64(),
        }
    }
}

#[derive(Serialize)]
struct CoefficientJson {
    index: usize,
    value: String,
}

#[derive(Serialize)]
struct ComputeJson {
    #[serde(flatten)]
    height: HeightJson,
    palindromic: bool,
    value_at_one: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    coefficient: Option<CoefficientJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    coefficients: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    coefficients_file: Option<String>,
    #[serde(skip_serializing_if = "std::ops::Not::not")]
    coefficients_omitted: bool,
}

pub struct ComputeArgs {
    pub q: String,
    pub height_only: bool,
    pub coeff: Option<usize>,
    pub half_degree: bool,
    pub force_coeffs: bool,
    pub out: Option<PathBuf>,
}

pub fn compute(cfg: &RunConfig, args: &ComputeArgs) -> Result<Outcome, Failure> {
    let tuple = CoprimeTuple::validate(&parse_int_list(&args.q)?)?;
    let poly = expand(&tuple, &cfg.expand_options(args.half_degree))?;
    let mut hp = HighPrecision::new(cfg.mantissa_bits)?;
    let report = HeightReport::new(&tuple, &poly, &mut hp)?;

    let coefficients_file = match &args.out {
        Some(path) => {
            write_coefficients(path, &poly)
                .map_err(|e| Failure::Invalid(format!("cannot write {}: {e}", path.display())))?;
            Some(path.display().to_string())
        }
        None => None,
    };
    let wants_list = !args.height_only && coefficients_file.is_none();
    let too_long = poly.len() > COEFF_DUMP_LIMIT && !args.force_coeffs;
    let coefficients =
        (wants_list && !too_long).then(|| poly.iter().map(|c| c.to_string()).collect());
    if wants_list && too_long {
        eprintln!(
            "note: {} coefficients omitted; pass --force-coeffs or --out FILE",
            poly.len()
        );
    }
    let json = ComputeJson {
        height: HeightJson::from(&report),
        palindromic: poly.is_palindromic(),
        value_at_one: poly.eval_at_one().to_string(),
        coefficient: args.coeff.map(|index| CoefficientJson {
            index,
            value: poly.coeff(index).to_string(),
        }),
        coefficients,
        coefficients_file,
        coefficients_omitted: wants_list && too_long,
    };
    Ok(Outcome::ok(&json))
}

/// One decimal integer per line, index ascending.
pub fn write_coefficients(path: &PathBuf, poly: &IEPolynomial) -> std::io::Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    for c in poly.iter() {
        writeln!(w, "{c}")?;
    }
    w.flush()
}

#[derive(Serialize)]
struct ExpandedJson {
    #[serde(flatten)]
    height: HeightJson,
    height_at_least_floor: Option<bool>,
}

#[derive(Serialize)]
struct ConstructJson {
    #[serde(rename = "N")]
    n: String,
    k: usize,
    r: String,
    q: Vec<String>,
    m: String,
    degree: String,
    q1_exceeds_n: bool,
    congruence_branch: String,
    lemma_bound: String,
    lemma_bound_ln: f64,
    height_floor: Option<String>,
    proof_chain_value: f64,
    proof_chain_product_route: f64,
    proof_chain_relative_gap: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    expanded: Option<ExpandedJson>,
}

fn floor_string(bound: &LemmaBound) -> Option<String> {
    bound
        .height_floor(DEFAULT_EXACT_BITS)
        .map(|f| f.to_string())
}

pub fn construct(cfg: &RunConfig, n: &str, k: usize, do_expand: bool) -> Result<Outcome, Failure> {
    let n = parse_positive(n, "N")?;
    let family = bpv_family(&n, k)?;
    let mut hp = HighPrecision::new(cfg.mantissa_bits)?;
    let chain = proof_chain_value(&n, k, &mut hp)?;
    let all_plus = check_congruence(&family.tuple, &family.r)?
        .entries
        .iter()
        .all(|e| e.branch == Some(Branch::Plus));

    let mut verified = family.check_structure() && all_plus;
    let expanded = if do_expand {
        let poly = expand(&family.tuple, &cfg.expand_options(false))?;
        let report = HeightReport::new(&family.tuple, &poly, &mut hp)?;
        let meets = family.lemma_bound.is_satisfied_by(&report.height);
        verified &= meets;
        Some(ExpandedJson {
            height: HeightJson::from(&report),
            height_at_least_floor: Some(meets),
        })
    } else {
        None
    };

    let json = ConstructJson {
        n: n.to_string(),
        k,
        r: family.r.to_string(),
        q: strings(family.tuple.qs()),
        m: family.tuple.m().to_string(),
        degree: family.tuple.degree().to_string(),
        q1_exceeds_n: family.tuple.qs()[0] > n,
        congruence_branch: if all_plus {
            Branch::Plus.to_string()
        } else {
            "mixed".into()
        },
        lemma_bound: family.lemma_bound.render(DEFAULT_EXACT_BITS),
        lemma_bound_ln: family.lemma_bound.ln(&mut hp).to_f64(),
        height_floor: floor_string(&family.lemma_bound),
        proof_chain_value: chain.direct.to_f64(),
        proof_chain_product_route: chain.product.to_f64(),
        proof_chain_relative_gap: chain.relative_gap,
        expanded,
    };
    Ok(Outcome::checked(&json, verified))
}

#[derive(Serialize)]
struct ConstantJson {
    terms: usize,
    mantissa_bits: usize,
    value: f64,
    value_decimal: String,
    error_bound: f64,
    reference_value: f64,
}

pub fn constant(cfg: &RunConfig, terms: usize) -> Result<Outcome, Failure> {
    let c = limit_constant(terms, cfg.mantissa_bits)?;
    Ok(Outcome::ok(&ConstantJson {
        terms: c.terms_used,
        mantissa_bits: cfg.mantissa_bits,
        value: c.value.to_f64(),
        value_decimal: c.value.to_decimal(DECIMAL_DIGITS),
        error_bound: c.error_bound.to_f64(),
        reference_value: LIMIT_CONSTANT_APPROX,
    }))
}

#[derive(Serialize)]
struct CongruenceJson {
    q: String,
    residue: String,
    branch: Option<String>,
    holds: bool,
}

#[derive(Serialize)]
struct VerifyJson {
    q: Vec<String>,
    r: String,
    modulus: String,
    congruences: Vec<CongruenceJson>,
    congruence_holds: bool,
    lemma_bound: Option<String>,
    height_floor: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    measured_height: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    height_at_least_floor: Option<bool>,
}

pub fn verify(cfg: &RunConfig, q: &str, r: &str, do_expand: bool) -> Result<Outcome, Failure> {
    let tuple = CoprimeTuple::validate(&parse_int_list(q)?)?;
    let r = parse_positive(r, "r")?;
    let report = check_congruence(&tuple, &r)?;
    let holds = report.passes();
    let bound = if holds {
        Some(lemma_lower_bound(&tuple, &r)?)
    } else {
        None
    };

    let (measured_height, meets) = match (&bound, do_expand) {
        (Some(b), true) => {
            let poly = expand(&tuple, &cfg.expand_options(false))?;
            let h = poly.height();
            (Some(h.to_string()), Some(b.is_satisfied_by(&h)))
        }
        _ => (None, None),
    };
    let json = VerifyJson {
        q: strings(tuple.qs()),
        r: r.to_string(),
        modulus: report.modulus.to_string(),
        congruences: report
            .entries
            .iter()
            .map(|e| CongruenceJson {
                q: e.q.to_string(),
                residue: e.residue.to_string(),
                branch: e.branch.map(|b| b.to_string()),
                holds: e.branch.is_some(),
            })
            .collect(),
        congruence_holds: holds,
        lemma_bound: bound.as_ref().map(|b| b.render(DEFAULT_EXACT_BITS)),
        height_floor: bound.as_ref().and_then(floor_string),
        measured_height,
        height_at_least_floor: meets,
    };
    Ok(Outcome::checked(&json, holds && meets != Some(false)))
}

#[derive(Serialize)]
struct RankedJson {
    rank: usize,
    #[serde(flatten)]
    height: HeightJson,
}

#[derive(Serialize)]
struct SearchJson {
    k: usize,
    m_cap: u64,
    expand_cap: usize,
    statistic: &'static str,
    reference_bracket: [f64; 2],
    enumerated: usize,
    skipped_over_expand_cap: usize,
    entries_total: usize,
    entries: Vec<RankedJson>,
}

pub fn search(
    cfg: &RunConfig,
    k: usize,
    m_cap: u64,
    expand_cap: usize,
    top: usize,
    jobs: usize,
) -> Result<Outcome, Failure> {
    let opts = SearchOptions {
        memory_cap: cfg.memory_cap_coeffs,
        subset_cap: cfg.subset_cap_k,
        mantissa_bits: cfg.mantissa_bits,
        jobs,
    };
    let rep = search_max_ratio(m_cap, k, expand_cap, &opts)?;
    let json = SearchJson {
        k,
        m_cap,
        expand_cap,
        statistic: "finite-sample ranking of the enumerated tuples; not an estimate of the limiting constant",
        reference_bracket: [LIMIT_CONSTANT_APPROX, SUPREMUM_UPPER_BOUND],
        enumerated: rep.enumerated,
        skipped_over_expand_cap: rep.skipped,
        entries_total: rep.entries.len(),
        entries: rep
            .entries
            .iter()
            .take(top)
            .enumerate()
            .map(|(i, e)| RankedJson {
                rank: i + 1,
                height: HeightJson::from(e),
            })
            .collect(),
    };
    Ok(Outcome::ok(&json))
}

#[derive(Serialize)]
struct OracleCheckJson {
    m_cap: u64,
    k_max: usize,
    tuples_checked: usize,
    mismatches: usize,
    mismatched: Vec<Vec<u64>>,
    summary: String,
}

pub fn oracle_check(cfg: &RunConfig, m_cap: u64, k_max: usize) -> Result<Outcome, Failure> {
    if m_cap > cfg.oracle_cap_m {
        return Err(Error::OracleCapExceeded {
            m: BigUint::from(m_cap),
            cap: cfg.oracle_cap_m,
        }
        .into());
    }
    if k_max == 0 || k_max > cfg.subset_cap_k {
        return Err(Failure::Invalid(format!(
            "k-max must lie in 1..={}, got {k_max}",
            cfg.subset_cap_k
        )));
    }
    let opts = cfg.expand_options(false);
    let mut checked = 0;
    let mut mismatched = Vec::new();
    for k in 1..=k_max {
        for v in coprime_tuples(k, m_cap) {
            let tuple = CoprimeTuple::from_u64s(&v)?;
            let fast = expand(&tuple, &opts)?;
            let agree = match oracle_expand(&tuple, cfg.oracle_cap_m) {
                Ok(slow) => slow == fast,
                Err(Error::NonzeroRemainder) => false,
                Err(e) => return Err(e.into()),
            };
            checked += 1;
            if !agree {
                mismatched.push(v);
            }
        }
    }
    let json = OracleCheckJson {
        m_cap,
        k_max,
        tuples_checked: checked,
        mismatches: mismatched.len(),
        summary: format!("{checked} tuples checked, {} mismatches", mismatched.len()),
        mismatched,
    };
    let ok = json.mismatches == 0;
    Ok(Outcome::checked(&json, ok))
}
