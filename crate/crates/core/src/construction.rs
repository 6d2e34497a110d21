//! Extremal families `q_j = (4j - 2) r + 1` with `r = N k!`, and the congruence
//! lower bound `A >= r^(2^(k-1)) / m` for tuples with `q_j = 2r +- 1 (mod 4r)`.

use std::fmt;

use num_bigint::BigUint;
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::real::{HighPrecision, Real};
use crate::tuple::CoprimeTuple;

/// Largest `k` accepted by [`bpv_family`]; `2^(k-1)` must fit in a `u64` exponent.
pub const MAX_FAMILY_K: usize = 64;

/// Exact-integer materialization limit (in bits of the numerator) used by default.
pub const DEFAULT_EXACT_BITS: u64 = 1 << 20;

/// The exact rational `r^(2^(k-1)) / m`.
///
/// Kept in factored form because the numerator outgrows memory long before the
/// construction does (`k = 25` already needs about 1.4 Gbit). Use
/// [`LemmaBound::exact`] to materialize it when it is small enough.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LemmaBound {
    base: BigUint,
    k: usize,
    denominator: BigUint,
}

impl LemmaBound {
    fn new(base: BigUint, k: usize, denominator: BigUint) -> Self {
        LemmaBound {
            base,
            k,
            denominator,
        }
    }

    pub fn base(&self) -> &BigUint {
        &self.base
    }

    /// `2^(k-1)`.
    pub fn exponent(&self) -> u64 {
        1u64 << (self.k - 1)
    }

    pub fn denominator(&self) -> &BigUint {
        &self.denominator
    }

    /// Upper estimate of the numerator's bit length.
    pub fn numerator_bits(&self) -> u128 {
        self.exponent() as u128 * self.base.bits() as u128
    }

    pub fn numerator(&self, max_bits: u64) -> Option<BigUint> {
        if self.numerator_bits() > max_bits as u128 {
            return None;
        }
        Some(num_traits::pow(self.base.clone(), self.exponent() as usize))
    }

    /// The reduced fraction, if the numerator has at most `max_bits` bits.
    pub fn exact(&self, max_bits: u64) -> Option<Ratio<BigUint>> {
        self.numerator(max_bits)
            .map(|n| Ratio::new(n, self.denominator.clone()))
    }

    /// `ceil(r^(2^(k-1)) / m)`: the integer height floor implied by the bound.
    pub fn height_floor(&self, max_bits: u64) -> Option<BigUint> {
        let n = self.numerator(max_bits)?;
        let (q, rem) = n.div_rem(&self.denominator);
        Some(if rem.is_zero() { q } else { q + 1u32 })
    }

    /// Natural logarithm, computed from the factored form.
    pub fn ln(&self, hp: &mut HighPrecision) -> Real {
        let lb = hp.ln_uint(&self.base);
        let num = hp.scale2(&lb, self.k as i64 - 1);
        let den = hp.ln_uint(&self.denominator);
        hp.sub(&num, &den)
    }

    /// `num/den` when the numerator fits in `max_bits`, else `base^exponent/den`.
    pub fn render(&self, max_bits: u64) -> String {
        match self.exact(max_bits) {
            Some(r) => format!("{}/{}", r.numer(), r.denom()),
            None => format!("{}^{}/{}", self.base, self.exponent(), self.denominator),
        }
    }

    /// Whether the bound is at most the given integer height.
    pub fn is_satisfied_by(&self, height: &BigUint) -> bool {
        // r^E / m <= A  <=>  r^E <= A m; compare bit lengths before materializing.
        let rhs = height * &self.denominator;
        if self.numerator_bits() > rhs.bits() as u128 + self.exponent() as u128 {
            return false;
        }
        match self.numerator(u64::MAX) {
            Some(n) => n <= rhs,
            None => false,
        }
    }
}

impl fmt::Display for LemmaBound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(DEFAULT_EXACT_BITS))
    }
}

/// One member of the extremal family.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BpvFamily {
    pub n: BigUint,
    pub k: usize,
    /// `N k!`
    pub r: BigUint,
    pub tuple: CoprimeTuple,
    pub lemma_bound: LemmaBound,
}

pub fn bpv_family(n: &BigUint, k: usize) -> Result<BpvFamily> {
    if n.is_zero() {
        return Err(Error::InvalidParameter("N must be at least 1".into()));
    }
    if k == 0 || k > MAX_FAMILY_K {
        return Err(Error::InvalidParameter(format!(
            "k must lie in 1..={MAX_FAMILY_K}, got {k}"
        )));
    }
    let factorial: BigUint = (1..=k as u64).product();
    let r = n * factorial;
    let qs = (1..=k as u64).map(|j| (4 * j - 2) * &r + 1u32).collect();
    let tuple = CoprimeTuple::new(qs)?;
    let lemma_bound = LemmaBound::new(r.clone(), k, tuple.m().clone());
    Ok(BpvFamily {
        n: n.clone(),
        k,
        r,
        tuple,
        lemma_bound,
    })
}

/// Which side of `2r +- 1 (mod 4r)` an entry falls on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    Minus,
    Plus,
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Branch::Minus => "2r-1",
            Branch::Plus => "2r+1",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CongruenceEntry {
    pub index: usize,
    pub q: BigUint,
    /// `q mod 4r`
    pub residue: BigUint,
    pub branch: Option<Branch>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CongruenceReport {
    pub r: BigUint,
    pub modulus: BigUint,
    pub entries: Vec<CongruenceEntry>,
}

impl CongruenceReport {
    pub fn passes(&self) -> bool {
        self.entries.iter().all(|e| e.branch.is_some())
    }

    pub fn first_failure(&self) -> Option<&CongruenceEntry> {
        self.entries.iter().find(|e| e.branch.is_none())
    }
}

pub fn check_congruence(tuple: &CoprimeTuple, r: &BigUint) -> Result<CongruenceReport> {
    if r.is_zero() {
        return Err(Error::InvalidParameter("r must be at least 1".into()));
    }
    let modulus: BigUint = r << 2u32;
    let plus = (r << 1u32) + 1u32;
    let minus = (r << 1u32) - 1u32;
    let entries = tuple
        .qs()
        .iter()
        .enumerate()
        .map(|(index, q)| {
            let residue = q % &modulus;
            let branch = if residue == plus {
                Some(Branch::Plus)
            } else if residue == minus {
                Some(Branch::Minus)
            } else {
                None
            };
            CongruenceEntry {
                index,
                q: q.clone(),
                residue,
                branch,
            }
        })
        .collect();
    Ok(CongruenceReport {
        r: r.clone(),
        modulus,
        entries,
    })
}

/// The bound `r^(2^(k-1)) / m`, available only under the congruence hypothesis.
pub fn lemma_lower_bound(tuple: &CoprimeTuple, r: &BigUint) -> Result<LemmaBound> {
    let report = check_congruence(tuple, r)?;
    if let Some(bad) = report.first_failure() {
        return Err(Error::CongruenceNotSatisfied {
            index: bad.index,
            q: bad.q.clone(),
            residue: bad.residue.clone(),
            modulus: report.modulus.clone(),
        });
    }
    Ok(LemmaBound::new(r.clone(), tuple.k(), tuple.m().clone()))
}

/// The gcd reduction `(q_i, q_j) = (4(i-j) r, q_j) = 1` for one pair of a family.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EuclidTrace {
    pub i: usize,
    pub j: usize,
    pub r: BigUint,
    pub q_i: BigUint,
    pub q_j: BigUint,
    /// `4 (i - j) r`
    pub difference: BigUint,
    /// `gcd(q_i, q_j)`
    pub gcd_initial: BigUint,
    /// `gcd(4 (i - j) r, q_j)`
    pub gcd_reduced: BigUint,
}

impl EuclidTrace {
    /// Both gcds agree, the difference step is `q_i - q_j`, and the chain ends at 1.
    pub fn holds(&self) -> bool {
        &self.q_i - &self.q_j == self.difference
            && self.gcd_initial == self.gcd_reduced
            && self.gcd_reduced.is_one()
    }
}

/// Runs the gcd chain for entries `i > j` (1-based) of the family `(N, k)`.
pub fn euclid_coprimality_trace(n: &BigUint, k: usize, i: usize, j: usize) -> Result<EuclidTrace> {
    if !(1 <= j && j < i && i <= k) {
        return Err(Error::InvalidParameter(format!(
            "need 1 <= j < i <= k, got i = {i}, j = {j}, k = {k}"
        )));
    }
    let family = bpv_family(n, k)?;
    let q_i = family.tuple.qs()[i - 1].clone();
    let q_j = family.tuple.qs()[j - 1].clone();
    let difference = BigUint::from(4 * (i - j) as u64) * &family.r;
    Ok(EuclidTrace {
        i,
        j,
        gcd_initial: q_i.gcd(&q_j),
        gcd_reduced: difference.gcd(&q_j),
        r: family.r,
        q_i,
        q_j,
        difference,
    })
}

impl BpvFamily {
    /// `q_1 > N` and every entry is `2r + 1 (mod 4r)`.
    pub fn check_structure(&self) -> bool {
        let plus = (&self.r << 1u32) + 1u32;
        let modulus = &self.r << 2u32;
        self.tuple.qs()[0] > self.n && self.tuple.qs().iter().all(|q| q % &modulus == plus)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn u(v: u64) -> BigUint {
        BigUint::from(v)
    }

    fn ratio(n: u64, d: u64) -> Ratio<BigUint> {
        Ratio::new(u(n), u(d))
    }

    #[test]
    fn family_examples() {
        let f = bpv_family(&u(1), 2).unwrap();
        assert_eq!(f.r, u(2));
        assert_eq!(f.tuple.to_u64s().unwrap(), vec![5, 13]);
        assert_eq!(f.lemma_bound.exact(64).unwrap(), ratio(4, 65));

        let f = bpv_family(&u(1), 3).unwrap();
        assert_eq!(f.r, u(6));
        assert_eq!(f.tuple.to_u64s().unwrap(), vec![13, 37, 61]);
        assert_eq!(f.lemma_bound.exact(64).unwrap(), ratio(1296, 29341));

        let f = bpv_family(&u(2), 1).unwrap();
        assert_eq!(f.r, u(2));
        assert_eq!(f.tuple.to_u64s().unwrap(), vec![5]);
        assert_eq!(f.lemma_bound.exact(64).unwrap(), ratio(2, 5));
    }

    #[test]
    fn family_rejects_bad_parameters() {
        assert!(matches!(
            bpv_family(&u(0), 2),
            Err(Error::InvalidParameter(_))
        ));
        assert!(matches!(
            bpv_family(&u(1), 0),
            Err(Error::InvalidParameter(_))
        ));
        assert!(matches!(
            bpv_family(&u(1), 65),
            Err(Error::InvalidParameter(_))
        ));
    }

    #[test]
    fn large_family_stays_symbolic() {
        let f = bpv_family(&u(1), 25).unwrap();
        assert!(f.check_structure());
        assert!(f.lemma_bound.exact(DEFAULT_EXACT_BITS).is_none());
        let s = f.lemma_bound.render(DEFAULT_EXACT_BITS);
        assert!(s.starts_with("15511210043330985984000000^16777216/"), "{s}");
    }

    #[test]
    fn congruence_examples() {
        let t = CoprimeTuple::from_u64s(&[5, 13]).unwrap();
        let rep = check_congruence(&t, &u(2)).unwrap();
        assert!(rep.passes());
        assert!(rep
            .entries
            .iter()
            .all(|e| e.branch == Some(Branch::Plus) && e.residue == u(5)));

        let t = CoprimeTuple::from_u64s(&[49, 51, 149]).unwrap();
        let rep = check_congruence(&t, &u(25)).unwrap();
        assert!(rep.passes());
        let branches: Vec<_> = rep.entries.iter().map(|e| e.branch.unwrap()).collect();
        assert_eq!(branches, vec![Branch::Minus, Branch::Plus, Branch::Minus]);
        assert_eq!(rep.entries[2].residue, u(49));

        let t = CoprimeTuple::from_u64s(&[7]).unwrap();
        let rep = check_congruence(&t, &u(2)).unwrap();
        assert!(!rep.passes());
        assert_eq!(rep.entries[0].residue, u(7));

        assert!(check_congruence(&t, &u(0)).is_err());
    }

    #[test]
    fn lemma_bound_examples() {
        let b = lemma_lower_bound(&CoprimeTuple::from_u64s(&[5, 13]).unwrap(), &u(2)).unwrap();
        assert_eq!(b.exact(64).unwrap(), ratio(4, 65));
        assert_eq!(b.height_floor(64).unwrap(), u(1));
        assert_eq!(b.to_string(), "4/65");

        let b =
            lemma_lower_bound(&CoprimeTuple::from_u64s(&[49, 51, 149]).unwrap(), &u(25)).unwrap();
        assert_eq!(b.exact(64).unwrap(), ratio(390625, 372351));
        assert_eq!(b.height_floor(64).unwrap(), u(2));
        assert!(!b.is_satisfied_by(&u(1)));
        assert!(b.is_satisfied_by(&u(2)));

        assert!(matches!(
            lemma_lower_bound(&CoprimeTuple::from_u64s(&[7]).unwrap(), &u(2)),
            Err(Error::CongruenceNotSatisfied { index: 0, .. })
        ));
    }

    #[test]
    fn floor_of_exact_integer_bound() {
        // r^(2^(k-1)) / m with m | r^E never happens for real instances, but ceil must not overshoot.
        let b = LemmaBound::new(u(6), 2, u(4));
        assert_eq!(b.height_floor(64).unwrap(), u(9));
        let b = LemmaBound::new(u(6), 2, u(5));
        assert_eq!(b.height_floor(64).unwrap(), u(8));
    }

    #[test]
    fn lemma_bound_log() {
        let mut hp = HighPrecision::new(128).unwrap();
        let b =
            lemma_lower_bound(&CoprimeTuple::from_u64s(&[49, 51, 149]).unwrap(), &u(25)).unwrap();
        let want = (390625f64 / 372351f64).ln();
        assert!((b.ln(&mut hp).to_f64() - want).abs() < 1e-14);
    }

    #[test]
    fn euclid_traces() {
        let t = euclid_coprimality_trace(&u(1), 3, 2, 1).unwrap();
        assert_eq!((t.q_i.clone(), t.q_j.clone()), (u(37), u(13)));
        assert_eq!(t.difference, u(24));
        assert!(t.holds());

        let t = euclid_coprimality_trace(&u(1), 2, 2, 1).unwrap();
        assert_eq!(
            (t.q_i.clone(), t.q_j.clone(), t.difference.clone()),
            (u(13), u(5), u(8))
        );
        assert!(t.holds());

        assert!(euclid_coprimality_trace(&u(3), 3, 3, 2).unwrap().holds());
        assert!(euclid_coprimality_trace(&u(3), 3, 2, 2).is_err());
        assert!(euclid_coprimality_trace(&u(3), 3, 4, 1).is_err());
    }

    #[test]
    fn families_are_coprime_and_well_formed() {
        for n in 1..=50u64 {
            for k in 1..=8 {
                let f = bpv_family(&u(n), k).unwrap();
                assert!(f.check_structure(), "N = {n}, k = {k}");
                let rep = check_congruence(&f.tuple, &f.r).unwrap();
                assert!(rep.entries.iter().all(|e| e.branch == Some(Branch::Plus)));
            }
        }
    }
}
