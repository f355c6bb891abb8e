//! Guaranteed isomorphisms `H_*(C_k(M); A) ≅ H_*(C_j(M); A)` in the stable
//! range for closed manifolds, and explicit chains of replication and
//! zigzag moves realising them over `F_p`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::conf_algebra::{Bound, RangeFn};
use crate::degree_calculus::{zigzag, ManifoldDescriptor, ZigzagWitness};
use crate::error::{invalid, Error, Result};
use crate::json;
use crate::padic::{is_prime, prime_free_part, stable_invariant, val_set, val_unchecked, PrimeSet, Valuation};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum CoefficientSpec {
    Integers,
    /// `Z[1/2]`.
    HalfInverted,
    Rationals,
    PrimeField { p: u64 },
    /// `Z_(ℓ)`.
    Localised { primes: PrimeSet },
}

impl CoefficientSpec {
    pub fn prime_field(p: u64) -> Result<Self> {
        if !is_prime(p) {
            return invalid(format!("{p} is not prime"));
        }
        Ok(CoefficientSpec::PrimeField { p })
    }

    /// `Q` for characteristic 0, `F_p` otherwise.
    pub fn of_characteristic(c: u64) -> Result<Self> {
        if c == 0 {
            Ok(CoefficientSpec::Rationals)
        } else {
            Self::prime_field(c)
        }
    }

    /// `Z_(ALL)` is `Z` and `Z_(∅)` is `Q`.
    fn normalised(&self) -> CoefficientSpec {
        match self {
            CoefficientSpec::Localised { primes: PrimeSet::All } => CoefficientSpec::Integers,
            CoefficientSpec::Localised { primes } if primes.is_empty() => CoefficientSpec::Rationals,
            other => other.clone(),
        }
    }
}

impl fmt::Display for CoefficientSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoefficientSpec::Integers => f.write_str("Z"),
            CoefficientSpec::HalfInverted => f.write_str("Z[1/2]"),
            CoefficientSpec::Rationals => f.write_str("Q"),
            CoefficientSpec::PrimeField { p } => write!(f, "F{p}"),
            CoefficientSpec::Localised { primes: PrimeSet::All } => f.write_str("Z_(ALL)"),
            CoefficientSpec::Localised { primes: PrimeSet::Primes(v) } => {
                let parts: Vec<String> = v.iter().map(u64::to_string).collect();
                write!(f, "Z_({})", parts.join(","))
            }
        }
    }
}

/// `Z`, `Z[1/2]`, `Q`, `F<p>`, `Z_(<p>,…)` or `Z_(ALL)`.
impl FromStr for CoefficientSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        match t {
            "Z" => return Ok(CoefficientSpec::Integers),
            "Z[1/2]" => return Ok(CoefficientSpec::HalfInverted),
            "Q" => return Ok(CoefficientSpec::Rationals),
            _ => {}
        }
        if let Some(rest) = t.strip_prefix('F') {
            let p = rest
                .trim_start_matches('_')
                .parse::<u64>()
                .map_err(|_| Error::InvalidArgument(format!("bad field {t:?}")))?;
            return Self::prime_field(p);
        }
        if let Some(inner) = t.strip_prefix("Z_(").and_then(|r| r.strip_suffix(')')) {
            return Ok(CoefficientSpec::Localised { primes: inner.parse()? });
        }
        invalid(format!("unknown coefficients {t:?}"))
    }
}

/// Value of the quantity on which the verdict depends.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "value", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Invariant {
    Constant,
    Parity(u8),
    /// `2k = χ`.
    Centre(bool),
    /// `p | 2k − χ`.
    Divisible(bool),
    Valuation(Valuation),
    LocalValuations(Vec<(u64, Valuation)>),
    /// Odd part of `|2k − χ|`.
    OddPart(#[serde(with = "json::bigint")] BigInt),
    /// `min(k, χ − k)`: identifies `k` with `χ − k`.
    Orbit(#[serde(with = "json::bigint")] BigInt),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum RangeReport {
    StableRange,
    /// `min(λ(k), λ(j))`; `bound` is absent when `μ` has no bound.
    Lambda { bound: Option<i64> },
}

/// A user-supplied stabilisation range and replication factor.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RangeSpec {
    pub mu: Bound,
    pub r: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub iso_guaranteed: bool,
    pub invariant_k: Invariant,
    pub invariant_j: Invariant,
    pub range: RangeReport,
    /// The rule that decided the verdict.
    pub basis: String,
    /// Row of the stable-homology table, when the rule is one of its rows.
    pub line: Option<u8>,
    /// Degree `n−1` on an even sphere over an odd field: a negative verdict there is a real difference.
    pub sharp: bool,
    /// The rational exception at `2k = χ` is involved.
    pub centre_exception: bool,
}

pub fn oracle(m: &ManifoldDescriptor, coeff: &CoefficientSpec, k: &BigInt, j: &BigInt) -> Result<Verdict> {
    oracle_in_range(m, coeff, k, j, None)
}

pub fn oracle_in_range(
    m: &ManifoldDescriptor,
    coeff: &CoefficientSpec,
    k: &BigInt,
    j: &BigInt,
    range: Option<&RangeSpec>,
) -> Result<Verdict> {
    if !m.closed {
        return Err(Error::Unsupported(
            "open manifold: classical stabilisation gives isomorphisms in the stable range".into(),
        ));
    }
    if k.is_negative() || j.is_negative() {
        return invalid("configuration sizes must be non-negative");
    }
    if let CoefficientSpec::PrimeField { p } = coeff {
        if !is_prime(*p) {
            return invalid(format!("{p} is not prime"));
        }
    }
    let coeff = coeff.normalised();
    let ((line, rule), inv_k) = invariant(m, &coeff, k)?;
    let (_, inv_j) = invariant(m, &coeff, j)?;
    let mut iso = inv_k == inv_j;
    let mut centre_exception = false;
    if matches!(inv_k, Invariant::Centre(_)) && (inv_k == Invariant::Centre(true) || inv_j == Invariant::Centre(true)) {
        centre_exception = true;
        iso = k == j;
    }
    let sharp = m.sphere && m.n % 2 == 0 && matches!(coeff, CoefficientSpec::PrimeField { p } if p != 2);
    let range = match range {
        None => RangeReport::StableRange,
        Some(spec) => {
            let lam = RangeFn::Lambda { mu: spec.mu, n: m.n, r: spec.r };
            let at = |x: &BigInt| x.to_i64().and_then(|x| lam.eval(x));
            RangeReport::Lambda { bound: at(k).zip(at(j)).map(|(a, b)| a.min(b)) }
        }
    };
    Ok(Verdict {
        iso_guaranteed: iso,
        invariant_k: inv_k,
        invariant_j: inv_j,
        range,
        basis: rule.to_string(),
        line,
        sharp,
        centre_exception,
    })
}

type Rule = (Option<u8>, &'static str);

fn invariant(m: &ManifoldDescriptor, coeff: &CoefficientSpec, k: &BigInt) -> Result<(Rule, Invariant)> {
    let chi = &m.chi;
    let two_k_chi = BigInt::from(2) * k - chi;
    let parity = Invariant::Parity(if k.is_odd() { 1 } else { 0 });
    let hopf = matches!(m.n, 1 | 3 | 7);
    let line = |l: u8, what: &'static str, inv: Invariant| Ok(((Some(l), what), inv));
    let thm = |what: &'static str, inv: Invariant| Ok(((None, what), inv));

    if m.n % 2 == 1 {
        return match coeff {
            CoefficientSpec::Integers if hopf => thm("integral zigzags, n in {1,3,7}: all k", Invariant::Constant),
            CoefficientSpec::Integers => thm("integral zigzags, odd n: parity of k", parity),
            CoefficientSpec::HalfInverted => thm("2 inverted, odd n: all k", Invariant::Constant),
            CoefficientSpec::Rationals => line(1, "odd n, characteristic not 2: all k", Invariant::Constant),
            CoefficientSpec::PrimeField { p } if *p != 2 => line(1, "odd n, characteristic not 2: all k", Invariant::Constant),
            CoefficientSpec::PrimeField { .. } if hopf => thm("integral zigzags, n in {1,3,7}: all k", Invariant::Constant),
            CoefficientSpec::PrimeField { .. } => line(2, "odd n, characteristic 2: parity of k", parity),
            CoefficientSpec::Localised { primes } if !primes.contains(2) => {
                thm("2 inverted, odd n: all k", Invariant::Constant)
            }
            CoefficientSpec::Localised { .. } if hopf => thm("integral zigzags, n in {1,3,7}: all k", Invariant::Constant),
            CoefficientSpec::Localised { .. } => thm("integral zigzags, odd n: parity of k", parity),
        };
    }

    match coeff {
        CoefficientSpec::Rationals => line(3, "even n, characteristic 0: whether 2k = χ", Invariant::Centre(two_k_chi.is_zero())),
        CoefficientSpec::PrimeField { p: 2 } => {
            let vc = val_unchecked(2, chi);
            let vk = val_unchecked(2, k);
            if vc == Valuation::Finite(1) {
                line(9, "even n, characteristic 2, (χ)_2 = 1: parity of k", parity)
            } else if vc.is_finite() && vc > Valuation::Finite(1) {
                line(8, "even n, characteristic 2: min{(k)_2, (χ)_2}", Invariant::Valuation(vk.min(vc)))
            } else {
                line(7, "even n, characteristic 2: (k)_2", Invariant::Valuation(vk))
            }
        }
        CoefficientSpec::PrimeField { p } => {
            let p = *p;
            let pb = BigInt::from(p);
            let r = chi.mod_floor(&pb);
            if r.is_one() {
                line(6, "even n, χ ≡ 1 mod p: all k", Invariant::Constant)
            } else if !r.is_zero() {
                line(5, "even n, χ ≢ 0 mod p: whether p | 2k − χ", Invariant::Divisible(two_k_chi.mod_floor(&pb).is_zero()))
            } else {
                line(4, "even n, p odd: min{(2k − χ)_p, (χ)_p + 1}", Invariant::Valuation(stable_invariant(chi, p, k)?))
            }
        }
        CoefficientSpec::Integers => {
            let other = chi - k;
            thm("integral, even n: k and χ − k", Invariant::Orbit(k.clone().min(other)))
        }
        CoefficientSpec::HalfInverted => {
            let odd = if two_k_chi.is_zero() { BigInt::zero() } else { prime_free_part(2, &two_k_chi.abs()) };
            thm("2 inverted, even n: odd part of 2k − χ", Invariant::OddPart(odd))
        }
        CoefficientSpec::Localised { primes } => {
            if chi.is_odd() && primes.contains(2) {
                return Err(Error::NotAvailable("χ odd with 2 ∈ ℓ: χ/2 is not in Z_(ℓ)".into()));
            }
            thm("localised at ℓ, even n: ℓ-adic valuation of 2k − χ", Invariant::LocalValuations(val_set(primes, &two_k_chi)?))
        }
    }
}

/// `gcd(r, p) = 1` and `p | (χ − 1)(r − 1)`.
pub fn replication_applicable(chi: &BigInt, p: u64, r: &BigInt) -> Result<bool> {
    if !is_prime(p) {
        return invalid(format!("{p} is not prime"));
    }
    if r < &BigInt::from(2) {
        return invalid("replication factor must be at least 2");
    }
    let pb = BigInt::from(p);
    let coprime = r.gcd(&pb).is_one();
    let divides = ((chi - BigInt::one()) * (r - BigInt::one())).mod_floor(&pb).is_zero();
    Ok(coprime && divides)
}

/// One step of a chain between configuration sizes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ChainStep {
    /// Replication `C_s → C_{rs}`, walked in either direction.
    EMove {
        #[serde(with = "json::bigint")]
        r: BigInt,
        #[serde(with = "json::bigint")]
        from: BigInt,
        #[serde(with = "json::bigint")]
        to: BigInt,
    },
    /// A zigzag from `witness.k` to `witness.j`.
    AMove { witness: ZigzagWitness },
}

impl ChainStep {
    pub fn from(&self) -> &BigInt {
        match self {
            ChainStep::EMove { from, .. } => from,
            ChainStep::AMove { witness } => &witness.k,
        }
    }

    pub fn to(&self) -> &BigInt {
        match self {
            ChainStep::EMove { to, .. } => to,
            ChainStep::AMove { witness } => &witness.j,
        }
    }
}

/// Every link connects, every replication satisfies the arithmetic
/// condition, and every zigzag composes.
pub fn validate_chain(chain: &[ChainStep], chi: &BigInt, p: u64, k: &BigInt, j: &BigInt) -> Result<()> {
    let mut at = k.clone();
    for step in chain {
        if step.from() != &at {
            return invalid(format!("step starts at {} but the chain is at {at}", step.from()));
        }
        match step {
            ChainStep::EMove { r, from, to } => {
                if !replication_applicable(chi, p, r)? {
                    return invalid(format!("replication by {r} does not apply"));
                }
                let fwd = &(r * from) == to;
                let back = &(r * to) == from;
                if !(fwd || back) || !from.is_positive() || !to.is_positive() {
                    return invalid(format!("{from} and {to} are not related by r = {r}"));
                }
            }
            ChainStep::AMove { witness } => {
                if &witness.chi != chi || witness.primes != PrimeSet::singleton(p)? {
                    return invalid("zigzag uses different χ or primes");
                }
                witness.verify()?;
            }
        }
        at = step.to().clone();
    }
    if &at != j {
        return invalid(format!("chain ends at {at}, expected {j}"));
    }
    Ok(())
}

fn a_move(from: &BigInt, to: &BigInt, chi: &BigInt, p: u64) -> Result<ChainStep> {
    let witness = zigzag(from, to, chi, &PrimeSet::singleton(p)?)?
        .ok_or_else(|| Error::InvalidArgument(format!("no zigzag between {from} and {to}")))?;
    Ok(ChainStep::AMove { witness })
}

fn e_moves(a: &BigInt, b: &BigInt, ra: &BigInt, rb: &BigInt, out: &mut Vec<ChainStep>) {
    // a·ra = b·rb; walk a → meeting point → b, dropping identity steps.
    let meet = a * ra;
    if !ra.is_one() {
        out.push(ChainStep::EMove { r: ra.clone(), from: a.clone(), to: meet.clone() });
    }
    if !rb.is_one() {
        out.push(ChainStep::EMove { r: rb.clone(), from: meet, to: b.clone() });
    }
}

/// A chain of replications and zigzags from `k` to `j` over `F_p`, `p` odd,
/// on an even-dimensional closed manifold; absent when the oracle gives no
/// isomorphism.
pub fn witness_chain(m: &ManifoldDescriptor, p: u64, k: &BigInt, j: &BigInt) -> Result<Option<Vec<ChainStep>>> {
    if m.n % 2 == 1 {
        return invalid("witness chains are built for even-dimensional manifolds");
    }
    if p == 2 || !is_prime(p) {
        return invalid(format!("{p} is not an odd prime"));
    }
    if !k.is_positive() || !j.is_positive() {
        return invalid("configuration sizes must be positive");
    }
    let v = oracle(m, &CoefficientSpec::PrimeField { p }, k, j)?;
    if !v.iso_guaranteed {
        return Ok(None);
    }
    let chi = &m.chi;
    let pb = BigInt::from(p);
    let mut chain = Vec::new();
    if k == j {
        return Ok(Some(chain));
    }
    let x = BigInt::from(2) * k - chi;
    let y = BigInt::from(2) * j - chi;
    if val_unchecked(p, &x) == val_unchecked(p, &y) {
        chain.push(a_move(k, j, chi, p)?);
    } else if chi.mod_floor(&pb).is_one() {
        // Every r prime to p replicates; move multiples of p off pZ first.
        // Only one of k, j lies in pZ here; jump from it to kjl + χ ≡ 1 mod p.
        let floor = k.clone().max(j.clone()).max(BigInt::from(2));
        let mut escape = k * j + chi;
        while escape < floor {
            escape += k * j;
        }
        let k1 = if (k % &pb).is_zero() { escape.clone() } else { k.clone() };
        let j1 = if (j % &pb).is_zero() { escape.clone() } else { j.clone() };
        if &k1 != k {
            chain.push(a_move(k, &k1, chi, p)?);
        }
        if k1 != j1 {
            e_moves(&k1, &j1, &j1, &k1, &mut chain);
        }
        if &j1 != j {
            chain.push(a_move(&j1, j, chi, p)?);
        }
    } else {
        // Both valuations exceed (χ)_p, so k and j have the p-adic valuation of χ.
        let kp = prime_free_part(p, k);
        let jp = prime_free_part(p, j);
        let inv = kp.mod_floor(&pb).extended_gcd(&pb).x.mod_floor(&pb);
        let l = if inv.is_zero() { pb.clone() } else { inv };
        let rk = &l * &jp;
        let rj = &l * &kp;
        e_moves(k, j, &rk, &rj, &mut chain);
    }
    validate_chain(&chain, chi, p, k, j)?;
    Ok(Some(chain))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn b(x: i64) -> BigInt {
        BigInt::from(x)
    }

    fn fp(p: u64) -> CoefficientSpec {
        CoefficientSpec::PrimeField { p }
    }

    fn s2() -> ManifoldDescriptor {
        ManifoldDescriptor::sphere(2).unwrap()
    }

    fn iso(m: &ManifoldDescriptor, c: &CoefficientSpec, k: i64, j: i64) -> bool {
        oracle(m, c, &b(k), &b(j)).unwrap().iso_guaranteed
    }

    #[test]
    fn coefficient_parsing() {
        assert_eq!("Z".parse::<CoefficientSpec>().unwrap(), CoefficientSpec::Integers);
        assert_eq!("Z[1/2]".parse::<CoefficientSpec>().unwrap(), CoefficientSpec::HalfInverted);
        assert_eq!("F3".parse::<CoefficientSpec>().unwrap(), fp(3));
        assert_eq!("F_5".parse::<CoefficientSpec>().unwrap(), fp(5));
        assert_eq!(
            "Z_(3,5)".parse::<CoefficientSpec>().unwrap(),
            CoefficientSpec::Localised { primes: PrimeSet::new(vec![3, 5]).unwrap() }
        );
        for bad in ["F4", "R", "Z_(4)", "F"] {
            assert!(bad.parse::<CoefficientSpec>().is_err(), "{bad}");
        }
        for s in ["Z", "Z[1/2]", "Q", "F7", "Z_(2,3)", "Z_(ALL)"] {
            assert_eq!(s.parse::<CoefficientSpec>().unwrap().to_string(), s);
        }
    }

    #[test]
    fn sphere_examples() {
        let v = oracle(&s2(), &fp(3), &b(4), &b(7)).unwrap();
        assert!(v.iso_guaranteed);
        assert_eq!(v.line, Some(5));
        assert_eq!(v.invariant_k, Invariant::Divisible(true));
        assert!(v.sharp);
        assert!(!iso(&s2(), &fp(3), 2, 4));
    }

    #[test]
    fn odd_dimension() {
        let m = ManifoldDescriptor::closed(3, 0).unwrap();
        let v = oracle(&m, &fp(5), &b(10), &b(11)).unwrap();
        assert!(v.iso_guaranteed);
        assert_eq!(v.line, Some(1));
        let m5 = ManifoldDescriptor::closed(5, 0).unwrap();
        assert!(!iso(&m5, &fp(2), 4, 5));
        assert!(iso(&m5, &fp(2), 4, 6));
        assert!(!iso(&m5, &CoefficientSpec::Integers, 4, 5));
        assert!(iso(&m, &CoefficientSpec::Integers, 4, 5));
        assert!(iso(&m5, &CoefficientSpec::HalfInverted, 4, 5));
        assert!(iso(&m5, &CoefficientSpec::Rationals, 4, 5));
        let l3 = CoefficientSpec::Localised { primes: PrimeSet::singleton(3).unwrap() };
        assert!(iso(&m5, &l3, 4, 5));
        let l2 = CoefficientSpec::Localised { primes: PrimeSet::singleton(2).unwrap() };
        assert!(!iso(&m5, &l2, 4, 5));
    }

    #[test]
    fn integral_even() {
        let m = ManifoldDescriptor::closed(2, 2).unwrap();
        assert!(iso(&m, &CoefficientSpec::Integers, 0, 2));
        assert!(iso(&m, &CoefficientSpec::Integers, 5, 5));
        assert!(!iso(&m, &CoefficientSpec::Integers, 5, 4));
        assert!(oracle(&m, &CoefficientSpec::Integers, &b(5), &b(-3)).is_err());
        let m = ManifoldDescriptor::closed(4, 10).unwrap();
        assert!(iso(&m, &CoefficientSpec::Integers, 3, 7));
        assert!(iso(&m, &CoefficientSpec::Localised { primes: PrimeSet::All }, 3, 7));
    }

    #[test]
    fn rational_even_and_centre() {
        let m = ManifoldDescriptor::closed(2, 4).unwrap();
        assert!(iso(&m, &CoefficientSpec::Rationals, 3, 9));
        let v = oracle(&m, &CoefficientSpec::Rationals, &b(2), &b(9)).unwrap();
        assert!(!v.iso_guaranteed && v.centre_exception);
        let v = oracle(&m, &CoefficientSpec::Rationals, &b(2), &b(2)).unwrap();
        assert!(v.iso_guaranteed && v.centre_exception);
        assert!(iso(&m, &CoefficientSpec::Localised { primes: PrimeSet::empty() }, 3, 9));
    }

    #[test]
    fn char_two_even() {
        let m = ManifoldDescriptor::closed(2, 2).unwrap();
        let v = oracle(&m, &fp(2), &b(3), &b(5)).unwrap();
        assert_eq!(v.line, Some(9));
        assert!(v.iso_guaranteed);
        let m = ManifoldDescriptor::closed(2, 4).unwrap();
        assert_eq!(oracle(&m, &fp(2), &b(3), &b(5)).unwrap().line, Some(8));
        assert!(iso(&m, &fp(2), 4, 12));
        assert!(!iso(&m, &fp(2), 2, 4));
        let m = ManifoldDescriptor::new(2, 1, true, false).unwrap();
        assert_eq!(oracle(&m, &fp(2), &b(3), &b(5)).unwrap().line, Some(7));
        assert!(iso(&m, &fp(2), 4, 12));
        assert!(!iso(&m, &fp(2), 4, 8));
    }

    #[test]
    fn odd_char_even_lines() {
        let m = ManifoldDescriptor::closed(4, 7).unwrap();
        assert_eq!(oracle(&m, &fp(3), &b(3), &b(5)).unwrap().line, Some(6));
        let m = ManifoldDescriptor::closed(4, 9).unwrap();
        let v = oracle(&m, &fp(3), &b(3), &b(5)).unwrap();
        assert_eq!(v.line, Some(4));
        assert!(!v.sharp);
    }

    #[test]
    fn localised_even() {
        let m = ManifoldDescriptor::closed(2, 2).unwrap();
        let l = CoefficientSpec::Localised { primes: PrimeSet::singleton(3).unwrap() };
        assert!(iso(&m, &l, 4, 7));
        assert!(!iso(&m, &l, 2, 4));
        let odd = ManifoldDescriptor::new(2, 1, true, false).unwrap();
        let l2 = CoefficientSpec::Localised { primes: PrimeSet::singleton(2).unwrap() };
        assert!(matches!(oracle(&odd, &l2, &b(1), &b(2)), Err(Error::NotAvailable(_))));
        let h = CoefficientSpec::HalfInverted;
        // |2k−2| = 6 and 12 share odd part 3.
        assert!(iso(&m, &h, 4, 7));
        assert!(!iso(&m, &h, 4, 5));
    }

    #[test]
    fn open_rejected() {
        let m = ManifoldDescriptor::new(2, 1, false, true).unwrap();
        assert!(matches!(oracle(&m, &fp(3), &b(1), &b(2)), Err(Error::Unsupported(_))));
    }

    #[test]
    fn range_report() {
        let spec = RangeSpec { mu: Bound::affine(1, 1, 0).unwrap(), r: 2 };
        let v = oracle_in_range(&s2(), &fp(3), &b(4), &b(7), Some(&spec)).unwrap();
        assert_eq!(v.range, RangeReport::Lambda { bound: Some(4) });
        let none = RangeSpec { mu: Bound::NoBound, r: 2 };
        let v = oracle_in_range(&s2(), &fp(3), &b(4), &b(7), Some(&none)).unwrap();
        assert_eq!(v.range, RangeReport::Lambda { bound: None });
    }

    #[test]
    fn replication_examples() {
        assert!(replication_applicable(&b(2), 3, &b(4)).unwrap());
        assert!(!replication_applicable(&b(2), 3, &b(3)).unwrap());
        assert!(replication_applicable(&b(1), 7, &b(2)).unwrap());
        assert!(replication_applicable(&b(1), 7, &b(1)).is_err());
    }

    #[test]
    fn chain_examples() {
        let c = witness_chain(&s2(), 3, &b(4), &b(7)).unwrap().unwrap();
        assert_eq!(c.len(), 1);
        match &c[0] {
            ChainStep::AMove { witness } => assert_eq!(witness.h, b(13)),
            other => panic!("{other:?}"),
        }
        let c = witness_chain(&s2(), 3, &b(4), &b(13)).unwrap().unwrap();
        match &c[..] {
            [ChainStep::AMove { witness }] => assert_eq!(witness.h, b(25)),
            other => panic!("{other:?}"),
        }
        let m = ManifoldDescriptor::closed(2, 1).unwrap();
        let c = witness_chain(&m, 3, &b(2), &b(5)).unwrap().unwrap();
        assert!(c.iter().all(|s| matches!(s, ChainStep::EMove { .. })));
        validate_chain(&c, &b(1), 3, &b(2), &b(5)).unwrap();
        assert_eq!(witness_chain(&s2(), 3, &b(2), &b(4)).unwrap(), None);
    }

    #[test]
    fn chain_through_higher_valuation() {
        // (6)_3 = 1; 2k − 6 has 3-adic valuation 2 at k = 12 and 3 at k = 30.
        let m = ManifoldDescriptor::closed(2, 6).unwrap();
        let c = witness_chain(&m, 3, &b(12), &b(30)).unwrap().unwrap();
        assert!(c.iter().all(|s| matches!(s, ChainStep::EMove { .. })));
        validate_chain(&c, &b(6), 3, &b(12), &b(30)).unwrap();
    }

    #[test]
    fn chain_escapes_multiples_of_p() {
        let m = ManifoldDescriptor::closed(2, 4).unwrap();
        let c = witness_chain(&m, 3, &b(6), &b(2)).unwrap().unwrap();
        validate_chain(&c, &b(4), 3, &b(6), &b(2)).unwrap();
        let c = witness_chain(&m, 3, &b(2), &b(9)).unwrap().unwrap();
        validate_chain(&c, &b(4), 3, &b(2), &b(9)).unwrap();
    }

    #[test]
    fn bad_chain_rejected() {
        let bad = vec![ChainStep::EMove { r: b(3), from: b(2), to: b(6) }];
        assert!(validate_chain(&bad, &b(2), 3, &b(2), &b(6)).is_err());
        let gap = vec![ChainStep::EMove { r: b(4), from: b(3), to: b(12) }];
        assert!(validate_chain(&gap, &b(2), 3, &b(2), &b(12)).is_err());
    }

    #[test]
    fn class_count_when_chi_is_one_mod_p() {
        for (chi, p) in [(1i64, 3u64), (4, 3), (6, 5), (-6, 7)] {
            let m = ManifoldDescriptor::closed(2, chi).unwrap();
            let first = oracle(&m, &fp(p), &b(1), &b(1)).unwrap().invariant_k;
            for k in 1..200 {
                assert_eq!(oracle(&m, &fp(p), &b(k), &b(k)).unwrap().invariant_k, first);
            }
        }
    }

    proptest! {
        #[test]
        fn verdict_is_an_equivalence(chi in -30i64..30, p in prop::sample::select(vec![3u64, 5, 7, 11]),
                                     k in 1i64..400, j in 1i64..400, h in 1i64..400) {
            let m = ManifoldDescriptor::closed(4, chi).unwrap();
            let c = fp(p);
            prop_assert_eq!(iso(&m, &c, k, j), iso(&m, &c, j, k));
            prop_assert!(iso(&m, &c, k, k));
            if iso(&m, &c, k, j) && iso(&m, &c, j, h) {
                prop_assert!(iso(&m, &c, k, h));
            }
        }

        #[test]
        fn iso_means_equal_invariants(n in 1u32..8, chi in -10i64..10, k in 0i64..100, j in 0i64..100,
                                      c in prop::sample::select(vec!["Z", "Z[1/2]", "Q", "F2", "F3", "F5", "Z_(3,5)"])) {
            let chi = if n % 2 == 1 { 0 } else { chi };
            let m = ManifoldDescriptor::closed(n, chi).unwrap();
            let v = oracle(&m, &c.parse().unwrap(), &b(k), &b(j)).unwrap();
            if v.iso_guaranteed {
                prop_assert_eq!(v.invariant_k, v.invariant_j);
            }
        }

        #[test]
        fn chains_validate(chi in -20i64..20, p in prop::sample::select(vec![3u64, 5, 7]),
                           k in 1i64..300, j in 1i64..300) {
            let m = ManifoldDescriptor::closed(2, chi).unwrap();
            if let Some(c) = witness_chain(&m, p, &b(k), &b(j)).unwrap() {
                validate_chain(&c, &b(chi), p, &b(k), &b(j)).unwrap();
            } else {
                prop_assert!(!iso(&m, &fp(p), k, j));
            }
        }
    }
}
