//! p-adic and ℓ-adic valuations of integers.
//!
//! The valuation of zero is [`Valuation::Infinity`], which sorts above every
//! finite value and absorbs addition. The invariants governing stable
//! homology on even-dimensional closed manifolds
//! (`min{(2k - χ)_p, (χ)_p + 1}`, its period and the number of distinct
//! values) are built on top of it.

use std::fmt;
use std::ops::Add;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{invalid, Error, Result};

/// Exponent of a prime in an integer; `Infinity` for zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Valuation {
    Finite(u64),
    Infinity,
}

impl Valuation {
    pub fn is_finite(self) -> bool {
        matches!(self, Valuation::Finite(_))
    }

    pub fn finite(self) -> Option<u64> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinity => None,
        }
    }
}

impl Add for Valuation {
    type Output = Valuation;

    fn add(self, rhs: Valuation) -> Valuation {
        match (self, rhs) {
            (Valuation::Finite(a), Valuation::Finite(b)) => Valuation::Finite(a + b),
            _ => Valuation::Infinity,
        }
    }
}

impl Add<u64> for Valuation {
    type Output = Valuation;

    fn add(self, rhs: u64) -> Valuation {
        self + Valuation::Finite(rhs)
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinity => write!(f, "INFINITY"),
        }
    }
}

// JSON: a bare integer, or the string "INFINITY".
impl Serialize for Valuation {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Valuation::Finite(v) => s.serialize_u64(*v),
            Valuation::Infinity => s.serialize_str("INFINITY"),
        }
    }
}

impl<'de> Deserialize<'de> for Valuation {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Int(u64),
            Str(String),
        }
        match Raw::deserialize(d)? {
            Raw::Int(v) => Ok(Valuation::Finite(v)),
            Raw::Str(s) if s == "INFINITY" => Ok(Valuation::Infinity),
            Raw::Str(s) => Err(serde::de::Error::custom(format!("bad valuation {s:?}"))),
        }
    }
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    if p < 4 {
        return true;
    }
    if p % 2 == 0 {
        return false;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= p {
        if p % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

fn require_prime(p: u64) -> Result<()> {
    if is_prime(p) {
        Ok(())
    } else {
        invalid(format!("{p} is not prime"))
    }
}

/// Largest `e` with `p^e | x`.
pub fn val(p: u64, x: &BigInt) -> Result<Valuation> {
    require_prime(p)?;
    Ok(val_unchecked(p, x))
}

pub(crate) fn val_unchecked(p: u64, x: &BigInt) -> Valuation {
    if x.is_zero() {
        return Valuation::Infinity;
    }
    let p = BigInt::from(p);
    let mut x = x.abs();
    let mut e = 0u64;
    loop {
        let (q, r) = x.div_rem(&p);
        if !r.is_zero() {
            return Valuation::Finite(e);
        }
        x = q;
        e += 1;
    }
}

/// `val_p` for machine integers.
pub fn val_i64(p: u64, x: i64) -> Result<Valuation> {
    val(p, &BigInt::from(x))
}

/// Strips every factor of `p` from `x`.
pub fn prime_free_part(p: u64, x: &BigInt) -> BigInt {
    if x.is_zero() {
        return BigInt::zero();
    }
    let p = BigInt::from(p);
    let mut x = x.clone();
    loop {
        let (q, r) = x.div_rem(&p);
        if !r.is_zero() {
            return x;
        }
        x = q;
    }
}

/// A set of primes used for localisation. `Primes(vec![])` is the empty set
/// (rationalisation), `All` means no localisation at all.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum PrimeSet {
    All,
    Primes(Vec<u64>),
}

impl PrimeSet {
    pub fn empty() -> Self {
        PrimeSet::Primes(Vec::new())
    }

    /// Sorts, dedups and checks primality.
    pub fn new(mut primes: Vec<u64>) -> Result<Self> {
        for &p in &primes {
            require_prime(p)?;
        }
        primes.sort_unstable();
        primes.dedup();
        Ok(PrimeSet::Primes(primes))
    }

    pub fn singleton(p: u64) -> Result<Self> {
        Self::new(vec![p])
    }

    pub fn contains(&self, p: u64) -> bool {
        match self {
            PrimeSet::All => is_prime(p),
            PrimeSet::Primes(v) => v.binary_search(&p).is_ok(),
        }
    }

    pub fn is_empty(&self) -> bool {
        matches!(self, PrimeSet::Primes(v) if v.is_empty())
    }

    /// `x` is invertible in `Z_(ℓ)`: no prime of the set divides it.
    pub fn is_unit(&self, x: &BigInt) -> bool {
        if x.is_zero() {
            return false;
        }
        match self {
            PrimeSet::All => x.abs().is_one(),
            PrimeSet::Primes(v) => v.iter().all(|&p| val_unchecked(p, x) == Valuation::Finite(0)),
        }
    }

    /// The product `∏ p^{val_p(x)}` over the set: the ℓ-part of `x`.
    pub fn part_of(&self, x: &BigInt) -> Result<BigInt> {
        if x.is_zero() {
            return invalid("the ℓ-part of zero is undefined");
        }
        match self {
            PrimeSet::All => Ok(x.abs()),
            PrimeSet::Primes(v) => {
                let mut m = BigInt::one();
                for &p in v {
                    let e = val_unchecked(p, x).finite().expect("x nonzero");
                    m *= BigInt::from(p).pow(e as u32);
                }
                Ok(m)
            }
        }
    }

    /// Two integers have the same ℓ-adic valuation.
    pub fn same_valuation(&self, x: &BigInt, y: &BigInt) -> bool {
        match self {
            PrimeSet::All => x.abs() == y.abs(),
            PrimeSet::Primes(v) => v.iter().all(|&p| val_unchecked(p, x) == val_unchecked(p, y)),
        }
    }
}

impl fmt::Display for PrimeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PrimeSet::All => write!(f, "ALL"),
            PrimeSet::Primes(v) if v.is_empty() => write!(f, "EMPTY"),
            PrimeSet::Primes(v) => {
                let parts: Vec<String> = v.iter().map(u64::to_string).collect();
                write!(f, "{{{}}}", parts.join(","))
            }
        }
    }
}

// JSON: "ALL", "EMPTY", or a list of primes.
impl Serialize for PrimeSet {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            PrimeSet::All => s.serialize_str("ALL"),
            PrimeSet::Primes(v) => v.serialize(s),
        }
    }
}

impl<'de> Deserialize<'de> for PrimeSet {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            List(Vec<u64>),
            Str(String),
        }
        match Raw::deserialize(d)? {
            Raw::List(v) => PrimeSet::new(v).map_err(serde::de::Error::custom),
            Raw::Str(s) if s == "ALL" => Ok(PrimeSet::All),
            Raw::Str(s) if s == "EMPTY" => Ok(PrimeSet::empty()),
            Raw::Str(s) => Err(serde::de::Error::custom(format!("bad prime set {s:?}"))),
        }
    }
}

impl std::str::FromStr for PrimeSet {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        match t.to_ascii_uppercase().as_str() {
            "ALL" => return Ok(PrimeSet::All),
            "EMPTY" | "" => return Ok(PrimeSet::empty()),
            _ => {}
        }
        let primes = t
            .split(',')
            .map(|x| {
                x.trim()
                    .parse::<u64>()
                    .map_err(|_| Error::InvalidArgument(format!("bad prime {x:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        PrimeSet::new(primes)
    }
}

/// Trial-division factorisation of `|x|`, `x ≠ 0`.
fn prime_divisors(x: &BigInt) -> Vec<u64> {
    let mut x = x.abs();
    let mut out = Vec::new();
    let mut d = 2u64;
    while BigInt::from(d) * BigInt::from(d) <= x {
        let bd = BigInt::from(d);
        if (&x % &bd).is_zero() {
            out.push(d);
            while (&x % &bd).is_zero() {
                x /= &bd;
            }
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if x > BigInt::one() {
        out.push(x.to_u64().expect("remaining cofactor of a desk-scale integer"));
    }
    out
}

/// Componentwise valuations. With `ℓ = ALL` only the primes dividing `x` are
/// listed; every other prime has valuation 0.
pub fn val_set(primes: &PrimeSet, x: &BigInt) -> Result<Vec<(u64, Valuation)>> {
    match primes {
        PrimeSet::All => {
            if x.is_zero() {
                return invalid("valuation of 0 at all primes has no finite representation");
            }
            Ok(prime_divisors(x)
                .into_iter()
                .map(|p| (p, val_unchecked(p, x)))
                .collect())
        }
        PrimeSet::Primes(v) => Ok(v.iter().map(|&p| (p, val_unchecked(p, x))).collect()),
    }
}

/// `min{(2k - χ)_p, (χ)_p + 1}`.
pub fn stable_invariant(chi: &BigInt, p: u64, k: &BigInt) -> Result<Valuation> {
    require_prime(p)?;
    let two_k_minus_chi: BigInt = BigInt::from(2) * k - chi;
    Ok(val_unchecked(p, &two_k_minus_chi).min(val_unchecked(p, chi) + 1))
}

/// `p^{(χ)_p + 1}`, the period in `k` of [`stable_invariant`].
pub fn period(chi: &BigInt, p: u64) -> Result<BigInt> {
    require_prime(p)?;
    if chi.is_zero() {
        return invalid("period is undefined for Euler characteristic 0");
    }
    let e = val_unchecked(p, chi).finite().expect("chi nonzero") + 1;
    Ok(BigInt::from(p).pow(e as u32))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum NshBound {
    Bounded(u64),
    Unbounded,
}

/// Upper bound on the number of stable homologies: `(χ)_p + 2`, or exactly
/// 1 when `χ ≡ 1 mod p`.
pub fn nsh_bound(chi: &BigInt, p: u64) -> Result<NshBound> {
    require_prime(p)?;
    if chi.is_zero() {
        return Ok(NshBound::Unbounded);
    }
    if chi.mod_floor(&BigInt::from(p)).is_one() {
        return Ok(NshBound::Bounded(1));
    }
    let v = val_unchecked(p, chi).finite().expect("chi nonzero");
    Ok(NshBound::Bounded(v + 2))
}
