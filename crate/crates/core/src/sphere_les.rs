//! Dimension bookkeeping for configurations on spheres through the long exact
//! sequence relating `C_k(Sⁿ)` to `C_k(Rⁿ)` and `C_{k−1}(Rⁿ)`.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use num_traits::ToPrimitive;
use serde::Serialize;

use crate::conf_algebra::{dims, RangeFn};
use crate::error::{invalid, Error, Result};
use crate::loop_homology::{build_connecting, evaluate, ClassCoords};
use crate::padic::is_prime;

/// One connecting map of the sequence in a fixed degree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ConnectingData {
    pub k: u64,
    pub degree: u64,
    pub dim_domain: u64,
    pub dim_codomain: u64,
    pub rank: u64,
}

impl ConnectingData {
    pub fn new(k: u64, degree: u64, dim_domain: u64, dim_codomain: u64, rank: u64) -> Result<Self> {
        if rank > dim_domain.min(dim_codomain) {
            return invalid(format!("rank {rank} exceeds min({dim_domain}, {dim_codomain})"));
        }
        Ok(ConnectingData { k, degree, dim_domain, dim_codomain, rank })
    }
}

/// Reduced dimension in the degree of `at`, given the map one degree lower.
pub fn dim_from_les(at: &ConnectingData, below: &ConnectingData) -> Result<u64> {
    if at.k != below.k || at.degree != below.degree + 1 {
        return invalid("connecting maps must share k and sit in consecutive degrees");
    }
    for t in [at, below] {
        if t.rank > t.dim_domain.min(t.dim_codomain) {
            return invalid(format!("rank {} exceeds the dimensions in degree {}", t.rank, t.degree));
        }
    }
    Ok(at.dim_codomain + below.dim_domain - at.rank - below.rank)
}

/// Samples used for the connecting loop; the class is insensitive to this.
const CONNECTING_SAMPLES: usize = 64;

fn cache() -> &'static Mutex<HashMap<usize, ClassCoords>> {
    static CACHE: OnceLock<Mutex<HashMap<usize, ClassCoords>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// Image of the generator under the connecting map, evaluated on an explicit loop in the plane.
pub fn connecting_class_s2(k: usize) -> Result<ClassCoords> {
    if k < 2 {
        return invalid("need k ≥ 2");
    }
    if let Some(c) = cache().lock().unwrap().get(&k) {
        return Ok(*c);
    }
    let c = evaluate(&build_connecting(k, CONNECTING_SAMPLES)?)?;
    cache().lock().unwrap().insert(k, c);
    Ok(c)
}

/// Order of the cyclic group `H₁(C_k(S²); Z)`; 1 for `k = 1`.
pub fn h1_s2(k: u64) -> Result<u64> {
    match k {
        0 => invalid("need k ≥ 1"),
        1 => Ok(1),
        _ => Ok(2 * k - 2),
    }
}

/// The degree-1 connecting map for `C_k(S²)` with `F_p` coefficients.
pub fn connecting_map_s2(k: u64, p: u64) -> Result<(ConnectingData, ConnectingData)> {
    if k < 2 {
        return invalid("need k ≥ 2");
    }
    if !is_prime(p) {
        return invalid(format!("{p} is not prime"));
    }
    let codomain = dims(2, p, k, 1)?[1]
        .to_u64()
        .ok_or_else(|| Error::Range("dimension does not fit".into()))?;
    let b = connecting_class_s2(k as usize)?.b;
    let rank = u64::from(b.rem_euclid(p as i64) != 0).min(codomain);
    let at = ConnectingData::new(k, 1, 1, codomain, rank)?;
    let below = ConnectingData::new(k, 0, 0, 0, 0)?;
    Ok((at, below))
}

/// `dim H₁(C_k(S²); F_p)`.
pub fn h1_s2_dim_mod_p(k: u64, p: u64) -> Result<u64> {
    let (at, below) = connecting_map_s2(k, p)?;
    dim_from_les(&at, &below)
}

/// Whether `dim H_{n−1}(C_k(Sⁿ); F_p) = dim H_{n−1}(C_j(Sⁿ); F_p)` for `k`, `j` in the given range.
pub fn hn1_dichotomy(n: u32, p: u64, k: u64, j: u64, range: &RangeFn) -> Result<bool> {
    if n < 2 || n % 2 == 1 {
        return invalid(format!("n must be even and positive, got {n}"));
    }
    if !is_prime(p) {
        return invalid(format!("{p} is not prime"));
    }
    for x in [k, j] {
        let top = i64::try_from(x).map_err(|_| Error::Range(format!("{x} too large")))?;
        match range.eval(top) {
            Some(b) if b >= i64::from(n) - 1 => {}
            Some(b) => return Err(Error::Range(format!("degree {} exceeds the range {b} at k = {x}", n - 1))),
            None => return Err(Error::Range("no stable range for these coefficients".into())),
        }
    }
    let divides = |x: u64| (2 * i128::from(x) - 2).rem_euclid(i128::from(p)) == 0;
    Ok(divides(k) == divides(j))
}
