//! Degrees of sections of the fibrewise one-point compactified tangent
//! bundle and the affine action of fibrewise endomorphisms on them.
//!
//! A fibrewise map of degree `r` with fixed degree `d` sends sections of
//! degree `k` to sections of degree `r(k − d) + d`. Zigzags of such maps
//! between components of degree `k` and `j` are what identify the homology
//! of `C_k(M)` and `C_j(M)` in the stable range.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::json;
use crate::padic::PrimeSet;

/// The data of a closed (or open) manifold that the stability results see.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ManifoldDescriptor {
    pub n: u32,
    #[serde(with = "json::bigint")]
    pub chi: BigInt,
    pub closed: bool,
    pub orientable: bool,
    /// Marks the round sphere, where the degree `n−1` verdicts are sharp.
    #[serde(default)]
    pub sphere: bool,
}

impl ManifoldDescriptor {
    pub fn new(n: u32, chi: impl Into<BigInt>, closed: bool, orientable: bool) -> Result<Self> {
        let chi = chi.into();
        if n == 0 {
            return invalid("dimension must be positive");
        }
        if closed && n % 2 == 1 && !chi.is_zero() {
            return invalid(format!("a closed odd-dimensional manifold has χ = 0, got {chi}"));
        }
        Ok(ManifoldDescriptor { n, chi, closed, orientable, sphere: false })
    }

    pub fn closed(n: u32, chi: impl Into<BigInt>) -> Result<Self> {
        Self::new(n, chi, true, true)
    }

    pub fn sphere(n: u32) -> Result<Self> {
        let chi = if n % 2 == 0 { 2 } else { 0 };
        let mut m = Self::new(n, chi, true, true)?;
        m.sphere = true;
        Ok(m)
    }
}

pub type Matrix2<T> = [[T; 2]; 2];

/// `k ↦ r(k − d) + d`, with `d ∈ ½Z`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AffineDegreeAction {
    #[serde(with = "json::bigint")]
    pub r: BigInt,
    #[serde(with = "json::rational_str")]
    pub d: BigRational,
}

impl AffineDegreeAction {
    pub fn new(r: impl Into<BigInt>, d: BigRational) -> Result<Self> {
        if !(d.denom().is_one() || d.denom() == &BigInt::from(2)) {
            return invalid(format!("fixed degree {d} must lie in ½Z"));
        }
        Ok(AffineDegreeAction { r: r.into(), d })
    }

    /// Action centred at `χ/2`, the only kind on even-dimensional manifolds.
    pub fn centred(r: impl Into<BigInt>, chi: &BigInt) -> Self {
        AffineDegreeAction { r: r.into(), d: BigRational::new(chi.clone(), BigInt::from(2)) }
    }

    pub fn apply_rational(&self, k: &BigRational) -> BigRational {
        BigRational::from_integer(self.r.clone()) * (k - &self.d) + &self.d
    }

    /// Image of an integral degree; fails when it is not an integer.
    pub fn apply(&self, k: &BigInt) -> Result<BigInt> {
        let v = self.apply_rational(&BigRational::from_integer(k.clone()));
        if v.is_integer() {
            Ok(v.to_integer())
        } else {
            Err(Error::NotAvailable(format!("degree {k} maps to the non-integer {v}")))
        }
    }

    pub fn compose(&self, inner: &AffineDegreeAction) -> Result<AffineDegreeAction> {
        if self.d != inner.d {
            return invalid("composed actions must share their fixed degree");
        }
        Ok(AffineDegreeAction { r: &self.r * &inner.r, d: self.d.clone() })
    }
}

/// `k ↦ rk + b` for maps of a trivialised tangent bundle of a sphere.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SphereAction {
    #[serde(with = "json::bigint")]
    pub r: BigInt,
    #[serde(with = "json::bigint")]
    pub b: BigInt,
}

impl SphereAction {
    pub fn apply(&self, k: &BigInt) -> BigInt {
        &self.r * k + &self.b
    }

    /// The move `k ↦ k + 1` as `r = 2`, `b = 1 − k`.
    pub fn successor_at(k: &BigInt) -> Self {
        SphereAction { r: BigInt::from(2), b: BigInt::one() - k }
    }

    /// Changes the parity of some degree, which needs a Hopf-invariant-one dimension.
    pub fn changes_parity(&self) -> bool {
        self.r.is_even() || self.b.is_odd()
    }
}

/// Intersection form in the basis (fibre class, zero section).
pub fn intersection_matrix(n: u32, chi: &BigInt) -> Matrix2<BigInt> {
    let sign = if n % 2 == 0 { BigInt::one() } else { -BigInt::one() };
    [[BigInt::zero(), BigInt::one()], [sign, chi.clone()]]
}

/// Homology class of a section of degree `k`.
pub fn section_class(k: &BigInt, chi: &BigInt) -> [BigInt; 2] {
    [k - chi, BigInt::one()]
}

/// `x · M · y`.
pub fn pairing(x: &[BigInt; 2], m: &Matrix2<BigInt>, y: &[BigInt; 2]) -> BigInt {
    let mut s = BigInt::zero();
    for i in 0..2 {
        for j in 0..2 {
            s += &x[i] * &m[i][j] * &y[j];
        }
    }
    s
}

/// Degree of a class: its intersection with the zero section.
pub fn degree_of_class(class: &[BigInt; 2], n: u32, chi: &BigInt) -> BigInt {
    pairing(class, &intersection_matrix(n, chi), &[BigInt::zero(), BigInt::one()])
}

/// Matrix of a degree-`r` endomorphism fixing degree `d`, with its degree action.
pub fn endo_matrix(r: &BigInt, d: &BigRational, chi: &BigInt) -> Result<(Matrix2<BigRational>, AffineDegreeAction)> {
    let action = AffineDegreeAction::new(r.clone(), d.clone())?;
    let rq = BigRational::from_integer(r.clone());
    let chiq = BigRational::from_integer(chi.clone());
    let corner = -(&rq - BigRational::one()) * (d - chiq);
    let m = [[rq, corner], [BigRational::zero(), BigRational::one()]];
    Ok((m, action))
}

pub fn mat_mul(a: &Matrix2<BigRational>, b: &Matrix2<BigRational>) -> Matrix2<BigRational> {
    let e = |i: usize, j: usize| &a[i][0] * &b[0][j] + &a[i][1] * &b[1][j];
    [[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]]
}

/// `2 deg(σ₀) − χ`: a lift exists exactly when this vanishes.
pub fn lift_obstruction(deg_sigma0: &BigInt, chi: &BigInt) -> BigInt {
    BigInt::from(2) * deg_sigma0 - chi
}

/// The degree actions realised by fibrewise endomorphisms after localising at `ℓ`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ActionFamily {
    /// Odd `n`: every `ℓ`-unit `r` with every integral fixed degree.
    AnyFixedDegree { units: PrimeSet },
    /// Even `n`: every `ℓ`-unit `r`, fixed degree `χ/2` only.
    Centred {
        units: PrimeSet,
        #[serde(with = "json::rational_str")]
        d: BigRational,
    },
}

impl ActionFamily {
    fn units(&self) -> &PrimeSet {
        match self {
            ActionFamily::AnyFixedDegree { units } | ActionFamily::Centred { units, .. } => units,
        }
    }

    pub fn contains(&self, a: &AffineDegreeAction) -> bool {
        if !self.units().is_unit(&a.r) {
            return false;
        }
        match self {
            ActionFamily::AnyFixedDegree { .. } => a.d.is_integer(),
            ActionFamily::Centred { d, .. } => &a.d == d,
        }
    }

    /// Member with the given `r` and fixed degree.
    pub fn action(&self, r: impl Into<BigInt>, d: BigRational) -> Result<AffineDegreeAction> {
        let a = AffineDegreeAction::new(r, d)?;
        if self.contains(&a) {
            Ok(a)
        } else {
            Err(Error::NotAvailable(format!(
                "(r = {}, d = {}) is not realised here",
                a.r, a.d
            )))
        }
    }
}

pub fn allowed_actions(m: &ManifoldDescriptor, primes: &PrimeSet) -> Result<ActionFamily> {
    if !m.closed {
        return Err(Error::Unsupported("degree actions are defined for closed manifolds".into()));
    }
    if m.n % 2 == 1 {
        return Ok(ActionFamily::AnyFixedDegree { units: primes.clone() });
    }
    if m.chi.is_odd() && primes.contains(2) {
        return Err(Error::NotAvailable("χ/2 is not in the localised ring when χ is odd and 2 ∈ ℓ".into()));
    }
    Ok(ActionFamily::Centred {
        units: primes.clone(),
        d: BigRational::new(m.chi.clone(), BigInt::from(2)),
    })
}

/// Whether integral `k ↦ k+1` equivalences exist on an odd-dimensional manifold.
pub fn parity_change_possible(n: u32) -> Result<bool> {
    if n % 2 == 0 {
        return invalid(format!("n = {n} is even"));
    }
    Ok(matches!(n, 1 | 3 | 7))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Side {
    FromK,
    FromJ,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZigzagMove {
    pub side: Side,
    #[serde(with = "json::bigint")]
    pub r: BigInt,
    #[serde(with = "json::rational_str")]
    pub d: BigRational,
}

impl ZigzagMove {
    pub fn action(&self) -> AffineDegreeAction {
        AffineDegreeAction { r: self.r.clone(), d: self.d.clone() }
    }
}

/// Maps from degrees `k` and `j` landing on a common degree `h`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZigzagWitness {
    #[serde(with = "json::bigint")]
    pub k: BigInt,
    #[serde(with = "json::bigint")]
    pub j: BigInt,
    #[serde(with = "json::bigint")]
    pub chi: BigInt,
    pub primes: PrimeSet,
    #[serde(with = "json::bigint")]
    pub h: BigInt,
    pub moves: Vec<ZigzagMove>,
}

impl ZigzagWitness {
    /// Both sides compose to `h` and every `r` is an `ℓ`-unit.
    pub fn verify(&self) -> Result<()> {
        for (side, start) in [(Side::FromK, &self.k), (Side::FromJ, &self.j)] {
            let mut x = start.clone();
            for mv in self.moves.iter().filter(|m| m.side == side) {
                if !self.primes.is_unit(&mv.r) {
                    return invalid(format!("r = {} is not a unit away from {}", mv.r, self.primes));
                }
                x = mv.action().apply(&x)?;
            }
            if x != self.h {
                return invalid(format!("{side:?} side ends at {x}, expected {}", self.h));
            }
        }
        Ok(())
    }

    /// The same zigzag read from `j` to `k`.
    pub fn mirrored(&self) -> ZigzagWitness {
        let flip = |s: Side| match s {
            Side::FromK => Side::FromJ,
            Side::FromJ => Side::FromK,
        };
        ZigzagWitness {
            k: self.j.clone(),
            j: self.k.clone(),
            chi: self.chi.clone(),
            primes: self.primes.clone(),
            h: self.h.clone(),
            moves: self
                .moves
                .iter()
                .rev()
                .map(|m| ZigzagMove { side: flip(m.side), ..m.clone() })
                .collect(),
        }
    }
}

/// The canonical zigzag joining degrees `k` and `j` on an even-dimensional
/// manifold, when `2k − χ` and `2j − χ` have the same `ℓ`-adic valuation.
pub fn zigzag(k: &BigInt, j: &BigInt, chi: &BigInt, primes: &PrimeSet) -> Result<Option<ZigzagWitness>> {
    if k.is_negative() || j.is_negative() {
        return invalid("degrees must be non-negative");
    }
    if chi.is_odd() && primes.contains(2) {
        return Err(Error::NotAvailable("χ odd with 2 ∈ ℓ".into()));
    }
    let d = BigRational::new(chi.clone(), BigInt::from(2));
    let witness = |h: BigInt, rk: BigInt, rj: BigInt| ZigzagWitness {
        k: k.clone(),
        j: j.clone(),
        chi: chi.clone(),
        primes: primes.clone(),
        h,
        moves: vec![
            ZigzagMove { side: Side::FromK, r: rk, d: d.clone() },
            ZigzagMove { side: Side::FromJ, r: rj, d: d.clone() },
        ],
    };
    if k == j {
        return Ok(Some(witness(k.clone(), BigInt::one(), BigInt::one())));
    }
    let x = BigInt::from(2) * k - chi;
    let y = BigInt::from(2) * j - chi;
    if x.is_zero() || y.is_zero() {
        // 0 only shares its valuation with 0, and then k = j.
        return Ok(None);
    }
    if !primes.same_valuation(&x, &y) {
        return Ok(None);
    }
    let m = primes.part_of(&x)?;
    let rk = &y / &m;
    let rj = &x / &m;
    let twice_h = &x * &y / &m + chi;
    debug_assert!(twice_h.is_even());
    let w = witness(twice_h / 2, rk, rj);
    w.verify()?;
    Ok(Some(w))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn b(x: i64) -> BigInt {
        BigInt::from(x)
    }

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(b(n), b(d))
    }

    fn ps(v: &[u64]) -> PrimeSet {
        PrimeSet::new(v.to_vec()).unwrap()
    }

    #[test]
    fn manifold_odd_closed_needs_zero_chi() {
        assert!(ManifoldDescriptor::closed(3, 2).is_err());
        assert!(ManifoldDescriptor::new(3, 2, false, true).is_ok());
        let s = ManifoldDescriptor::sphere(4).unwrap();
        assert_eq!(s.chi, b(2));
        assert!(s.sphere);
    }

    #[test]
    fn intersection_examples() {
        assert_eq!(intersection_matrix(2, &b(2)), [[b(0), b(1)], [b(1), b(2)]]);
        assert_eq!(intersection_matrix(3, &b(0)), [[b(0), b(1)], [b(-1), b(0)]]);
        for n in [2, 4, 6] {
            for chi in -6..=6 {
                for k in -5..=12 {
                    let c = section_class(&b(k), &b(chi));
                    assert_eq!(degree_of_class(&c, n, &b(chi)), b(k));
                }
            }
        }
    }

    #[test]
    fn endo_examples() {
        let chi = b(4);
        let (_, a) = endo_matrix(&b(-1), &q(2, 1), &chi).unwrap();
        for k in 0..10 {
            assert_eq!(a.apply(&b(k)).unwrap(), b(4 - k));
        }
        let (m, a) = endo_matrix(&b(1), &q(7, 2), &chi).unwrap();
        assert_eq!(m, [[q(1, 1), q(0, 1)], [q(0, 1), q(1, 1)]]);
        assert_eq!(a.apply(&b(9)).unwrap(), b(9));
        let k = 6;
        let (_, a) = endo_matrix(&b(2), &q(k - 1, 1), &b(0)).unwrap();
        assert_eq!(a.apply(&b(k)).unwrap(), b(k + 1));
        assert!(endo_matrix(&b(2), &q(1, 3), &chi).is_err());
    }

    #[test]
    fn matrix_acts_like_degree_map() {
        // The class of a degree-k section goes to the class of degree r(k−d)+d.
        for chi in [-2i64, 0, 2, 4] {
            for r in -3..=3 {
                for d2 in -4..=6 {
                    let d = q(d2, 2);
                    let (m, a) = endo_matrix(&b(r), &d, &b(chi)).unwrap();
                    for k in 0..6 {
                        let c = section_class(&b(k), &b(chi));
                        let img0 = &m[0][0] * BigRational::from_integer(c[0].clone()) + &m[0][1];
                        let img_deg = img0 + BigRational::from_integer(b(chi));
                        assert_eq!(img_deg, a.apply_rational(&BigRational::from_integer(b(k))));
                    }
                }
            }
        }
    }

    #[test]
    fn half_integral_fixed_degree_apply() {
        let a = AffineDegreeAction::centred(b(3), &b(1));
        assert_eq!(a.apply(&b(2)).unwrap(), b(5));
        let a = AffineDegreeAction::centred(b(2), &b(1));
        assert!(a.apply(&b(2)).is_err());
    }

    #[test]
    fn lift_examples() {
        assert_eq!(lift_obstruction(&b(1), &b(2)), b(0));
        assert_eq!(lift_obstruction(&b(0), &b(2)), b(-2));
        assert_eq!(lift_obstruction(&b(3), &b(0)), b(6));
    }

    #[test]
    fn allowed_examples() {
        let odd = ManifoldDescriptor::closed(3, 0).unwrap();
        let fam = allowed_actions(&odd, &ps(&[3, 5, 7])).unwrap();
        let k = b(5);
        let step = fam.action(b(2), BigRational::from_integer(&k - 1)).unwrap();
        assert_eq!(step.apply(&k).unwrap(), b(6));
        assert!(fam.action(b(3), q(0, 1)).is_err());

        let s2 = ManifoldDescriptor::closed(2, 2).unwrap();
        let fam = allowed_actions(&s2, &ps(&[3])).unwrap();
        assert_eq!(fam, ActionFamily::Centred { units: ps(&[3]), d: q(1, 1) });
        assert!(fam.action(b(2), q(0, 1)).is_err());
        assert!(fam.action(b(2), q(1, 1)).is_ok());

        let odd_chi = ManifoldDescriptor::new(2, 1, true, false).unwrap();
        assert!(matches!(allowed_actions(&odd_chi, &PrimeSet::All), Err(Error::NotAvailable(_))));
        assert!(allowed_actions(&odd_chi, &ps(&[3])).is_ok());
        let open = ManifoldDescriptor::new(2, 1, false, true).unwrap();
        assert!(matches!(allowed_actions(&open, &ps(&[3])), Err(Error::Unsupported(_))));
    }

    #[test]
    fn parity_rule() {
        assert!(parity_change_possible(7).unwrap());
        assert!(!parity_change_possible(5).unwrap());
        assert!(parity_change_possible(1).unwrap());
        assert!(parity_change_possible(3).unwrap());
        assert!(!parity_change_possible(9).unwrap());
        assert!(parity_change_possible(4).is_err());
    }

    #[test]
    fn sphere_action() {
        let a = SphereAction::successor_at(&b(7));
        assert_eq!(a.apply(&b(7)), b(8));
        assert!(a.changes_parity());
        assert!(!SphereAction { r: b(3), b: b(0) }.changes_parity());
    }

    #[test]
    fn zigzag_examples() {
        let w = zigzag(&b(4), &b(7), &b(2), &ps(&[3])).unwrap().unwrap();
        assert_eq!(w.h, b(13));
        assert_eq!(w.moves[0].r, b(4));
        assert_eq!(w.moves[1].r, b(2));
        w.verify().unwrap();

        let w = zigzag(&b(6), &b(6), &b(2), &ps(&[5])).unwrap().unwrap();
        assert_eq!((w.h.clone(), w.moves[0].r.clone()), (b(6), b(1)));

        let w = zigzag(&b(2), &b(3), &b(2), &ps(&[3])).unwrap().unwrap();
        assert_eq!((w.h, w.moves[0].r.clone(), w.moves[1].r.clone()), (b(5), b(4), b(2)));

        assert!(zigzag(&b(2), &b(4), &b(2), &ps(&[3])).unwrap().is_none());
        assert!(matches!(zigzag(&b(1), &b(2), &b(3), &ps(&[2])), Err(Error::NotAvailable(_))));
        assert!(zigzag(&b(-1), &b(2), &b(2), &ps(&[3])).is_err());
    }

    #[test]
    fn zigzag_integral_is_reflection() {
        assert!(zigzag(&b(5), &b(-3), &b(2), &PrimeSet::All).is_err());
        assert!(zigzag(&b(5), &b(0), &b(5), &PrimeSet::All).is_err());
        let w = zigzag(&b(5), &b(1), &b(6), &PrimeSet::All).unwrap().unwrap();
        assert_eq!(w.h, b(1));
        assert_eq!(w.moves[0].r, b(-1));
        assert!(zigzag(&b(5), &b(2), &b(6), &PrimeSet::All).unwrap().is_none());
    }

    #[test]
    fn zigzag_rational_pairs_everything_off_the_middle() {
        let e = PrimeSet::empty();
        assert!(zigzag(&b(3), &b(10), &b(4), &e).unwrap().is_some());
        assert!(zigzag(&b(2), &b(10), &b(4), &e).unwrap().is_none());
    }

    #[test]
    fn witness_json_shape() {
        let w = zigzag(&b(4), &b(7), &b(2), &ps(&[3])).unwrap().unwrap();
        let v: serde_json::Value = serde_json::to_value(&w).unwrap();
        assert_eq!(v["h"], 13);
        assert_eq!(v["primes"], serde_json::json!([3]));
        assert_eq!(v["moves"][0]["side"], "FROM_K");
        assert_eq!(v["moves"][0]["d"], 1);
        let back: ZigzagWitness = serde_json::from_value(v).unwrap();
        assert_eq!(back, w);
    }

    proptest! {
        #[test]
        fn composition_law(r1 in -50i64..50, r2 in -50i64..50, d2 in -40i64..40, chi in -30i64..30) {
            let d = q(d2, 2);
            let (m1, a1) = endo_matrix(&b(r1), &d, &b(chi)).unwrap();
            let (m2, a2) = endo_matrix(&b(r2), &d, &b(chi)).unwrap();
            let (m12, a12) = endo_matrix(&b(r1 * r2), &d, &b(chi)).unwrap();
            prop_assert_eq!(mat_mul(&m1, &m2), m12);
            prop_assert_eq!(a1.compose(&a2).unwrap(), a12);
        }

        #[test]
        fn reflection_is_involution(chi in -40i64..40, k in -100i64..100) {
            let a = AffineDegreeAction::centred(b(-1), &b(chi));
            let kq = BigRational::from_integer(b(k));
            prop_assert_eq!(a.apply_rational(&a.apply_rational(&kq)), kq);
        }

        #[test]
        fn zigzag_symmetric(k in 0i64..500, j in 0i64..500, chi in -20i64..20, p in prop::sample::select(vec![2u64, 3, 5, 7, 11])) {
            prop_assume!(!(chi % 2 != 0 && p == 2));
            let l = ps(&[p]);
            let a = zigzag(&b(k), &b(j), &b(chi), &l).unwrap();
            let c = zigzag(&b(j), &b(k), &b(chi), &l).unwrap();
            prop_assert_eq!(a.is_some(), c.is_some());
            if let (Some(a), Some(c)) = (a, c) {
                a.verify().unwrap();
                prop_assert_eq!(a.mirrored(), c);
            }
        }
    }
}
