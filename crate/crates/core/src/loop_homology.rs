//! First homology classes of loops in the unordered configuration space of
//! the plane or the punctured plane, computed exactly.
//!
//! A loop is given by `k` polylines with rational vertices, each uniformly
//! parametrised over `[0, 1]`. Its class is `aΔ₀ + bπ`, where `a` is the
//! total winding around the puncture and `b` counts half-turns of the
//! difference vectors of all strand pairs. Both are read off as signed
//! crossings of the positive x-axis, so no angle is ever approximated.

use std::collections::{BTreeSet, HashMap};
use std::hash::Hash;
use std::ops::{Add, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{invalid, CollisionPartner, Error, Result};
use crate::json;

/// A point of the plane with rational coordinates, `[[num, den], [num, den]]` in JSON.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Point(
    #[serde(with = "json::rational")] pub BigRational,
    #[serde(with = "json::rational")] pub BigRational,
);

impl Point {
    pub fn new(x: BigRational, y: BigRational) -> Self {
        Point(x, y)
    }

    /// `(x, y) / den` from integer numerators.
    pub fn scaled(x: impl Into<BigInt>, y: impl Into<BigInt>, den: impl Into<BigInt>) -> Self {
        let den = den.into();
        Point(BigRational::new(x.into(), den.clone()), BigRational::new(y.into(), den))
    }

    pub fn int(x: i64, y: i64) -> Self {
        Point::scaled(x, y, 1)
    }

    pub fn x(&self) -> &BigRational {
        &self.0
    }

    pub fn y(&self) -> &BigRational {
        &self.1
    }

    fn lerp(&self, other: &Point, t: &BigRational) -> Point {
        Point(&self.0 + (&other.0 - &self.0) * t, &self.1 + (&other.1 - &self.1) * t)
    }
}

impl Add for &Point {
    type Output = Point;
    fn add(self, o: &Point) -> Point {
        Point(&self.0 + &o.0, &self.1 + &o.1)
    }
}

impl Sub for &Point {
    type Output = Point;
    fn sub(self, o: &Point) -> Point {
        Point(&self.0 - &o.0, &self.1 - &o.1)
    }
}

impl Neg for &Point {
    type Output = Point;
    fn neg(self) -> Point {
        Point(-&self.0, -&self.1)
    }
}

/// A loop of `k`-point configurations.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawLoop")]
pub struct LoopSpec {
    pub k: usize,
    pub punctured: bool,
    pub trajectories: Vec<Vec<Point>>,
}

#[derive(Deserialize)]
struct RawLoop {
    k: usize,
    punctured: bool,
    trajectories: Vec<Vec<Point>>,
}

impl TryFrom<RawLoop> for LoopSpec {
    type Error = Error;

    fn try_from(r: RawLoop) -> Result<Self> {
        if r.k != r.trajectories.len() {
            return invalid(format!("k = {} but {} trajectories given", r.k, r.trajectories.len()));
        }
        LoopSpec::new(r.punctured, r.trajectories)
    }
}

impl LoopSpec {
    /// Each trajectory needs at least one point; a single point is a constant strand.
    pub fn new(punctured: bool, trajectories: Vec<Vec<Point>>) -> Result<Self> {
        if trajectories.is_empty() {
            return invalid("a loop needs at least one strand");
        }
        if let Some(i) = trajectories.iter().position(Vec::is_empty) {
            return invalid(format!("trajectory {i} is empty"));
        }
        Ok(LoopSpec { k: trajectories.len(), punctured, trajectories })
    }

    pub fn constant(points: Vec<Point>, punctured: bool) -> Result<Self> {
        Self::new(punctured, points.into_iter().map(|p| vec![p]).collect())
    }

    pub fn start(&self) -> Vec<Point> {
        self.trajectories.iter().map(|t| t[0].clone()).collect()
    }

    pub fn end(&self) -> Vec<Point> {
        self.trajectories.iter().map(|t| t[t.len() - 1].clone()).collect()
    }

    /// Breakpoints of all strands and the positions of every strand at them.
    /// With `compact`, a strand that never moves keeps a single point.
    fn common_grid(&self, compact: bool) -> (Vec<BigRational>, Vec<Vec<Point>>) {
        let segs: BTreeSet<usize> = self.trajectories.iter().map(|t| t.len() - 1).filter(|&m| m > 0).collect();
        let mut times: Vec<BigRational> = Vec::new();
        if segs.len() <= 1 {
            let m = segs.iter().next().copied().unwrap_or(1);
            times.extend((0..=m).map(|i| BigRational::new(BigInt::from(i), BigInt::from(m))));
        } else {
            let mut set = BTreeSet::new();
            for &m in &segs {
                for i in 0..=m {
                    set.insert(BigRational::new(BigInt::from(i), BigInt::from(m)));
                }
            }
            times.extend(set);
        }
        let grid = self
            .trajectories
            .iter()
            .map(|t| {
                if t.iter().all(|p| p == &t[0]) {
                    vec![t[0].clone(); if compact { 1 } else { times.len() }]
                } else if t.len() == times.len() {
                    t.clone()
                } else {
                    times.iter().map(|s| position(t, s)).collect()
                }
            })
            .collect();
        (times, grid)
    }

    /// Every strand sampled on the common breakpoints.
    pub fn resampled(&self) -> LoopSpec {
        let (_, grid) = self.common_grid(false);
        LoopSpec { k: self.k, punctured: self.punctured, trajectories: grid }
    }

    /// Midpoints inserted into every segment.
    pub fn refined(&self) -> LoopSpec {
        let half = BigRational::new(BigInt::one(), BigInt::from(2));
        let trajectories = self
            .trajectories
            .iter()
            .map(|t| {
                let mut out = vec![t[0].clone()];
                for w in t.windows(2) {
                    out.push(w[0].lerp(&w[1], &half));
                    out.push(w[1].clone());
                }
                out
            })
            .collect();
        LoopSpec { k: self.k, punctured: self.punctured, trajectories }
    }

    /// The same loop traversed backwards.
    pub fn reversed(&self) -> LoopSpec {
        let mut trajectories: Vec<Vec<Point>> = self
            .trajectories
            .iter()
            .map(|t| t.iter().rev().cloned().collect())
            .collect();
        // Strands are unlabelled; keep them ordered by their new start.
        let order = permutation(&self.end(), &self.start()).ok();
        if let Some(sigma) = order {
            let mut sorted = vec![Vec::new(); self.k];
            for (i, t) in trajectories.drain(..).enumerate() {
                sorted[sigma[i]] = t;
            }
            trajectories = sorted;
        }
        LoopSpec { k: self.k, punctured: self.punctured, trajectories }
    }
}

fn position(t: &[Point], s: &BigRational) -> Point {
    let m = t.len() - 1;
    if m == 0 {
        return t[0].clone();
    }
    let scaled = s * BigRational::from_integer(BigInt::from(m));
    let idx = scaled.floor().to_integer().to_usize().unwrap_or(0).min(m - 1);
    let frac = scaled - BigRational::from_integer(BigInt::from(idx));
    t[idx].lerp(&t[idx + 1], &frac)
}

/// `sigma[i]` is the index of the start point equal to the end point of strand `i`.
fn permutation(end: &[Point], start: &[Point]) -> Result<Vec<usize>> {
    let index: HashMap<&Point, usize> = start.iter().enumerate().map(|(i, p)| (p, i)).collect();
    let mut used = vec![false; start.len()];
    end.iter()
        .enumerate()
        .map(|(i, p)| match index.get(p) {
            Some(&j) if !used[j] => {
                used[j] = true;
                Ok(j)
            }
            _ => Err(Error::NotClosed(format!("strand {i} ends at a point that is not a start point"))),
        })
        .collect()
}

/// Coefficients of `Δ₀` (only with a puncture) and `π`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassCoords {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a: Option<i64>,
    pub b: i64,
}

impl ClassCoords {
    pub fn new(a: i64, b: i64) -> Self {
        ClassCoords { a: Some(a), b }
    }
}

impl Add for ClassCoords {
    type Output = ClassCoords;
    fn add(self, o: ClassCoords) -> ClassCoords {
        let a = match (self.a, o.a) {
            (Some(x), Some(y)) => Some(x + y),
            (x, None) | (None, x) => x,
        };
        ClassCoords { a, b: self.b + o.b }
    }
}

impl Sub for ClassCoords {
    type Output = ClassCoords;
    fn sub(self, o: ClassCoords) -> ClassCoords {
        self + ClassCoords { a: o.a.map(|x| -x), b: -o.b }
    }
}

trait Coord: Clone + Ord + Signed + Hash + Into<BigInt> {}
impl<T: Clone + Ord + Signed + Hash + Into<BigInt>> Coord for T {}

fn cross<T: Coord>(a: &(T, T), b: &(T, T)) -> T {
    a.0.clone() * b.1.clone() - a.1.clone() * b.0.clone()
}

fn dot<T: Coord>(a: &(T, T), b: &(T, T)) -> T {
    a.0.clone() * b.0.clone() + a.1.clone() * b.1.clone()
}

fn diff<T: Coord>(a: &(T, T), b: &(T, T)) -> (T, T) {
    (a.0.clone() - b.0.clone(), a.1.clone() - b.1.clone())
}

/// Where the segment `d0 → d1` meets the origin, as a fraction of the segment.
fn hits_origin<T: Coord>(d0: &(T, T), d1: &(T, T)) -> Option<BigRational> {
    if !cross(d0, d1).is_zero() || dot(d0, d1).is_positive() {
        return None;
    }
    if d0.0.is_zero() && d0.1.is_zero() {
        return Some(BigRational::zero());
    }
    let step = diff(d1, d0);
    let num: BigInt = (-dot(d0, &step)).into();
    let den: BigInt = dot(&step, &step).into();
    Some(BigRational::new(num, den))
}

/// Signed crossing of the positive x-axis by `d0 → d1`; the axis counts as below.
fn crossing<T: Coord>(d0: &(T, T), d1: &(T, T)) -> i64 {
    let up = !d0.1.is_positive() && d1.1.is_positive();
    let down = d0.1.is_positive() && !d1.1.is_positive();
    if up && cross(d0, d1).is_positive() {
        1
    } else if down && cross(d0, d1).is_negative() {
        -1
    } else {
        0
    }
}

/// Counter-clockwise half-turn from `v` to `−v` when `v` lies in `(0, π]`.
fn flip_sign<T: Coord>(v: &(T, T)) -> i64 {
    if v.1.is_positive() || (v.1.is_zero() && v.0.is_negative()) {
        1
    } else {
        -1
    }
}

fn collision_time(times: &[BigRational], seg: usize, s: BigRational) -> BigRational {
    &times[seg] + (&times[seg + 1] - &times[seg]) * s
}

/// Strands of length one are constant.
fn at<T>(s: &[T], idx: usize) -> &T {
    &s[idx.min(s.len() - 1)]
}

fn eval_grid<T: Coord>(grid: &[Vec<(T, T)>], times: &[BigRational], punctured: bool) -> Result<ClassCoords> {
    let k = grid.len();
    let steps = times.len() - 1;
    let still: Vec<bool> = grid.iter().map(|s| s.iter().all(|p| p == &s[0])).collect();

    let mut a = 0i64;
    if punctured {
        for (i, s) in grid.iter().enumerate() {
            let segs = if still[i] { 1 } else { steps };
            for seg in 0..segs {
                if let Some(f) = hits_origin(at(s, seg), at(s, seg + 1)) {
                    return Err(Error::Collision {
                        time: collision_time(times, seg, f),
                        first: i,
                        second: CollisionPartner::Puncture,
                    });
                }
                a += crossing(at(s, seg), at(s, seg + 1));
            }
        }
    }

    let mut crossings = 0i64;
    for i in 0..k {
        for j in i + 1..k {
            let (si, sj) = (&grid[i], &grid[j]);
            if still[i] && still[j] {
                if si[0] == sj[0] {
                    return Err(Error::Collision { time: times[0].clone(), first: i, second: CollisionPartner::Strand(j) });
                }
                continue;
            }
            let mut d0 = diff(&si[0], &sj[0]);
            for seg in 0..steps {
                let d1 = diff(at(si, seg + 1), at(sj, seg + 1));
                if let Some(f) = hits_origin(&d0, &d1) {
                    return Err(Error::Collision {
                        time: collision_time(times, seg, f),
                        first: i,
                        second: CollisionPartner::Strand(j),
                    });
                }
                crossings += crossing(&d0, &d1);
                d0 = d1;
            }
        }
    }

    let start: Vec<&(T, T)> = grid.iter().map(|s| &s[0]).collect();
    let index: HashMap<&(T, T), usize> = start.iter().enumerate().map(|(i, p)| (*p, i)).collect();
    let sigma = grid
        .iter()
        .enumerate()
        .map(|(i, s)| {
            index
                .get(at(s, steps))
                .copied()
                .ok_or_else(|| Error::NotClosed(format!("strand {i} ends at a point that is not a start point")))
        })
        .collect::<Result<Vec<usize>>>()?;

    let mut flips = 0i64;
    for i in 0..k {
        for j in i + 1..k {
            let (x, y) = (sigma[i], sigma[j]);
            if x > y {
                flips += flip_sign(&diff(start[y], start[x]));
            }
        }
    }
    Ok(ClassCoords { a: punctured.then_some(a), b: 2 * crossings + flips })
}

/// Exact class of a loop.
pub fn evaluate(l: &LoopSpec) -> Result<ClassCoords> {
    if l.k != l.trajectories.len() {
        return invalid("k does not match the number of trajectories");
    }
    let (times, grid) = l.common_grid(true);
    let mut lcm = BigInt::one();
    for d in grid.iter().flatten().flat_map(|p| [p.0.denom(), p.1.denom()]) {
        if !lcm.is_multiple_of(d) {
            lcm = lcm.lcm(d);
        }
    }
    let to_int = |q: &BigRational| (q * BigRational::from_integer(lcm.clone())).to_integer();
    let big: Vec<Vec<(BigInt, BigInt)>> =
        grid.iter().map(|s| s.iter().map(|p| (to_int(&p.0), to_int(&p.1))).collect()).collect();
    let limit = BigInt::one() << 60;
    if big.iter().flatten().all(|(x, y)| x.abs() < limit && y.abs() < limit) {
        let small: Vec<Vec<(i128, i128)>> = big
            .iter()
            .map(|s| s.iter().map(|(x, y)| (x.to_i128().unwrap(), y.to_i128().unwrap())).collect())
            .collect();
        eval_grid(&small, &times, l.punctured)
    } else {
        eval_grid(&big, &times, l.punctured)
    }
}

/// `l1` followed by `l2`; the end configuration of `l1` must be the start of `l2`.
pub fn concat(l1: &LoopSpec, l2: &LoopSpec) -> Result<LoopSpec> {
    if l1.k != l2.k || l1.punctured != l2.punctured {
        return invalid("loops live in different configuration spaces");
    }
    let a = l1.resampled();
    let b = l2.resampled();
    let next = permutation(&a.end(), &b.start())?;
    let trajectories = a
        .trajectories
        .iter()
        .enumerate()
        .map(|(i, t)| {
            let mut out = t.clone();
            out.extend(b.trajectories[next[i]].iter().skip(1).cloned());
            out
        })
        .collect();
    LoopSpec::new(l1.punctured, trajectories)
}

/// Denominator of the rational unit-circle approximations.
const CIRCLE_DEN: i64 = 1 << 24;

/// Vertex `i` of the regular `n`-gon inscribed in the unit circle, with numerators over `CIRCLE_DEN`.
/// Vertex 0 is `(1, 0)` and opposite vertices are exact negatives.
fn vertex(i: i64, n: i64) -> (i64, i64) {
    let i = i.rem_euclid(n);
    let half = n / 2;
    if n % 2 == 0 && i >= half {
        let (x, y) = vertex(i - half, n);
        return (-x, -y);
    }
    if i == 0 {
        return (CIRCLE_DEN, 0);
    }
    let theta = std::f64::consts::TAU * i as f64 / n as f64;
    let d = CIRCLE_DEN as f64;
    ((theta.cos() * d).round() as i64, (theta.sin() * d).round() as i64)
}

fn unit(i: i64, n: i64) -> Point {
    let (x, y) = vertex(i, n);
    Point::scaled(x, y, CIRCLE_DEN)
}

fn scale(p: &Point, c: &BigRational) -> Point {
    Point(&p.0 * c, &p.1 * c)
}

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn check_samples(n: usize) -> Result<i64> {
    if n < 4 || n % 2 == 1 {
        return invalid(format!("sample count must be even and at least 4, got {n}"));
    }
    Ok(n as i64)
}

/// A point sweeping the unit circle once around `centre`, scaled by `radius`.
fn circle_path(centre: &Point, radius: &BigRational, n: i64) -> Vec<Point> {
    (0..=n).map(|s| centre + &scale(&unit(s, n), radius)).collect()
}

/// Default number of polygon vertices for the builders.
pub const DEFAULT_SAMPLES: usize = 256;

/// One point circles the puncture, enclosing `j` of the other points.
pub fn build_delta(k: usize, j: usize, samples: usize) -> Result<LoopSpec> {
    let n = check_samples(samples)?;
    if k == 0 || j >= k {
        return invalid(format!("need 0 ≤ j ≤ k−1, got k = {k}, j = {j}"));
    }
    let mut t = vec![circle_path(&Point::int(0, 0), &q(1, 1), n)];
    for i in 1..=j {
        t.push(vec![Point::new(q(i as i64, 2 * k as i64), q(0, 1))]);
    }
    for i in 0..k - 1 - j {
        t.push(vec![Point::int(3 + i as i64, 0)]);
    }
    LoopSpec::new(true, t)
}

/// Two points swap by a half-turn away from the puncture.
pub fn build_pi(k: usize, samples: usize) -> Result<LoopSpec> {
    let n = check_samples(samples)?;
    if k < 2 {
        return invalid("π needs at least two points");
    }
    let c = Point::int(2, 0);
    let first = (0..=n / 2).map(|s| &c + &unit(s, n)).collect();
    let second = (0..=n / 2).map(|s| &c - &unit(s, n)).collect();
    let mut t = vec![first, second];
    for i in 0..k - 2 {
        t.push(vec![Point::int(5 + i as i64, 0)]);
    }
    LoopSpec::new(true, t)
}

/// One point circles `j` others, away from the puncture.
pub fn build_tau(k: usize, j: usize, samples: usize) -> Result<LoopSpec> {
    let n = check_samples(samples)?;
    if j == 0 || j >= k {
        return invalid(format!("need 1 ≤ j ≤ k−1, got k = {k}, j = {j}"));
    }
    let c = Point::int(10, 0);
    let mut t = vec![circle_path(&c, &q(1, 1), n)];
    for i in 0..j {
        t.push(vec![&c + &Point::new(q(i as i64, 2 * k as i64), q(0, 1))]);
    }
    for i in 0..k - 1 - j {
        t.push(vec![Point::int(20 + i as i64, 0)]);
    }
    LoopSpec::new(true, t)
}

fn sigma_at(k: usize, d: i64, n: i64) -> Result<LoopSpec> {
    let k64 = k as i64;
    let t = (0..k64)
        .map(|i| (0..=n).map(|s| &unit(s, n) + &scale(&unit(d * s, n), &q(i, k64))).collect())
        .collect();
    LoopSpec::new(true, t)
}

/// `v ↦ {v + (i/k) f(v)}` for the degree-`d` circle map `f(θ) = (cos dθ, sin dθ)`.
/// Doubles the sample count when the discretised strands collide.
pub fn build_sigma(k: usize, d: i64, samples: usize) -> Result<LoopSpec> {
    let mut n = check_samples(samples)?;
    if k == 0 {
        return invalid("k must be positive");
    }
    for _ in 0..6 {
        let l = sigma_at(k, d, n)?;
        match evaluate(&l) {
            Ok(_) => return Ok(l),
            Err(Error::Collision { .. }) => n *= 2,
            Err(e) => return Err(e),
        }
    }
    Err(Error::BuilderFailure(format!("strands still collide with {n} samples")))
}

/// `v ↦ {v, 2v, …, kv}`.
pub fn build_delta_hat(k: usize, samples: usize) -> Result<LoopSpec> {
    let n = check_samples(samples)?;
    if k == 0 {
        return invalid("k must be positive");
    }
    let t = (1..=k as i64).map(|i| circle_path(&Point::int(0, 0), &q(i, 1), n)).collect();
    LoopSpec::new(true, t)
}

/// `v ↦ p + {0, v, …, (k−1)v}` with `|p| = 2k`, so the puncture stays outside.
pub fn build_tau_hat(k: usize, samples: usize) -> Result<LoopSpec> {
    let n = check_samples(samples)?;
    if k == 0 {
        return invalid("k must be positive");
    }
    let p = Point::int(2 * k as i64, 0);
    let t = (0..k as i64).map(|i| circle_path(&p, &q(i, 1), n)).collect();
    LoopSpec::new(true, t)
}

/// A full rotation of `k` collinear points in the plane.
pub fn build_full_twist(k: usize, samples: usize) -> Result<LoopSpec> {
    let n = check_samples(samples)?;
    if k == 0 {
        return invalid("k must be positive");
    }
    let k64 = k as i64;
    let t = (0..k64).map(|i| circle_path(&Point::int(0, 0), &q(2 * i - (k64 - 1), 2), n)).collect();
    LoopSpec::new(false, t)
}

/// One point of the plane circling the other `k − 1`.
pub fn build_connecting(k: usize, samples: usize) -> Result<LoopSpec> {
    let n = check_samples(samples)?;
    if k < 2 {
        return invalid("need at least two points");
    }
    let mut t = vec![circle_path(&Point::int(0, 0), &q(1, 1), n)];
    for i in 0..k as i64 - 1 {
        t.push(vec![Point::new(q(i, 2 * k as i64), q(0, 1))]);
    }
    LoopSpec::new(false, t)
}

/// Strand `idx` of a constant configuration travels once round a circle of
/// the given radius that passes through its position.
pub fn orbit_loop(base: &[Point], idx: usize, radius: &BigRational, samples: usize, punctured: bool) -> Result<LoopSpec> {
    let n = check_samples(samples)?;
    if idx >= base.len() || !radius.is_positive() {
        return invalid("bad strand index or radius");
    }
    let centre = &base[idx] - &Point::new(radius.clone(), BigRational::zero());
    let t = base
        .iter()
        .enumerate()
        .map(|(i, p)| if i == idx { circle_path(&centre, radius, n) } else { vec![p.clone()] })
        .collect();
    LoopSpec::new(punctured, t)
}

/// Strands `i` and `j` exchange places by a counter-clockwise half-turn about their midpoint.
pub fn swap_loop(base: &[Point], i: usize, j: usize, samples: usize, punctured: bool) -> Result<LoopSpec> {
    let n = check_samples(samples)?;
    if i >= base.len() || j >= base.len() || i == j {
        return invalid("bad strand indices");
    }
    let half = q(1, 2);
    let c = scale(&(&base[i] + &base[j]), &half);
    let w = &base[i] - &c;
    let den = BigRational::from_integer(BigInt::from(CIRCLE_DEN));
    let rotated = |s: i64| {
        let (cx, sy) = vertex(s, n);
        let cx = BigRational::from_integer(cx.into()) / &den;
        let sy = BigRational::from_integer(sy.into()) / &den;
        Point(&cx * &w.0 - &sy * &w.1, &sy * &w.0 + &cx * &w.1)
    };
    let t = base
        .iter()
        .enumerate()
        .map(|(idx, p)| {
            if idx == i {
                (0..=n / 2).map(|s| &c + &rotated(s)).collect()
            } else if idx == j {
                (0..=n / 2).map(|s| &c - &rotated(s)).collect()
            } else {
                vec![p.clone()]
            }
        })
        .collect();
    LoopSpec::new(punctured, t)
}

/// Both boundary relations of the pair of pants.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PantsCheck {
    pub k: usize,
    pub j: usize,
    /// `Δ_{j+1} − Δ_j − τ_1`.
    pub delta_defect: ClassCoords,
    /// `τ_{j+1} − τ_j − τ_1`.
    pub tau_defect: ClassCoords,
    pub holds: bool,
}

pub fn pants_check(k: usize, j: usize, samples: usize) -> Result<PantsCheck> {
    if k < 2 || j + 2 > k {
        return invalid(format!("need 0 ≤ j ≤ k−2, got k = {k}, j = {j}"));
    }
    let tau = |i: usize| -> Result<ClassCoords> {
        if i == 0 {
            Ok(ClassCoords::new(0, 0))
        } else {
            evaluate(&build_tau(k, i, samples)?)
        }
    };
    let tau1 = tau(1)?;
    let delta_defect = evaluate(&build_delta(k, j + 1, samples)?)? - evaluate(&build_delta(k, j, samples)?)? - tau1;
    let tau_defect = tau(j + 1)? - tau(j)? - tau1;
    let zero = ClassCoords::new(0, 0);
    Ok(PantsCheck { k, j, delta_defect, tau_defect, holds: delta_defect == zero && tau_defect == zero })
}

/// Coefficient of `π` in the failure of replication to commute with the degree action.
pub fn obstruction(chi: &BigInt, r: &BigInt) -> Result<BigInt> {
    if r < &BigInt::from(2) {
        return invalid("replication factor must be at least 2");
    }
    Ok((chi - 1) * r * (r - 1))
}

pub fn commutes_mod(chi: &BigInt, r: &BigInt, p: u64) -> Result<bool> {
    if !crate::padic::is_prime(p) {
        return invalid(format!("{p} is not prime"));
    }
    Ok(obstruction(chi, r)?.mod_floor(&BigInt::from(p)).is_zero())
}
