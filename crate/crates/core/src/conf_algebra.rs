//! Mod-p homology of unordered configuration spaces of `R^n`.
//!
//! `H_*(C(R^n); F_p)` is the free graded-commutative algebra on the classes
//! `Q_{ε,I}(ι)` and `Q_{ε,I}([ι,ι])`, bigraded by homological degree `h` and
//! configuration degree `ν`. Odd-degree generators are exterior when `p` is
//! odd. This module enumerates generators, counts monomials per bidegree,
//! finds the lowest classes not in the image of stabilisation and evaluates
//! the stable-range functions `μ`, `ν`, `λ`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Serialize, Serializer};

use crate::error::{invalid, Error, Result};
use crate::padic::{is_prime, PrimeSet};
use crate::stability_oracle::CoefficientSpec;

fn check_np(n: u32, p: u64) -> Result<()> {
    if n < 2 {
        return invalid(format!("ambient dimension must be at least 2, got {n}"));
    }
    if !is_prime(p) {
        return invalid(format!("{p} is not prime"));
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Base {
    Iota,
    Bracket,
}

/// Weakly increasing sequence with entries in `1..=n-1`; may be empty.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AdmissibleSeq(Vec<u32>);

impl AdmissibleSeq {
    pub fn new(entries: Vec<u32>, n: u32) -> Result<Self> {
        for &i in &entries {
            if i == 0 || i >= n {
                return invalid(format!("entry {i} outside 1..={}", n.saturating_sub(1)));
            }
        }
        if entries.windows(2).any(|w| w[0] > w[1]) {
            return invalid(format!("sequence {entries:?} is not weakly increasing"));
        }
        Ok(AdmissibleSeq(entries))
    }

    pub fn empty() -> Self {
        AdmissibleSeq(Vec::new())
    }

    pub fn entries(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Bidegree {
    pub h: u64,
    pub nu: u64,
}

impl std::ops::Add for Bidegree {
    type Output = Bidegree;
    fn add(self, o: Bidegree) -> Bidegree {
        Bidegree { h: self.h + o.h, nu: self.nu + o.nu }
    }
}

impl std::ops::Mul<u64> for Bidegree {
    type Output = Bidegree;
    fn mul(self, e: u64) -> Bidegree {
        Bidegree { h: self.h * e, nu: self.nu * e }
    }
}

/// `Q_{ε(1),I}(ι)` or `Q_{ε(1),I}([ι,ι])`; the remaining `ε(j)` follow from `I`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Generator {
    base: Base,
    seq: AdmissibleSeq,
    eps1: u8,
    n: u32,
    p: u64,
}

impl Generator {
    pub fn new(n: u32, p: u64, base: Base, seq: AdmissibleSeq, eps1: u8) -> Result<Self> {
        check_np(n, p)?;
        if let Some(&i) = seq.0.iter().find(|&&i| i >= n) {
            return invalid(format!("entry {i} not below n = {n}"));
        }
        if eps1 > 1 {
            return invalid("eps1 must be 0 or 1");
        }
        if seq.is_empty() && eps1 != 0 {
            return invalid("ι and [ι,ι] carry no ε");
        }
        if p == 2 && (base == Base::Bracket || eps1 != 0) {
            return invalid("for p = 2 only ι-based generators with ε = 0 exist");
        }
        let last_parity = seq.0.last().map(|&i| i % 2);
        match base {
            Base::Iota => {
                if p != 2 && last_parity == Some(1) {
                    return invalid("ι-based generators need an even last entry");
                }
            }
            Base::Bracket => {
                if n % 2 == 1 {
                    return invalid("[ι,ι] is a generator only for even n");
                }
                if last_parity == Some(0) {
                    return invalid("[ι,ι]-based generators need an odd last entry");
                }
            }
        }
        Ok(Generator { base, seq, eps1, n, p })
    }

    pub fn iota(n: u32, p: u64) -> Result<Self> {
        Self::new(n, p, Base::Iota, AdmissibleSeq::empty(), 0)
    }

    pub fn bracket(n: u32, p: u64) -> Result<Self> {
        Self::new(n, p, Base::Bracket, AdmissibleSeq::empty(), 0)
    }

    /// `Q_{eps1,(entries)}(base)`.
    pub fn q(n: u32, p: u64, base: Base, eps1: u8, entries: &[u32]) -> Result<Self> {
        Self::new(n, p, base, AdmissibleSeq::new(entries.to_vec(), n)?, eps1)
    }

    pub fn base(&self) -> Base {
        self.base
    }

    pub fn seq(&self) -> &AdmissibleSeq {
        &self.seq
    }

    pub fn eps1(&self) -> u8 {
        self.eps1
    }

    pub fn is_iota(&self) -> bool {
        self.base == Base::Iota && self.seq.is_empty()
    }

    /// `ε(1), …, ε(ℓ)`.
    pub fn eps(&self) -> Vec<u8> {
        let s = &self.seq.0;
        (0..s.len())
            .map(|j| {
                if self.p == 2 {
                    0
                } else if j == 0 {
                    self.eps1
                } else {
                    ((s[j] + s[j - 1]) % 2) as u8
                }
            })
            .collect()
    }

    /// Degrees by peeling operations from the inside out.
    pub fn bidegree(&self) -> Bidegree {
        let (mut h, mut nu) = match self.base {
            Base::Iota => (0u64, 1u64),
            Base::Bracket => (u64::from(self.n) - 1, 2),
        };
        let eps = self.eps();
        for (j, &i) in self.seq.0.iter().enumerate().rev() {
            h = self.p * h + u64::from(i) * (self.p - 1) - u64::from(eps[j]);
            nu *= self.p;
        }
        Bidegree { h, nu }
    }

    /// Exterior generator: `p` odd and odd homological degree.
    pub fn is_exterior(&self) -> bool {
        self.p != 2 && self.bidegree().h % 2 == 1
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let base = match self.base {
            Base::Iota => "ι",
            Base::Bracket => "[ι,ι]",
        };
        if self.seq.is_empty() {
            return f.write_str(base);
        }
        let idx: Vec<String> = self.seq.0.iter().map(u32::to_string).collect();
        write!(f, "Q_{{{},({})}}({})", self.eps1, idx.join(","), base)
    }
}

impl Serialize for Generator {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Product of generator powers, kept sorted by generator.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Monomial {
    factors: Vec<(Generator, u32)>,
}

impl Monomial {
    pub fn one() -> Self {
        Monomial::default()
    }

    pub fn new(factors: Vec<(Generator, u32)>) -> Result<Self> {
        let mut merged: BTreeMap<Generator, u32> = BTreeMap::new();
        for (g, e) in factors {
            if e > 0 {
                *merged.entry(g).or_insert(0) += e;
            }
        }
        for (g, &e) in &merged {
            if e > 1 && g.is_exterior() {
                return invalid(format!("{g} has odd degree; its square vanishes"));
            }
        }
        Ok(Monomial { factors: merged.into_iter().collect() })
    }

    pub fn factors(&self) -> &[(Generator, u32)] {
        &self.factors
    }

    pub fn bidegree(&self) -> Bidegree {
        self.factors
            .iter()
            .fold(Bidegree { h: 0, nu: 0 }, |acc, (g, e)| acc + g.bidegree() * u64::from(*e))
    }

    /// No factor of `ι`: not in the image of stabilisation.
    pub fn is_inceptive(&self) -> bool {
        !self.factors.iter().any(|(g, _)| g.is_iota())
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return f.write_str("1");
        }
        for (idx, (g, e)) in self.factors.iter().enumerate() {
            if idx > 0 {
                f.write_str("·")?;
            }
            if *e == 1 {
                write!(f, "{g}")?;
            } else {
                write!(f, "{g}^{e}")?;
            }
        }
        Ok(())
    }
}

impl Serialize for Monomial {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

fn sequences(n: u32, len: usize, min: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
    if prefix.len() == len {
        out.push(prefix.clone());
        return;
    }
    for i in min..n {
        prefix.push(i);
        sequences(n, len, i, prefix, out);
        prefix.pop();
    }
}

/// All generators with `ν ≤ max_nu`, ordered by `ν`, `h`, sequence, `ε(1)`.
pub fn enumerate_generators(n: u32, p: u64, max_nu: u64) -> Result<Vec<(Generator, Bidegree)>> {
    check_np(n, p)?;
    let mut bases = vec![(Base::Iota, 1u64)];
    if p != 2 && n % 2 == 0 {
        bases.push((Base::Bracket, 2));
    }
    let mut out = Vec::new();
    for (base, nu0) in bases {
        let mut len = 0usize;
        let mut nu = nu0;
        while nu <= max_nu {
            let mut seqs = Vec::new();
            sequences(n, len, 1, &mut Vec::new(), &mut seqs);
            for s in seqs {
                let eps_range: &[u8] = if p == 2 || s.is_empty() { &[0] } else { &[0, 1] };
                for &e in eps_range {
                    if let Ok(g) = Generator::new(n, p, base, AdmissibleSeq(s.clone()), e) {
                        let d = g.bidegree();
                        out.push((g, d));
                    }
                }
            }
            len += 1;
            nu = match nu.checked_mul(p) {
                Some(v) => v,
                None => break,
            };
        }
    }
    out.sort_by(|(ga, da), (gb, db)| {
        (da.nu, da.h, &ga.seq, ga.eps1, ga.base).cmp(&(db.nu, db.h, &gb.seq, gb.eps1, gb.base))
    });
    Ok(out)
}

/// `dim H_i(C_k(R^n); F_p)` for `0 ≤ i ≤ i_max`.
pub fn dims(n: u32, p: u64, k: u64, i_max: u64) -> Result<Vec<BigUint>> {
    let gens = enumerate_generators(n, p, k.max(1))?;
    let kk = k as usize;
    let ii = i_max as usize;
    // table[w][h]: monomials of weight w and degree h over the generators so far.
    let mut table = vec![vec![BigUint::zero(); ii + 1]; kk + 1];
    table[0][0] = BigUint::one();
    for (g, d) in gens.iter().filter(|(_, d)| d.h <= i_max && d.nu <= k) {
        let (nu, h) = (d.nu as usize, d.h as usize);
        if g.is_exterior() {
            for w in (nu..=kk).rev() {
                for i in (h..=ii).rev() {
                    let add = table[w - nu][i - h].clone();
                    table[w][i] += add;
                }
            }
        } else {
            for w in nu..=kk {
                for i in h..=ii {
                    let add = table[w - nu][i - h].clone();
                    table[w][i] += add;
                }
            }
        }
    }
    Ok(table.swap_remove(kk))
}

/// Serializable block of dimension rows.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DimsTable {
    pub n: u32,
    pub p: u64,
    pub rows: Vec<DimsRow>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DimsRow {
    pub k: u64,
    #[serde(serialize_with = "ser_biguints")]
    pub dims: Vec<BigUint>,
}

fn ser_biguints<S: Serializer>(xs: &[BigUint], s: S) -> std::result::Result<S::Ok, S::Error> {
    use num_traits::ToPrimitive;
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(xs.len()))?;
    for x in xs {
        match x.to_u64() {
            Some(v) => seq.serialize_element(&v)?,
            None => seq.serialize_element(&x.to_string())?,
        }
    }
    seq.end()
}

pub fn dims_table(n: u32, p: u64, ks: impl IntoIterator<Item = u64>, i_max: u64) -> Result<DimsTable> {
    let rows = ks
        .into_iter()
        .map(|k| Ok(DimsRow { k, dims: dims(n, p, k, i_max)? }))
        .collect::<Result<Vec<_>>>()?;
    Ok(DimsTable { n, p, rows })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Inceptive {
    pub degree: u64,
    pub witnesses: Vec<Monomial>,
}

/// Lowest degree of an `ι`-free monomial of weight exactly `k`, with all
/// monomials attaining it.
pub fn first_inceptive(n: u32, p: u64, k: u64) -> Result<Option<Inceptive>> {
    if k == 0 {
        return invalid("weight must be positive");
    }
    let gens: Vec<(Generator, Bidegree)> = enumerate_generators(n, p, k)?
        .into_iter()
        .filter(|(g, _)| !g.is_iota())
        .collect();
    let kk = k as usize;
    let g = gens.len();
    // best[i][w]: least degree of a monomial of weight w in generators i.. .
    let mut best: Vec<Vec<Option<u64>>> = vec![vec![None; kk + 1]; g + 1];
    best[g][0] = Some(0);
    for i in (0..g).rev() {
        let (gen, d) = &gens[i];
        let nu = d.nu as usize;
        let prev = best[i + 1].clone();
        let mut row = prev.clone();
        for w in nu..=kk {
            // Exterior: at most one copy, so extend the previous row only.
            let from = if gen.is_exterior() { prev[w - nu] } else { row[w - nu] };
            if let Some(b) = from {
                let cand = b + d.h;
                if row[w].map_or(true, |c| cand < c) {
                    row[w] = Some(cand);
                }
            }
        }
        best[i] = row;
    }
    let Some(degree) = best[0][kk] else {
        return Ok(None);
    };

    let mut witnesses = Vec::new();
    let mut chosen: Vec<(usize, u32)> = Vec::new();
    collect_witnesses(&gens, &best, 0, kk, degree, &mut chosen, &mut witnesses);
    let mut monos = witnesses
        .into_iter()
        .map(|c| Monomial::new(c.into_iter().map(|(i, e)| (gens[i].0.clone(), e)).collect()))
        .collect::<Result<Vec<_>>>()?;
    monos.sort();
    Ok(Some(Inceptive { degree, witnesses: monos }))
}

fn collect_witnesses(
    gens: &[(Generator, Bidegree)],
    best: &[Vec<Option<u64>>],
    i: usize,
    w: usize,
    h_left: u64,
    chosen: &mut Vec<(usize, u32)>,
    out: &mut Vec<Vec<(usize, u32)>>,
) {
    if best[i][w] != Some(h_left) {
        return;
    }
    if i == gens.len() {
        out.push(chosen.clone());
        return;
    }
    let (g, d) = &gens[i];
    let max_e = if g.is_exterior() { 1 } else { w as u64 / d.nu };
    for e in 0..=max_e {
        let used = (e * d.nu) as usize;
        let cost = e * d.h;
        if used > w || cost > h_left {
            break;
        }
        if e > 0 {
            chosen.push((i, e as u32));
        }
        collect_witnesses(gens, best, i + 1, w - used, h_left - cost, chosen, out);
        if e > 0 {
            chosen.pop();
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum AuditStatus {
    Match,
    Mismatch,
    TableNotApplicable,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum TablePrediction {
    /// No row covers the case: the table asserts there is no inceptive class.
    NoInceptive,
    Class { witness: Monomial, degree: u64 },
    /// The row's witness is not a nonzero monomial of weight `k`.
    NotApplicable { witness: String, reason: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TableAudit {
    pub p: u64,
    pub n: u32,
    pub k: u64,
    pub row: Option<u8>,
    pub table_prediction: TablePrediction,
    pub computed: Option<Inceptive>,
    pub status: AuditStatus,
}

/// Row of the inceptive-class table and its raw witness: generator
/// factors with exponents given as `numerator / 2`.
fn table_row(p: u64, n: u32, k: u64) -> Result<Option<(u8, Vec<(Generator, i64)>)>> {
    let a = (k / p) as i64;
    let m = (k % p) as i64;
    let k = k as i64;
    if p == 2 {
        if k % 2 == 0 {
            return Ok(Some((1, vec![(Generator::q(n, 2, Base::Iota, 0, &[1])?, k)])));
        }
        return Ok(None);
    }
    if n % 2 == 1 {
        if m == 0 {
            return Ok(Some((2, vec![(Generator::q(n, p, Base::Iota, 1, &[2])?, 2 * a)])));
        }
        return Ok(None);
    }
    let bracket = Generator::bracket(n, p)?;
    if n == 2 {
        if k % 2 == 0 {
            return Ok(Some((6, vec![(bracket, k)])));
        }
        return Ok(None);
    }
    let q12 = Generator::q(n, p, Base::Iota, 1, &[2])?;
    let upper = n >= 6 || p == 3 || p == 5;
    if upper {
        if k % 2 == 1 && k >= p as i64 {
            return Ok(Some((3, vec![(q12, 2 * a), (bracket, m)])));
        }
        if k % 2 == 0 {
            return Ok(Some((4, vec![(q12, 2 * (a - 1)), (bracket, p as i64 + m)])));
        }
        return Ok(None);
    }
    if k % 2 == 0 || k >= p as i64 {
        return Ok(Some((5, vec![(q12, 2 * (k % 2)), (bracket, 2 * (k / 2))])));
    }
    Ok(None)
}

fn raw_witness_name(factors: &[(Generator, i64)]) -> String {
    factors
        .iter()
        .map(|(g, e2)| {
            if e2 % 2 == 0 {
                format!("{g}^{}", e2 / 2)
            } else {
                format!("{g}^({e2}/2)")
            }
        })
        .collect::<Vec<_>>()
        .join("·")
}

/// Compare the tabulated first inceptive class with the computed one.
pub fn table_audit(p: u64, n: u32, k: u64) -> Result<TableAudit> {
    let computed = first_inceptive(n, p, k)?;
    let (row, table_prediction) = match table_row(p, n, k)? {
        None => (None, TablePrediction::NoInceptive),
        Some((row, raw)) => (Some(row), predict(&raw, k)),
    };
    let status = match (&table_prediction, &computed) {
        (TablePrediction::NotApplicable { .. }, _) => AuditStatus::TableNotApplicable,
        (TablePrediction::NoInceptive, None) => AuditStatus::Match,
        (TablePrediction::NoInceptive, Some(_)) => AuditStatus::Mismatch,
        (TablePrediction::Class { .. }, None) => AuditStatus::Mismatch,
        (TablePrediction::Class { witness, degree }, Some(c)) => {
            if c.degree == *degree && c.witnesses.contains(witness) {
                AuditStatus::Match
            } else {
                AuditStatus::Mismatch
            }
        }
    };
    Ok(TableAudit { p, n, k, row, table_prediction, computed, status })
}

fn predict(raw: &[(Generator, i64)], k: u64) -> TablePrediction {
    let name = raw_witness_name(raw);
    let na = |reason: String| TablePrediction::NotApplicable { witness: name.clone(), reason };
    let mut factors = Vec::new();
    for (g, e2) in raw {
        if e2 % 2 != 0 {
            return na(format!("exponent {e2}/2 of {g} is not an integer"));
        }
        if *e2 < 0 {
            return na(format!("exponent {} of {g} is negative", e2 / 2));
        }
        let e = (e2 / 2) as u32;
        if e >= 2 && g.is_exterior() {
            return na(format!("{g} has odd degree, so its power {e} vanishes"));
        }
        factors.push((g.clone(), e));
    }
    let witness = Monomial::new(factors).expect("exterior exponents checked");
    let d = witness.bidegree();
    if d.nu != k {
        return na(format!("witness has configuration degree {}, not {k}", d.nu));
    }
    TablePrediction::Class { witness, degree: d.h }
}

/// An affine lower bound `⌊num·k/den⌋ + offset`, or no bound at all.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Bound {
    Affine { num: i64, den: i64, offset: i64 },
    NoBound,
}

impl Bound {
    /// Non-decreasing affine bound; `num ≥ 0`, `den > 0`.
    pub fn affine(num: i64, den: i64, offset: i64) -> Result<Self> {
        if num < 0 || den <= 0 {
            return invalid("affine bound needs num ≥ 0 and den > 0");
        }
        Ok(Bound::Affine { num, den, offset })
    }

    pub fn eval(&self, k: i64) -> Option<i64> {
        match *self {
            Bound::Affine { num, den, offset } => Some(Integer::div_floor(&(num * k), &den) + offset),
            Bound::NoBound => None,
        }
    }
}

impl fmt::Display for Bound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Bound::NoBound => f.write_str("NO_BOUND"),
            Bound::Affine { num, den, offset } => {
                let lead = if num == 1 { String::new() } else { num.to_string() };
                if den == 1 {
                    write!(f, "{lead}k")?;
                } else {
                    write!(f, "floor({lead}k/{den})")?;
                }
                match offset.cmp(&0) {
                    std::cmp::Ordering::Greater => write!(f, "+{offset}"),
                    std::cmp::Ordering::Less => write!(f, "{offset}"),
                    std::cmp::Ordering::Equal => Ok(()),
                }
            }
        }
    }
}

/// Accepts `none`, or `[a]k[/b][±c]` (e.g. `k`, `2k`, `k/2-1`), or `floor(...)` around the `k` term.
impl FromStr for Bound {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let bad = || Error::InvalidArgument(format!("cannot parse bound {s:?}"));
        if t.eq_ignore_ascii_case("none") || t.eq_ignore_ascii_case("no_bound") {
            return Ok(Bound::NoBound);
        }
        let kpos = t.find('k').ok_or_else(bad)?;
        let (head, tail) = t.split_at(kpos);
        let mut tail = &tail[1..];
        let mut head = head;
        let floor = head.starts_with("floor(");
        if floor {
            head = &head[6..];
        }
        let num = if head.is_empty() {
            1
        } else {
            head.trim_end_matches('*').parse::<i64>().map_err(|_| bad())?
        };
        let mut den = 1;
        if let Some(rest) = tail.strip_prefix('/') {
            let end = rest.find(|c: char| !c.is_ascii_digit()).unwrap_or(rest.len());
            den = rest[..end].parse::<i64>().map_err(|_| bad())?;
            tail = &rest[end..];
        }
        if floor {
            tail = tail.strip_prefix(')').ok_or_else(bad)?;
        }
        let offset = if tail.is_empty() {
            0
        } else if tail.starts_with('+') || tail.starts_with('-') {
            tail.parse::<i64>().map_err(|_| bad())?
        } else {
            return Err(bad());
        };
        Bound::affine(num, den, offset)
    }
}

/// Stable-range functions of `k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum RangeFn {
    Mu { bound: Bound },
    /// `ν(k) = min_{j ≥ k} μ(j)`.
    Nu { mu: Bound },
    Lambda { mu: Bound, n: u32, r: u32 },
}

impl RangeFn {
    pub fn eval(&self, k: i64) -> Option<i64> {
        match *self {
            RangeFn::Mu { bound } => bound.eval(k),
            RangeFn::Nu { mu } => nu(&mu, k),
            RangeFn::Lambda { mu, n, r } => lambda_value(&mu, n, r, k),
        }
    }
}

/// Every implemented bound is non-decreasing, so the infimum over `j ≥ k` is attained at `k`.
pub fn nu(mu: &Bound, k: i64) -> Option<i64> {
    mu.eval(k)
}

fn lambda_value(mu: &Bound, n: u32, r: u32, k: i64) -> Option<i64> {
    let mut best = nu(mu, k)?.min(nu(mu, k - 1)? + i64::from(n) - 1);
    for i in 2..=i64::from(r) {
        best = best.min(mu.eval(i64::from(r) * k - i)?);
    }
    Some(best)
}

/// `λ(k) = min{ν(k), ν(k−1)+n−1, μ(rk−i) : 2 ≤ i ≤ r}`; `None` without a bound.
pub fn lambda_range(mu: &Bound, n: u32, r: u32, k: i64) -> Result<Option<i64>> {
    if r < 2 {
        return invalid("replication factor must be at least 2");
    }
    if k < 1 {
        return invalid("k must be positive");
    }
    Ok(lambda_value(mu, n, r, k))
}

/// Best proven stabilisation range for the given coefficients.
pub fn mu(coeff: &CoefficientSpec, n: u32, orientable: bool, with_labels: bool) -> Result<Bound> {
    if n < 2 {
        return invalid(format!("ambient dimension must be at least 2, got {n}"));
    }
    let half = Bound::Affine { num: 1, den: 2, offset: if with_labels { -1 } else { 0 } };
    let rational = if n == 2 && orientable {
        Bound::Affine { num: 1, den: 1, offset: -1 }
    } else {
        Bound::Affine { num: 1, den: 1, offset: 0 }
    };
    let odd_inverted = if n >= 3 {
        Bound::Affine { num: 1, den: 1, offset: if with_labels { -1 } else { 0 } }
    } else {
        Bound::NoBound
    };
    Ok(match coeff {
        CoefficientSpec::Integers => half,
        CoefficientSpec::Rationals => rational,
        CoefficientSpec::HalfInverted => odd_inverted,
        CoefficientSpec::PrimeField { p } if *p != 2 && n >= 3 && !with_labels => {
            Bound::Affine { num: 1, den: 1, offset: 0 }
        }
        CoefficientSpec::PrimeField { .. } => Bound::NoBound,
        CoefficientSpec::Localised { primes } => match primes {
            PrimeSet::All => half,
            ps if ps.is_empty() => rational,
            ps if !ps.contains(2) => odd_inverted,
            _ => half,
        },
    })
}
