//! Truncated multivariate power series over the rationals.
//!
//! Variables are the descendant coordinates `t^α_n`. Truncation is by
//! weighted degree with `weight(t^α_n) = n + 1`, so a finite weight bound
//! involves only finitely many levels. Every series carries a validity
//! order: all coefficients of weight at most that order are exact, and no
//! term above it is stored.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Exact rational coefficient.
pub type Q = BigRational;

/// Builds the rational `n / d`.
pub fn q(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// Builds the integer rational `n`.
pub fn qi(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

/// Formats a rational as `p/q` (or `p` for integers).
pub fn fmt_q(x: &Q) -> String {
    use alloc::format;
    if x.denom().is_one() {
        format!("{}", x.numer())
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// A descendant coordinate `t^class_level` (class is 1-based).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VarId {
    pub level: u32,
    pub class: u32,
}

impl VarId {
    pub const fn new(level: u32, class: u32) -> Self {
        VarId { level, class }
    }

    /// Weight used by the truncation grading.
    pub const fn weight(&self) -> u32 {
        self.level + 1
    }
}

/// The finite set of coordinates a computation works with.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct VarWindow {
    pub max_level: u32,
    pub num_classes: u32,
}

impl VarWindow {
    pub fn new(max_level: u32, num_classes: u32) -> Result<Self> {
        if num_classes == 0 {
            return Err(Error::Config("window needs at least one class".into()));
        }
        if max_level > 4096 {
            return Err(Error::Config("max_level unreasonably large".into()));
        }
        Ok(VarWindow { max_level, num_classes })
    }

    /// Largest weight any stored coefficient may have. Every variable of
    /// weight at most the cap lies inside the window.
    pub fn cap(&self) -> i32 {
        self.max_level as i32 + 1
    }

    pub fn contains(&self, v: VarId) -> bool {
        v.level <= self.max_level && v.class >= 1 && v.class <= self.num_classes
    }

    pub fn num_vars(&self) -> u32 {
        (self.max_level + 1) * self.num_classes
    }

    /// Level-major, then class, canonical index.
    pub fn index(&self, v: VarId) -> u32 {
        v.level * self.num_classes + (v.class - 1)
    }

    pub fn var(&self, idx: u32) -> VarId {
        VarId::new(idx / self.num_classes, idx % self.num_classes + 1)
    }

    pub fn vars(&self) -> impl Iterator<Item = VarId> + '_ {
        (0..self.num_vars()).map(move |i| self.var(i))
    }
}

/// Validity order. `EXACT` marks a series known completely; `NONE` (−1)
/// marks a series of which nothing is known beyond nonnegativity of weights.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Order(i32);

impl Order {
    pub const EXACT: Order = Order(i32::MAX);
    pub const NONE: Order = Order(-1);

    pub fn at(d: i32) -> Order {
        Order(d.max(-1))
    }

    pub fn is_exact(self) -> bool {
        self.0 == i32::MAX
    }

    /// Finite value; `None` for exact.
    pub fn value(self) -> Option<i32> {
        if self.is_exact() {
            None
        } else {
            Some(self.0)
        }
    }

    /// Shift by `d`, saturating at `EXACT` and flooring at `NONE`.
    pub fn shift(self, d: i64) -> Order {
        if self.is_exact() {
            return self;
        }
        let v = (self.0 as i64 + d).clamp(-1, i32::MAX as i64 - 1);
        Order(v as i32)
    }

    /// Bounds a finite order by the window cap.
    pub fn capped(self, cap: i32) -> Order {
        if self.is_exact() {
            self
        } else {
            Order(self.0.min(cap))
        }
    }

    /// `true` when a term of weight `w` lies within this order.
    pub fn admits(self, w: u32) -> bool {
        self.is_exact() || (w as i64) <= self.0 as i64
    }
}

impl fmt::Display for Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_exact() {
            write!(f, "exact")
        } else {
            write!(f, "{}", self.0)
        }
    }
}

/// A monomial in the window variables, ordered by weight and then by the
/// canonical variable ordering.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    weight: u32,
    exps: Vec<(u32, u32)>,
}

impl Monomial {
    pub fn one() -> Self {
        Monomial { weight: 0, exps: Vec::new() }
    }

    /// Builds a monomial from `(variable, exponent)` pairs; zero exponents
    /// are dropped and repeated variables merged.
    pub fn new(w: &VarWindow, pairs: &[(VarId, u32)]) -> Self {
        let mut map: BTreeMap<u32, u32> = BTreeMap::new();
        for &(v, e) in pairs {
            if e > 0 {
                *map.entry(w.index(v)).or_insert(0) += e;
            }
        }
        Self::from_index_map(w, map.into_iter().collect())
    }

    fn from_index_map(w: &VarWindow, exps: Vec<(u32, u32)>) -> Self {
        let weight = exps.iter().map(|&(i, e)| w.var(i).weight() * e).sum();
        Monomial { weight, exps }
    }

    pub fn weight(&self) -> u32 {
        self.weight
    }

    pub fn total_degree(&self) -> u32 {
        self.exps.iter().map(|&(_, e)| e).sum()
    }

    pub fn is_one(&self) -> bool {
        self.exps.is_empty()
    }

    /// Exponent of variable index `idx`.
    pub fn exp_of(&self, idx: u32) -> u32 {
        match self.exps.binary_search_by_key(&idx, |&(i, _)| i) {
            Ok(p) => self.exps[p].1,
            Err(_) => 0,
        }
    }

    pub fn exponents(&self) -> &[(u32, u32)] {
        &self.exps
    }

    pub fn pairs(&self, w: &VarWindow) -> Vec<(VarId, u32)> {
        self.exps.iter().map(|&(i, e)| (w.var(i), e)).collect()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut out = Vec::with_capacity(self.exps.len() + other.exps.len());
        let (mut i, mut j) = (0, 0);
        while i < self.exps.len() && j < other.exps.len() {
            let (a, b) = (self.exps[i], other.exps[j]);
            match a.0.cmp(&b.0) {
                Ordering::Less => {
                    out.push(a);
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(b);
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((a.0, a.1 + b.1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.exps[i..]);
        out.extend_from_slice(&other.exps[j..]);
        Monomial { weight: self.weight + other.weight, exps: out }
    }

    /// Returns `self` with the exponent of `idx` changed by `delta`
    /// (caller guarantees the result is nonnegative).
    fn bump(&self, idx: u32, var_weight: u32, delta: i64) -> Monomial {
        let mut exps = self.exps.clone();
        match exps.binary_search_by_key(&idx, |&(i, _)| i) {
            Ok(p) => {
                let e = exps[p].1 as i64 + delta;
                if e == 0 {
                    exps.remove(p);
                } else {
                    exps[p].1 = e as u32;
                }
            }
            Err(_) if delta == 0 => {}
            Err(p) => exps.insert(p, (idx, delta as u32)),
        }
        let weight = (self.weight as i64 + delta * var_weight as i64) as u32;
        Monomial { weight, exps }
    }

    pub fn display(&self, w: &VarWindow) -> String {
        use alloc::format;
        if self.exps.is_empty() {
            return String::from("1");
        }
        let mut parts = Vec::new();
        for (v, e) in self.pairs(w) {
            let name = if w.num_classes == 1 { format!("t{}", v.level) } else { format!("t{}_{}", v.class, v.level) };
            if e == 1 {
                parts.push(name);
            } else {
                parts.push(format!("{}^{}", name, e));
            }
        }
        parts.join("*")
    }
}

/// Truncated power series with validity order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Series {
    window: VarWindow,
    terms: BTreeMap<Monomial, Q>,
    valid: Order,
}

impl Series {
    /// The exact zero series.
    pub fn zero(w: VarWindow) -> Self {
        Series { window: w, terms: BTreeMap::new(), valid: Order::EXACT }
    }

    /// The zero series trusted only through `valid`.
    pub fn zero_upto(w: VarWindow, valid: Order) -> Self {
        Series { window: w, terms: BTreeMap::new(), valid: valid.capped(w.cap()) }
    }

    pub fn constant(w: VarWindow, c: Q) -> Self {
        Self::monomial(w, Monomial::one(), c)
    }

    pub fn one(w: VarWindow) -> Self {
        Self::constant(w, Q::one())
    }

    /// `c · m`, exact when `m` fits under the cap.
    pub fn monomial(w: VarWindow, m: Monomial, c: Q) -> Self {
        let mut s = Series::zero(w);
        if (m.weight as i32) > w.cap() {
            s.valid = Order::at(w.cap());
        } else if !c.is_zero() {
            s.terms.insert(m, c);
        }
        s
    }

    /// The coordinate `v`; variables outside the window are beyond the cap.
    pub fn var(w: VarWindow, v: VarId) -> Self {
        if !w.contains(v) {
            return Series::zero_upto(w, Order::at(w.cap()));
        }
        Self::monomial(w, Monomial::new(&w, &[(v, 1)]), Q::one())
    }

    /// Builds a series from terms, dropping zeros and terms above `valid`.
    pub fn from_terms<I: IntoIterator<Item = (Monomial, Q)>>(w: VarWindow, terms: I, valid: Order) -> Self {
        let valid = valid.capped(w.cap());
        let mut map: BTreeMap<Monomial, Q> = BTreeMap::new();
        let mut dropped = false;
        for (m, c) in terms {
            if !valid.admits(m.weight) || (m.weight as i32) > w.cap() {
                dropped = true;
                continue;
            }
            let e = map.entry(m).or_insert_with(Q::zero);
            *e += c;
        }
        map.retain(|_, c| !c.is_zero());
        let valid = if dropped && valid.is_exact() { Order::at(w.cap()) } else { valid };
        Series { window: w, terms: map, valid }
    }

    pub fn window(&self) -> VarWindow {
        self.window
    }

    pub fn valid(&self) -> Order {
        self.valid
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Q)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// `true` when no coefficient within the validity order is nonzero.
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Lowest weight the true series can have: the lowest stored weight, or
    /// one past the validity order if nothing is stored.
    pub fn low(&self) -> Order {
        match self.terms.keys().next() {
            Some(m) => Order::at(m.weight as i32),
            None => self.valid.shift(1),
        }
    }

    /// First nonzero term in the graded canonical order.
    pub fn first_term(&self) -> Option<(&Monomial, &Q)> {
        self.terms.iter().next()
    }

    /// Coefficient of `m`; errors if `m` lies beyond the validity order.
    pub fn coeff(&self, m: &Monomial) -> Result<Q> {
        if !self.valid.admits(m.weight) {
            return Err(Error::Untrusted { weight: m.weight, valid: self.valid });
        }
        Ok(self.terms.get(m).cloned().unwrap_or_else(Q::zero))
    }

    /// Constant term (errors if nothing is trusted).
    pub fn constant_term(&self) -> Result<Q> {
        self.coeff(&Monomial::one())
    }

    /// Lowers the validity order to `ord`, dropping terms above it.
    pub fn truncate(&self, ord: Order) -> Series {
        let valid = if ord < self.valid { ord.capped(self.window.cap()) } else { self.valid };
        let terms =
            self.terms.iter().filter(|(m, _)| valid.admits(m.weight)).map(|(m, c)| (m.clone(), c.clone())).collect();
        Series { window: self.window, terms, valid }
    }

    fn check_window(&self, other: &Series) -> Result<()> {
        if self.window != other.window {
            return Err(Error::WindowMismatch);
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Series) -> Result<Series> {
        self.check_window(other)?;
        Ok(self.add_unchecked(other, false))
    }

    pub fn try_sub(&self, other: &Series) -> Result<Series> {
        self.check_window(other)?;
        Ok(self.add_unchecked(other, true))
    }

    fn add_unchecked(&self, other: &Series, negate: bool) -> Series {
        let valid = self.valid.min(other.valid);
        let mut terms: BTreeMap<Monomial, Q> =
            self.terms.iter().filter(|(m, _)| valid.admits(m.weight)).map(|(m, c)| (m.clone(), c.clone())).collect();
        for (m, c) in other.terms.iter().filter(|(m, _)| valid.admits(m.weight)) {
            let e = terms.entry(m.clone()).or_insert_with(Q::zero);
            if negate {
                *e -= c;
            } else {
                *e += c;
            }
        }
        terms.retain(|_, c| !c.is_zero());
        Series { window: self.window, terms, valid }
    }

    pub fn scale(&self, c: &Q) -> Series {
        if c.is_zero() {
            return Series::zero_upto(self.window, self.valid);
        }
        let terms = self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect();
        Series { window: self.window, terms, valid: self.valid }
    }

    /// Validity order of the product `a·b`: unknown parts of one factor
    /// are multiplied by the other's lowest weight.
    pub fn product_order(a_valid: Order, a_low: Order, b_valid: Order, b_low: Order) -> Order {
        let x = add_orders(a_valid, b_low);
        let y = add_orders(b_valid, a_low);
        x.min(y)
    }

    pub fn try_mul(&self, other: &Series) -> Result<Series> {
        self.check_window(other)?;
        let bound = Self::product_order(self.valid, self.low(), other.valid, other.low());
        Ok(self.mul_bounded(other, bound))
    }

    /// Product keeping terms through `bound` and declaring that order
    /// (capped). Callers must ensure `bound` is a sound validity order.
    pub fn mul_bounded(&self, other: &Series, bound: Order) -> Series {
        let cap = self.window.cap();
        let limit = match bound.value() {
            Some(v) => v.min(cap),
            None => cap,
        };
        let mut dropped = false;
        let mut terms: BTreeMap<Monomial, Q> = BTreeMap::new();
        if limit >= 0 {
            for (ma, ca) in &self.terms {
                if ma.weight as i32 > limit {
                    dropped = true;
                    break;
                }
                for (mb, cb) in &other.terms {
                    if (ma.weight + mb.weight) as i32 > limit {
                        dropped = true;
                        break;
                    }
                    let e = terms.entry(ma.mul(mb)).or_insert_with(Q::zero);
                    *e += ca * cb;
                }
            }
        } else {
            dropped = !self.terms.is_empty() && !other.terms.is_empty();
        }
        terms.retain(|_, c| !c.is_zero());
        let valid = if bound.is_exact() {
            if dropped {
                Order::at(cap)
            } else {
                Order::EXACT
            }
        } else {
            Order::at(limit)
        };
        Series { window: self.window, terms, valid }
    }

    /// Formal partial derivative. Differentiating by a variable outside
    /// the window yields zero trusted through `valid − weight(v)`, since any
    /// dependence on it lies beyond the cap.
    pub fn partial(&self, v: VarId) -> Series {
        let wv = v.weight();
        let valid = self.valid.shift(-(wv as i64));
        if !self.window.contains(v) {
            return Series { window: self.window, terms: BTreeMap::new(), valid };
        }
        let idx = self.window.index(v);
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            let e = m.exp_of(idx);
            if e == 0 {
                continue;
            }
            let nm = m.bump(idx, wv, -1);
            if valid.admits(nm.weight) {
                terms.insert(nm, c * Q::from_integer(BigInt::from(e)));
            }
        }
        Series { window: self.window, terms, valid }
    }

    /// Taylor shift `v → v + c`. The true series must be polynomial in `v`
    /// of degree at most `degree_bound`; validity drops by
    /// `degree_bound · weight(v)`.
    pub fn shift(&self, v: VarId, c: &Q, degree_bound: u32) -> Result<Series> {
        if !self.window.contains(v) {
            return Err(Error::Config("shift variable outside window".into()));
        }
        let idx = self.window.index(v);
        let wv = v.weight();
        for m in self.terms.keys() {
            if m.exp_of(idx) > degree_bound {
                return Err(Error::ShiftDegree { bound: degree_bound });
            }
        }
        let valid = self.valid.shift(-((degree_bound * wv) as i64));
        let mut out: BTreeMap<Monomial, Q> = BTreeMap::new();
        for (m, coef) in &self.terms {
            let e = m.exp_of(idx);
            let mut binom = BigInt::one();
            for j in (0..=e).rev() {
                // term c^{e-j} C(e, j) v^j
                let k = e - j;
                let nm = m.bump(idx, wv, -(k as i64));
                if valid.admits(nm.weight) {
                    let cp = pow_q(c, k);
                    let add = coef * &cp * Q::from_integer(binom.clone());
                    let ent = out.entry(nm).or_insert_with(Q::zero);
                    *ent += add;
                }
                // C(e, j-1) = C(e, j) * j / (e - j + 1)
                if j > 0 {
                    binom = binom * BigInt::from(j) / BigInt::from(e - j + 1);
                }
            }
        }
        out.retain(|_, x| !x.is_zero());
        Ok(Series { window: self.window, terms: out, valid })
    }

    /// Keeps only the terms accepted by `keep`, with the same validity.
    /// Sound when `keep` describes a coordinate projection.
    pub fn filter_terms<F: Fn(&Monomial) -> bool>(&self, keep: F) -> Series {
        let terms = self.terms.iter().filter(|(m, _)| keep(m)).map(|(m, c)| (m.clone(), c.clone())).collect();
        Series { window: self.window, terms, valid: self.valid }
    }

    /// Multiplicative inverse by the geometric series; the constant term
    /// must be trusted and nonzero.
    pub fn recip(&self) -> Result<Series> {
        let c0 = self.constant_term()?;
        if c0.is_zero() {
            return Err(Error::Indeterminate("series with zero constant term is not invertible".into()));
        }
        let inv0 = c0.recip();
        let one = Series::one(self.window);
        let u = (self - &Series::constant(self.window, c0)).scale(&inv0);
        let mut acc = one.clone();
        let mut term = one;
        loop {
            term = -(&term * &u);
            if term.is_zero() {
                acc = &acc + &term;
                break;
            }
            acc = &acc + &term;
        }
        Ok(acc.scale(&inv0))
    }

    /// Replaces the coefficient of `m` (test and negative-control helper).
    pub fn with_coeff(&self, m: Monomial, c: Q) -> Series {
        let mut s = self.clone();
        if c.is_zero() {
            s.terms.remove(&m);
        } else {
            s.terms.insert(m, c);
        }
        s
    }

    /// Re-bases validity to `min(valid, other)` without dropping knowledge.
    pub fn meet(&self, ord: Order) -> Series {
        self.truncate(ord)
    }

    pub fn display(&self) -> String {
        use alloc::format;
        let mut parts = Vec::new();
        for (m, c) in &self.terms {
            parts.push(format!("({})*{}", fmt_q(c), m.display(&self.window)));
        }
        if parts.is_empty() {
            parts.push(String::from("0"));
        }
        format!("{} + O(>{})", parts.join(" + "), self.valid)
    }
}

/// Sum of two orders, saturating at `EXACT`.
pub fn add_orders(a: Order, b: Order) -> Order {
    if a.is_exact() || b.is_exact() {
        return Order::EXACT;
    }
    Order::at(a.0.saturating_add(b.0))
}

fn pow_q(c: &Q, k: u32) -> Q {
    let mut r = Q::one();
    for _ in 0..k {
        r *= c;
    }
    r
}

impl fmt::Display for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display())
    }
}

impl Add for &Series {
    type Output = Series;
    fn add(self, rhs: &Series) -> Series {
        self.try_add(rhs).expect("series window mismatch")
    }
}

impl Sub for &Series {
    type Output = Series;
    fn sub(self, rhs: &Series) -> Series {
        self.try_sub(rhs).expect("series window mismatch")
    }
}

impl Mul for &Series {
    type Output = Series;
    fn mul(self, rhs: &Series) -> Series {
        self.try_mul(rhs).expect("series window mismatch")
    }
}

impl Neg for &Series {
    type Output = Series;
    fn neg(self) -> Series {
        self.scale(&-Q::one())
    }
}

impl Add for Series {
    type Output = Series;
    fn add(self, rhs: Series) -> Series {
        &self + &rhs
    }
}

impl Sub for Series {
    type Output = Series;
    fn sub(self, rhs: Series) -> Series {
        &self - &rhs
    }
}

impl Mul for Series {
    type Output = Series;
    fn mul(self, rhs: Series) -> Series {
        &self * &rhs
    }
}

impl Neg for Series {
    type Output = Series;
    fn neg(self) -> Series {
        -&self
    }
}

impl Mul<&Q> for &Series {
    type Output = Series;
    fn mul(self, rhs: &Q) -> Series {
        self.scale(rhs)
    }
}

/// Absolute value helper for reporting.
pub fn abs_q(x: &Q) -> Q {
    x.abs()
}
