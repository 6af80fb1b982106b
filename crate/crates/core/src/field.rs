//! Vector fields `W = Σ f_{n,α} ∂/∂t^α_n` with series coefficients.
//!
//! A field stores finitely many components. Every unstored component is
//! zero through the field's `tail` order, which lets infinite fields such
//! as the string field be represented exactly within the window cap.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::model::ManifoldModel;
use crate::series::{add_orders, fmt_q, Order, Series, VarId, VarWindow, Q};

/// Levels a field may occupy beyond the variable window before a nonzero
/// component is reported as a capacity overflow.
pub const LEVEL_HEADROOM: u32 = 12;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VectorField {
    window: VarWindow,
    comps: BTreeMap<VarId, Series>,
    tail: Order,
}

impl VectorField {
    /// The exact zero field.
    pub fn zero(w: VarWindow) -> Self {
        VectorField { window: w, comps: BTreeMap::new(), tail: Order::EXACT }
    }

    /// A field whose unstored components are zero through `tail`.
    pub fn with_tail(w: VarWindow, tail: Order) -> Self {
        VectorField { window: w, comps: BTreeMap::new(), tail }
    }

    /// `τ_n(γ_α)` (class 1-based).
    pub fn basis(w: VarWindow, level: u32, class: u32) -> Self {
        let mut f = Self::zero(w);
        f.comps.insert(VarId::new(level, class), Series::one(w));
        f
    }

    /// `Σ_α c_α γ_α` for constant coefficients (0-based slice).
    pub fn primary_const(w: VarWindow, coeffs: &[Q]) -> Self {
        let mut f = Self::zero(w);
        for (a, c) in coeffs.iter().enumerate() {
            if !c.is_zero() {
                f.comps.insert(VarId::new(0, a as u32 + 1), Series::constant(w, c.clone()));
            }
        }
        f
    }

    pub fn window(&self) -> VarWindow {
        self.window
    }

    pub fn tail(&self) -> Order {
        self.tail
    }

    pub fn components(&self) -> impl Iterator<Item = (&VarId, &Series)> {
        self.comps.iter()
    }

    pub fn num_components(&self) -> usize {
        self.comps.len()
    }

    /// Coefficient at `v` (zero through the tail if unstored).
    pub fn comp(&self, v: VarId) -> Series {
        self.comps.get(&v).cloned().unwrap_or_else(|| Series::zero_upto(self.window, self.tail))
    }

    /// Sets a component, enforcing the level capacity.
    pub fn set(&mut self, v: VarId, s: Series) -> Result<()> {
        if v.level > self.window.max_level + LEVEL_HEADROOM {
            if s.is_zero() {
                self.tail = self.tail.min(s.valid());
                return Ok(());
            }
            return Err(Error::Capacity { level: v.level, cap: self.window.max_level + LEVEL_HEADROOM });
        }
        if s.is_zero() && s.valid().is_exact() {
            self.comps.remove(&v);
        } else {
            self.comps.insert(v, s);
        }
        Ok(())
    }

    /// Lowest validity order among stored components and the tail.
    pub fn valid(&self) -> Order {
        self.comps.values().map(|s| s.valid()).fold(self.tail, |a, b| a.min(b))
    }

    /// `true` when every coefficient is zero within its validity order.
    pub fn is_zero(&self) -> bool {
        self.comps.values().all(|s| s.is_zero())
    }

    /// Highest stored level.
    pub fn max_level(&self) -> Option<u32> {
        self.comps.keys().map(|v| v.level).max()
    }

    fn combine(&self, other: &Self, sign: &Q) -> Self {
        let mut out = VectorField { window: self.window, comps: BTreeMap::new(), tail: self.tail.min(other.tail) };
        for (v, s) in &self.comps {
            let o = other.comp(*v);
            out.comps.insert(*v, s + &o.scale(sign));
        }
        for (v, s) in &other.comps {
            if !self.comps.contains_key(v) {
                let o = self.comp(*v);
                out.comps.insert(*v, &o + &s.scale(sign));
            }
        }
        out.prune();
        out
    }

    fn prune(&mut self) {
        self.comps.retain(|_, s| !(s.is_zero() && s.valid().is_exact()));
    }

    pub fn add(&self, other: &Self) -> Self {
        self.combine(other, &Q::one())
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.combine(other, &-Q::one())
    }

    pub fn scale(&self, c: &Q) -> Self {
        let mut out = self.clone();
        for s in out.comps.values_mut() {
            *s = s.scale(c);
        }
        out.prune();
        out
    }

    pub fn neg(&self) -> Self {
        self.scale(&-Q::one())
    }

    /// `f · W` for a function `f`.
    pub fn mul_fn(&self, f: &Series) -> Self {
        let mut out = VectorField { window: self.window, comps: BTreeMap::new(), tail: add_orders(self.tail, f.low()) };
        for (v, s) in &self.comps {
            out.comps.insert(*v, f * s);
        }
        out.prune();
        out
    }

    /// Sum of fields.
    pub fn sum<'a, I: IntoIterator<Item = &'a VectorField>>(w: VarWindow, it: I) -> Self {
        it.into_iter().fold(Self::zero(w), |a, b| a.add(b))
    }

    /// `τ₊`: raises every component one level.
    pub fn tau_plus(&self) -> Result<Self> {
        let mut out = Self::with_tail(self.window, self.tail);
        for (v, s) in &self.comps {
            out.set(VarId::new(v.level + 1, v.class), s.clone())?;
        }
        Ok(out)
    }

    /// `τ₋`: lowers every component one level; level-0 parts vanish.
    pub fn tau_minus(&self) -> Self {
        let mut out = Self::with_tail(self.window, self.tail);
        for (v, s) in &self.comps {
            if v.level > 0 {
                out.comps.insert(VarId::new(v.level - 1, v.class), s.clone());
            }
        }
        out
    }

    /// `τ₋^k`.
    pub fn tau_minus_pow(&self, k: u32) -> Self {
        (0..k).fold(self.clone(), |a, _| a.tau_minus())
    }

    /// `π`: the level-0 part.
    pub fn pi(&self) -> Self {
        let mut out = Self::zero(self.window);
        for (v, s) in &self.comps {
            if v.level == 0 {
                out.comps.insert(*v, s.clone());
            }
        }
        out
    }

    /// `true` when only level-0 components are stored and the tail is exact.
    pub fn is_primary(&self) -> bool {
        self.comps.keys().all(|v| v.level == 0) && self.tail.is_exact()
    }

    /// Componentwise product `U * W`.
    pub fn star(&self, other: &Self) -> Self {
        let mut out = Self::with_tail(self.window, self.tail.min(other.tail));
        for (v, s) in &self.comps {
            if let Some(o) = other.comps.get(v) {
                out.comps.insert(*v, s * o);
            }
        }
        out.prune();
        out
    }

    /// `G * W`: scales component `(m, α)` by `m + b_α`.
    pub fn gstar(&self, model: &ManifoldModel) -> Self {
        let mut out = Self::with_tail(self.window, self.tail);
        for (v, s) in &self.comps {
            let f = Q::from_integer(v.level.into()) + &model.b[(v.class - 1) as usize];
            out.comps.insert(*v, s.scale(&f));
        }
        out.prune();
        out
    }

    /// `C(W)`: applies `C_α^β` levelwise.
    pub fn cmap(&self, model: &ManifoldModel) -> Self {
        let mut out = Self::with_tail(self.window, self.tail);
        for (v, s) in &self.comps {
            let a = (v.class - 1) as usize;
            for b in 0..model.num_classes {
                let c = &model.chern[a][b];
                if c.is_zero() {
                    continue;
                }
                let key = VarId::new(v.level, b as u32 + 1);
                let add = s.scale(c);
                let cur = out.comps.remove(&key);
                out.comps.insert(
                    key,
                    match cur {
                        Some(x) => &x + &add,
                        None => add,
                    },
                );
            }
        }
        out.prune();
        out
    }

    /// `C^k(W)`.
    pub fn cmap_pow(&self, model: &ManifoldModel, k: u32) -> Self {
        (0..k).fold(self.clone(), |a, _| a.cmap(model))
    }

    /// Drops knowledge above `ord` in every coefficient.
    pub fn truncate(&self, ord: Order) -> Self {
        let mut out = Self::with_tail(self.window, self.tail.min(ord));
        for (v, s) in &self.comps {
            out.comps.insert(*v, s.truncate(ord));
        }
        out
    }

    /// First component (canonical order) with a nonzero coefficient.
    pub fn first_nonzero(&self) -> Option<(VarId, &Series)> {
        self.comps.iter().find(|(_, s)| !s.is_zero()).map(|(v, s)| (*v, s))
    }

    pub fn display(&self) -> String {
        let mut parts = Vec::new();
        for (v, s) in &self.comps {
            parts.push(format!("[{},{}] {}", v.level, v.class, s.display()));
        }
        format!("{{{}}} tail {}", parts.join("; "), self.tail)
    }
}

/// Formats a rational coefficient for messages.
pub fn coeff_str(x: &Q) -> String {
    fmt_q(x)
}
