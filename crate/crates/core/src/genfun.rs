//! Truncated generating functions `F_g` around a base point.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::oracle::dvv_oracle;
use crate::series::{Monomial, Order, Series, VarId, VarWindow, Q};

/// Weighted degrees to which `F₀`, `F₁`, `F₂` are built.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GenusDegrees {
    pub g0: u32,
    pub g1: u32,
    pub g2: u32,
}

impl GenusDegrees {
    /// Extra weight given to `F₀` and `F₁` over the genus-2 target so
    /// that genus-2 quantities assembled from them reach the target.
    pub const HEAD_G0: u32 = 7;
    pub const HEAD_G1: u32 = 5;

    /// Degrees for a genus-2 target order `d`.
    pub fn for_target(d: u32) -> Self {
        GenusDegrees { g0: d + Self::HEAD_G0, g1: d + Self::HEAD_G1, g2: d }
    }

    pub fn get(&self, g: u32) -> u32 {
        match g {
            0 => self.g0,
            1 => self.g1,
            _ => self.g2,
        }
    }

    pub fn max(&self) -> u32 {
        self.g0.max(self.g1).max(self.g2)
    }

    /// Smallest window level housing these degrees with two units of
    /// slack for field tails.
    pub fn required_max_level(&self) -> u32 {
        self.max() + 1
    }
}

/// One genus-`g` invariant `⟨τ_{n₁}(γ_{α₁})···⟩_g` at the origin.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GwRecord {
    pub genus: u32,
    pub insertions: Vec<VarId>,
    pub value: Q,
}

/// `F₀, F₁` and optionally `F₂` in displacement variables around `base`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenFunSet {
    pub window: VarWindow,
    pub base: BTreeMap<VarId, Q>,
    pub fg: [Option<Series>; 3],
}

impl GenFunSet {
    pub fn f(&self, g: u32) -> Result<&Series> {
        self.fg.get(g as usize).and_then(|x| x.as_ref()).ok_or(Error::MissingGenus(g))
    }

    pub fn has(&self, g: u32) -> bool {
        self.f(g).is_ok()
    }

    pub fn base_value(&self, v: VarId) -> Q {
        self.base.get(&v).cloned().unwrap_or_else(Q::zero)
    }

    /// The absolute coordinate `t^α_n = base + displacement` as a series.
    pub fn coord(&self, v: VarId) -> Series {
        let c = Series::constant(self.window, self.base_value(v));
        &c + &Series::var(self.window, v)
    }

    /// Drops `F₂` (used to run the solver from genus-0/1 data alone).
    pub fn without_f2(&self) -> GenFunSet {
        let mut g = self.clone();
        g.fg[2] = None;
        g
    }

    /// Replaces `F_g`.
    pub fn with_fg(&self, g: u32, f: Series) -> GenFunSet {
        let mut out = self.clone();
        out.fg[g as usize] = Some(f);
        out
    }
}

/// Descendant patterns: multisets of levels `≥ 1`, at most `max_level`,
/// with total weight at most `d`.
fn patterns(d: u32, max_level: u32) -> Vec<Vec<u32>> {
    fn go(min: u32, left: u32, max_level: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        out.push(cur.clone());
        for lvl in min..=max_level {
            if lvl + 1 > left {
                break;
            }
            cur.push(lvl);
            go(lvl, left - lvl - 1, max_level, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(1, d, max_level, &mut Vec::new(), &mut out);
    out
}

fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |a, k| a * BigInt::from(k))
}

fn binom(n: u32, k: u32) -> BigInt {
    factorial(n) / (factorial(k) * factorial(n - k))
}

/// Builds `F_g` for the point target from the intersection-number oracle,
/// re-expanded around `t₀ = shift`. For a fixed pattern of descendant
/// insertions the dimension constraint fixes the number of `τ₀`
/// insertions, so the re-expansion is a finite sum.
pub fn build_point_genfun(window: VarWindow, degrees: GenusDegrees, shift: &Q, with_f2: bool) -> Result<GenFunSet> {
    if window.num_classes != 1 {
        return Err(Error::Config("the point target has a single class".into()));
    }
    let need = degrees.required_max_level();
    if window.max_level < need {
        return Err(Error::Config(format!(
            "max_level {} cannot house weighted degree {} (need at least {})",
            window.max_level,
            degrees.max(),
            need
        )));
    }
    let t0 = VarId::new(0, 1);
    let mut fg: [Option<Series>; 3] = [None, None, None];
    let genera: &[u32] = if with_f2 { &[0, 1, 2] } else { &[0, 1] };
    for &g in genera {
        let d = degrees.get(g);
        let mut terms: Vec<(Monomial, Q)> = Vec::new();
        for p in patterns(d, window.max_level) {
            let wp: u32 = p.iter().map(|&n| n + 1).sum();
            let j = p.iter().map(|&n| n as i64 - 1).sum::<i64>() + 3 - 3 * g as i64;
            if j < 0 {
                continue;
            }
            let j = j as u32;
            let mut ins = p.clone();
            ins.extend(core::iter::repeat(0).take(j as usize));
            let val = dvv_oracle(&ins, g);
            if val.is_zero() {
                continue;
            }
            let mut mult: BTreeMap<u32, u32> = BTreeMap::new();
            for &n in &p {
                *mult.entry(n).or_insert(0) += 1;
            }
            let mut sym = factorial(j);
            for &m in mult.values() {
                sym *= factorial(m);
            }
            let base = val / Q::from_integer(sym);
            let desc: Vec<(VarId, u32)> = mult.iter().map(|(&n, &m)| (VarId::new(n, 1), m)).collect();
            for jp in 0..=j {
                if jp + wp > d {
                    break;
                }
                let cpow = if j == jp { Q::one() } else { pow(shift, j - jp) };
                if cpow.is_zero() {
                    continue;
                }
                let coef = &base * cpow * Q::from_integer(binom(j, jp));
                let mut pairs = desc.clone();
                pairs.push((t0, jp));
                terms.push((Monomial::new(&window, &pairs), coef));
            }
        }
        fg[g as usize] = Some(Series::from_terms(window, terms, Order::at(d as i32)));
    }
    let mut base = BTreeMap::new();
    if !shift.is_zero() {
        base.insert(t0, shift.clone());
    }
    Ok(GenFunSet { window, base, fg })
}

/// Recovers origin invariants of the point target from the coefficients of
/// a genus-`g` series expanded around `t₀ = shift`. Each monomial yields the
/// invariant whose `τ₀` count the dimension constraint fixes; the returned
/// level lists include those `τ₀` insertions.
pub fn unshift_point_series(f: &Series, genus: u32, shift: &Q) -> Result<Vec<(Vec<u32>, Q)>> {
    let w = f.window();
    let mut out = Vec::new();
    for (m, c) in f.terms() {
        let mut desc: Vec<u32> = Vec::new();
        let mut e = 0u32;
        let mut aut = BigInt::one();
        for (v, k) in m.pairs(&w) {
            if v.class != 1 {
                return Err(Error::Config("the point target has a single class".into()));
            }
            if v.level == 0 {
                e = k;
            } else {
                desc.extend(core::iter::repeat(v.level).take(k as usize));
                aut *= factorial(k);
            }
        }
        let j = desc.iter().map(|&n| n as i64 - 1).sum::<i64>() + 3 - 3 * genus as i64;
        if j < e as i64 || (shift.is_zero() && j != e as i64) {
            return Err(Error::Config(format!("coefficient of {} violates the dimension constraint", m.display(&w))));
        }
        let j = j as u32;
        let scale = Q::from_integer(aut * factorial(j)) / (Q::from_integer(binom(j, e)) * pow(shift, j - e));
        desc.extend(core::iter::repeat(0).take(j as usize));
        desc.sort_unstable_by(|a, b| b.cmp(a));
        out.push((desc, c * scale));
    }
    Ok(out)
}

/// Insertions expanded so far, their coefficient and weight.
type Partial = (Vec<(VarId, u32)>, Q, u32);

fn pow(c: &Q, k: u32) -> Q {
    (0..k).fold(Q::one(), |a, _| a * c)
}

/// Assembles `F_g` from invariants at the origin, re-expanded around
/// `base` and truncated at the given degrees. The record set is trusted to
/// be complete for every monomial it must contribute to.
pub fn genfun_from_records(
    window: VarWindow,
    degrees: GenusDegrees,
    base: &BTreeMap<VarId, Q>,
    records: &[GwRecord],
) -> Result<(GenFunSet, Vec<String>)> {
    let mut warnings = Vec::new();
    let mut seen: BTreeMap<(u32, Vec<VarId>), Q> = BTreeMap::new();
    let mut present = [false; 3];
    for r in records {
        if r.genus > 2 {
            warnings.push(format!("record of genus {} ignored", r.genus));
            continue;
        }
        if let Some(v) = r.insertions.iter().find(|v| !window.contains(**v)) {
            warnings.push(format!(
                "record of genus {} rejected: insertion (level {}, class {}) outside window",
                r.genus, v.level, v.class
            ));
            continue;
        }
        let mut key = r.insertions.clone();
        key.sort();
        match seen.get(&(r.genus, key.clone())) {
            Some(v) if *v != r.value => {
                return Err(Error::Config(format!(
                    "inconsistent duplicate records of genus {} for {:?}",
                    r.genus, key
                )));
            }
            Some(_) => continue,
            None => {
                seen.insert((r.genus, key), r.value.clone());
            }
        }
        present[r.genus as usize] = true;
    }
    if !present[0] {
        return Err(Error::Config("F0 required: no genus-0 records".into()));
    }
    let mut terms: [Vec<(Monomial, Q)>; 3] = [Vec::new(), Vec::new(), Vec::new()];
    for ((g, ins), value) in &seen {
        let d = degrees.get(*g);
        let mut mult: BTreeMap<VarId, u32> = BTreeMap::new();
        for v in ins {
            *mult.entry(*v).or_insert(0) += 1;
        }
        let mut sym = BigInt::one();
        for &m in mult.values() {
            sym *= factorial(m);
        }
        let coef = value / Q::from_integer(sym);
        // Expand Π (b_v + x_v)^{m_v}, keeping weights within the degree.
        let mut partial: Vec<Partial> = vec![(Vec::new(), coef, 0)];
        for (&v, &m) in &mult {
            let b = base.get(&v).cloned().unwrap_or_else(Q::zero);
            let mut next = Vec::new();
            for (pairs, c, w) in &partial {
                for e in 0..=m {
                    if b.is_zero() && e != m {
                        continue;
                    }
                    let nw = w + e * v.weight();
                    if nw > d {
                        break;
                    }
                    let mut np = pairs.clone();
                    np.push((v, e));
                    let nc = c * pow(&b, m - e) * Q::from_integer(binom(m, e));
                    next.push((np, nc, nw));
                }
            }
            partial = next;
        }
        let contributed = !partial.is_empty();
        for (pairs, c, _) in partial {
            terms[*g as usize].push((Monomial::new(&window, &pairs), c));
        }
        if !contributed {
            warnings.push(format!("record of genus {g} {ins:?} lies above the degree window"));
        }
    }
    let mut fg: [Option<Series>; 3] = [None, None, None];
    for g in 0..3 {
        if present[g] {
            let t = core::mem::take(&mut terms[g]);
            fg[g] = Some(Series::from_terms(window, t, Order::at(degrees.get(g as u32) as i32)));
        }
    }
    let base = base.iter().filter(|(_, c)| !c.is_zero()).map(|(v, c)| (*v, c.clone())).collect();
    Ok((GenFunSet { window, base, fg }, warnings))
}

/// The invariants a point-target table must carry so that ingestion
/// reproduces [`build_point_genfun`] at the same base and degrees.
pub fn point_records(window: VarWindow, degrees: GenusDegrees, with_f2: bool) -> Vec<GwRecord> {
    let mut out = Vec::new();
    let genera: &[u32] = if with_f2 { &[0, 1, 2] } else { &[0, 1] };
    for &g in genera {
        for p in patterns(degrees.get(g), window.max_level) {
            let j = p.iter().map(|&n| n as i64 - 1).sum::<i64>() + 3 - 3 * g as i64;
            if j < 0 {
                continue;
            }
            let mut ins = p.clone();
            ins.extend(core::iter::repeat(0).take(j as usize));
            let val = dvv_oracle(&ins, g);
            if val.is_zero() {
                continue;
            }
            ins.sort_unstable();
            out.push(GwRecord { genus: g, insertions: ins.iter().map(|&n| VarId::new(n, 1)).collect(), value: val });
        }
    }
    out
}
