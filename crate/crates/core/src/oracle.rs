//! Intersection numbers of ψ-classes on moduli of stable curves, the
//! ground truth for the point target.
//!
//! Computed by the DVV (Virasoro) recursion with the normalizations
//! `⟨τ₀³⟩₀ = 1` and `⟨τ₁⟩₁ = 1/24`. Results are memoized in a shared
//! read-mostly table.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use spin::RwLock;

use crate::series::{q, Q};

type Key = (u32, Vec<u32>);

static CACHE: RwLock<BTreeMap<Key, Q>> = RwLock::new(BTreeMap::new());

/// `⟨τ_{d₁}···τ_{d_n}⟩_g`; zero unless `Σ d_i = 3g − 3 + n` and the
/// moduli space is stable.
pub fn dvv_oracle(levels: &[u32], genus: u32) -> Q {
    let mut ds = levels.to_vec();
    ds.sort_unstable();
    corr(genus, ds)
}

/// Number of memoized entries (diagnostics).
pub fn cache_len() -> usize {
    CACHE.read().len()
}

fn corr(g: u32, ds: Vec<u32>) -> Q {
    let n = ds.len() as i64;
    if 2 * g as i64 - 2 + n <= 0 {
        return Q::zero();
    }
    let sum: i64 = ds.iter().map(|&d| d as i64).sum();
    if sum != 3 * g as i64 - 3 + n {
        return Q::zero();
    }
    if g == 0 && n == 3 {
        return Q::one();
    }
    if g == 1 && n == 1 {
        return q(1, 24);
    }
    let key = (g, ds);
    if let Some(v) = CACHE.read().get(&key) {
        return v.clone();
    }
    let v = recurse(g, &key.1);
    CACHE.write().insert(key, v.clone());
    v
}

/// `(2m+1)!!` for `m ≥ −1`.
fn odd_fact(m: i64) -> BigInt {
    let mut r = BigInt::one();
    let mut k = 2 * m + 1;
    while k > 1 {
        r *= BigInt::from(k);
        k -= 2;
    }
    r
}

fn binom(n: u32, k: u32) -> BigInt {
    let mut r = BigInt::one();
    for i in 0..k {
        r = r * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    r
}

fn sorted(mut v: Vec<u32>) -> Vec<u32> {
    v.sort_unstable();
    v
}

fn recurse(g: u32, ds: &[u32]) -> Q {
    // Remove a τ₀ (string), else a τ₁ (dilaton), else the largest insertion.
    let pos = ds.iter().position(|&d| d == 0).or_else(|| ds.iter().position(|&d| d == 1)).unwrap_or(ds.len() - 1);
    let k = ds[pos] as i64 - 1;
    let mut rest: Vec<u32> = ds.to_vec();
    rest.remove(pos);

    let mut total = Q::zero();
    for j in 0..rest.len() {
        let dj = rest[j] as i64;
        if dj + k < 0 {
            continue;
        }
        let coef = Q::new(odd_fact(k + dj), odd_fact(dj - 1));
        let mut next = rest.clone();
        next[j] = (dj + k) as u32;
        total += coef * corr(g, sorted(next));
    }
    if k >= 1 {
        let half = q(1, 2);
        for r in 0..k {
            let s = k - 1 - r;
            let w = Q::from_integer(odd_fact(r) * odd_fact(s)) * &half;
            if g >= 1 {
                let mut next = rest.clone();
                next.push(r as u32);
                next.push(s as u32);
                total += &w * corr(g - 1, sorted(next));
            }
            total += w * split_sum(g, r as u32, s as u32, &rest);
        }
    }
    total / Q::from_integer(odd_fact(k + 1))
}

/// `Σ_{g₁+g₂=g} Σ_{I⊔J=rest} ⟨τ_r τ_I⟩_{g₁} ⟨τ_s τ_J⟩_{g₂}` over
/// multiset splittings weighted by the number of index subsets.
fn split_sum(g: u32, r: u32, s: u32, rest: &[u32]) -> Q {
    let mut distinct: Vec<(u32, u32)> = Vec::new();
    for &d in rest {
        match distinct.last_mut() {
            Some((v, c)) if *v == d => *c += 1,
            _ => distinct.push((d, 1)),
        }
    }
    let mut total = Q::zero();
    let mut choice = alloc::vec![0u32; distinct.len()];
    loop {
        let mut left = alloc::vec![r];
        let mut right = alloc::vec![s];
        let mut mult = BigInt::one();
        for (i, &(v, c)) in distinct.iter().enumerate() {
            let a = choice[i];
            mult *= binom(c, a);
            left.extend(core::iter::repeat(v).take(a as usize));
            right.extend(core::iter::repeat(v).take((c - a) as usize));
        }
        let left = sorted(left);
        let right = sorted(right);
        for g1 in 0..=g {
            let a = corr(g1, left.clone());
            if a.is_zero() {
                continue;
            }
            let b = corr(g - g1, right.clone());
            if !b.is_zero() {
                total += a * b * Q::from_integer(mult.clone());
            }
        }
        // next choice vector
        let mut i = 0;
        loop {
            if i == distinct.len() {
                return total;
            }
            if choice[i] < distinct[i].1 {
                choice[i] += 1;
                break;
            }
            choice[i] = 0;
            i += 1;
        }
    }
}
