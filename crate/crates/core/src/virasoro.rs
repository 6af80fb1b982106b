//! Virasoro vector fields `L_n = R^{n+1}(−S)`, their closed forms, the
//! constraint right-hand sides `ρ_{g,n}` and the twisted powers
//! `bar(τ₋^m L_n)`.

use alloc::vec;
use alloc::vec::Vec;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::field::VectorField;
use crate::ops::Context;
use crate::series::{q, qi, Series};

/// `L_n` for `n ≥ −1`, by iterating `R` on `−S`.
pub fn virasoro_field(ctx: &Context, n: i32) -> Result<VectorField> {
    if n < -1 {
        return Err(Error::Config("Virasoro index must be at least -1".into()));
    }
    let minus_s = ctx.string_field().neg();
    ctx.rop_pow(&minus_s, (n + 1) as u32)
}

/// The explicit affine-coefficient form of `L_n` for `−1 ≤ n ≤ 2`.
pub fn virasoro_closed_form(ctx: &Context, n: i32) -> Result<VectorField> {
    let model = ctx.model.clone();
    let nc = ctx.n();
    let b = model.b.clone();
    let c1 = model.chern.clone();
    let c2 = model.chern_pow(2);
    let c3 = model.chern_pow(3);
    match n {
        -1 => Ok(ctx.string_field().neg()),
        0 => {
            let b1 = &b[0] + qi(1);
            Ok(ctx.euler_field().neg().sub(&ctx.dilaton_field().scale(&b1)))
        }
        1 => {
            let lin = ctx.tilde_field(|m, a| {
                let x = qi(m as i64) + &b[a - 1];
                let mut out = vec![(m + 1, a, &x * (&x + qi(1)))];
                for be in 1..=nc {
                    out.push((m, be, (qi(2) * &x + qi(1)) * &c1[a - 1][be - 1]));
                    if m >= 1 {
                        out.push((m - 1, be, c2[a - 1][be - 1].clone()));
                    }
                }
                out
            })?;
            let mut corr = VectorField::zero(ctx.window());
            for a in 1..=nc {
                let k = &b[a - 1] * (&b[a - 1] - qi(1));
                if k.is_zero() {
                    continue;
                }
                let one = ctx.corr(0, &[&ctx.gamma_up(a)])?;
                corr = corr.add(&ctx.gamma(a).mul_fn(&one.scale(&k)));
            }
            Ok(lin.sub(&corr))
        }
        2 => {
            let lin = ctx.tilde_field(|m, a| {
                let x = qi(m as i64) + &b[a - 1];
                let mut out = vec![(m + 2, a, &x * (&x + qi(1)) * (&x + qi(2)))];
                for be in 1..=nc {
                    let k1 = qi(3) * &x * &x + qi(6) * &x + qi(2);
                    out.push((m + 1, be, k1 * &c1[a - 1][be - 1]));
                    out.push((m, be, qi(3) * (&x + qi(1)) * &c2[a - 1][be - 1]));
                    if m >= 1 {
                        out.push((m - 1, be, c3[a - 1][be - 1].clone()));
                    }
                }
                out
            })?;
            let mut corr = VectorField::zero(ctx.window());
            for a in 1..=nc {
                let ba = &b[a - 1];
                let k = ba * (ba * ba - qi(1));
                if !k.is_zero() {
                    let t1 = ctx.corr(0, &[&ctx.basis(1, a)])?;
                    let up = ctx.gamma_up(a);
                    let one = ctx.corr(0, &[&up])?;
                    let part = up.mul_fn(&t1).add(&ctx.basis(1, a).mul_fn(&one));
                    corr = corr.add(&part.scale(&k));
                }
            }
            for be in 1..=nc {
                let k = qi(3) * &b[be - 1] * &b[be - 1] - qi(1);
                for a in 1..=nc {
                    let c = &c1[be - 1][a - 1] * &k;
                    if c.is_zero() {
                        continue;
                    }
                    let one = ctx.corr(0, &[&ctx.gamma(a)])?;
                    corr = corr.add(&ctx.gamma_up(be).mul_fn(&one.scale(&c)));
                }
            }
            Ok(lin.sub(&corr))
        }
        _ => Err(Error::Config("closed forms exist for -1 <= n <= 2".into())),
    }
}

/// The pair of fields `R₊^j(G*C^i γ_α)` and `R₊^{n−1−i−j}(G*γ^α)` entering
/// the operator form of `ρ_{g,n}`.
fn rho_pairs(ctx: &Context, n: i32) -> Result<Vec<(VectorField, VectorField)>> {
    let mut out = Vec::new();
    let n = n as u32;
    for i in 0..n {
        for j in 0..n - i {
            for a in 1..=ctx.n() {
                let lo = ctx.gstar(&ctx.gamma(a).cmap_pow(&ctx.model, i));
                let lo = ctx.rplus_pow(&lo, j)?;
                let up = ctx.rplus_pow(&ctx.gstar(&ctx.gamma_up(a)), n - 1 - i - j)?;
                if lo.is_zero() || up.is_zero() {
                    continue;
                }
                out.push((lo, up));
            }
        }
    }
    Ok(out)
}

/// Splitting sum `⟨⟨U V⟩⟩_{g−1} + Σ_{h=1}^{g−1} ⟨⟨U⟩⟩_h ⟨⟨V⟩⟩_{g−h}`.
fn split(ctx: &Context, g: u32, u: &VectorField, v: &VectorField) -> Result<Series> {
    let mut acc = ctx.corr(g - 1, &[u, v])?;
    for h in 1..g {
        acc = &acc + &(&ctx.corr(h, &[u])? * &ctx.corr(g - h, &[v])?);
    }
    Ok(acc)
}

/// Right-hand side `ρ_{g,n}` of the genus-`g` `L_n` constraint.
///
/// For `n = −1` the string equation gives `−δ_{g0}·½ηt₀t₀`. For `n = 0`,
/// `L₀ = −X − (b₁+1)D`, and the quasi-homogeneity and dilaton equations
/// give `−δ_{g0}·½Ct₀t₀ + δ_{g1}(∫c₁c_{d−1} − (b₁+1)χ)/24`.
pub fn rho(ctx: &Context, g: u32, n: i32) -> Result<Series> {
    let w = ctx.window();
    match n {
        i32::MIN..=-2 => Err(Error::Config("Virasoro index must be at least -1".into())),
        -1 => Ok(if g == 0 { ctx.half_eta_t0t0().scale(&qi(-1)) } else { Series::zero(w) }),
        0 => {
            let m = &ctx.model;
            Ok(match g {
                0 => ctx.half_c_t0t0().scale(&qi(-1)),
                1 => Series::constant(w, (&m.c1_cdm1 - (&m.b[0] + qi(1)) * &m.chi) / qi(24)),
                _ => Series::zero(w),
            })
        }
        _ => {
            let mut acc = Series::zero(w);
            for (lo, up) in rho_pairs(ctx, n)? {
                let t = if g == 0 { &ctx.corr(0, &[&lo])? * &ctx.corr(0, &[&up])? } else { split(ctx, g, &lo, &up)? };
                acc = &acc + &t;
            }
            if g == 0 {
                Ok(&acc.scale(&q(1, 2)) - &ctx.half_cpow_t0t0(n as u32 + 1))
            } else {
                Ok(acc.scale(&q(-1, 2)))
            }
        }
    }
}

/// The explicit `ρ_{g,1}` and `ρ_{g,2}` displays, kept separate from the
/// operator form as a cross-check.
pub fn rho_explicit(ctx: &Context, g: u32, n: i32) -> Result<Series> {
    let w = ctx.window();
    let m = &ctx.model;
    let nc = ctx.n();
    let pair = |u: &VectorField, v: &VectorField| -> Result<Series> {
        if g == 0 {
            Ok(&ctx.corr(0, &[u])? * &ctx.corr(0, &[v])?)
        } else {
            split(ctx, g, u, v)
        }
    };
    let sign = if g == 0 { qi(1) } else { qi(-1) };
    let mut acc = Series::zero(w);
    match n {
        1 => {
            for a in 1..=nc {
                let k = q(1, 2) * &m.b[a - 1] * (qi(1) - &m.b[a - 1]);
                acc = &acc + &pair(&ctx.gamma(a), &ctx.gamma_up(a))?.scale(&k);
            }
            acc = acc.scale(&sign);
            if g == 0 {
                acc = &acc - &ctx.half_cpow_t0t0(2);
            }
        }
        2 => {
            for a in 1..=nc {
                let ba = &m.b[a - 1];
                let k = ba * (qi(1) - ba * ba);
                acc = &acc + &pair(&ctx.basis(1, a), &ctx.gamma_up(a))?.scale(&(&k * &sign));
                for be in 1..=nc {
                    let c = &m.chern[a - 1][be - 1];
                    if c.is_zero() {
                        continue;
                    }
                    let k = q(1, 2) * (qi(1) - qi(3) * ba * ba) * c;
                    acc = &acc + &pair(&ctx.gamma(be), &ctx.gamma_up(a))?.scale(&k);
                }
            }
            if g == 0 {
                acc = &acc - &ctx.half_cpow_t0t0(3);
            }
        }
        _ => return Err(Error::Config("explicit right-hand sides exist for n = 1, 2".into())),
    }
    Ok(acc)
}

/// Genus-1 right-hand side in terms of quantum powers of the Euler field.
pub fn rho1_alt(ctx: &Context, k: u32) -> Result<Series> {
    let m = &ctx.model;
    let xs = ctx.xbar_powers(k)?;
    let mut acc = ctx.corr_trace(0, &[&xs[k as usize]])?.scale(&q(-(k as i64 + 1), 8));
    for i in 0..=k as usize {
        for a in 1..=ctx.n() {
            for be in 1..=ctx.n() {
                let c = &m.b[a - 1] * &m.b[be - 1] * q(1, 4);
                if c.is_zero() {
                    continue;
                }
                let l = ctx.corr(0, &[&ctx.gamma(a), &xs[i], &ctx.gamma_up(be)])?;
                let r = ctx.corr(0, &[&ctx.gamma(be), &xs[k as usize - i], &ctx.gamma_up(a)])?;
                acc = &acc + &(&l * &r).scale(&c);
            }
        }
    }
    Ok(acc)
}

/// `⟨⟨L_n⟩⟩_g − ρ_{g,n}`.
pub fn constraint_residual(ctx: &Context, g: u32, n: i32) -> Result<Series> {
    let l = virasoro_field(ctx, n)?;
    Ok(&ctx.corr(g, &[&l])? - &rho(ctx, g, n)?)
}

/// `bar(τ₋^m L_n)` by the twisted-power recursion, anchored at
/// `bar(L_n) = −X̄^{n+1}` and at `L₋₁ = −S`.
pub fn stau(ctx: &Context, m: u32, n: i32) -> Result<VectorField> {
    if n < -1 {
        return Err(Error::Config("Virasoro index must be at least -1".into()));
    }
    if m == 0 {
        return Ok(ctx.xbar_power((n + 1) as u32)?.neg());
    }
    if n == -1 {
        return ctx.bar(&ctx.string_field().tau_minus_pow(m).neg());
    }
    let prev = stau(ctx, m, n - 1)?;
    let lower = stau(ctx, m - 1, n - 1)?;
    let x = ctx.euler_field().clone();
    Ok(ctx.qprod(&x, &prev)?.add(&lower.scale(&qi(m as i64))).add(&ctx.gstar(&lower)))
}

/// Direct `bar(τ₋^m L_n)`.
pub fn stau_direct(ctx: &Context, m: u32, n: i32) -> Result<VectorField> {
    ctx.bar(&virasoro_field(ctx, n)?.tau_minus_pow(m))
}

/// Closed `m = 1` form `−X̄^{n+1}•τ₋S − (n+1)X̄^n − Σ_j X̄^j•(G*X̄^{n−j})`.
pub fn stau1_closed(ctx: &Context, n: u32) -> Result<VectorField> {
    let xs = ctx.xbar_powers(n + 1)?;
    let ts = ctx.string_field().tau_minus();
    let mut acc = ctx.qprod(&xs[n as usize + 1], &ts)?.neg();
    acc = acc.sub(&xs[n as usize].scale(&qi(n as i64 + 1)));
    for j in 0..=n as usize {
        acc = acc.sub(&ctx.qprod(&xs[j], &ctx.gstar(&xs[n as usize - j]))?);
    }
    Ok(acc)
}
