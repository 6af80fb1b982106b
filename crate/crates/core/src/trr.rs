//! Genus-1 and genus-2 topological recursion relations in operator form
//! and the genus-0/1 tensors `A₁`, `A₂`, `B` they involve.

use alloc::vec::Vec;

use crate::error::Result;
use crate::field::VectorField;
use crate::ops::Context;
use crate::series::{q, qi, Series, Q};

type VF = VectorField;

/// `Σ_α f(γ_α, γ^α)`.
fn sum_pairs<F>(ctx: &Context, mut f: F) -> Result<Series>
where
    F: FnMut(&VF, &VF) -> Result<Series>,
{
    let mut acc = Series::zero(ctx.window());
    for a in 1..=ctx.n() {
        acc = &acc + &f(&ctx.gamma(a), &ctx.gamma_up(a))?;
    }
    Ok(acc)
}

/// `U = Σ_β ⟨⟨γ_β⟩⟩₁ γ^β`.
pub fn genus1_one_point(ctx: &Context) -> Result<VF> {
    ctx.corr_field(1, &[])
}

/// `P(W₁..W_k) = Σ_β ⟨⟨W₁..W_k γ_β⟩⟩₁ γ^β`.
fn p1(ctx: &Context, ws: &[&VF]) -> Result<VF> {
    ctx.corr_field(1, ws)
}

/// `E = Σ_α γ_α • γ^α`.
pub fn euler_class_field(ctx: &Context) -> Result<VF> {
    let mut acc = VF::zero(ctx.window());
    for a in 1..=ctx.n() {
        acc = acc.add(&ctx.qprod(&ctx.gamma(a), &ctx.gamma_up(a))?);
    }
    Ok(acc)
}

/// `Σ_{α,β} ⟨⟨W₁..W_k γ^α γ_α γ^β γ_β⟩⟩_g`.
pub fn corr_trace2(ctx: &Context, g: u32, ws: &[&VF]) -> Result<Series> {
    sum_pairs(ctx, |lo, up| {
        let mut fs: Vec<&VF> = ws.to_vec();
        fs.push(up);
        fs.push(lo);
        ctx.corr_trace(g, &fs)
    })
}

/// `Σ_α ⟨⟨ {γ^α • W} γ_α V..⟩⟩₁`.
fn trace_prod1(ctx: &Context, w: &VF, rest: &[&VF]) -> Result<Series> {
    sum_pairs(ctx, |lo, up| {
        let p = ctx.qprod(up, w)?;
        let mut fs: Vec<&VF> = alloc::vec![lo, &p];
        fs.extend_from_slice(rest);
        ctx.corr(1, &fs)
    })
}

/// `A₁(W)`.
pub fn a1(ctx: &Context, w: &VF) -> Result<Series> {
    let u = genus1_one_point(ctx)?;
    let e = euler_class_field(ctx)?;
    let t1 = ctx.corr(1, &[&ctx.qprod(&u, w)?])?;
    let t2 = trace_prod1(ctx, w, &[])?;
    let t3 = ctx.corr(1, &[w, &e])?;
    let t4 = ctx.corr_trace(0, &[w, &u])?;
    let t5 = corr_trace2(ctx, 0, &[w])?;
    Ok(lin(&[(q(7, 10), &t1), (q(1, 10), &t2), (q(-1, 240), &t3), (q(13, 240), &t4), (q(1, 960), &t5)]))
}

/// `A₂(W, V)`.
pub fn a2(ctx: &Context, w: &VF, v: &VF) -> Result<Series> {
    let u = genus1_one_point(ctx)?;
    let e = euler_class_field(ctx)?;
    let wv = ctx.qprod(w, v)?;
    let pw = p1(ctx, &[w])?;
    let pv = p1(ctx, &[v])?;
    let t1 = ctx.corr(0, &[w, v, &u, &u])?;
    let t2 = ctx.corr(1, &[&ctx.qprod(&pw, v)?])?;
    let t3 = ctx.corr(1, &[&ctx.qprod(&pv, w)?])?;
    let t4 = ctx.corr(1, &[&wv, &u])?;
    let t5 = ctx.corr_trace(0, &[w, v, &u])?;
    let t6 = ctx.corr_trace(0, &[w, &pv])?;
    let t7 = ctx.corr_trace(0, &[v, &pw])?;
    let t8 = ctx.corr(1, &[w, v, &e])?;
    let t9 = sum_pairs(ctx, |lo, up| ctx.corr(0, &[w, v, up, &p1(ctx, &[lo])?]))?;
    let t10 = trace_prod1(ctx, w, &[v])?;
    let t11 = trace_prod1(ctx, v, &[w])?;
    let t12 = ctx.corr_trace(1, &[&wv])?;
    let t13 = corr_trace2(ctx, 0, &[w, v])?;
    Ok(lin(&[
        (q(13, 10), &t1),
        (q(4, 5), &t2),
        (q(4, 5), &t3),
        (q(-4, 5), &t4),
        (q(23, 240), &t5),
        (q(1, 48), &t6),
        (q(1, 48), &t7),
        (q(-1, 80), &t8),
        (q(7, 30), &t9),
        (q(1, 30), &t10),
        (q(1, 30), &t11),
        (q(-1, 30), &t12),
        (q(1, 576), &t13),
    ]))
}

const PERMS: [[usize; 3]; 6] = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];

/// `B(W₁, W₂, W₃)`.
pub fn btensor(ctx: &Context, w1: &VF, w2: &VF, w3: &VF) -> Result<Series> {
    let u = genus1_one_point(ctx)?;
    let e = euler_class_field(ctx)?;
    let pu = p1(ctx, &[&u])?;
    let mut q3 = VF::zero(ctx.window());
    for a in 1..=ctx.n() {
        let c = ctx.corr_trace(1, &[&ctx.gamma_up(a)])?;
        q3 = q3.add(&ctx.gamma(a).mul_fn(&c));
    }
    let ws = [w1, w2, w3];
    let t1 = ctx.corr(0, &[w1, w2, w3, &u, &u])?;
    let t2 = ctx.corr(0, &[w1, w2, w3, &pu])?;
    let t3 = ctx.corr_trace(0, &[w1, w2, w3, &u])?;
    let t4 = ctx.corr(1, &[w1, w2, w3, &e])?;
    let t5 = sum_pairs(ctx, |lo, up| ctx.corr(0, &[w1, w2, w3, up, &p1(ctx, &[lo])?]))?;
    let t6 = ctx.corr(0, &[w1, w2, w3, &q3])?;
    let mut acc =
        lin(&[(q(1, 5), &t1), (q(-6, 5), &t2), (q(1, 120), &t3), (q(-1, 120), &t4), (q(1, 10), &t5), (q(-1, 20), &t6)]);
    for p in PERMS {
        let (a, b, c) = (ws[p[0]], ws[p[1]], ws[p[2]]);
        let pc = p1(ctx, &[c])?;
        let pa = p1(ctx, &[a])?;
        let bc = ctx.qprod(b, c)?;
        let s1 = ctx.corr(0, &[a, b, &u, &pc])?;
        let s2 = sum_pairs(ctx, |lo, up| Ok(&ctx.corr(1, &[&ctx.qprod(a, lo)?])? * &ctx.corr(1, &[up, b, c])?))?;
        let s3 = ctx.corr(1, &[a, &ctx.qprod(b, &pc)?])?;
        let s4 = ctx.corr(1, &[&pa, &bc])?;
        let s5 = ctx.corr(1, &[&u, a, &bc])?;
        let s6 = ctx.corr_trace(0, &[a, b, &pc])?;
        let s7 = ctx.corr_trace(0, &[a, &p1(ctx, &[b, c])?])?;
        let s8 = sum_pairs(ctx, |lo, up| ctx.corr(0, &[up, &p1(ctx, &[a, lo])?, b, c]))?;
        let s9 = trace_prod1(ctx, c, &[a, b])?;
        let s10 = ctx.corr_trace(1, &[a, &bc])?;
        acc = &acc
            + &lin(&[
                (q(-1, 5), &s1),
                (q(2, 5), &s2),
                (q(-3, 5), &s3),
                (q(3, 10), &s4),
                (q(-1, 5), &s5),
                (q(-1, 80), &s6),
                (q(1, 80), &s7),
                (q(-1, 20), &s8),
                (q(1, 60), &s9),
                (q(-1, 120), &s10),
            ]);
    }
    Ok(acc)
}

/// `Σ c_i s_i`.
pub fn lin(terms: &[(Q, &Series)]) -> Series {
    let mut it = terms.iter();
    let (c0, s0) = it.next().expect("nonempty combination");
    let mut acc = s0.scale(c0);
    for (c, s) in it {
        acc = &acc + &s.scale(c);
    }
    acc
}

/// `(∇_V A₁)(W) = V(A₁(W)) − A₁(∇_V W)`.
pub fn nabla_a1(ctx: &Context, v: &VF, w: &VF) -> Result<Series> {
    Ok(&ctx.deriv(v, &a1(ctx, w)?) - &a1(ctx, &ctx.nabla(v, w))?)
}

/// `⟨⟨T(W)⟩⟩₁ − (1/24) Σ⟨⟨W γ^μ γ_μ⟩⟩₀`.
pub fn trr_g1_residual(ctx: &Context, w: &VF) -> Result<Series> {
    let t = ctx.big_t(w)?;
    Ok(&ctx.corr(1, &[&t])? - &ctx.corr_trace(0, &[w])?.scale(&q(1, 24)))
}

/// First-derivative form of the genus-1 relation.
pub fn trr_g1_d1_residual(ctx: &Context, w: &VF, v: &VF) -> Result<Series> {
    let t = ctx.big_t(w)?;
    let lhs = ctx.corr(1, &[&t, v])?;
    let rhs = &ctx.corr(1, &[&ctx.qprod(w, v)?])? + &ctx.corr_trace(0, &[w, v])?.scale(&q(1, 24));
    Ok(&lhs - &rhs)
}

/// Second-derivative form of the genus-1 relation.
pub fn trr_g1_d2_residual(ctx: &Context, w: &VF, v1: &VF, v2: &VF) -> Result<Series> {
    let t = ctx.big_t(w)?;
    let u = genus1_one_point(ctx)?;
    let lhs = ctx.corr(1, &[&t, v1, v2])?;
    let r1 = ctx.corr(1, &[&ctx.qprod(w, v1)?, v2])?;
    let r2 = ctx.corr(1, &[&ctx.qprod(w, v2)?, v1])?;
    let r3 = ctx.corr(0, &[w, v1, v2, &u])?;
    let r4 = ctx.corr_trace(0, &[w, v1, v2])?.scale(&q(1, 24));
    Ok(&lhs - &(&(&(&r1 + &r2) + &r3) + &r4))
}

/// `⟨⟨T²(W)⟩⟩₂ − A₁(W)`.
pub fn trr1_residual(ctx: &Context, w: &VF) -> Result<Series> {
    let t2 = ctx.big_t_pow(w, 2)?;
    Ok(&ctx.corr(2, &[&t2])? - &a1(ctx, w)?)
}

/// `⟨⟨T(W)T(V)⟩⟩₂ − 3⟨⟨T(W•V)⟩⟩₂ − A₂(W,V)`.
pub fn trr2_residual(ctx: &Context, w: &VF, v: &VF) -> Result<Series> {
    let tw = ctx.big_t(w)?;
    let tv = ctx.big_t(v)?;
    let twv = ctx.big_t(&ctx.qprod(w, v)?)?;
    let lhs = &ctx.corr(2, &[&tw, &tv])? - &ctx.corr(2, &[&twv])?.scale(&qi(3));
    Ok(&lhs - &a2(ctx, w, v)?)
}

/// Genus-2 side of the three-field relation, minus `B(W₁,W₂,W₃)`.
pub fn bp_residual(ctx: &Context, w1: &VF, w2: &VF, w3: &VF) -> Result<Series> {
    let ws = [w1, w2, w3];
    let prod3 = ctx.qprod_all(&[w1, w2, w3])?;
    let mut lhs = ctx.corr(2, &[&prod3])?.scale(&qi(2));
    let mut four = Series::zero(ctx.window());
    for a in 1..=ctx.n() {
        let c = ctx.corr(0, &[w1, w2, w3, &ctx.gamma_up(a)])?;
        let tg = ctx.big_t(&ctx.gamma(a))?;
        four = &four + &(&c * &ctx.corr(2, &[&tg])?);
    }
    lhs = &lhs - &four.scale(&qi(2));
    for i in 0..3 {
        let wi = ws[i];
        let (wj, wk) = match i {
            0 => (w2, w3),
            1 => (w1, w3),
            _ => (w1, w2),
        };
        let jk = ctx.qprod(wj, wk)?;
        let ti = ctx.big_t(wi)?;
        lhs = &lhs - &ctx.corr(2, &[&ti, &jk])?;
        lhs = &lhs + &ctx.corr(2, &[wi, &ctx.big_t(&jk)?])?;
    }
    Ok(&lhs - &btensor(ctx, w1, w2, w3)?)
}

/// Literal component form of the first genus-2 relation for
/// `x = τ_level(γ_class)`, written with explicit index sums.
pub fn trr1_literal_residual(ctx: &Context, level: u32, class: usize) -> Result<Series> {
    let n = ctx.n();
    let x0 = ctx.basis(level, class);
    let x1 = ctx.basis(level + 1, class);
    let x2 = ctx.basis(level + 2, class);
    let c0 = |fs: &[&VF]| ctx.corr(0, fs);
    let c1 = |fs: &[&VF]| ctx.corr(1, fs);
    let c2 = |fs: &[&VF]| ctx.corr(2, fs);
    let lo = |a: usize| ctx.gamma(a);
    let up = |a: usize| ctx.gamma_up(a);
    let mut rhs = Series::zero(ctx.window());
    for a in 1..=n {
        rhs = &rhs + &(&c0(&[&x1, &up(a)])? * &c2(&[&lo(a)])?);
        rhs = &rhs + &(&c0(&[&x0, &up(a)])? * &c2(&[&ctx.basis(1, a)])?);
        for b in 1..=n {
            let t = &(&c0(&[&x0, &up(a)])? * &c0(&[&lo(a), &up(b)])?) * &c2(&[&lo(b)])?;
            rhs = &rhs - &t;
            let t = &(&c0(&[&x0, &up(a), &up(b)])? * &c1(&[&lo(a)])?) * &c1(&[&lo(b)])?;
            rhs = &rhs + &t.scale(&q(7, 10));
            let t = &c0(&[&x0, &up(a), &up(b)])? * &c1(&[&lo(a), &lo(b)])?;
            rhs = &rhs + &t.scale(&q(1, 10));
            let t = &c1(&[&x0, &lo(a)])? * &c0(&[&up(a), &lo(b), &up(b)])?;
            rhs = &rhs - &t.scale(&q(1, 240));
            let t = &c0(&[&x0, &lo(a), &up(a), &up(b)])? * &c1(&[&lo(b)])?;
            rhs = &rhs + &t.scale(&q(13, 240));
            let t = c0(&[&x0, &up(a), &lo(a), &up(b), &lo(b)])?;
            rhs = &rhs + &t.scale(&q(1, 960));
        }
    }
    Ok(&c2(&[&x2])? - &rhs)
}

/// `⟨⟨T^{3g−1}(W)⟩⟩_g`.
pub fn trrex_residual(ctx: &Context, g: u32, w: &VF) -> Result<Series> {
    let t = ctx.big_t_pow(w, 3 * g - 1)?;
    ctx.corr(g, &[&t])
}
