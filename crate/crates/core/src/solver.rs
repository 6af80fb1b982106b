//! Reconstruction of `F₂` from genus-0 and genus-1 data: the Euler
//! relation, the compatibility fields `Y_k`, the functions `ψ_k`, the
//! matrices `b`, `c`, `λ`, and the matrix identities behind the
//! invertibility criterion.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::Zero;

use crate::check::Residuals;
use crate::error::{Error, Result};
use crate::field::VectorField;
use crate::ops::{primary_coeffs, Context};
use crate::series::{q, qi, Order, Series, Q};
use crate::trr::{a1, a2, btensor};
use crate::virasoro::virasoro_field;

type VF = VectorField;

/// `X̄^{n+1} = Σ_{i≤n} f_i X̄^i`.
#[derive(Clone, Debug)]
pub struct EulerRelation {
    pub n: usize,
    pub f: Vec<Series>,
}

impl EulerRelation {
    /// `f_j`, zero outside `0..=n`.
    pub fn fj(&self, j: i64, ctx: &Context) -> Series {
        if j < 0 || j as usize > self.n {
            Series::zero(ctx.window())
        } else {
            self.f[j as usize].clone()
        }
    }
}

/// Rank of a rational matrix.
fn rank(m: &[Vec<Q>]) -> usize {
    let mut a: Vec<Vec<Q>> = m.to_vec();
    let rows = a.len();
    let cols = if rows == 0 { 0 } else { a[0].len() };
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else { continue };
        a.swap(r, p);
        for i in 0..rows {
            if i != r && !a[i][c].is_zero() {
                let f = &a[i][c] / &a[r][c];
                for j in 0..cols {
                    let t = &f * &a[r][j];
                    a[i][j] -= t;
                }
            }
        }
        r += 1;
    }
    r
}

/// Inverse of a square series matrix by elimination with pivots whose
/// constant terms are nonzero.
pub fn series_mat_inverse(m: &[Vec<Series>]) -> Result<Vec<Vec<Series>>> {
    let n = m.len();
    if n == 0 {
        return Ok(Vec::new());
    }
    let w = m[0][0].window();
    let mut a: Vec<Vec<Series>> = m.to_vec();
    let mut inv: Vec<Vec<Series>> =
        (0..n).map(|i| (0..n).map(|j| if i == j { Series::one(w) } else { Series::zero(w) }).collect()).collect();
    for c in 0..n {
        let p =
            (c..n).find(|&i| a[i][c].constant_term().map(|x| !x.is_zero()).unwrap_or(false)).ok_or(Error::SingularC)?;
        a.swap(c, p);
        inv.swap(c, p);
        let r = a[c][c].recip()?;
        for j in 0..n {
            a[c][j] = &a[c][j] * &r;
            inv[c][j] = &inv[c][j] * &r;
        }
        for i in 0..n {
            if i == c || a[i][c].is_zero() {
                continue;
            }
            let f = a[i][c].clone();
            for j in 0..n {
                a[i][j] = &a[i][j] - &(&f * &a[c][j]);
                inv[i][j] = &inv[i][j] - &(&f * &inv[c][j]);
            }
        }
    }
    Ok(inv)
}

/// Solves for the minimal Euler relation. `n + 1` is the longest prefix
/// `X̄⁰..X̄ⁿ` independent at the base point.
pub fn solve_euler_relation(ctx: &Context) -> Result<EulerRelation> {
    let nc = ctx.n();
    let xs = ctx.xbar_powers(nc as u32)?;
    let cols: Vec<Vec<Series>> = xs.iter().map(|x| primary_coeffs(x, nc)).collect();
    let const_col = |k: usize| -> Result<Vec<Q>> { cols[k].iter().map(|s| s.constant_term()).collect() };
    let mut len = 0;
    for k in 0..=nc {
        let mat: Vec<Vec<Q>> = (0..=k).map(const_col).collect::<Result<_>>()?;
        if rank(&mat) == k + 1 {
            len = k + 1;
        } else {
            break;
        }
    }
    if len == 0 {
        return Err(Error::DegenerateBase("the identity power vanishes at the base point".into()));
    }
    let n = len - 1;
    // Choose n+1 rows with an invertible constant minor.
    let mut rows: Vec<usize> = Vec::new();
    for r in 0..nc {
        let mut cand = rows.clone();
        cand.push(r);
        let mat: Vec<Vec<Q>> = cand
            .iter()
            .map(|&i| (0..=n).map(|k| cols[k][i].constant_term()).collect::<Result<Vec<Q>>>())
            .collect::<Result<_>>()?;
        if rank(&mat) == cand.len() {
            rows = cand;
        }
        if rows.len() == n + 1 {
            break;
        }
    }
    let sys: Vec<Vec<Series>> = rows.iter().map(|&i| (0..=n).map(|k| cols[k][i].clone()).collect()).collect();
    let inv = series_mat_inverse(&sys)?;
    let rhs: Vec<Series> = rows.iter().map(|&i| cols[n + 1][i].clone()).collect();
    let f: Vec<Series> =
        (0..=n).map(|k| (0..=n).fold(Series::zero(ctx.window()), |acc, j| &acc + &(&inv[k][j] * &rhs[j]))).collect();
    let rel = EulerRelation { n, f };
    if !euler_relation_residual(ctx, &rel, 0)?.is_zero() {
        return Err(Error::DegenerateBase("Euler relation inconsistent off the pivot rows".into()));
    }
    Ok(rel)
}

/// `X̄^{n+1+k} − Σ f_i X̄^{i+k}`.
pub fn euler_relation_residual(ctx: &Context, rel: &EulerRelation, k: usize) -> Result<VF> {
    let xs = ctx.xbar_powers((rel.n + 1 + k) as u32)?;
    let mut r = xs[rel.n + 1 + k].clone();
    for i in 0..=rel.n {
        r = r.sub(&xs[i + k].mul_fn(&rel.f[i]));
    }
    Ok(r)
}

/// `Y_k = Σ_{i<k} X̄^i • ((G − ½Z) * X̄^{k−1−i})`.
pub fn y_field(ctx: &Context, k: usize) -> Result<VF> {
    let xs = ctx.xbar_powers(k.max(1) as u32)?;
    let mut acc = VF::zero(ctx.window());
    for i in 0..k {
        acc = acc.add(&ctx.qprod(&xs[i], &ctx.g_half(&xs[k - 1 - i]))?);
    }
    Ok(acc)
}

/// `y_k(W) = Σ_{i<k} X̄^i • ((G − ½Z) * (W • X̄^{k−1−i}))`.
pub fn y_of(ctx: &Context, k: usize, w: &VF) -> Result<VF> {
    let xs = ctx.xbar_powers(k.max(1) as u32)?;
    let mut acc = VF::zero(ctx.window());
    for i in 0..k {
        let inner = ctx.g_half(&ctx.qprod(w, &xs[k - 1 - i])?);
        acc = acc.add(&ctx.qprod(&xs[i], &inner)?);
    }
    Ok(acc)
}

/// `Y_{n+1+k} − Σ f_i Y_{i+k}`.
pub fn compat_residual(ctx: &Context, rel: &EulerRelation, k: usize) -> Result<VF> {
    let mut r = y_field(ctx, rel.n + 1 + k)?;
    for i in 0..=rel.n {
        r = r.sub(&y_field(ctx, i + k)?.mul_fn(&rel.f[i]));
    }
    Ok(r)
}

/// `y_{n+1+k}(W) − Σ f_i y_{i+k}(W)`.
pub fn compat_w_residual(ctx: &Context, rel: &EulerRelation, k: usize, w: &VF) -> Result<VF> {
    let mut r = y_of(ctx, rel.n + 1 + k, w)?;
    for i in 0..=rel.n {
        r = r.sub(&y_of(ctx, i + k, w)?.mul_fn(&rel.f[i]));
    }
    Ok(r)
}

/// `bar(τ₋ L_n)` for `n ≥ −1`.
pub fn bar_tau_l(ctx: &Context, n: i32) -> Result<VF> {
    ctx.bar(&virasoro_field(ctx, n)?.tau_minus())
}

/// `ψ_k = ⟨⟨X̄^k⟩⟩₂ − ⟨⟨T(bar τ₋L_{k−1})⟩⟩₂`.
pub fn psi_direct(ctx: &Context, k: u32) -> Result<Series> {
    let xk = ctx.xbar_power(k)?;
    let t = ctx.big_t(&bar_tau_l(ctx, k as i32 - 1)?)?;
    Ok(&ctx.corr(2, &[&xk])? - &ctx.corr(2, &[&t])?)
}

/// `ψ̃_k = ψ_k − (3k/2)⟨⟨T(X̄^{k−1})⟩⟩₂`.
pub fn psi_tilde(ctx: &Context, k: u32) -> Result<Series> {
    let p = psi_direct(ctx, k)?;
    if k == 0 {
        return Ok(p);
    }
    let t = ctx.big_t(&ctx.xbar_power(k - 1)?)?;
    Ok(&p - &ctx.corr(2, &[&t])?.scale(&q(3 * k as i64, 2)))
}

/// `ψ̃_k` in the form `⟨⟨X̄^k⟩⟩₂ + ⟨⟨T(X̄^k•τ₋S)⟩⟩₂ + ⟨⟨T(Y_k)⟩⟩₂`.
pub fn psi_tilde_via_y(ctx: &Context, k: u32) -> Result<Series> {
    let xk = ctx.xbar_power(k)?;
    let ts = ctx.string_field().tau_minus();
    let a = ctx.big_t(&ctx.qprod(&xk, &ts)?)?;
    let b = ctx.big_t(&y_field(ctx, k as usize)?)?;
    Ok(&(&ctx.corr(2, &[&xk])? + &ctx.corr(2, &[&a])?) + &ctx.corr(2, &[&b])?)
}

/// `B(X̄, S̄, S̄)`.
fn b_xss(ctx: &Context) -> Result<Series> {
    let xs = ctx.xbar_powers(1)?;
    btensor(ctx, &xs[1], &xs[0], &xs[0])
}

/// `A₁(τ₋² L₀)`.
pub fn a1_tau2_l0(ctx: &Context) -> Result<Series> {
    a1(ctx, &virasoro_field(ctx, 0)?.tau_minus_pow(2))
}

/// Right-hand side of the `ψ` recursion (genus-0/1 data only).
pub fn recpsi_rhs(ctx: &Context, k: u32) -> Result<Series> {
    let xs = ctx.xbar_powers(k.max(1))?;
    let kk = qi(k as i64 + 1);
    let mut acc = a2(ctx, &xs[1], &bar_tau_l(ctx, k as i32 - 1)?)?.scale(&kk);
    acc = &acc - &a2(ctx, &xs[k as usize], &bar_tau_l(ctx, 0)?)?.scale(&kk);
    let tx = ctx.big_t(&xs[k as usize])?;
    acc = &acc - &ctx.deriv(&tx, &a1_tau2_l0(ctx)?).scale(&kk);
    if k == 0 {
        acc = &acc - &b_xss(ctx)?;
    }
    for j in 1..k as usize {
        acc = &acc + &btensor(ctx, &xs[1], &xs[j], &xs[k as usize - j])?;
    }
    Ok(acc)
}

/// `ψ_{k+1}` from `ψ_k` by the recursion; undefined at `k = 1`.
pub fn psi_recursive(ctx: &Context, k: u32, psi_k: &Series) -> Result<Series> {
    if k == 1 {
        return Err(Error::Indeterminate("psi_2 not determined by recursion".into()));
    }
    let tx = ctx.big_t(&ctx.xbar_power(1)?)?;
    let rhs = &recpsi_rhs(ctx, k)? + &ctx.deriv(&tx, psi_k).scale(&qi(k as i64 + 1));
    Ok(rhs.scale(&Q::new((1).into(), (2 * (k as i64 - 1)).into())))
}

/// `2(k−1)ψ_{k+1} − (k+1)T(X̄)ψ_k − rhs`, on data with `F₂`.
pub fn recpsi_residual(ctx: &Context, k: u32) -> Result<Series> {
    let tx = ctx.big_t(&ctx.xbar_power(1)?)?;
    let lhs = &psi_direct(ctx, k + 1)?.scale(&qi(2 * (k as i64 - 1)))
        - &ctx.deriv(&tx, &psi_direct(ctx, k)?).scale(&qi(k as i64 + 1));
    Ok(&lhs - &recpsi_rhs(ctx, k)?)
}

/// Residual of the three-index `ψ` relation.
pub fn thm_psi_residual(ctx: &Context, ms: [u32; 3]) -> Result<Series> {
    let m: u32 = ms.iter().sum();
    let xs = ctx.xbar_powers(m)?;
    let mut lhs = psi_direct(ctx, m)?.scale(&qi(2));
    let mut rhs = btensor(ctx, &xs[ms[0] as usize], &xs[ms[1] as usize], &xs[ms[2] as usize])?;
    for &mi in &ms {
        let rest = m - mi;
        let ta = ctx.big_t(&xs[rest as usize])?;
        let tb = ctx.big_t(&xs[mi as usize])?;
        lhs = &lhs + &ctx.deriv(&ta, &psi_direct(ctx, mi)?);
        lhs = &lhs - &ctx.deriv(&tb, &psi_direct(ctx, rest)?);
        rhs = &rhs + &a2(ctx, &xs[mi as usize], &bar_tau_l(ctx, rest as i32 - 1)?)?;
        rhs = &rhs - &a2(ctx, &xs[rest as usize], &bar_tau_l(ctx, mi as i32 - 1)?)?;
    }
    Ok(&lhs - &rhs)
}

/// `h_k`.
pub fn h_k(ctx: &Context, k: u32) -> Result<Series> {
    let xs = ctx.xbar_powers(k.max(1))?;
    let mut arg = bar_tau_l(ctx, k as i32 - 1)?;
    if k >= 1 {
        arg = arg.add(&xs[k as usize - 1].scale(&q(3 * k as i64, 2)));
    }
    let mut acc = a2(ctx, &xs[1], &arg)?;
    acc = &acc - &a2(ctx, &xs[k as usize], &bar_tau_l(ctx, 0)?)?;
    let tx = ctx.big_t(&xs[k as usize])?;
    acc = &acc - &ctx.deriv(&tx, &a1_tau2_l0(ctx)?);
    let mut bs = Series::zero(ctx.window());
    if k == 0 {
        bs = &bs - &b_xss(ctx)?;
    }
    for j in 1..k as usize {
        bs = &bs + &btensor(ctx, &xs[1], &xs[j], &xs[k as usize - j])?;
    }
    Ok(&acc + &bs.scale(&q(1, k as i64 + 1)))
}

/// `g_k`.
pub fn g_k(ctx: &Context, rel: &EulerRelation, k: u32) -> Result<Series> {
    let n = rel.n as u32;
    let xs = ctx.xbar_powers(n + 1 + k)?;
    let mut acc = Series::zero(ctx.window());
    for j in 1..=(n + k) {
        let b = btensor(ctx, &xs[1], &xs[j as usize], &xs[(n + 1 + k - j) as usize])?;
        acc = &acc + &b.scale(&q(1, 2 * (n + k + 2) as i64));
    }
    for i in 0..=n {
        for j in 1..(i + k) {
            let b = btensor(ctx, &xs[1], &xs[j as usize], &xs[(i + k - j) as usize])?;
            acc = &acc - &(&b * &rel.f[i as usize]).scale(&q(1, 2 * (i + k + 1) as i64));
        }
    }
    if k == 0 {
        acc = &acc + &(&b_xss(ctx)? * &rel.f[0]).scale(&q(1, 2));
    }
    Ok(acc)
}

/// The matrices `b_{k,i}` (`1 ≤ k ≤ n+1`), `c_{k,i}` (`0 ≤ k ≤ n`) and
/// `λ = c⁻¹`. Stored as `b[k−1][i−1]`, `c[k][i−1]`, `lambda[i−1][k]`.
#[derive(Clone, Debug)]
pub struct SolverMatrices {
    pub b: Vec<Vec<Series>>,
    pub c: Vec<Vec<Series>>,
    pub lambda: Vec<Vec<Series>>,
}

/// `b_{k+1,i}` for `0 ≤ k ≤ kmax`.
pub fn b_matrix(ctx: &Context, rel: &EulerRelation, kmax: usize) -> Vec<Vec<Series>> {
    let n = rel.n as i64;
    let mut b: Vec<Vec<Series>> = Vec::new();
    for k in 0..=kmax as i64 {
        let mut row = Vec::new();
        for i in 1..=n + 1 {
            let mut s = Series::zero(ctx.window());
            for j in 0..k {
                s = &s + &(&rel.fj(j + n - k + 1, ctx) * &b[j as usize][(i - 1) as usize]);
            }
            if i > k {
                s = &s + &rel.fj(i - k - 1, ctx);
            }
            row.push(s);
        }
        b.push(row);
    }
    b
}

pub fn build_matrices(ctx: &Context, rel: &EulerRelation) -> Result<SolverMatrices> {
    let n = rel.n as i64;
    let b = b_matrix(ctx, rel, rel.n);
    let mut c = Vec::new();
    for k in 0..=n {
        let mut row = Vec::new();
        for i in 1..=n + 1 {
            let mut s = b[k as usize][(i - 1) as usize].scale(&q(-2, n + k + 2));
            if i > k {
                s = &s + &rel.fj(i - k - 1, ctx).scale(&q(2, i));
            }
            for j in 0..k {
                let t = &rel.fj(j + n - k + 1, ctx) * &b[j as usize][(i - 1) as usize];
                s = &s + &t.scale(&q(2, j + n + 2));
            }
            row.push(s);
        }
        c.push(row);
    }
    let lambda = series_mat_inverse(&c)?;
    Ok(SolverMatrices { b, c, lambda })
}

/// Everything the reconstruction produced.
#[derive(Clone, Debug)]
pub struct SolverReport {
    pub relation: EulerRelation,
    pub matrices: SolverMatrices,
    /// `ψ_i` for `1 ≤ i ≤ n+1`.
    pub psi: Vec<Series>,
    /// `ψ̃_i` for `1 ≤ i ≤ n+1`.
    pub psi_tilde: Vec<Series>,
    pub g: Vec<Series>,
    pub h: Vec<Series>,
    pub f2: Series,
    pub diagnostics: Vec<(String, bool, Order)>,
}

/// Reconstructs `F₂` from `F₀` and `F₁`. Any `F₂` in the context is ignored.
pub fn reconstruct_f2(ctx: &Context) -> Result<SolverReport> {
    let ctx = &ctx.with_gen(ctx.gen.without_f2())?;
    let rel = solve_euler_relation(ctx)?;
    let n = rel.n;
    let mut diagnostics = Vec::new();
    let compat = compat_residual(ctx, &rel, 0)?;
    diagnostics.push((String::from("compatibility"), compat.is_zero(), compat.valid()));
    if !compat.is_zero() {
        return Err(Error::Compatibility(String::from("Y_{n+1} differs from the f-combination of lower Y_i")));
    }
    let mats = build_matrices(ctx, &rel)?;
    let g: Vec<Series> = (0..=n as u32).map(|k| g_k(ctx, &rel, k)).collect::<Result<_>>()?;
    let h: Vec<Series> = (0..=n as u32).map(|k| h_k(ctx, k)).collect::<Result<_>>()?;
    let psi_tilde: Vec<Series> = (0..=n)
        .map(|i| (0..=n).fold(Series::zero(ctx.window()), |acc, k| &acc + &(&mats.lambda[i][k] * &g[k])))
        .collect();
    let anchor = a1_tau2_l0(ctx)?;
    let tx = ctx.big_t(&ctx.xbar_power(1)?)?;
    let mut psi = vec![anchor.clone()];
    for i in 2..=n + 1 {
        let v = &(&psi_tilde[i - 1].scale(&qi(i as i64 - 1))
            - &ctx.deriv(&tx, &psi_tilde[i - 2]).scale(&q(i as i64, 2)))
            - &h[i - 1].scale(&q(i as i64, 2));
        psi.push(v);
    }
    let s = ctx.string_field().clone();
    let f2 = &(&a1(ctx, &s.tau_minus())?.scale(&q(1, 2)) + &anchor.scale(&q(1, 3))) - &psi_tilde[0].scale(&q(1, 3));
    let mut check = Series::zero(ctx.window());
    for i in 0..=n {
        check = &check + &(&mats.c[0][i] * &mats.lambda[i][0]);
    }
    let id_ok = (&check - &Series::one(ctx.window())).is_zero();
    diagnostics.push((String::from("lambda-inverse"), id_ok, check.valid()));
    Ok(SolverReport { relation: rel, matrices: mats, psi, psi_tilde, g, h, f2, diagnostics })
}

fn square(n: usize, w: crate::series::VarWindow) -> Vec<Vec<Series>> {
    (0..n).map(|_| (0..n).map(|_| Series::zero(w)).collect()).collect()
}

/// Determinant by cofactor expansion (small matrices).
pub fn series_det(m: &[Vec<Series>]) -> Series {
    let n = m.len();
    if n == 1 {
        return m[0][0].clone();
    }
    let w = m[0][0].window();
    let mut acc = Series::zero(w);
    for c in 0..n {
        let minor: Vec<Vec<Series>> =
            (1..n).map(|r| (0..n).filter(|&j| j != c).map(|j| m[r][j].clone()).collect()).collect();
        let t = &m[0][c] * &series_det(&minor);
        acc = if c % 2 == 0 { &acc + &t } else { &acc - &t };
    }
    acc
}

/// The invertibility-criterion identities, each as a named residual.
pub fn appendix_suite(ctx: &Context, rel: &EulerRelation) -> Result<Residuals> {
    let w = ctx.window();
    let n = rel.n;
    let ni = n as i64;
    let f = |j: i64| rel.fj(j, ctx);
    let mut out = Residuals::new();
    let kmax = n + 3;
    // a_k, extended past n with f_j = 0 for j < 0.
    let mut a: Vec<Series> = vec![Series::constant(w, qi(-1))];
    for k in 1..=kmax as i64 {
        let mut s = Series::zero(w);
        for i in 0..k {
            s = &s + &(&a[i as usize] * &f(ni - k + i + 1));
        }
        a.push(s);
    }
    let mut mm = square(n + 1, w);
    let mut minv = square(n + 1, w);
    for r in 0..=n {
        for c in 0..=n {
            if c == r {
                mm[r][c] = Series::constant(w, qi(-1));
            } else if c > r {
                mm[r][c] = f(ni - (c - r) as i64 + 1);
            }
            if c >= r {
                minv[r][c] = a[c - r].clone();
            }
        }
    }
    for r in 0..=n {
        for c in 0..=n {
            let mut s = Series::zero(w);
            for k in 0..=n {
                s = &s + &(&mm[r][k] * &minv[k][c]);
            }
            if r == c {
                s = &s - &Series::one(w);
            }
            out.push(format!("M*Minv[{r}][{c}]"), s);
        }
    }
    let p = |k: i64| -> Series {
        let mut s = Series::zero(w);
        for i in 1..=k {
            s = &s + &(&f(ni - i + 1) * &a[(k - i) as usize]).scale(&qi(i));
        }
        s
    };
    let xs = ctx.xbar_powers((n + 3) as u32)?;
    for k in 1..=3i64 {
        let d = ctx.deriv(&xs[k as usize], &f(ni));
        out.push(format!("pk-Xkfn k={k}"), &d + &p(k));
    }
    // Columns D_k, B_{k+1}, C_k.
    let dcol = |k: usize| -> Vec<Series> {
        (0..=n).map(|i| if i >= k { f((i - k) as i64) } else { Series::zero(w) }).collect()
    };
    let bm = b_matrix(ctx, rel, n);
    let mats = build_matrices(ctx, rel);
    let hdiag =
        |v: &[Series]| -> Vec<Series> { v.iter().enumerate().map(|(i, s)| s.scale(&qi(i as i64 + 1))).collect() };
    let hinv =
        |v: &[Series]| -> Vec<Series> { v.iter().enumerate().map(|(i, s)| s.scale(&q(1, i as i64 + 1))).collect() };
    let add = |x: &[Series], y: &[Series]| -> Vec<Series> { x.iter().zip(y).map(|(a, b)| a + b).collect() };
    let scl = |x: &[Series], c: &Series| -> Vec<Series> { x.iter().map(|a| a * c).collect() };
    let sclq = |x: &[Series], c: &Q| -> Vec<Series> { x.iter().map(|a| a.scale(c)).collect() };
    let zero_col = || -> Vec<Series> { (0..=n).map(|_| Series::zero(w)).collect() };
    for k in 0..=n {
        let mut rhs = dcol(k);
        for i in 0..k {
            rhs = add(&rhs, &scl(&bm[k - i - 1], &f(ni - i as i64)));
        }
        for i in 0..=n {
            out.push(format!("B-recursion k={} i={}", k + 1, i + 1), &bm[k][i] - &rhs[i]);
        }
    }
    for k in 0..=n {
        let vd = dcol(k);
        let xd: Vec<Series> = vd.iter().map(|s| ctx.deriv(&xs[1], s)).collect();
        let rhs = add(&sclq(&vd, &qi((n + k + 2) as i64)), &sclq(&hdiag(&vd), &qi(-1)));
        for i in 0..=n {
            out.push(format!("XDk k={k} i={}", i + 1), &xd[i] - &rhs[i]);
        }
    }
    for k in 1..=n + 1 {
        let lhs: Vec<Series> = dcol(0).iter().map(|s| ctx.deriv(&xs[k], s)).collect();
        let mut rhs: Vec<Series> = dcol(k - 1).iter().map(|s| ctx.deriv(&xs[1], s)).collect();
        for i in 0..k.saturating_sub(1) {
            let coef = ctx.deriv(&xs[k - 1 - i], &f(ni));
            rhs = add(&rhs, &scl(&dcol(i), &coef));
        }
        if k - 1 <= n {
            for i in 0..=n {
                out.push(format!("RecXkD k={k} i={}", i + 1), &lhs[i] - &rhs[i]);
            }
        }
    }
    if let Ok(mats) = &mats {
        let ccol = |k: usize| -> Vec<Series> { mats.c[k].clone() };
        for k in 0..=n {
            let mut rhs = add(&sclq(&hinv(&dcol(k)), &qi(2)), &sclq(&bm[k], &q(-2, (n + k + 2) as i64)));
            for j in 0..k {
                rhs = add(&rhs, &sclq(&scl(&bm[j], &f(j as i64 + ni - k as i64 + 1)), &q(2, (j + n + 2) as i64)));
            }
            for i in 0..=n {
                out.push(format!("CDB k={k} i={}", i + 1), &mats.c[k][i] - &rhs[i]);
            }
        }
        for k in 1..=n + 1 {
            let mut rhs = zero_col();
            for i in 0..k {
                let inner = add(&sclq(&ccol(k - 1 - i), &q(1, 2)), &sclq(&hinv(&dcol(k - 1 - i)), &qi(-1)));
                rhs = add(&rhs, &scl(&inner, &a[i]));
            }
            let lhs = sclq(&bm[k - 1], &q(1, (n + 1 + k) as i64));
            for i in 0..=n {
                out.push(format!("BCDa k={k} i={}", i + 1), &lhs[i] - &rhs[i]);
            }
        }
        let mut ct: Vec<Vec<Series>> = Vec::new();
        for k in 0..=n {
            let mut col = sclq(&ccol(k), &q(1, 2));
            for i in 0..k {
                let mut coef = Series::zero(w);
                for j in i..k {
                    coef = &coef + &(&f((j + n) as i64 - k as i64 + 1) * &a[j - i]);
                }
                col = add(&col, &sclq(&scl(&ccol(i), &coef), &q(-1, 2)));
            }
            ct.push(col);
        }
        let mut vs: Vec<Vec<Series>> = Vec::new();
        for k in 0..=n {
            let mut inner = sclq(&ct[k], &qi((n + k + 2) as i64));
            for i in 1..=k {
                let c = f(ni - i as i64 + 1).scale(&qi((n + k - i + 2) as i64));
                inner = add(&inner, &sclq(&scl(&ct[k - i], &c), &qi(-1)));
            }
            vs.push(hdiag(&inner));
        }
        for k in 0..=n {
            let mut rhs = add(&sclq(&dcol(k), &qi((n + k + 2) as i64)), &sclq(&hdiag(&dcol(k)), &qi(-1)));
            for j in 0..k {
                rhs = add(&rhs, &sclq(&scl(&dcol(j), &p((k - j) as i64)), &qi(-1)));
            }
            let xd: Vec<Series> = dcol(0).iter().map(|s| ctx.deriv(&xs[k + 1], s)).collect();
            for i in 0..=n {
                out.push(format!("VD k={k} i={}", i + 1), &vs[k][i] - &rhs[i]);
                out.push(format!("V=XD0 k={k} i={}", i + 1), &vs[k][i] - &xd[i]);
            }
        }
        let unit = |s: &Series| s.constant_term().map(|x| !x.is_zero()).unwrap_or(false);
        let cmat: Vec<Vec<Series>> = (0..=n).map(ccol).collect();
        let det_c = series_det(&cmat);
        let det_ct = series_det(&ct);
        let det_v = series_det(&vs);
        let zmat: Vec<Vec<Series>> =
            (0..=n).map(|i| (1..=n + 1).map(|j| ctx.deriv(&xs[j], &f(i as i64))).collect()).collect();
        let det_z = series_det(&zmat);
        let (uc, ut, uv, uz) = (unit(&det_c), unit(&det_ct), unit(&det_v), unit(&det_z));
        out.push(
            "det c ~ det C-tilde ~ det V",
            crate::check::Residual::Flag(uc == ut && ut == uv, format!("units c={uc} C~={ut} V={uv}")),
        );
        out.push("det c ~ det (X^j f_i)", crate::check::Residual::Flag(uc == uz, format!("units c={uc} Z={uz}")));
        let mut id = square(n + 1, w);
        for i in 0..=n {
            for j in 0..=n {
                let mut s = Series::zero(w);
                for k in 0..=n {
                    s = &s + &(&mats.lambda[i][k] * &mats.c[k][j]);
                }
                if i == j {
                    s = &s - &Series::one(w);
                }
                id[i][j] = s;
            }
        }
        for (i, row) in id.into_iter().enumerate() {
            for (j, s) in row.into_iter().enumerate() {
                out.push(format!("lambda*c[{}][{}]", i + 1, j), s);
            }
        }
    } else if let Err(e) = mats {
        out.push("c-matrix", crate::check::Residual::Flag(false, format!("{e}")));
    }
    Ok(out)
}
