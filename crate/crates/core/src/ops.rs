//! Correlators, the quantum product and the operator calculus on the
//! truncated big phase space.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::field::VectorField;
use crate::genfun::GenFunSet;
use crate::model::{ManifoldModel, Mat};
use crate::series::{add_orders, q, qi, Monomial, Order, Series, VarId, VarWindow, Q};

/// Model, generating functions and the distinguished fields.
#[derive(Clone, Debug)]
pub struct Context {
    pub model: ManifoldModel,
    pub gen: GenFunSet,
    window: VarWindow,
    s: VectorField,
    d: VectorField,
    x: VectorField,
}

impl Context {
    pub fn new(model: ManifoldModel, gen: GenFunSet) -> Result<Self> {
        let window = gen.window;
        if window.num_classes as usize != model.num_classes {
            return Err(Error::Config(format!(
                "window has {} classes but the model has {}",
                window.num_classes, model.num_classes
            )));
        }
        let mut ctx = Context {
            model,
            gen,
            window,
            s: VectorField::zero(window),
            d: VectorField::zero(window),
            x: VectorField::zero(window),
        };
        ctx.s = ctx.build_string()?;
        ctx.d = ctx.build_dilaton()?;
        ctx.x = ctx.build_euler()?;
        Ok(ctx)
    }

    pub fn window(&self) -> VarWindow {
        self.window
    }

    pub fn n(&self) -> usize {
        self.model.num_classes
    }

    /// Same model and base with different generating functions.
    pub fn with_gen(&self, gen: GenFunSet) -> Result<Self> {
        Context::new(self.model.clone(), gen)
    }

    /// `γ_α` (1-based class).
    pub fn gamma(&self, a: usize) -> VectorField {
        VectorField::basis(self.window, 0, a as u32)
    }

    /// `γ^α = Σ_β η^{αβ} γ_β`.
    pub fn gamma_up(&self, a: usize) -> VectorField {
        let row: Vec<Q> = self.model.eta_inv[a - 1].clone();
        VectorField::primary_const(self.window, &row)
    }

    /// `τ_n(γ_α)`.
    pub fn basis(&self, level: u32, a: usize) -> VectorField {
        VectorField::basis(self.window, level, a as u32)
    }

    /// `τ_n(γ^α)`.
    pub fn basis_up(&self, level: u32, a: usize) -> Result<VectorField> {
        let mut f = self.gamma_up(a);
        for _ in 0..level {
            f = f.tau_plus()?;
        }
        Ok(f)
    }

    /// Absolute coordinate `t^α_n` as a series in displacements.
    pub fn coord(&self, v: VarId) -> Series {
        self.gen.coord(v)
    }

    /// `t̃^α_n = t^α_n − δ_{n,1}δ_{α,1}`.
    pub fn tilde(&self, v: VarId) -> Series {
        let t = self.coord(v);
        if v.level == 1 && v.class == 1 {
            &t - &Series::one(self.window)
        } else {
            t
        }
    }

    /// Field with coefficient `c·t̃^α_m` at `(level, β)` for every `m` in
    /// the window; the unstored remainder is beyond the cap.
    pub fn tilde_field<F>(&self, mut place: F) -> Result<VectorField>
    where
        F: FnMut(u32, usize) -> Vec<(u32, usize, Q)>,
    {
        let w = self.window;
        let mut out = VectorField::with_tail(w, Order::at(w.cap()));
        for m in 0..=w.max_level {
            for a in 1..=self.n() {
                let t = self.tilde(VarId::new(m, a as u32));
                for (lvl, b, c) in place(m, a) {
                    if c.is_zero() {
                        continue;
                    }
                    let key = VarId::new(lvl, b as u32);
                    let cur = out.comp(key);
                    out.set(key, &cur + &t.scale(&c))?;
                }
            }
        }
        Ok(out)
    }

    fn build_string(&self) -> Result<VectorField> {
        self.tilde_field(|m, a| if m >= 1 { vec![(m - 1, a, -Q::one())] } else { vec![] })
    }

    fn build_dilaton(&self) -> Result<VectorField> {
        self.tilde_field(|m, a| vec![(m, a, -Q::one())])
    }

    fn build_euler(&self) -> Result<VectorField> {
        let b1 = self.model.b[0].clone();
        let model = self.model.clone();
        self.tilde_field(move |m, a| {
            let mut out = vec![];
            let c = -(qi(m as i64) + &model.b[a - 1] - &b1 - qi(1));
            out.push((m, a, c));
            if m >= 1 {
                for b in 1..=model.num_classes {
                    let cab = &model.chern[a - 1][b - 1];
                    if !cab.is_zero() {
                        out.push((m - 1, b, -cab.clone()));
                    }
                }
            }
            out
        })
    }

    /// The string field `S = −Σ t̃^α_m τ_{m−1}(γ_α)`.
    pub fn string_field(&self) -> &VectorField {
        &self.s
    }

    /// The dilaton field `D = −Σ t̃^α_m τ_m(γ_α)`.
    pub fn dilaton_field(&self) -> &VectorField {
        &self.d
    }

    /// The Euler field.
    pub fn euler_field(&self) -> &VectorField {
        &self.x
    }

    /// `⟨⟨W₁ ··· W_k⟩⟩_g`.
    pub fn corr(&self, g: u32, fields: &[&VectorField]) -> Result<Series> {
        let f = self.gen.f(g)?;
        Ok(contract(f, fields))
    }

    /// `Σ_α ⟨⟨W₁ ··· W_k γ^α γ_α⟩⟩_g`, the trace over a raised/lowered pair.
    pub fn corr_trace(&self, g: u32, fields: &[&VectorField]) -> Result<Series> {
        let mut acc: Option<Series> = None;
        for a in 1..=self.n() {
            let up = self.gamma_up(a);
            let lo = self.gamma(a);
            let mut fs: Vec<&VectorField> = fields.to_vec();
            fs.push(&up);
            fs.push(&lo);
            let c = self.corr(g, &fs)?;
            acc = Some(match acc {
                Some(x) => &x + &c,
                None => c,
            });
        }
        Ok(acc.unwrap())
    }

    /// `Σ_α ⟨⟨W₁ ··· W_k γ^α⟩⟩_g γ_α`.
    pub fn corr_field(&self, g: u32, fields: &[&VectorField]) -> Result<VectorField> {
        let mut out = VectorField::zero(self.window);
        for a in 1..=self.n() {
            let up = self.gamma_up(a);
            let mut fs: Vec<&VectorField> = fields.to_vec();
            fs.push(&up);
            let c = self.corr(g, &fs)?;
            out.set(VarId::new(0, a as u32), c)?;
        }
        Ok(out)
    }

    /// Quantum product `U • W = ⟨⟨U W γ^α⟩⟩₀ γ_α`.
    pub fn qprod(&self, u: &VectorField, w: &VectorField) -> Result<VectorField> {
        self.corr_field(0, &[u, w])
    }

    /// Product of several fields, left to right.
    pub fn qprod_all(&self, fs: &[&VectorField]) -> Result<VectorField> {
        let mut acc = fs[0].clone();
        for f in &fs[1..] {
            acc = self.qprod(&acc, f)?;
        }
        Ok(acc)
    }

    /// `W̄ = S • W`.
    pub fn bar(&self, w: &VectorField) -> Result<VectorField> {
        let s = self.s.clone();
        self.qprod(&s, w)
    }

    /// `T(W) = τ₊(W) − ⟨⟨W γ^α⟩⟩₀ γ_α`.
    pub fn big_t(&self, w: &VectorField) -> Result<VectorField> {
        let up = w.tau_plus()?;
        let corr = self.corr_field(0, &[w])?;
        Ok(up.sub(&corr))
    }

    /// `T^k(W)`.
    pub fn big_t_pow(&self, w: &VectorField, k: u32) -> Result<VectorField> {
        let mut f = w.clone();
        for _ in 0..k {
            f = self.big_t(&f)?;
        }
        Ok(f)
    }

    /// `U ∼ W`, tested by comparing `Ū` and `W̄`.
    pub fn equivalent(&self, u: &VectorField, w: &VectorField) -> Result<bool> {
        Ok(self.bar(&u.sub(w))?.is_zero())
    }

    /// Directional derivative `V f`.
    pub fn deriv(&self, v: &VectorField, f: &Series) -> Series {
        deriv(v, f)
    }

    /// Covariant derivative `∇_V W` (differentiates coefficients).
    pub fn nabla(&self, v: &VectorField, w: &VectorField) -> VectorField {
        let tail = if w.tail().is_exact() {
            Order::EXACT
        } else {
            deriv(v, &Series::zero_upto(self.window, w.tail())).valid()
        };
        let mut out = VectorField::with_tail(self.window, tail);
        for (key, s) in w.components() {
            out.set(*key, deriv(v, s)).expect("nabla keeps levels");
        }
        out
    }

    /// `[V, W] = ∇_V W − ∇_W V`.
    pub fn bracket(&self, v: &VectorField, w: &VectorField) -> VectorField {
        self.nabla(v, w).sub(&self.nabla(w, v))
    }

    pub fn gstar(&self, w: &VectorField) -> VectorField {
        w.gstar(&self.model)
    }

    pub fn cmap(&self, w: &VectorField) -> VectorField {
        w.cmap(&self.model)
    }

    /// `(G − ½Z) * W`.
    pub fn g_half(&self, w: &VectorField) -> VectorField {
        w.gstar(&self.model).sub(&w.scale(&q(1, 2)))
    }

    /// `R(W) = G * T(W) + C(W)`.
    pub fn rop(&self, w: &VectorField) -> Result<VectorField> {
        Ok(self.gstar(&self.big_t(w)?).add(&self.cmap(w)))
    }

    /// `R^k(W)`.
    pub fn rop_pow(&self, w: &VectorField, k: u32) -> Result<VectorField> {
        let mut f = w.clone();
        for _ in 0..k {
            f = self.rop(&f)?;
        }
        Ok(f)
    }

    /// `R₊(W) = G * τ₊(W) + C(W)`.
    pub fn rplus(&self, w: &VectorField) -> Result<VectorField> {
        Ok(self.gstar(&w.tau_plus()?).add(&self.cmap(w)))
    }

    /// `R₊^k(W)`.
    pub fn rplus_pow(&self, w: &VectorField, k: u32) -> Result<VectorField> {
        let mut f = w.clone();
        for _ in 0..k {
            f = self.rplus(&f)?;
        }
        Ok(f)
    }

    /// Quantum power `W^k` with `W⁰ = S` and `W¹ = W`.
    pub fn qpower(&self, w: &VectorField, k: u32) -> Result<VectorField> {
        match k {
            0 => Ok(self.s.clone()),
            1 => Ok(w.clone()),
            _ => {
                let mut acc = self.qprod(w, w)?;
                for _ in 2..k {
                    acc = self.qprod(&acc, w)?;
                }
                Ok(acc)
            }
        }
    }

    /// `M_α^β = ⟨⟨γ_α X γ^β⟩⟩₀` (0-based).
    pub fn euler_matrix(&self) -> Result<Vec<Vec<Series>>> {
        let n = self.n();
        let x = self.x.clone();
        let mut m = Vec::with_capacity(n);
        for a in 1..=n {
            let ga = self.gamma(a);
            let mut row = Vec::with_capacity(n);
            for b in 1..=n {
                let gb = self.gamma_up(b);
                row.push(self.corr(0, &[&ga, &x, &gb])?);
            }
            m.push(row);
        }
        Ok(m)
    }

    /// `X̄^k = S̄ • X^k`, assembled from the matrix power `M^k`.
    pub fn xbar_power(&self, k: u32) -> Result<VectorField> {
        let sbar = self.bar(&self.s.clone())?;
        let sv = primary_coeffs(&sbar, self.n());
        let mut row = sv;
        if k > 0 {
            let m = self.euler_matrix()?;
            for _ in 0..k {
                row = vec_mat(&row, &m, self.window);
            }
        }
        primary_from(self.window, &row)
    }

    /// All `X̄^0 .. X̄^k` (sharing one evaluation of `M`).
    pub fn xbar_powers(&self, k: u32) -> Result<Vec<VectorField>> {
        let sbar = self.bar(&self.s.clone())?;
        let m = self.euler_matrix()?;
        let mut row = primary_coeffs(&sbar, self.n());
        let mut out = vec![primary_from(self.window, &row)?];
        for _ in 0..k {
            row = vec_mat(&row, &m, self.window);
            out.push(primary_from(self.window, &row)?);
        }
        Ok(out)
    }

    /// `½ Σ η_{αβ} t₀^α t₀^β`.
    pub fn half_eta_t0t0(&self) -> Series {
        self.quadratic_t0(&self.model.eta.clone())
    }

    /// `½ Σ C_{αβ} t₀^α t₀^β`.
    pub fn half_c_t0t0(&self) -> Series {
        let n = self.n();
        let m: Mat = (0..n).map(|a| (0..n).map(|b| self.model.chern_lower(a, b)).collect()).collect();
        self.quadratic_t0(&m)
    }

    /// `½ Σ (C^{k})_{αβ} t₀^α t₀^β` with the lowered index via `η`.
    pub fn half_cpow_t0t0(&self, k: u32) -> Series {
        let n = self.n();
        let ck = self.model.chern_pow(k);
        let m: Mat = (0..n)
            .map(|a| {
                (0..n)
                    .map(|b| (0..n).map(|mu| &ck[a][mu] * &self.model.eta[mu][b]).fold(Q::zero(), |x, y| x + y))
                    .collect()
            })
            .collect();
        self.quadratic_t0(&m)
    }

    fn quadratic_t0(&self, m: &Mat) -> Series {
        let n = self.n();
        let mut acc = Series::zero(self.window);
        for a in 0..n {
            for b in 0..n {
                if m[a][b].is_zero() {
                    continue;
                }
                let ta = self.coord(VarId::new(0, a as u32 + 1));
                let tb = self.coord(VarId::new(0, b as u32 + 1));
                acc = &acc + &(&ta * &tb).scale(&(&m[a][b] * q(1, 2)));
            }
        }
        acc
    }

    /// Contraction of an arbitrary function with fields (the `k`-th
    /// covariant derivative of `f` evaluated on the fields).
    pub fn contract_fn(&self, f: &Series, fields: &[&VectorField]) -> Series {
        contract(f, fields)
    }
}

/// Coefficients `(f_1..f_N)` of the level-0 part of a field.
pub fn primary_coeffs(w: &VectorField, n: usize) -> Vec<Series> {
    (1..=n).map(|a| w.comp(VarId::new(0, a as u32))).collect()
}

/// `Σ_α f_α γ_α`.
pub fn primary_from(win: VarWindow, coeffs: &[Series]) -> Result<VectorField> {
    let mut out = VectorField::zero(win);
    for (a, s) in coeffs.iter().enumerate() {
        out.set(VarId::new(0, a as u32 + 1), s.clone())?;
    }
    Ok(out)
}

fn vec_mat(row: &[Series], m: &[Vec<Series>], w: VarWindow) -> Vec<Series> {
    let n = row.len();
    (0..n)
        .map(|b| {
            let mut acc = Series::zero(w);
            for a in 0..n {
                acc = &acc + &(&row[a] * &m[a][b]);
            }
            acc
        })
        .collect()
}

/// `V f = Σ v_n ∂_n f`, with unstored components of `V` bounding the
/// validity by the tail.
pub fn deriv(v: &VectorField, f: &Series) -> Series {
    let w = f.window();
    let mut valid = v.tail();
    let mut parts = Vec::new();
    for (key, coef) in v.components() {
        let d = f.partial(*key);
        let ord = Series::product_order(coef.valid(), coef.low(), d.valid(), d.low());
        valid = valid.min(ord);
        parts.push((coef, d));
    }
    let mut acc: BTreeMap<Monomial, Q> = BTreeMap::new();
    let mut declared = valid;
    for (coef, d) in parts {
        let p = coef.mul_bounded(&d, valid);
        declared = declared.min(p.valid());
        for (m, c) in p.terms() {
            *acc.entry(m.clone()).or_insert_with(Q::zero) += c;
        }
    }
    Series::from_terms(w, acc, declared)
}

/// Validity of a product of factors given `(valid, low)` pairs.
fn chain_order(factors: &[(Order, Order)]) -> Order {
    let mut best = Order::EXACT;
    for i in 0..factors.len() {
        let mut o = factors[i].0;
        for (j, f) in factors.iter().enumerate() {
            if j != i {
                o = add_orders(o, f.1);
            }
        }
        best = best.min(o);
    }
    best
}

/// `Σ f¹_{i₁}···f^k_{i_k} ∂^k f / ∂t_{i₁}···∂t_{i_k}`; coefficients are
/// never differentiated.
pub fn contract(f: &Series, fields: &[&VectorField]) -> Series {
    let w = f.window();
    if fields.is_empty() {
        return f.clone();
    }
    let mut valid = Order::EXACT;
    for fl in fields {
        valid = valid.min(fl.tail());
    }
    let comps: Vec<Vec<(VarId, &Series)>> =
        fields.iter().map(|fl| fl.components().map(|(v, s)| (*v, s)).collect()).collect();
    if comps.iter().any(|c| c.is_empty()) {
        return Series::zero_upto(w, valid);
    }
    let mut cache: BTreeMap<Vec<VarId>, Series> = BTreeMap::new();
    let mut leaves: Vec<(Vec<&Series>, Vec<VarId>)> = Vec::new();
    let mut idx = vec![0usize; fields.len()];
    loop {
        let mut key: Vec<VarId> = Vec::with_capacity(fields.len());
        let mut coefs: Vec<&Series> = Vec::with_capacity(fields.len());
        for (i, c) in comps.iter().enumerate() {
            key.push(c[idx[i]].0);
            coefs.push(c[idx[i]].1);
        }
        key.sort();
        let d = partial_cached(f, &key, &mut cache);
        let mut factors: Vec<(Order, Order)> = coefs.iter().map(|s| (s.valid(), s.low())).collect();
        factors.push((d.valid(), d.low()));
        let ord = chain_order(&factors);
        valid = valid.min(ord);
        let nonzero = coefs.iter().all(|s| !s.is_zero()) && !d.is_zero();
        if nonzero {
            leaves.push((coefs, key));
        }
        // advance
        let mut i = 0;
        loop {
            if i == fields.len() {
                return finish(w, valid, leaves, &cache);
            }
            idx[i] += 1;
            if idx[i] < comps[i].len() {
                break;
            }
            idx[i] = 0;
            i += 1;
        }
    }
}

fn finish(
    w: VarWindow,
    valid: Order,
    leaves: Vec<(Vec<&Series>, Vec<VarId>)>,
    cache: &BTreeMap<Vec<VarId>, Series>,
) -> Series {
    let mut acc: BTreeMap<Monomial, Q> = BTreeMap::new();
    let mut declared = valid;
    let limit = match valid.value() {
        Some(v) => v,
        None => w.cap(),
    };
    for (coefs, key) in leaves {
        let d = &cache[&key];
        let low_sum: i64 = coefs.iter().map(|s| s.low().value().unwrap_or(i32::MAX) as i64).sum::<i64>()
            + d.low().value().unwrap_or(i32::MAX) as i64;
        if low_sum > limit as i64 {
            continue;
        }
        let mut prod = coefs[0].clone();
        for c in &coefs[1..] {
            prod = prod.mul_bounded(c, valid);
        }
        prod = prod.mul_bounded(d, valid);
        declared = declared.min(prod.valid());
        for (m, c) in prod.terms() {
            *acc.entry(m.clone()).or_insert_with(Q::zero) += c;
        }
    }
    Series::from_terms(w, acc, declared)
}

fn partial_cached<'a>(f: &Series, key: &[VarId], cache: &'a mut BTreeMap<Vec<VarId>, Series>) -> &'a Series {
    if !cache.contains_key(key) {
        let s = if key.is_empty() {
            f.clone()
        } else {
            let prev = partial_cached(f, &key[..key.len() - 1], cache).clone();
            prev.partial(key[key.len() - 1])
        };
        cache.insert(key.to_vec(), s);
    }
    &cache[key]
}
