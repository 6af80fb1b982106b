//! Named identity checks. Each entry evaluates a family of residuals that
//! must vanish on data satisfying the genus-0, 1 and 2 relations.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Zero};

use crate::check::{CheckOutcome, Residual, Residuals};
use crate::error::{Error, Result};
use crate::field::VectorField;
use crate::ops::Context;
use crate::series::{q, qi, Series, VarId, Q};
use crate::solver as sv;
use crate::trr::{self, a1, a2, btensor, corr_trace2, euler_class_field};
use crate::virasoro as vir;

type VF = VectorField;
type Out = Result<Residuals>;

/// Test fields shared by the entries.
#[derive(Clone, Debug)]
pub struct Samples {
    /// Primary fields, constant and non-constant.
    pub prim: Vec<VF>,
    /// Fields with descendant components.
    pub desc: Vec<VF>,
}

impl Samples {
    /// A fixed set of fields with polynomial coefficients.
    pub fn new(ctx: &Context) -> Result<Self> {
        let w = ctx.window();
        let n = ctx.n();
        let x0 = Series::var(w, VarId::new(0, 1));
        let x1 = Series::var(w, VarId::new(1, 1));
        let one = Series::one(w);
        let g1 = ctx.gamma(1);
        let gn = ctx.gamma(n);
        let p1 = g1.clone();
        let p2 = g1.mul_fn(&(&one + &x0)).add(&gn.scale(&q(1, 2)));
        let d1 = ctx.basis(1, 1).add(&g1.mul_fn(&x0));
        let d2 = ctx.basis(2, n).mul_fn(&(&one + &x1)).add(&ctx.basis(1, 1).scale(&q(-2, 3)));
        Ok(Samples { prim: vec![p1, p2], desc: vec![d1, d2] })
    }

    /// Every sample field.
    pub fn all(&self) -> Vec<&VF> {
        self.prim.iter().chain(self.desc.iter()).collect()
    }

    /// Primaries and the lighter descendant field.
    pub fn light(&self) -> Vec<&VF> {
        vec![&self.prim[0], &self.prim[1], &self.desc[0]]
    }

    /// Sample fields usable at genus `g` without exhausting validity.
    pub fn all_for(&self, g: u32) -> Vec<&VF> {
        if g < 2 {
            self.all()
        } else {
            self.light()
        }
    }

    /// Ordered pairs usable at genus `g`.
    pub fn pairs_for(&self, g: u32) -> Vec<(&VF, &VF)> {
        if g < 2 {
            self.pairs()
        } else {
            self.pairs().into_iter().take(2).chain([(&self.desc[0], &self.prim[0])]).collect()
        }
    }

    /// A mixed selection of ordered pairs.
    pub fn pairs(&self) -> Vec<(&VF, &VF)> {
        let (p, d) = (&self.prim, &self.desc);
        vec![(&p[0], &p[1]), (&p[1], &d[0]), (&d[0], &d[1]), (&d[1], &p[0]), (&d[1], &d[1])]
    }

    /// A mixed selection of ordered triples.
    pub fn triples(&self) -> Vec<(&VF, &VF, &VF)> {
        let (p, d) = (&self.prim, &self.desc);
        vec![(&p[0], &p[1], &d[0]), (&d[0], &d[1], &p[1]), (&d[1], &p[0], &d[1])]
    }
}

/// One catalog entry.
pub struct Entry {
    pub id: &'static str,
    pub suite: &'static str,
    /// Acceptance criterion the entry belongs to.
    pub criterion: u8,
    /// Highest genus of generating function the entry reads.
    pub genus: u32,
    pub eval: fn(&Context, &Samples) -> Out,
}

impl Entry {
    pub fn run(&self, ctx: &Context, samples: &Samples) -> CheckOutcome {
        if !ctx.gen.has(self.genus) {
            return CheckOutcome::skipped(self.id, self.suite, format!("F{} not available", self.genus));
        }
        match (self.eval)(ctx, samples) {
            Ok(r) => CheckOutcome::judge(self.id, self.suite, &r.0),
            Err(e) => CheckOutcome::errored(self.id, self.suite, e.to_string()),
        }
    }

    /// Matches an id, a suite name, a criterion tag `c<N>`, or `all`.
    pub fn matches(&self, key: &str) -> bool {
        key == "all" || key == self.id || key == self.suite || key == format!("c{}", self.criterion)
    }
}

/// Entries selected by any of the filter keys (all entries when empty).
pub fn select(filter: &[String]) -> Result<Vec<&'static Entry>> {
    if filter.is_empty() {
        return Ok(CATALOG.iter().collect());
    }
    for key in filter {
        if !CATALOG.iter().any(|e| e.matches(key)) {
            return Err(Error::Config(format!("unknown check or suite '{key}'")));
        }
    }
    Ok(CATALOG.iter().filter(|e| filter.iter().any(|k| e.matches(k))).collect())
}

/// Runs the selected entries in catalog order.
pub fn run_catalog(ctx: &Context, filter: &[String]) -> Result<Vec<CheckOutcome>> {
    let samples = Samples::new(ctx)?;
    Ok(select(filter)?.into_iter().map(|e| e.run(ctx, &samples)).collect())
}

/// Suite names in catalog order.
pub fn suites() -> Vec<&'static str> {
    let mut out: Vec<&'static str> = Vec::new();
    for e in CATALOG {
        if !out.contains(&e.suite) {
            out.push(e.suite);
        }
    }
    out
}

macro_rules! entries {
    ($( $id:literal, $suite:literal, $crit:literal, $g:literal => $f:path; )*) => {
        /// All catalog entries.
        pub static CATALOG: &[Entry] = &[ $( Entry { id: $id, suite: $suite, criterion: $crit, genus: $g, eval: $f }, )* ];
    };
}

entries! {
    "string-equation", "structural", 1, 2 => string_equation;
    "dilaton-equation", "structural", 1, 2 => dilaton_equation;
    "wdvv", "structural", 1, 0 => wdvv;
    "lem:stringid", "structural", 1, 0 => stringid;
    "eqn:StringProd", "structural", 1, 0 => string_prod;
    "tau-identities", "structural", 1, 0 => tau_identities;
    "eqn:T", "structural", 1, 0 => t_via_string;
    "lem:0vector", "structural", 1, 0 => zero_vector;
    "eqn:WT", "structural", 1, 0 => wt;
    "eqn:WTW", "structural", 1, 0 => wtw;
    "eqn:DerCorr", "structural", 1, 2 => der_corr;
    "eqn:DerProd", "structural", 1, 0 => der_prod;
    "lem:DerT", "structural", 1, 0 => der_t;
    "cor:4ptT", "structural", 1, 0 => four_pt_t;
    "cor:TderProd", "structural", 1, 0 => t_der_prod;
    "eqn:5ptT", "structural", 1, 0 => five_pt_t;
    "eqn:6ptT", "structural", 1, 0 => six_pt_t;
    "eqn:derTRRg0", "structural", 1, 0 => der_trr_g0;
    "lem:String", "structural", 1, 0 => string_lemma;
    "eqn:DerStr", "structural", 1, 2 => der_str;
    "string-powers", "structural", 1, 0 => string_powers;
    "eqn:quasiallgenus", "euler", 2, 2 => quasi_all_genus;
    "eqn:X3pt", "euler", 2, 0 => x3pt;
    "eqn:DerEuler3pt", "euler", 2, 0 => der_euler_3pt;
    "thm:VirEuler", "euler", 2, 0 => vir_euler;
    "cor:VirEuler", "euler", 2, 0 => vir_euler_exact;
    "lem:TWEulerPower", "euler", 2, 0 => tw_euler_power;
    "cor:BracketTXpower", "euler", 2, 0 => bracket_tx_power;
    "cor:TWderTau-S", "euler", 2, 0 => tw_der_tau_s;
    "star-ops", "euler", 2, 0 => star_ops;
    "thm:Xprod", "euler", 2, 0 => xprod;
    "lem:Rtau-", "euler", 2, 0 => r_tau_minus;
    "eqn:RS", "euler", 2, 0 => r_of_s;
    "eqn:tau-X", "euler", 2, 0 => tau_minus_x;
    "lem:derR", "euler", 2, 0 => der_r;
    "eqn:derGC", "euler", 2, 0 => der_gc;
    "eqn:derX", "euler", 2, 0 => der_x;
    "lem:rmX", "euler", 2, 2 => rm_x;
    "eqn:rmXprim", "euler", 2, 2 => rm_x_prim;
    "lem:XXX4pt", "euler", 2, 0 => xxx_4pt;
    "lem:Wk4pt", "euler", 2, 0 => wk_4pt;
    "eqn:derWDVV", "euler", 2, 0 => der_wdvv;
    "cor:Xk4pt", "euler", 2, 0 => xk_4pt;
    "cor:Epower4pt", "euler", 2, 0 => epower_4pt;
    "thm:LkRec", "virasoro-algebra", 3, 0 => lk_rec;
    "lem:Virg0", "virasoro-algebra", 3, 0 => vir_g0;
    "cor:BracketVir", "virasoro-algebra", 3, 0 => bracket_vir;
    "bracket:TL-TL", "virasoro-algebra", 3, 0 => bracket_tl_tl;
    "bracket:TL-L", "virasoro-algebra", 3, 0 => bracket_tl_l;
    "RT=TR+T2", "virasoro-algebra", 3, 0 => rt_tr;
    "lem:derLk", "virasoro-algebra", 3, 0 => der_lk;
    "cor:dertau-mLk", "virasoro-algebra", 3, 0 => der_tau_m_lk;
    "lem:derLkv2", "virasoro-algebra", 3, 0 => der_lk_v2;
    "eqn:DerTLk", "virasoro-algebra", 3, 0 => der_t_lk;
    "thm:Stau-Lk", "virasoro-algebra", 3, 0 => stau_lk;
    "cor:Stau-Lk", "virasoro-algebra", 3, 0 => stau_lk_closed;
    "cor:dertau-Lk", "virasoro-algebra", 3, 0 => der_tau_lk;
    "trrg1", "trr", 4, 1 => trr_g1;
    "eqn:derTRRg1", "trr", 4, 1 => der_trr_g1;
    "eqn:2derTRRg1", "trr", 4, 1 => der2_trr_g1;
    "trr1", "trr", 4, 2 => trr1;
    "trr2", "trr", 4, 2 => trr2;
    "bp", "trr", 4, 2 => bp;
    "trr1-literal", "trr", 4, 2 => trr1_literal;
    "eqn:TRR1-2", "trr", 4, 2 => trr1_2;
    "eqn:TRREX", "trr", 4, 2 => trrex;
    "eqn:StrDil2pt", "trr", 4, 2 => str_dil_2pt;
    "lem:T2VW", "trr", 4, 2 => t2vw;
    "cor:TVTSW", "trr", 4, 2 => tvtsw;
    "cor:A1A2", "trr", 4, 1 => a1a2;
    "cor:A1A2str", "trr", 4, 1 => a1a2_str;
    "lem:AB", "trr", 4, 1 => lem_ab;
    "eqn:A1WWbar", "trr", 4, 1 => a1_wwbar;
    "tensor-symmetry", "trr", 4, 1 => tensor_symmetry;
    "eqn:Virg2", "genus2-lemmas", 5, 2 => virg2;
    "genus1-rewrite", "genus2-lemmas", 5, 1 => genus1_rewrite;
    "genus1-L1", "genus2-lemmas", 5, 1 => genus1_l1;
    "dilaton-derivatives", "genus2-lemmas", 5, 2 => dilaton_derivatives;
    "L0-derivatives", "genus2-lemmas", 5, 2 => l0_derivatives;
    "eqn:BPXXX", "genus2-lemmas", 5, 2 => bp_xxx;
    "V1-forms", "genus2-lemmas", 5, 0 => v1_forms;
    "lem:L1L2", "genus2-lemmas", 5, 2 => l1l2;
    "lem:L1L2:A1-derivative", "genus2-lemmas", 5, 1 => l1l2_a1_derivative;
    "lem:dertau-2L1", "genus2-lemmas", 5, 0 => dertau2_l1;
    "lem:A1L0-D", "genus2-lemmas", 5, 1 => a1_l0_d;
    "lem:X2g1", "genus2-lemmas", 5, 1 => x2_g1;
    "lem:X2g1:derivative", "genus2-lemmas", 5, 0 => x2_g1_derivative;
    "lem:3A2+BXXX", "genus2-lemmas", 5, 1 => a2_bxxx;
    "lem:3A2+BXXX:tau-R", "genus2-lemmas", 5, 0 => a2_bxxx_tau_r;
    "lem:TXg1L1", "genus2-lemmas", 5, 1 => tx_g1_l1;
    "lem:3bto2b", "genus2-lemmas", 5, 2 => three_b_to_two_b;
    "lem:g2L2v2", "genus2-lemmas", 5, 1 => g2_l2_v2;
    "thm:L1->L2", "genus2-lemmas", 5, 2 => l1_to_l2;
    "psi-anchors", "psi", 6, 2 => psi_anchors;
    "thm:psi", "psi", 6, 2 => thm_psi;
    "cor:Recpsi", "psi", 6, 2 => rec_psi;
    "cor:Recpsi:k=1", "psi", 6, 1 => rec_psi_k1;
    "lem:TXderTg2", "psi", 6, 2 => tx_der_t_g2;
    "eqn:BPE2", "psi", 6, 2 => bpe2;
    "eqn:EulerWrapk", "solver", 7, 0 => euler_wrap;
    "lem:TWf", "solver", 7, 0 => tw_f;
    "eqn:compct", "solver", 7, 0 => compct;
    "eqn:compctWk", "solver", 7, 0 => compct_w;
    "Yk-derivative", "solver", 7, 0 => yk_derivative;
    "eqn:Ytau-L", "solver", 7, 0 => ytau_l;
    "psi-tilde-forms", "solver", 7, 2 => psi_tilde_forms;
    "eqn:psicomp", "solver", 7, 2 => psicomp;
    "eqn:psiwrap", "solver", 7, 2 => psiwrap;
    "eqn:Tpsitilde", "solver", 7, 2 => t_psi_tilde;
    "lem:lineqnpsi", "solver", 7, 2 => lineqnpsi;
    "g-from-h", "solver", 7, 1 => g_from_h;
    "solver-matrices", "solver", 7, 1 => solver_matrices;
    "thm:VirNondeg", "solver", 7, 2 => vir_nondeg;
    "virasoro-constraints", "constraints", 8, 2 => constraints;
    "rho1-alt", "constraints", 8, 1 => rho1_alt;
    "rho-explicit", "constraints", 8, 2 => rho_explicit;
    "appendix", "appendix", 9, 0 => appendix;
}

// ---------------------------------------------------------------- helpers

fn zero(ctx: &Context) -> Series {
    Series::zero(ctx.window())
}

fn s(ctx: &Context) -> VF {
    ctx.string_field().clone()
}

fn d(ctx: &Context) -> VF {
    ctx.dilaton_field().clone()
}

fn x(ctx: &Context) -> VF {
    ctx.euler_field().clone()
}

fn b(ctx: &Context, a: usize) -> Q {
    ctx.model.b[a - 1].clone()
}

fn b1(ctx: &Context) -> Q {
    b(ctx, 1)
}

fn l(ctx: &Context, n: i32) -> Result<VF> {
    vir::virasoro_field(ctx, n)
}

/// `Σ_α w(α) ⟨⟨… γ_α γ^α⟩⟩` with a weight on the lower index.
fn weighted_trace<F>(ctx: &Context, g: u32, ws: &[&VF], mut wt: F) -> Result<Series>
where
    F: FnMut(usize) -> Q,
{
    let mut acc = zero(ctx);
    for a in 1..=ctx.n() {
        let c = wt(a);
        if c.is_zero() {
            continue;
        }
        let (lo, up) = (ctx.gamma(a), ctx.gamma_up(a));
        let mut fs = ws.to_vec();
        fs.push(&lo);
        fs.push(&up);
        acc = &acc + &ctx.corr(g, &fs)?.scale(&c);
    }
    Ok(acc)
}

/// `Σ_{α,β} w(α,β) f(α,β)`.
fn double_sum<F, W>(ctx: &Context, mut wt: W, mut f: F) -> Result<Series>
where
    W: FnMut(usize, usize) -> Q,
    F: FnMut(usize, usize) -> Result<Series>,
{
    let mut acc = zero(ctx);
    for a in 1..=ctx.n() {
        for bb in 1..=ctx.n() {
            let c = wt(a, bb);
            if c.is_zero() {
                continue;
            }
            acc = &acc + &f(a, bb)?.scale(&c);
        }
    }
    Ok(acc)
}

fn tau_plus_n(w: &VF, k: u32) -> Result<VF> {
    (0..k).try_fold(w.clone(), |f, _| f.tau_plus())
}

fn named<R: Into<Residual>>(r: &mut Residuals, name: String, v: R) {
    r.push(name, v);
}

// ------------------------------------------------------------ structural

fn string_equation(c: &Context, _: &Samples) -> Out {
    let mut r = Residuals::new();
    for g in 0..=2 {
        if !c.gen.has(g) {
            continue;
        }
        let mut res = c.corr(g, &[&s(c)])?;
        if g == 0 {
            res = &res - &c.half_eta_t0t0();
        }
        named(&mut r, format!("g={g}"), res);
    }
    Ok(r)
}

fn dilaton_equation(c: &Context, _: &Samples) -> Out {
    let mut r = Residuals::new();
    for g in 0..=2u32 {
        if !c.gen.has(g) {
            continue;
        }
        let mut res = &c.corr(g, &[&d(c)])? - &c.gen.f(g)?.scale(&qi(2 * g as i64 - 2));
        if g == 1 {
            res = &res - &Series::constant(c.window(), &c.model.chi * q(1, 24));
        }
        named(&mut r, format!("g={g}"), res);
    }
    Ok(r)
}

fn wdvv(c: &Context, sm: &Samples) -> Out {
    let mut r = Residuals::new();
    for (i, (u, v, w)) in sm.triples().into_iter().enumerate() {
        let lhs = c.qprod(&c.qprod(u, v)?, w)?;
        let rhs = c.qprod(u, &c.qprod(v, w)?)?;
        named(&mut r, format!("triple {i}"), lhs.sub(&rhs));
    }
    Ok(r)
}

fn stringid(c: &Context, sm: &Samples) -> Out {
    let mut r = Residuals::new();
    for (i, w) in sm.prim.iter().enumerate() {
        named(&mut r, format!("(i) prim {i}"), c.qprod(&s(c), w)?.sub(w));
    }
    for (i, (u, w)) in sm.pairs().into_iter().enumerate() {
        let lhs = c.qprod(&c.qprod(&s(c), u)?, w)?;
        named(&mut r, format!("(ii) pair {i}"), lhs.sub(&c.qprod(u, w)?));
    }
    Ok(r)
}

fn string_prod(c: &Context, sm: &Samples) -> Out {
    let mut r = Residuals::new();
    for (i, w) in sm.all().into_iter().enumerate() {
        let rhs = c.corr_field(0, &[&w.tau_minus()])?.add(&w.pi());
        named(&mut r, format!("field {i}"), c.bar(w)?.sub(&rhs));
    }
    let sbar = c.bar(&s(c))?;
    for (i, w) in sm.prim.iter().enumerate() {
        named(&mut r, format!("S-bar identity {i}"), c.qprod(&sbar, w)?.sub(w));
    }
    Ok(r)
}

fn tau_identities(c: &Context, sm: &Samples) -> Out {
    let mut r = Residuals::new();
    for (i, w) in sm.all().into_iter().enumerate() {
        named(&mut r, format!("tau- tau+ {i}"), w.tau_plus()?.tau_minus().sub(w));
        named(&mut r, format!("tau+ tau- {i}"), w.tau_minus().tau_plus()?.sub(&w.sub(&w.pi())));
        named(&mut r, format!("tau- T {i}"), c.big_t(w)?.tau_minus().sub(w));
    }
    Ok(r)
}

fn t_via_string(c: &Context, sm: &Samples) -> Out {
    let mut r = Residuals::new();
    for (i, w) in sm.all().into_iter().enumerate() {
        let up = w.tau_plus()?;
        let rhs = up.sub(&c.qprod(&s(c), &up)?);
        named(&mut r, format!("field {i}"), c.big_t(w)?.sub(&rhs));
    }
    Ok(r)
}

fn zero_vector(c: &Context, sm: &Samples) -> Out {
    let mut r = Residuals::new();
    for (i, (u, v)) in sm.pairs().into_iter().enumerate() {
        named(&mut r, format!("T(W).V {i}"), c.qprod(&c.big_t(u)?, v)?);
    }
    for (i, w) in sm.all().into_iter().enumerate() {
        let tw = c.big_t(w)?;
        named(&mut r, format!("bar T(W) {i}"), c.bar(&tw)?);
        named(&mut r, format!("T(tau- T(W)) {i}"), c.big_t(&tw.tau_minus())?.sub(&tw));
    }
    named(&mut r, "T(S) = D".into(), c.big_t(&s(c))?.sub(&d(c)));
    named(&mut r, "bar D".into(), c.bar(&d(c))?);
    Ok(r)
}

fn wt(c: &Context, sm: &Samples) -> Out {
    let mut r = Residuals::new();
    let mut fields: Vec<VF> = sm.all().into_iter().cloned().collect();
    fields.push(s(c));
    fields.push(x(c));
    for (i, w) in fields.iter().enumerate() {
        let rhs = c.big_t(&w.tau_minus())?.add(&c.bar(w)?);
        named(&mut r, format!("field {i}"), w.sub(&rhs));
    }
    Ok(r)
}

fn wtw(c: &Context, sm: &Samples) -> Out {
    let mut r = Residuals::new();
    for (i, w) in sm.desc.iter().enumerate() {
        for k in 1..=3u32 {
            let mut rhs = c.big_t_pow(&w.tau_minus_pow(k), k)?;
            for j in 0..k {
                rhs = rhs.add(&c.big_t_pow(&c.bar(&w.tau_minus_pow(j))?, j)?);
            }
            named(&mut r, format!("field {i} k={k}"), w.sub(&rhs));
        }
    }
    Ok(r)
}

fn der_corr(c: &Context, sm: &Samples) -> Out {
    let mut r = Residuals::new();
    for g in 0..=2 {
        for (i, (v, w)) in sm.pairs_for(g).into_iter().enumerate() {
            let u = &sm.prim[1];
            let lhs = c.deriv(v, &c.corr(g, &[w, u])?);
            let rhs =
                &(&c.corr(g, &[v, w, u])? + &c.corr(g, &[&c.nabla(v, w), u])?) + &c.corr(g, &[w, &c.nabla(v, u)])?;
            named(&mut r, format!("g={g} pair {i}"), &lhs - &rhs);
        }
    }
    Ok(r)
}

fn der_prod(c: &Context, sm: &Samples) -> Out {
    let mut r = Residuals::new();
    for (i, (v, w, u)) in sm.triples().into_iter().enumerate() {
        let lhs = c.nabla(v, &c.qprod(w, u)?);
        let rhs = c.corr_field(0, &[v, w, u])?.add(&c.qprod(&c.nabla(v, w), u)?).add(&c.qprod(w, &c.nabla(v, u))?);
        named(&mut r, format!("triple {i}"), lhs.sub(&rhs));
    }
    Ok(r)
}

fn der_t(c: &Context, sm: &Samples) -> Out {
    let mut r = Residuals::new();
    for (i, (v, w)) in sm.pairs().into_iter().enumerate() {
        named(&mut r, format!("(1) {i}"), c.nabla(v, &w.tau_plus()?).sub(&c.nabla(v, w).tau_plus()?));
        named(&mut r, format!("(2) {i}"), c.nabla(v, &w.tau_minus()).sub(&c.nabla(v, w).tau_minus()));
        let rhs = c.big_t(&c.nabla(v, w))?.sub(&c.qprod(v, w)?);
        named(&mut r, format!("(3) {i}"), c.nabla(v, &c.big_t(w)?).sub(&rhs));
    }
    Ok(r)
}

fn four_pt_t(c: &Context, sm: &Samples) -> Out {
    let mut r = Residuals::new();
    for (i, (w1, w2, v)) in sm.triples().into_iter().enumerate() {
        let lhs = c.corr_field(0, &[w1, w2, &c.big_t(v)?])?;
        named(&mut r, format!("triple {i}"), lhs.sub(&c.qprod_all(&[w1, w2, v])?));
    }
    Ok(r)
}

fn t_der_prod(c: &Context, sm: &Samples) -> Out {
    let mut r = Residuals::new();
    for (i, (w1, w2, v)) in sm.triples().into_iter().enumerate() {
        let tv = c.big_t(v)?;
        let lhs = c.nabla(&tv, &c.qprod(w1, w2)?);
        let rhs =
            c.qprod(&c.nabla(&tv, w1), w2)?.add(&c.qprod(w1, &c.nabla(&tv, w2))?).add(&c.qprod_all(&[w1, w2, v])?);
        named(&mut r, format!("triple {i}"), lhs.sub(&rhs));
    }
    Ok(r)
}

/// `Σ_α ⟨⟨fs {W • γ^α}⟩⟩₀ γ_α`.
fn field_with_prod(c: &Context, fs: &[&VF], w: &VF) -> Result<VF> {
    let mut out = VF::zero(c.window());
    for a in 1..=c.n() {
        let p = c.qprod(w, &c.gamma_up(a))?;
        let mut all = fs.to_vec();
        all.push(&p);
        out = out.add(&c.gamma(a).mul_fn(&c.corr(0, &all)?));
    }
    Ok(out)
}

fn five_pt_t(c: &Context, sm: &Samples) -> Out {
    let mut r = Residuals::new();
    let v = &sm.desc[0];
    for (i, (w1, w2, w3)) in sm.triples().into_iter().enumerate() {
        let lhs = c.corr_field(0, &[w1, w2, w3, &c.big_t(v)?])?;
        let rhs = c
            .corr_field(0, &[&c.qprod(v, w1)?, w2, w3])?
            .add(&c.corr_field(0, &[&c.qprod(v, w2)?, w1, w3])?)
            .add(&field_with_prod(c, &[v, w1, w2], w3)?);
        named(&mut r, format!("triple {i}"), lhs.sub(&rhs));
    }
    Ok(r)
}

fn six_pt_t(c: &Context, sm: &Samples) -> Out {
    let mut r = Residuals::new();
    let (p, dd) = (&sm.prim, &sm.desc);
    let quads: [[&VF; 4]; 2] = [[&p[0], &p[1], &dd[0], &dd[1]], [&dd[1], &p[1], &dd[0], &p[0]]];
    let v = &dd[0];
    for (i, ws) in quads.iter().enumerate() {
        let tv = c.big_t(v)?;
        let lhs = c.corr_field(0, &[ws[0], ws[1], ws[2], ws[3], &tv])?;
        let mut rhs = VF::zero(c.window());
        for k in 0..3 {
            let vw = c.qprod(v, ws[k])?;
            let mut fs: Vec<&VF> = vec![&vw];
            for (j, w) in ws.iter().enumerate() {
                if j != k {
                    fs.push(w);
                }
            }
            rhs = rhs.add(&c.corr_field(0, &fs)?);
        }
        rhs = rhs.add(&field_with_prod(c, &[v, ws[0], ws[1], ws[2]], ws[3])?);
        for (x1, x2, y1) in [(0, 1, 2), (0, 2, 1), (1, 2, 0)] {
            // ⟨⟨V W_a W_b γ^β⟩⟩ ⟨⟨γ_β W_c W_4 γ^α⟩⟩ γ_α
            for bb in 1..=c.n() {
                let f = c.corr(0, &[v, ws[x1], ws[x2], &c.gamma_up(bb)])?;
                let g = c.corr_field(0, &[&c.gamma(bb), ws[y1], ws[3]])?;
                rhs = rhs.add(&g.mul_fn(&f));
            }
        }
        named(&mut r, format!("quad {i}"), lhs.sub(&rhs));
    }
    Ok(r)
}

fn der_trr_g0(c: &Context, sm: &Samples) -> Out {
    let mut r = Residuals::new();
    let all = sm.all();
    for (i, w) in all.iter().enumerate() {
        for k in 1..=3u32 {
            let tk = c.big_t_pow(w, k)?;
            let mut fs: Vec<&VF> = vec![&tk];
            for j in 0..k as usize {
                fs.push(all[(i + j + 1) % all.len()]);
            }
            named(&mut r, format!("field {i} k={k}"), c.corr_field(0, &fs)?);
        }
    }
    Ok(r)
}

fn string_lemma(c: &Context, sm: &Samples) -> Out {
    let mut r = Residuals::new();
    let sf = s(c);
    for (i, w) in sm.all().into_iter().enumerate() {
        named(&mut r, format!("(1) {i}"), c.nabla(w, &sf).add(&w.tau_minus()));
    }
    for (i, (v, w)) in sm.pairs().into_iter().enumerate() {
        let rhs = c.corr_field(0, &[&v.tau_minus(), w])?.add(&c.corr_field(0, &[v, &w.tau_minus()])?);
        named(&mut r, format!("(2) {i}"), c.corr_field(0, &[&sf, v, w])?.sub(&rhs));
    }
    for (i, w) in sm.all().into_iter().enumerate() {
        for a in 1..=c.n() {
            let up = c.gamma_up(a);
            let lhs = c.deriv(w, &c.corr(0, &[&sf, &sf, &up])?);
            let rhs = &c.corr(0, &[w, &sf.tau_minus(), &up])? - &c.corr(0, &[&w.tau_minus(), &sf, &up])?;
            named(&mut r, format!("(3) {i} class {a}"), &lhs - &rhs);
        }
    }
    Ok(r)
}

fn der_str(c: &Context, sm: &Samples) -> Out {
    let mut r = Residuals::new();
    let sf = s(c);
    for g in 0..=2u32 {
        let all = sm.all_for(g);
        for k in 1..=(4 - g as usize / 2) {
            let ws: Vec<&VF> = (0..k).map(|j| all[(j + g as usize) % all.len()]).collect();
            let mut fs = vec![&sf];
            fs.extend_from_slice(&ws);
            let mut res = c.corr(g, &fs)?;
            for i in 0..k {
                let low = ws[i].tau_minus();
                let mut v = ws.clone();
                v[i] = &low;
                res = &res - &c.corr(g, &v)?;
            }
            if g == 0 {
                res = &res - &c.contract_fn(&c.half_eta_t0t0(), &ws);
            }
            named(&mut r, format!("g={g} k={k}"), res);
        }
    }
    Ok(r)
}

fn string_powers(c: &Context, _: &Samples) -> Out {
    let mut r = Residuals::new();
    let sf = s(c);
    let ts: Vec<VF> = (0..=3).map(|k| c.big_t_pow(&sf, k)).collect::<Result<_>>()?;
    for m in 0..=2usize {
        for k in 0..=2usize {
            if k + m >= 1 {
                let res = c.nabla(&ts[m], &ts[k]).add(&ts[k + m - 1]);
                named(&mut r, format!("nabla m={m} k={k}"), res);
            }
            named(&mut r, format!("bracket m={m} k={k}"), c.bracket(&ts[k], &ts[m]));
        }
    }
    Ok(r)
}

// ------------------------------------------------------------------ euler

fn quasi_all_genus(c: &Context, _: &Samples) -> Out {
    let mut r = Residuals::new();
    for g in 0..=2u32 {
        if !c.gen.has(g) {
            continue;
        }
        let coef = (b1(c) + Q::one()) * qi(2) * qi(1 - g as i64);
        let mut res = &c.corr(g, &[&x(c)])? - &c.gen.f(g)?.scale(&coef);
        if g == 0 {
            res = &res - &c.half_c_t0t0();
        }
        if g == 1 {
            res = &res + &Series::constant(c.window(), &c.model.c1_cdm1 * q(1, 24));
        }
        named(&mut r, format!("g={g}"), res);
    }
    Ok(r)
}

fn x3pt(c: &Context, _: &Samples) -> Out {
    let mut r = Residuals::new();
    let xf = x(c);
    for m in 0..=2u32 {
        for n in 0..=2u32 {
            for a in 1..=c.n() {
                for bb in 1..=c.n() {
                    let ta = c.basis(m, a);
                    let tb = c.basis_up(n, bb)?;
                    let lhs = c.corr(0, &[&ta, &xf, &tb])?;
                    let coef = qi((m + n) as i64) + b(c, a) + Q::one() - b(c, bb);
                    let mut rhs = c.corr(0, &[&ta, &tb])?.scale(&coef);
                    if m == 0 && n == 0 {
                        rhs = &rhs + &Series::constant(c.window(), c.model.chern[a - 1][bb - 1].clone());
                    }
                    if m > 0 {
                        let ca = tau_plus_n(&c.cmap(&c.gamma(a)), m - 1)?;
                        rhs = &rhs + &c.corr(0, &[&ca, &tb])?;
                    }
                    if n > 0 {
                        let cb = tau_plus_n(&c.cmap(&c.gamma_up(bb)), n - 1)?;
                        rhs = &rhs + &c.corr(0, &[&ta, &cb])?;
                    }
                    named(&mut r, format!("m={m} n={n} a={a} b={bb}"), &lhs - &rhs);
                }
            }
        }
    }
    Ok(r)
}

fn der_euler_3pt(c: &Context, sm: &Samples) -> Out {
    let mut r = Residuals::new();
    let xf = x(c);
    for (i, w) in sm.all().into_iter().enumerate() {
        for a in 1..=c.n() {
            for bb in 1..=c.n() {
                let (ga, gb) = (c.gamma(a), c.gamma_up(bb));
                let lhs = c.deriv(w, &c.corr(0, &[&ga, &xf, &gb])?);
                let rhs = c.corr(0, &[&ga, w, &gb])?.scale(&(b(c, a) + Q::one() - b(c, bb)));
                named(&mut r, format!("field {i} a={a} b={bb}"), &lhs - &rhs);
            }
        }
    }
    Ok(r)
}

fn vir_euler(c: &Context, _: &Samples) -> Out {
    let mut r = Residuals::new();
    let xf = x(c);
    let pw: Vec<VF> = (0..=4).map(|k| c.qpower(&xf, k)).collect::<Result<_>>()?;
    let xb = c.xbar_powers(5)?;
    for k in 0..=3usize {
        for m in 0..=3usize {
            if m + k == 0 {
                continue;
            }
            let br = c.bracket(&pw[k], &pw[m]);
            let rhs = xb[m + k - 1].scale(&qi(m as i64 - k as i64));
            named(&mut r, format!("equiv k={k} m={m}"), c.bar(&br)?.sub(&rhs));
            let brb = c.bracket(&xb[k], &xb[m]);
            named(&mut r, format!("bar powers k={k} m={m}"), brb.sub(&rhs));
        }
    }
    Ok(r)
}

fn vir_euler_exact(c: &Context, _: &Samples) -> Out {
    let mut r = Residuals::new();
    let xf = x(c);
    let pw: Vec<VF> = (0..=5).map(|k| c.qpower(&xf, k)).collect::<Result<_>>()?;
    let xb = c.xbar_powers(5)?;
    for k in 0..=3usize {
        for m in 0..=3usize {
            if m + k == 0 {
                continue;
            }
            let br = c.bracket(&pw[k], &pw[m]);
            let target = if (k == 0 && m == 2) || (k == 2 && m == 0) { &xb[1] } else { &pw[m + k - 1] };
            named(&mut r, format!("k={k} m={m}"), br.sub(&target.scale(&qi(m as i64 - k as i64))));
        }
    }
    Ok(r)
}

fn tw_euler_power(c: &Context, sm: &Samples) -> Out {
    let mut r = Residuals::new();
    let xb = c.xbar_powers(3)?;
    for (i, w) in sm.all().into_iter().enumerate() {
        let tw = c.big_t(w)?;
        for (k, xk) in xb.iter().enumerate() {
            named(&mut r, format!("field {i} k={k}"), c.nabla(&tw, xk).add(&c.qprod(w, xk)?));
        }
    }
    Ok(r)
}

fn bracket_tx_power(c: &Context, _: &Samples) -> Out {
    let mut r = Residuals::new();
    let xb = c.xbar_powers(3)?;
    let ts: Vec<VF> = xb.iter().map(|f| c.big_t(f)).collect::<Result<_>>()?;
    for m in 0..=3 {
        for k in (m + 1)..=3 {
            named(&mut r, format!("m={m} k={k}"), c.bracket(&ts[m], &ts[k]));
        }
    }
    Ok(r)
}

fn tw_der_tau_s(c: &Context, sm: &Samples) -> Out {
    let mut r = Residuals::new();
    let xb = c.xbar_powers(3)?;
    let ts = s(c).tau_minus();
    for (i, w) in sm.all().into_iter().enumerate() {
        let tw = c.big_t(w)?;
        for (k, xk) in xb.iter().enumerate() {
            let lhs = c.nabla(&tw, &c.qprod(&ts, xk)?);
            named(&mut r, format!("field {i} k={k}"), lhs.add(&c.qprod(&w.tau_minus(), xk)?));
        }
    }
    Ok(r)
}

fn star_ops(c: &Context, sm: &Samples) -> Out {
    let mut r = Residuals::new();
    for (i, w) in sm.all().into_iter().enumerate() {
        let up = w.tau_plus()?;
        let lhs = c.gstar(w).tau_plus()?;
        named(&mut r, format!("tau+ G* {i}"), lhs.sub(&c.gstar(&up).sub(&up)));
        let lo = w.tau_minus();
        named(&mut r, format!("tau- G* {i}"), c.gstar(w).tau_minus().sub(&c.gstar(&lo).add(&lo)));
        named(&mut r, format!("tau- C {i}"), c.cmap(w).tau_minus().sub(&c.cmap(&lo)));
    }
    Ok(r)
}

fn xprod(c: &Context, sm: &Samples) -> Out {
    let mut r = Residuals::new();
    let mut fields: Vec<VF> = sm.all().into_iter().cloned().collect();
    fields.push(s(c));
    fields.push(x(c));
    for (i, w) in fields.iter().enumerate() {
        named(&mut r, format!("field {i}"), c.qprod(w, &x(c))?.sub(&c.bar(&c.rop(w)?)?));
    }
    Ok(r)
}

fn r_tau_minus(c: &Context, sm: &Samples) -> Out {
    let mut r = Residuals::new();
    let mut fields: Vec<VF> = sm.all().into_iter().cloned().collect();
    fields.push(s(c));
    for (i, w) in fields.iter().enumerate() {
        let rhs = c.rop(w)?.tau_minus().sub(&c.gstar(&c.bar(w)?)).sub(w);
        named(&mut r, format!("field {i}"), c.rop(&w.tau_minus())?.sub(&rhs));
    }
    Ok(r)
}

fn r_of_s(c: &Context, _: &Samples) -> Out {
    let mut r = Residuals::new();
    let rhs = x(c).add(&d(c).scale(&(b1(c) + Q::one())));
    named(&mut r, "R(S)".into(), c.rop(&s(c))?.sub(&rhs));
    Ok(r)
}

fn tau_minus_x(c: &Context, _: &Samples) -> Out {
    let mut r = Residuals::new();
    let (sf, xf) = (s(c), x(c));
    let s2 = c.qprod(&sf, &sf)?;
    let lhs = c.qprod(&sf, &xf.tau_minus())?;
    let rhs = c.qprod(&xf, &sf.tau_minus())?.sub(&s2.scale(&b1(c))).add(&c.gstar(&s2));
    named(&mut r, "tau-X".into(), lhs.sub(&rhs));
    Ok(r)
}

fn der_r(c: &Context, sm: &Samples) -> Out {
    let mut r = Residuals::new();
    for (i, (v, w)) in sm.pairs().into_iter().enumerate() {
        let rhs = c.rop(&c.nabla(v, w))?.sub(&c.gstar(&c.qprod(v, w)?));
        named(&mut r, format!("pair {i}"), c.nabla(v, &c.rop(w)?).sub(&rhs));
    }
    Ok(r)
}

fn der_gc(c: &Context, sm: &Samples) -> Out {
    let mut r = Residuals::new();
    for (i, (v, w)) in sm.pairs().into_iter().enumerate() {
        named(&mut r, format!("G pair {i}"), c.nabla(v, &c.gstar(w)).sub(&c.gstar(&c.nabla(v, w))));
        named(&mut r, format!("C pair {i}"), c.nabla(v, &c.cmap(w)).sub(&c.cmap(&c.nabla(v, w))));
    }
    Ok(r)
}

fn der_x(c: &Context, sm: &Samples) -> Out {
    let mut r = Residuals::new();
    let xf = x(c);
    for (i, w) in sm.all().into_iter().enumerate() {
        let rhs = c.rop(w)?.tau_minus().neg().add(&w.scale(&(b1(c) + qi(2))));
        named(&mut r, format!("field {i}"), c.nabla(w, &xf).sub(&rhs));
        let alt = c.rop(&w.tau_minus())?.neg().sub(&c.gstar(&c.bar(w)?)).add(&w.scale(&(b1(c) + Q::one())));
        named(&mut r, format!("field {i} via R(tau-)"), c.nabla(w, &xf).sub(&alt));
    }
    Ok(r)
}

fn rm_x_generic(c: &Context, g: u32, ws: &[&VF]) -> Result<Series> {
    let k = ws.len() as i64;
    let xf = x(c);
    let mut fs = vec![&xf];
    fs.extend_from_slice(ws);
    let mut res = c.corr(g, &fs)?;
    for i in 0..ws.len() {
        let tr = c.rop(ws[i])?.tau_minus();
        let mut v = ws.to_vec();
        v[i] = &tr;
        res = &res - &c.corr(g, &v)?;
    }
    let gi = g as i64;
    let coef = qi(2 * gi + k - 2) * b1(c) + qi(2 * (gi + k - 1));
    res = &res + &c.corr(g, ws)?.scale(&coef);
    if g == 0 {
        res = &res - &c.contract_fn(&c.half_c_t0t0(), ws);
    }
    Ok(res)
}

fn rm_x(c: &Context, sm: &Samples) -> Out {
    let mut r = Residuals::new();
    for g in 0..=2u32 {
        let all = sm.all_for(g);
        for k in 1..=3usize {
            let ws: Vec<&VF> = (0..k).map(|j| all[(j + k + g as usize) % all.len()]).collect();
            named(&mut r, format!("g={g} k={k}"), rm_x_generic(c, g, &ws)?);
        }
    }
    Ok(r)
}

fn rm_x_prim(c: &Context, sm: &Samples) -> Out {
    let mut r = Residuals::new();
    let p = &sm.prim;
    let xf = x(c);
    for g in 0..=2u32 {
        for k in 2..=3usize {
            let ws: Vec<&VF> = (0..k).map(|j| &p[j % 2]).collect();
            let mut fs = vec![&xf];
            fs.extend_from_slice(&ws);
            let mut res = c.corr(g, &fs)?;
            for i in 0..k {
                let gw = c.gstar(ws[i]);
                let mut v = ws.clone();
                v[i] = &gw;
                res = &res - &c.corr(g, &v)?;
            }
            let (gi, ki) = (g as i64, k as i64);
            let coef = qi(ki - 2 + 2 * gi) + qi(2 * gi + ki - 2) * b1(c);
            res = &res + &c.corr(g, &ws)?.scale(&coef);
            if g == 0 {
                res = &res - &c.contract_fn(&c.half_c_t0t0(), &ws);
            }
            named(&mut r, format!("g={g} k={k}"), res);
        }
    }
    Ok(r)
}

fn xxx_4pt(c: &Context, _: &Samples) -> Out {
    let mut r = Residuals::new();
    let xf = x(c);
    let xb = c.xbar_powers(6)?;
    let ts = s(c).tau_minus();
    let sbar = &xb[0];
    let b1v = b1(c);
    let gx = |k: usize| c.gstar(&xb[k]);
    // ⟨⟨X X X γ^α⟩⟩γ_α
    let lhs = c.corr_field(0, &[&xf, &xf, &xf])?;
    let rhs = c
        .qprod(&xb[3], &ts)?
        .scale(&qi(2))
        .sub(&xb[2].scale(&(qi(3) * &b1v)))
        .add(&c.qprod(&xb[2], &c.gstar(sbar))?.scale(&qi(2)))
        .add(&c.qprod(&xb[1], &gx(1))?.scale(&qi(2)))
        .sub(&gx(2));
    named(&mut r, "XXX".into(), lhs.sub(&rhs));
    for k in 0..=3usize {
        let lhs = c.corr_field(0, &[&xf, &xf, &xb[k]])?;
        let rhs = c
            .qprod(&xb[k + 2], &ts)?
            .sub(&xb[k + 1].scale(&(qi(2) * &b1v)))
            .add(&c.qprod(&xb[k + 1], &c.gstar(sbar))?)
            .add(&c.qprod(&xb[k], &gx(1))?)
            .add(&c.qprod(&xb[1], &gx(k))?)
            .sub(&gx(k + 1));
        named(&mut r, format!("XX Xk k={k}"), lhs.sub(&rhs));
    }
    for m in 0..=3usize {
        for k in 0..=(3 - m) {
            let lhs = c.corr_field(0, &[&xf, &xb[m], &xb[k]])?;
            let rhs = xb[m + k]
                .scale(&-b1v.clone())
                .sub(&gx(m + k))
                .add(&c.qprod(&xb[k], &gx(m))?)
                .add(&c.qprod(&xb[m], &gx(k))?);
            named(&mut r, format!("X Xm Xk m={m} k={k}"), lhs.sub(&rhs));
        }
    }
    Ok(r)
}

fn wk_4pt(c: &Context, sm: &Samples) -> Out {
    let mut r = Residuals::new();
    let cases: Vec<(&VF, [&VF; 3])> = vec![
        (&sm.desc[0], [&sm.prim[0], &sm.prim[1], &sm.desc[1]]),
        (&sm.prim[1], [&sm.desc[1], &sm.desc[0], &sm.prim[0]]),
    ];
    for (ci, (w, vs)) in cases.iter().enumerate() {
        let pw: Vec<VF> = (0..=4).map(|k| c.qpower(w, k)).collect::<Result<_>>()?;
        for k in 2..=4usize {
            let lhs = c.corr(0, &[&pw[k], vs[0], vs[1], vs[2]])?;
            let mut rhs = zero(c);
            for i in 1..k {
                let p = c.qprod_all(&[vs[0], vs[1], &pw[i - 1]])?;
                rhs = &rhs - &c.corr(0, &[w, &pw[k - i], &p, vs[2]])?;
            }
            for i in 2..k {
                let a = c.qprod(&pw[k - i], vs[0])?;
                let bq = c.qprod(vs[1], &pw[i - 1])?;
                rhs = &rhs + &c.corr(0, &[w, &a, &bq, vs[2]])?;
            }
            let a = c.qprod(&pw[k - 1], vs[0])?;
            rhs = &rhs + &c.corr(0, &[w, &a, vs[1], vs[2]])?;
            let bq = c.qprod(vs[1], &pw[k - 1])?;
            rhs = &rhs + &c.corr(0, &[w, vs[0], &bq, vs[2]])?;
            named(&mut r, format!("case {ci} k={k}"), &lhs - &rhs);
        }
    }
    Ok(r)
}

fn der_wdvv(c: &Context, sm: &Samples) -> Out {
    let mut r = Residuals::new();
    let all = sm.all();
    for shift in 0..2usize {
        let w: Vec<&VF> = (0..5).map(|j| all[(j + shift) % all.len()]).collect();
        let lhs = c.corr(0, &[&c.qprod(w[0], w[1])?, w[2], w[3], w[4]])?;
        let rhs = &(&c.corr(0, &[&c.qprod(w[0], w[2])?, w[1], w[3], w[4]])?
            + &c.corr(0, &[w[0], w[2], &c.qprod(w[1], w[3])?, w[4]])?)
            - &c.corr(0, &[w[0], w[1], &c.qprod(w[2], w[3])?, w[4]])?;
        named(&mut r, format!("shift {shift}"), &lhs - &rhs);
    }
    Ok(r)
}

fn xk_4pt(c: &Context, sm: &Samples) -> Out {
    let mut r = Residuals::new();
    let xb = c.xbar_powers(4)?;
    let ts = s(c).tau_minus();
    let (w, v) = (&sm.prim[0], &sm.prim[1]);
    for k in 0..=4usize {
        let lhs = c.corr_field(0, &[&xb[k], w, v])?;
        let mut rhs = c.qprod_all(&[&xb[k], w, v, &ts])?.neg();
        for i in 1..=k {
            let t1 = c.qprod_all(&[&c.gstar(&c.qprod(&xb[k - i], w)?), v, &xb[i - 1]])?;
            let t2 = c.qprod_all(&[&xb[k - i], w, &c.gstar(&c.qprod(v, &xb[i - 1])?)])?;
            let t3 = c.qprod_all(&[&c.gstar(&xb[k - i]), w, v, &xb[i - 1]])?;
            let t4 = c.qprod(&xb[k - i], &c.gstar(&c.qprod_all(&[w, v, &xb[i - 1]])?))?;
            rhs = rhs.add(&t1).add(&t2).sub(&t3).sub(&t4);
        }
        named(&mut r, format!("k={k}"), lhs.sub(&rhs));
    }
    Ok(r)
}

fn epower_4pt(c: &Context, _: &Samples) -> Out {
    let mut r = Residuals::new();
    let xb = c.xbar_powers(4)?;
    let ts = s(c).tau_minus();
    let term = |i: usize, tot: usize| -> Result<VF> { c.qprod(&xb[i], &c.gstar(&xb[tot - i - 1])) };
    for n in 0..=4usize {
        for m in 0..=(4 - n) {
            for k in 0..=(4 - n - m) {
                let tot = n + m + k;
                let lhs = c.corr_field(0, &[&xb[n], &xb[m], &xb[k]])?;
                let mut rhs = c.qprod(&xb[tot], &ts)?.neg();
                for i in 0..k {
                    rhs = rhs.sub(&term(i, tot)?);
                }
                for i in (n + m)..tot {
                    rhs = rhs.sub(&term(i, tot)?);
                }
                for i in m..(m + k) {
                    rhs = rhs.add(&term(i, tot)?);
                }
                for i in n..(n + k) {
                    rhs = rhs.add(&term(i, tot)?);
                }
                named(&mut r, format!("n={n} m={m} k={k}"), lhs.sub(&rhs));
            }
        }
    }
    Ok(r)
}

// ------------------------------------------------------- virasoro algebra

fn lk_rec(c: &Context, _: &Samples) -> Out {
    let mut r = Residuals::new();
    for n in -1..=2 {
        named(&mut r, format!("n={n}"), l(c, n)?.sub(&vir::virasoro_closed_form(c, n)?));
    }
    Ok(r)
}

fn vir_g0(c: &Context, _: &Samples) -> Out {
    let mut r = Residuals::new();
    let xb = c.xbar_powers(5)?;
    for n in -1..=4i32 {
        named(&mut r, format!("n={n}"), c.bar(&l(c, n)?)?.add(&xb[(n + 1) as usize]));
    }
    Ok(r)
}

fn bracket_vir(c: &Context, _: &Samples) -> Out {
    let mut r = Residuals::new();
    let ls: Vec<VF> = (-1..=4).map(|n| l(c, n)).collect::<Result<_>>()?;
    let at = |n: i32| &ls[(n + 1) as usize];
    for j in -1..=2 {
        for k in (j + 1)..=2 {
            let res = c.bracket(at(j), at(k)).sub(&at(j + k).scale(&qi((j - k) as i64)));
            named(&mut r, format!("j={j} k={k}"), res);
        }
    }
    Ok(r)
}

fn bracket_tl_tl(c: &Context, _: &Samples) -> Out {
    let mut r = Residuals::new();
    let tl: Vec<VF> = (-1..=2).map(|n| c.big_t(&l(c, n)?)).collect::<Result<_>>()?;
    for m in 0..tl.len() {
        for k in (m + 1)..tl.len() {
            named(&mut r, format!("m={} k={}", m as i32 - 1, k as i32 - 1), c.bracket(&tl[m], &tl[k]));
        }
    }
    Ok(r)
}

fn bracket_tl_l(c: &Context, _: &Samples) -> Out {
    let mut r = Residuals::new();
    for m in -1..=1i32 {
        let tlm = c.big_t(&l(c, m)?)?;
        for k in -1..=1i32 {
            let lk = l(c, k)?;
            if m + k < -1 {
                continue;
            }
            let res = c.bracket(&tlm, &lk).sub(&c.big_t(&l(c, m + k)?)?.scale(&qi(m as i64 + 1)));
            named(&mut r, format!("m={m} k={k}"), res);
        }
    }
    Ok(r)
}

fn rt_tr(c: &Context, sm: &Samples) -> Out {
    let mut r = Residuals::new();
    let mut fields: Vec<VF> = sm.all().into_iter().cloned().collect();
    fields.push(s(c));
    for (i, w) in fields.iter().enumerate() {
        let lhs = c.rop(&c.big_t(w)?)?;
        let rhs = c.big_t(&c.rop(w)?)?.add(&c.big_t_pow(w, 2)?);
        named(&mut r, format!("field {i}"), lhs.sub(&rhs));
    }
    Ok(r)
}

fn der_lk(c: &Context, sm: &Samples) -> Out {
    let mut r = Residuals::new();
    for (i, w) in sm.all().into_iter().enumerate() {
        for k in -1..=2i32 {
            let mut rhs = c.rop_pow(w, (k + 1) as u32)?.tau_minus();
            if k >= 0 {
                rhs = rhs.sub(&c.rop_pow(w, k as u32)?.scale(&qi(k as i64 + 1)));
            }
            named(&mut r, format!("field {i} k={k}"), c.nabla(w, &l(c, k)?).sub(&rhs));
        }
    }
    Ok(r)
}

fn der_tau_m_lk(c: &Context, sm: &Samples) -> Out {
    let mut r = Residuals::new();
    for (i, w) in sm.all().into_iter().enumerate() {
        for k in 0..=2i32 {
            for m in 1..=2u32 {
                let rk1 = c.rop_pow(w, (k + 1) as u32)?;
                let rk = c.rop_pow(w, k as u32)?;
                let rhs = rk1.tau_minus_pow(m + 1).sub(&rk.tau_minus_pow(m).scale(&qi(k as i64 + 1)));
                named(&mut r, format!("field {i} k={k} m={m}"), c.nabla(w, &l(c, k)?.tau_minus_pow(m)).sub(&rhs));
            }
        }
    }
    Ok(r)
}

fn der_lk_v2(c: &Context, sm: &Samples) -> Out {
    let mut r = Residuals::new();
    let xb = c.xbar_powers(3)?;
    for (i, w) in sm.all().into_iter().enumerate() {
        for k in 0..=2u32 {
            let mut rhs = c.rop_pow(&w.tau_minus(), k + 1)?;
            for j in 0..=k {
                let inner = c.gstar(&c.qprod(&xb[(k - j) as usize], w)?);
                rhs = rhs.add(&c.rop_pow(&inner, j)?);
            }
            named(&mut r, format!("field {i} k={k}"), c.nabla(w, &l(c, k as i32)?).sub(&rhs));
        }
    }
    Ok(r)
}

fn der_t_lk(c: &Context, sm: &Samples) -> Out {
    let mut r = Residuals::new();
    for (i, w) in sm.all().into_iter().enumerate() {
        let tw = c.big_t(w)?;
        for k in -1..=2i32 {
            named(&mut r, format!("field {i} k={k}"), c.nabla(&tw, &l(c, k)?).sub(&c.rop_pow(w, (k + 1) as u32)?));
        }
    }
    Ok(r)
}

fn stau_lk(c: &Context, _: &Samples) -> Out {
    let mut r = Residuals::new();
    for m in 0..=2u32 {
        for n in -1..=2i32 {
            named(&mut r, format!("m={m} n={n}"), vir::stau(c, m, n)?.sub(&vir::stau_direct(c, m, n)?));
        }
    }
    Ok(r)
}

fn stau_lk_closed(c: &Context, _: &Samples) -> Out {
    let mut r = Residuals::new();
    for n in 0..=3u32 {
        named(&mut r, format!("n={n}"), vir::stau_direct(c, 1, n as i32)?.sub(&vir::stau1_closed(c, n)?));
    }
    Ok(r)
}

fn der_tau_lk(c: &Context, sm: &Samples) -> Out {
    let mut r = Residuals::new();
    let xb = c.xbar_powers(4)?;
    for (i, w) in sm.all().into_iter().enumerate() {
        let tw = c.big_t(w)?;
        for k in -1..=2i32 {
            let lhs = c.nabla(&tw, &sv::bar_tau_l(c, k)?);
            let k1 = (k + 1) as usize;
            let mut rhs = c.qprod(&xb[k1], &w.tau_minus())?;
            if k >= 0 {
                let ku = k as usize;
                rhs = rhs.add(&c.qprod(&xb[ku], w)?.scale(&qi(k as i64 + 1)));
                for j in 0..=ku {
                    rhs = rhs.add(&c.qprod(&xb[j], &c.gstar(&c.qprod(&xb[ku - j], w)?))?);
                }
            }
            named(&mut r, format!("field {i} k={k}"), lhs.sub(&rhs));
        }
    }
    Ok(r)
}

// -------------------------------------------------------------------- trr

fn trr_g1(c: &Context, sm: &Samples) -> Out {
    let mut r = Residuals::new();
    let mut fields: Vec<VF> = sm.all().into_iter().cloned().collect();
    fields.push(s(c));
    fields.push(x(c));
    for (i, w) in fields.iter().enumerate() {
        named(&mut r, format!("field {i}"), trr::trr_g1_residual(c, w)?);
    }
    Ok(r)
}

fn der_trr_g1(c: &Context, sm: &Samples) -> Out {
    let mut r = Residuals::new();
    for (i, (w, v)) in sm.pairs().into_iter().enumerate() {
        named(&mut r, format!("pair {i}"), trr::trr_g1_d1_residual(c, w, v)?);
    }
    Ok(r)
}

fn der2_trr_g1(c: &Context, sm: &Samples) -> Out {
    let mut r = Residuals::new();
    for (i, (w, v1, v2)) in sm.triples().into_iter().enumerate() {
        named(&mut r, format!("triple {i}"), trr::trr_g1_d2_residual(c, w, v1, v2)?);
    }
    Ok(r)
}

fn trr1(c: &Context, sm: &Samples) -> Out {
    let mut r = Residuals::new();
    let mut fields: Vec<VF> = sm.all().into_iter().cloned().collect();
    fields.push(s(c));
    for (i, w) in fields.iter().enumerate() {
        named(&mut r, format!("field {i}"), trr::trr1_residual(c, w)?);
    }
    Ok(r)
}

fn trr2(c: &Context, sm: &Samples) -> Out {
    let mut r = Residuals::new();
    for (i, (w, v)) in sm.pairs_for(2).into_iter().enumerate() {
        named(&mut r, format!("pair {i}"), trr::trr2_residual(c, w, v)?);
    }
    let sf = s(c);
    named(&mut r, "S, tau1".into(), trr::trr2_residual(c, &sf, &sm.desc[0])?);
    Ok(r)
}

fn bp(c: &Context, sm: &Samples) -> Out {
    let mut r = Residuals::new();
    for (i, (w1, w2, w3)) in sm.triples().into_iter().enumerate() {
        named(&mut r, format!("triple {i}"), trr::bp_residual(c, w1, w2, w3)?);
    }
    let tv = c.big_t(&sm.desc[0])?;
    named(&mut r, "S, T(V), W".into(), trr::bp_residual(c, &s(c), &tv, &sm.prim[1])?);
    Ok(r)
}

fn trr1_literal(c: &Context, _: &Samples) -> Out {
    let mut r = Residuals::new();
    for level in 0..=2 {
        for a in 1..=c.n() {
            named(&mut r, format!("level {level} class {a}"), trr::trr1_literal_residual(c, level, a)?);
        }
    }
    Ok(r)
}

fn trr1_2(c: &Context, sm: &Samples) -> Out {
    let mut r = Residuals::new();
    for (i, w) in sm.all().into_iter().enumerate() {
        let lhs = c.corr(2, &[&c.big_t(w)?])?;
        let rhs = &c.corr(2, &[&c.big_t(&c.bar(w)?)?])? + &a1(c, &w.tau_minus())?;
        named(&mut r, format!("field {i}"), &lhs - &rhs);
    }
    Ok(r)
}

fn trrex(c: &Context, sm: &Samples) -> Out {
    let mut r = Residuals::new();
    for g in 1..=2 {
        let mut fields: Vec<VF> = if g < 2 { sm.all().into_iter().cloned().collect() } else { sm.prim.clone() };
        fields.push(s(c));
        for (i, w) in fields.iter().enumerate() {
            named(&mut r, format!("g={g} field {i}"), trr::trrex_residual(c, g, w)?);
        }
    }
    Ok(r)
}

fn str_dil_2pt(c: &Context, sm: &Samples) -> Out {
    let mut r = Residuals::new();
    for (i, w) in sm.all().into_iter().enumerate() {
        named(&mut r, format!("S field {i}"), &c.corr(2, &[&s(c), w])? - &c.corr(2, &[&w.tau_minus()])?);
        named(&mut r, format!("D field {i}"), &c.corr(2, &[&d(c), w])? - &c.corr(2, &[w])?.scale(&qi(3)));
    }
    Ok(r)
}

/// `(∇_W A₁)(V) = W A₁(V) − A₁(∇_W V)`.
fn nabla_a1(c: &Context, w: &VF, v: &VF) -> Result<Series> {
    trr::nabla_a1(c, w, v)
}

fn t2vw(c: &Context, sm: &Samples) -> Out {
    let mut r = Residuals::new();
    for (i, (v, w)) in sm.pairs_for(2).into_iter().enumerate() {
        let lhs = c.corr(2, &[&c.big_t_pow(v, 2)?, w])?;
        let rhs = &c.corr(2, &[&c.big_t(&c.qprod(v, w)?)?])? + &nabla_a1(c, w, v)?;
        named(&mut r, format!("pair {i}"), &lhs - &rhs);
    }
    Ok(r)
}

fn tvtsw(c: &Context, sm: &Samples) -> Out {
    let mut r = Residuals::new();
    for (i, (v, w)) in sm.pairs_for(2).into_iter().enumerate() {
        let tv = c.big_t(v)?;
        let lhs = c.corr(2, &[&tv, &c.big_t(&c.bar(w)?)?])?;
        let rhs = &c.corr(2, &[&tv, &c.big_t(w)?])? - &nabla_a1(c, &tv, &w.tau_minus())?;
        named(&mut r, format!("pair {i}"), &lhs - &rhs);
    }
    Ok(r)
}

fn a1a2(c: &Context, sm: &Samples) -> Out {
    let mut r = Residuals::new();
    for (i, (v, w)) in sm.pairs().into_iter().enumerate() {
        let lhs = a2(c, v, &c.big_t(w)?)?;
        named(&mut r, format!("pair {i}"), &lhs - &nabla_a1(c, &c.big_t(v)?, w)?);
    }
    Ok(r)
}

fn a1a2_str(c: &Context, sm: &Samples) -> Out {
    let mut r = Residuals::new();
    let sf = s(c);
    for (i, w) in sm.all().into_iter().enumerate() {
        named(&mut r, format!("field {i}"), &a2(c, &sf, w)? - &a1(c, &w.tau_minus())?.scale(&qi(3)));
        named(&mut r, format!("nabla_D A1 field {i}"), &nabla_a1(c, &d(c), w)? - &a1(c, w)?.scale(&qi(3)));
    }
    for (i, w) in sm.prim.iter().enumerate() {
        named(&mut r, format!("primary {i}"), a2(c, &sf, w)?);
    }
    Ok(r)
}

fn lem_ab(c: &Context, sm: &Samples) -> Out {
    let mut r = Residuals::new();
    for (i, (w1, w2, v)) in sm.triples().into_iter().enumerate() {
        let lhs = btensor(c, w1, w2, &c.big_t(v)?)?;
        let p = c.qprod(w1, w2)?;
        let rhs = &a2(c, &p, v)? - &nabla_a1(c, &p, v)?;
        named(&mut r, format!("triple {i}"), &lhs - &rhs);
    }
    Ok(r)
}

fn a1_wwbar(c: &Context, sm: &Samples) -> Out {
    let mut r = Residuals::new();
    let e = euler_class_field(c)?;
    for (i, w) in sm.all().into_iter().enumerate() {
        let bt = c.bar(&w.tau_minus())?;
        let bt2 = c.bar(&w.tau_minus_pow(2))?;
        let mut rhs = a1(c, &c.bar(w)?)?;
        rhs = &rhs + &c.corr(1, &[&c.qprod(&bt, &e)?])?.scale(&q(1, 20));
        let mut t3 = zero(c);
        for a in 1..=c.n() {
            let p = c.qprod(&bt, &c.gamma(a))?;
            t3 = &t3 + &c.corr_trace(0, &[&p, &c.gamma_up(a)])?;
        }
        rhs = &rhs + &t3.scale(&q(1, 480));
        rhs = &rhs + &c.corr_trace(0, &[&bt, &e])?.scale(&q(1, 1152));
        rhs = &rhs + &c.corr_trace(0, &[&c.qprod(&bt2, &e)?])?.scale(&q(1, 1152));
        named(&mut r, format!("field {i}"), &a1(c, w)? - &rhs);
    }
    Ok(r)
}

fn tensor_symmetry(c: &Context, sm: &Samples) -> Out {
    let mut r = Residuals::new();
    let k = q(-5, 7);
    for (i, (w, v)) in sm.pairs().into_iter().enumerate() {
        named(&mut r, format!("A2 symmetric {i}"), &a2(c, w, v)? - &a2(c, v, w)?);
        named(&mut r, format!("A2 scale {i}"), &a2(c, &w.scale(&k), v)? - &a2(c, w, v)?.scale(&k));
    }
    for (i, w) in sm.all().into_iter().enumerate() {
        named(&mut r, format!("A1 scale {i}"), &a1(c, &w.scale(&k))? - &a1(c, w)?.scale(&k));
    }
    let (w1, w2, w3) = sm.triples()[0];
    let base = btensor(c, w1, w2, w3)?;
    named(&mut r, "B 213".into(), &btensor(c, w2, w1, w3)? - &base);
    named(&mut r, "B 321".into(), &btensor(c, w3, w2, w1)? - &base);
    named(&mut r, "B 231".into(), &btensor(c, w2, w3, w1)? - &base);
    named(&mut r, "B scale".into(), &btensor(c, w1, &w2.scale(&k), w3)? - &base.scale(&k));
    Ok(r)
}

// ---------------------------------------------------------- genus-2 lemmas

fn virg2(c: &Context, _: &Samples) -> Out {
    let mut r = Residuals::new();
    let xb = c.xbar_powers(5)?;
    for k in -1..=3i32 {
        let lk = l(c, k)?;
        let rhs = &(&c.corr(2, &[&xb[(k + 1) as usize]])?.scale(&-Q::one())
            + &c.corr(2, &[&c.big_t(&sv::bar_tau_l(c, k)?)?])?)
            + &a1(c, &lk.tau_minus_pow(2))?;
        named(&mut r, format!("k={k}"), &c.corr(2, &[&lk])? - &rhs);
    }
    Ok(r)
}

fn genus1_rewrite(c: &Context, _: &Samples) -> Out {
    let mut r = Residuals::new();
    let xb = c.xbar_powers(5)?;
    for k in 0..=3i32 {
        let lk = l(c, k)?;
        let rhs = &c.corr_trace(0, &[&lk.tau_minus()])?.scale(&q(1, 24)) - &vir::rho(c, 1, k)?;
        named(&mut r, format!("k={k}"), &c.corr(1, &[&xb[(k + 1) as usize]])? - &rhs);
        let split = &c.corr(1, &[&c.big_t(&lk.tau_minus())?])? + &c.corr(1, &[&c.bar(&lk)?])?;
        named(&mut r, format!("split k={k}"), &c.corr(1, &[&lk])? - &split);
    }
    Ok(r)
}

fn genus1_l1(c: &Context, _: &Samples) -> Out {
    let mut r = Residuals::new();
    let rhs = weighted_trace(c, 0, &[], |a| b(c, a) * (Q::one() - b(c, a)) * q(-1, 2))?;
    named(&mut r, "L1".into(), &c.corr(1, &[&l(c, 1)?])? - &rhs);
    Ok(r)
}

fn dilaton_derivatives(c: &Context, sm: &Samples) -> Out {
    let mut r = Residuals::new();
    for g in 0..=2u32 {
        let all = sm.all_for(g);
        for k in 1..=3usize {
            let ws: Vec<&VF> = (0..k).map(|j| all[(j + g as usize) % all.len()]).collect();
            let df = d(c);
            let mut fs = vec![&df];
            fs.extend_from_slice(&ws);
            let res = &c.corr(g, &fs)? - &c.corr(g, &ws)?.scale(&qi(k as i64 + 2 * g as i64 - 2));
            named(&mut r, format!("g={g} k={k}"), res);
        }
    }
    Ok(r)
}

fn l0_derivatives(c: &Context, sm: &Samples) -> Out {
    let mut r = Residuals::new();
    let l0 = l(c, 0)?;
    for g in 0..=2u32 {
        let all = sm.all_for(g);
        for k in 1..=3usize {
            let ws: Vec<&VF> = (0..k).map(|j| all[(j + 1 + g as usize) % all.len()]).collect();
            let mut fs = vec![&l0];
            fs.extend_from_slice(&ws);
            let mut res = c.corr(g, &fs)?;
            for i in 0..k {
                let tr = c.rop(ws[i])?.tau_minus();
                let mut v = ws.clone();
                v[i] = &tr;
                res = &res + &c.corr(g, &v)?;
            }
            res = &res - &c.corr(g, &ws)?.scale(&qi(k as i64));
            if g == 0 {
                res = &res + &c.contract_fn(&c.half_c_t0t0(), &ws);
            }
            named(&mut r, format!("g={g} k={k}"), res);
        }
    }
    Ok(r)
}

/// `V₁ = 2⟨⟨X X X γ^α⟩⟩₀γ_α + 3(3b₁+2)X² − 3 G*X²`.
fn v1_field(c: &Context) -> Result<VF> {
    let xf = x(c);
    let x2 = c.xbar_power(2)?;
    let coef = qi(3) * (qi(3) * b1(c) + qi(2));
    Ok(c.corr_field(0, &[&xf, &xf, &xf])?.scale(&qi(2)).add(&x2.scale(&coef)).sub(&c.gstar(&x2).scale(&qi(3))))
}

fn bp_xxx(c: &Context, _: &Samples) -> Out {
    let mut r = Residuals::new();
    let xf = x(c);
    let xb = c.xbar_powers(3)?;
    let tx = c.big_t(&xf)?;
    let rhs = &(&c.corr(2, &[&xb[3]])?.scale(&qi(2)) - &c.deriv(&tx, &c.corr(2, &[&xb[2]])?).scale(&qi(3)))
        - &c.corr(2, &[&c.big_t(&v1_field(c)?)?])?;
    named(&mut r, "B(X,X,X)".into(), &btensor(c, &xf, &xf, &xf)? - &rhs);
    Ok(r)
}

fn v1_forms(c: &Context, _: &Samples) -> Out {
    let mut r = Residuals::new();
    let xf = x(c);
    let tx = c.big_t(&xf)?;
    let bl1 = sv::bar_tau_l(c, 1)?;
    let alt = sv::bar_tau_l(c, 2)?
        .scale(&qi(2))
        .sub(&c.qprod(&xf, &bl1)?.scale(&qi(9)))
        .sub(&c.nabla(&tx, &bl1).scale(&qi(3)));
    named(&mut r, "V1".into(), v1_field(c)?.sub(&alt));
    Ok(r)
}

fn l1l2_formula(c: &Context) -> Result<Series> {
    let xf = x(c);
    let tx = c.big_t(&xf)?;
    let l1 = l(c, 1)?;
    let t = &a1(c, &c.nabla(&tx, &l1.tau_minus_pow(2)))? + &a2(c, &xf, &l1.tau_minus())?;
    let mut out = t.scale(&q(3, 2));
    out = &out + &btensor(c, &xf, &xf, &xf)?.scale(&q(1, 2));
    out = &out - &c.deriv(&tx, &vir::rho(c, 2, 1)?).scale(&q(3, 2));
    Ok(out)
}

fn l1l2(c: &Context, _: &Samples) -> Out {
    let mut r = Residuals::new();
    named(&mut r, "psi3".into(), &sv::psi_direct(c, 3)? - &l1l2_formula(c)?);
    let xb2 = c.xbar_power(2)?;
    let l1 = l(c, 1)?;
    let rhs = &(&c.corr(2, &[&c.big_t(&sv::bar_tau_l(c, 1)?)?])? + &a1(c, &l1.tau_minus_pow(2))?) - &vir::rho(c, 2, 1)?;
    named(&mut r, "genus-2 L1 in X^2 form".into(), &c.corr(2, &[&xb2])? - &rhs);
    let xb1 = c.xbar_power(1)?;
    let tx = c.big_t(&xb1)?;
    let bl1 = sv::bar_tau_l(c, 1)?;
    let lhs = c.deriv(&tx, &c.corr(2, &[&c.big_t(&bl1)?])?);
    let rhs = &(&a2(c, &xb1, &bl1)? + &c.corr(2, &[&c.big_t(&c.qprod(&xb1, &bl1)?)?])?.scale(&qi(3)))
        + &c.corr(2, &[&c.big_t(&c.nabla(&tx, &bl1))?])?;
    named(&mut r, "T(X) <<T(bar tau- L1)>>".into(), &lhs - &rhs);
    Ok(r)
}

fn l1l2_a1_derivative(c: &Context, _: &Samples) -> Out {
    let mut r = Residuals::new();
    let xf = x(c);
    let tx = c.big_t(&xf)?;
    let l1 = l(c, 1)?;
    let t2 = l1.tau_minus_pow(2);
    let lhs = c.deriv(&tx, &a1(c, &t2)?);
    let diff = l1.tau_minus().sub(&sv::bar_tau_l(c, 1)?);
    let rhs = &a2(c, &xf, &diff)? + &a1(c, &c.nabla(&tx, &t2))?;
    named(&mut r, "T(X) A1(tau-^2 L1)".into(), &lhs - &rhs);
    Ok(r)
}

fn dertau2_l1(c: &Context, _: &Samples) -> Out {
    let mut r = Residuals::new();
    let tx = c.big_t(&x(c))?;
    let bb = b1(c) + Q::one();
    let rhs = l(c, 2)?
        .tau_minus_pow(2)
        .neg()
        .add(&l(c, 1)?.tau_minus().scale(&bb))
        .add(&l(c, 0)?.scale(&(qi(2) * &bb)))
        .sub(&d(c).scale(&(qi(2) * &bb)));
    named(&mut r, "nabla_T(X) tau-^2 L1".into(), c.nabla(&tx, &l(c, 1)?.tau_minus_pow(2)).sub(&rhs));
    Ok(r)
}

fn a1_d_formula(c: &Context) -> Result<Series> {
    let e = euler_class_field(c)?;
    Ok(&c.corr(1, &[&e])?.scale(&q(1, 20)) + &corr_trace2(c, 0, &[])?.scale(&q(1, 480)))
}

/// `Σ_α ⟨⟨{X•γ^α}⟩⟩₁⟨⟨γ_α⟩⟩₁` and `Σ_α ⟨⟨{X•γ^α} γ_α⟩⟩₁`, weighted.
fn x_prod_terms<F: FnMut(usize) -> Q>(c: &Context, mut wt: F) -> Result<(Series, Series)> {
    let xf = x(c);
    let (mut p, mut t) = (zero(c), zero(c));
    for a in 1..=c.n() {
        let w = wt(a);
        if w.is_zero() {
            continue;
        }
        let xg = c.qprod(&xf, &c.gamma_up(a))?;
        let ga = c.gamma(a);
        p = &p + &(&c.corr(1, &[&xg])? * &c.corr(1, &[&ga])?).scale(&w);
        t = &t + &c.corr(1, &[&xg, &ga])?.scale(&w);
    }
    Ok((p, t))
}

/// `Σ_{α,β} w ⟨⟨γ^α γ_α γ^β⟩⟩₀⟨⟨γ_β⟩⟩₁`.
fn three_one<W: FnMut(usize, usize) -> Q>(c: &Context, wt: W) -> Result<Series> {
    double_sum(c, wt, |a, bb| {
        Ok(&c.corr(0, &[&c.gamma_up(a), &c.gamma(a), &c.gamma_up(bb)])? * &c.corr(1, &[&c.gamma(bb)])?)
    })
}

/// `Σ_{α,β} w ⟨⟨γ_α γ^α γ_β γ^β⟩⟩₀`.
fn four_trace<W: FnMut(usize, usize) -> Q>(c: &Context, wt: W) -> Result<Series> {
    double_sum(c, wt, |a, bb| c.corr(0, &[&c.gamma(a), &c.gamma_up(a), &c.gamma(bb), &c.gamma_up(bb)]))
}

/// `Σ_{α,β} w ⟨⟨X γ^α γ^β⟩⟩₀ · f(α, β)`.
fn x_up_up<W, F>(c: &Context, wt: W, mut f: F) -> Result<Series>
where
    W: FnMut(usize, usize) -> Q,
    F: FnMut(usize, usize) -> Result<Series>,
{
    let xf = x(c);
    double_sum(c, wt, |a, bb| Ok(&c.corr(0, &[&xf, &c.gamma_up(a), &c.gamma_up(bb)])? * &f(a, bb)?))
}

fn a1_l0_formula(c: &Context) -> Result<Series> {
    let (p, t) = x_prod_terms(c, |_| Q::one())?;
    let mut out = &p.scale(&q(-7, 10)) - &t.scale(&q(1, 10));
    out = &out + &three_one(c, |_, bb| (qi(7) * b(c, bb) - qi(13)) * q(1, 120))?;
    out = &out - &four_trace(c, |_, _| Q::one())?.scale(&q(1, 480));
    Ok(out)
}

fn a1_l0_d(c: &Context, _: &Samples) -> Out {
    let mut r = Residuals::new();
    named(&mut r, "A1(D)".into(), &a1(c, &d(c))? - &a1_d_formula(c)?);
    named(&mut r, "A1(L0)".into(), &a1(c, &l(c, 0)?)? - &a1_l0_formula(c)?);
    Ok(r)
}

fn x2_g1(c: &Context, _: &Samples) -> Out {
    let mut r = Residuals::new();
    let x2 = c.xbar_power(2)?;
    let tl1 = l(c, 1)?.tau_minus();
    let xf = x(c);
    for a in 1..=c.n() {
        let up = c.gamma_up(a);
        let ba = b(c, a);
        let mut rhs = zero(c);
        for bb in 1..=c.n() {
            let bv = b(c, bb);
            let t1 = &c.corr(0, &[&xf, &up, &c.gamma_up(bb)])? * &c.corr(1, &[&c.gamma(bb)])?;
            rhs = &rhs + &t1.scale(&(Q::one() - &ba + &bv));
            let coef = &bv * (Q::one() - &bv) * q(1, 2) + (Q::one() - &ba) * (qi(2) - &ba) * q(1, 24);
            rhs = &rhs + &c.corr(0, &[&up, &c.gamma(bb), &c.gamma_up(bb)])?.scale(&coef);
        }
        rhs = &rhs + &c.corr(1, &[&c.qprod(&tl1, &up)?])?;
        let mut t4 = zero(c);
        for bb in 1..=c.n() {
            t4 = &t4 + &c.corr(0, &[&tl1, &up, &c.gamma(bb), &c.gamma_up(bb)])?;
        }
        rhs = &rhs + &t4.scale(&q(1, 24));
        named(&mut r, format!("one-point class {a}"), &c.corr(1, &[&x2, &up])? - &rhs);
    }
    // Traced form.
    let lhs = weighted_trace(c, 1, &[&x2], |_| Q::one())?;
    let mut rhs =
        x_up_up(c, |a, bb| qi(2) * (Q::one() - b(c, a) + b(c, bb)), |a, bb| c.corr(1, &[&c.gamma(a), &c.gamma(bb)]))?;
    rhs = &rhs
        + &three_one(c, |a, bb| {
            let (ba, bv) = (b(c, a), b(c, bb));
            (Q::one() - &ba + &bv) * (qi(2) - &ba - &bv) + &ba * (&ba + Q::one())
        })?;
    rhs = &rhs
        + &four_trace(c, |a, bb| {
            let (ba, bv) = (b(c, a), b(c, bb));
            &bv * (Q::one() - &bv) * q(1, 2)
                + (Q::one() - &ba) * (qi(2) - &ba) * q(1, 24)
                + &ba * (&ba + Q::one()) * q(1, 24)
        })?;
    let mut t5 = zero(c);
    let mut t6 = zero(c);
    let mut t7 = zero(c);
    for a in 1..=c.n() {
        let (lo, up) = (c.gamma(a), c.gamma_up(a));
        t5 = &t5 + &c.corr(1, &[&c.qprod(&tl1, &up)?, &lo])?;
        for bb in 1..=c.n() {
            t6 = &t6 + &(&c.corr(0, &[&tl1, &up, &lo, &c.gamma_up(bb)])? * &c.corr(1, &[&c.gamma(bb)])?);
            t7 = &t7 + &c.corr(0, &[&tl1, &lo, &up, &c.gamma(bb), &c.gamma_up(bb)])?;
        }
    }
    rhs = &(&(&rhs + &t5.scale(&qi(2))) + &t6) + &t7.scale(&q(1, 24));
    named(&mut r, "traced".into(), &lhs - &rhs);
    Ok(r)
}

fn x2_g1_derivative(c: &Context, _: &Samples) -> Out {
    let mut r = Residuals::new();
    let l1 = l(c, 1)?;
    let xf = x(c);
    for m in 1..=c.n() {
        let gm = c.gamma(m);
        let bm = b(c, m);
        let mut rhs = c.big_t(&gm)?.scale(&(&bm * (&bm + Q::one())));
        for a in 1..=c.n() {
            let coef = &bm + b(c, a);
            rhs = rhs.add(&c.gamma(a).mul_fn(&c.corr(0, &[&xf, &gm, &c.gamma_up(a)])?.scale(&coef)));
        }
        named(&mut r, format!("class {m}"), c.nabla(&gm, &l1).sub(&rhs));
    }
    let x2 = c.xbar_power(2)?;
    named(&mut r, "X^2 = -L1 + T(tau- L1)".into(), x2.add(&l1).sub(&c.big_t(&l1.tau_minus())?));
    Ok(r)
}

/// The genus-0/1 terms of the `3A₂ + B(X,X,X)` formula beyond the `A₁` terms.
fn a2_bxxx_rest(c: &Context) -> Result<Series> {
    let b1v = b1(c);
    let bb1 = &b1v + Q::one();
    let mut out = x_up_up(
        c,
        |a, bb| (qi(5) * b(c, a) * (b(c, a) + b(c, bb)) - qi(5) * b(c, a) + qi(21) * &bb1) * q(1, 5),
        |a, bb| Ok(&c.corr(1, &[&c.gamma(a)])? * &c.corr(1, &[&c.gamma(bb)])?),
    )?;
    out = &out
        + &x_up_up(
            c,
            |a, bb| (qi(10) * b(c, a) * (b(c, a) + b(c, bb)) - qi(10) * b(c, a) + qi(6) * &bb1) * q(1, 10),
            |a, bb| c.corr(1, &[&c.gamma(a), &c.gamma(bb)]),
        )?;
    out = &out
        + &three_one(c, |a, bb| {
            let (ba, bv) = (b(c, a), b(c, bb));
            let poly = -qi(5) * &bv * &bv * &bv - qi(15) * &b1v * &bv * &bv - qi(27) * &b1v * &bv - qi(37) * &bv
                + qi(114) * &bb1
                + qi(180) * (&bv + &bb1) * &ba * (Q::one() - &ba);
            poly * q(1, 120)
        })?;
    out = &out + &four_trace(c, |a, _| &bb1 * (-qi(5) * b(c, a) * b(c, a) + qi(5) * b(c, a) + Q::one()) * q(1, 40))?;
    Ok(out)
}

fn a2_bxxx(c: &Context, _: &Samples) -> Out {
    let mut r = Residuals::new();
    let xf = x(c);
    let l1 = l(c, 1)?;
    let lhs = &a2(c, &xf, &l1.tau_minus())?.scale(&qi(3)) + &btensor(c, &xf, &xf, &xf)?;
    let bb1 = b1(c) + Q::one();
    let rhs = &(&a1(c, &l(c, 2)?.tau_minus_pow(2))?.scale(&qi(5)) - &a1(c, &l1.tau_minus())?.scale(&(qi(3) * &bb1)))
        + &a2_bxxx_rest(c)?;
    named(&mut r, "3A2 + B".into(), &lhs - &rhs);
    Ok(r)
}

fn a2_bxxx_tau_r(c: &Context, _: &Samples) -> Out {
    let mut r = Residuals::new();
    let (xf, df) = (x(c), d(c));
    let bb1 = b1(c) + Q::one();
    let (l0, l1, l2) = (l(c, 0)?, l(c, 1)?, l(c, 2)?);
    let trx = c.rop(&xf)?.tau_minus();
    let rhs = l1.tau_minus().neg().add(&l0.scale(&bb1)).sub(&df.scale(&bb1));
    named(&mut r, "tau- R(X)".into(), trx.sub(&rhs));
    let trtrx = c.rop(&trx)?.tau_minus();
    let rhs = l2
        .tau_minus_pow(2)
        .neg()
        .add(&l1.tau_minus().scale(&(b1(c) + qi(2))))
        .add(&l0.scale(&bb1))
        .sub(&df.scale(&bb1));
    named(&mut r, "tau- R tau- R(X)".into(), trtrx.sub(&rhs));
    let rhs = l2.tau_minus_pow(2).sub(&l1.tau_minus());
    named(&mut r, "tau- R(tau- L1)".into(), c.rop(&l1.tau_minus())?.tau_minus().sub(&rhs));
    named(&mut r, "tau- R(D)".into(), c.rop(&df)?.tau_minus().add(&l0).sub(&df));
    Ok(r)
}

fn tx_g1_l1_formula(c: &Context) -> Result<Series> {
    let b1v = b1(c);
    let (p, t) = x_prod_terms(c, |a| b(c, a) * (Q::one() - b(c, a)))?;
    let mut out = &p + &t;
    out = &out
        + &three_one(c, |a, bb| {
            let (ba, bv) = (b(c, a), b(c, bb));
            (&ba * (Q::one() - &ba) + &bv * (Q::one() - &bv) * q(1, 12)) * (Q::one() - &b1v - &bv) * q(1, 2)
        })?;
    out = &out - &four_trace(c, |a, _| &b1v * b(c, a) * (Q::one() - b(c, a)) * q(1, 24))?;
    Ok(out)
}

fn tx_g1_l1(c: &Context, _: &Samples) -> Out {
    let mut r = Residuals::new();
    let tx = c.big_t(&x(c))?;
    let lhs = c.deriv(&tx, &vir::rho(c, 2, 1)?).scale(&-Q::one());
    named(&mut r, "-T(X) rho_{2,1}".into(), &lhs - &tx_g1_l1_formula(c)?);
    Ok(r)
}

fn three_b_to_two_b(c: &Context, sm: &Samples) -> Out {
    let mut r = Residuals::new();
    for g in 0..=2u32 {
        let all = sm.all_for(g);
        for k in 0..=2usize {
            if g == 0 && k == 0 {
                continue;
            }
            let ws: Vec<&VF> = (0..k).map(|j| all[(j + g as usize) % all.len()]).collect();
            let lhs = weighted_trace(c, g, &ws, |a| b(c, a) * (Q::one() - b(c, a) * b(c, a)))?;
            let rhs = weighted_trace(c, g, &ws, |a| b(c, a) * (Q::one() - b(c, a)) * q(3, 2))?;
            named(&mut r, format!("g={g} k={k}"), &lhs - &rhs);
        }
    }
    Ok(r)
}

fn g2_l2_v2_formula(c: &Context) -> Result<Series> {
    let mut out = x_up_up(
        c,
        |a, bb| (-qi(2) * b(c, a) * b(c, a) + qi(2) * b(c, a) + b(c, a) * b(c, bb)) * q(1, 2),
        |a, bb| {
            let (ga, gb) = (c.gamma(a), c.gamma(bb));
            Ok(&(&c.corr(1, &[&ga])? * &c.corr(1, &[&gb])?) + &c.corr(1, &[&ga, &gb])?)
        },
    )?;
    out = &out
        + &three_one(c, |a, bb| {
            let (ba, bv) = (b(c, a), b(c, bb));
            &ba * (Q::one() - &ba) * q(3, 2) + &bv * (Q::one() - &bv) * (qi(2) - &bv) * q(1, 24)
        })?;
    out = &out + &four_trace(c, |a, _| b(c, a) * (Q::one() - b(c, a)) * q(1, 16))?;
    Ok(out)
}

fn g2_l2_v2(c: &Context, _: &Samples) -> Out {
    let mut r = Residuals::new();
    let lhs = vir::rho(c, 2, 2)?.scale(&-Q::one());
    named(&mut r, "-rho_{2,2}".into(), &lhs - &g2_l2_v2_formula(c)?);
    Ok(r)
}

fn l1_to_l2(c: &Context, _: &Samples) -> Out {
    let mut r = Residuals::new();
    let bb1 = b1(c) + Q::one();
    let l2 = l(c, 2)?;
    let a1_l2 = a1(c, &l2.tau_minus_pow(2))?;
    let tail = &(&(&a1_l0_formula(c)? - &a1_d_formula(c)?).scale(&(qi(3) * &bb1)) + &a2_bxxx_rest(c)?.scale(&q(1, 2)))
        + &tx_g1_l1_formula(c)?.scale(&q(3, 2));
    let assembled = &a1_l2 + &tail;
    named(&mut r, "psi3 assembled".into(), &sv::psi_direct(c, 3)? - &assembled);
    named(&mut r, "assembled = L2 prediction".into(), &tail - &g2_l2_v2_formula(c)?);
    named(&mut r, "genus-2 L2 in psi form".into(), &(&sv::psi_direct(c, 3)? - &a1_l2) + &vir::rho(c, 2, 2)?);
    Ok(r)
}

// -------------------------------------------------------------------- psi

fn psi_anchors(c: &Context, _: &Samples) -> Out {
    let mut r = Residuals::new();
    for k in -1..=3i32 {
        let res = &(&sv::psi_direct(c, (k + 1) as u32)? - &a1(c, &l(c, k)?.tau_minus_pow(2))?) + &vir::rho(c, 2, k)?;
        named(&mut r, format!("L{k} in psi form"), res);
    }
    Ok(r)
}

fn thm_psi(c: &Context, _: &Samples) -> Out {
    let mut r = Residuals::new();
    for ms in [[1u32, 1, 1], [1, 1, 0], [2, 1, 0], [0, 0, 1], [2, 1, 1]] {
        named(&mut r, format!("{ms:?}"), sv::thm_psi_residual(c, ms)?);
    }
    Ok(r)
}

fn rec_psi(c: &Context, _: &Samples) -> Out {
    let mut r = Residuals::new();
    for k in [0u32, 2, 3] {
        named(&mut r, format!("residual k={k}"), sv::recpsi_residual(c, k)?);
    }
    for k in [2u32, 3] {
        let rec = sv::psi_recursive(c, k, &sv::psi_direct(c, k)?)?;
        named(&mut r, format!("psi_{} recursive", k + 1), &rec - &sv::psi_direct(c, k + 1)?);
    }
    let p3 = sv::psi_recursive(c, 2, &sv::psi_direct(c, 2)?)?;
    let p4 = sv::psi_recursive(c, 3, &p3)?;
    named(&mut r, "psi_4 chained".into(), &p4 - &sv::psi_direct(c, 4)?);
    Ok(r)
}

fn rec_psi_k1(c: &Context, _: &Samples) -> Out {
    let mut r = Residuals::new();
    let flagged = matches!(sv::psi_recursive(c, 1, &zero(c)), Err(Error::Indeterminate(_)));
    r.push("k=1 indeterminate", Residual::Flag(flagged, "psi_2 from the k=1 recursion must be refused".into()));
    Ok(r)
}

fn tx_der_t_g2(c: &Context, _: &Samples) -> Out {
    let mut r = Residuals::new();
    let xb = c.xbar_powers(5)?;
    for (k, n) in [(1usize, 0usize), (2, 1), (1, 2), (2, 0)] {
        let tk = c.big_t(&xb[k])?;
        let tn = c.big_t(&xb[n])?;
        let lhs = &c.deriv(&tk, &c.corr(2, &[&c.big_t(&sv::bar_tau_l(c, n as i32 - 1)?)?])?)
            - &c.deriv(&tn, &c.corr(2, &[&c.big_t(&sv::bar_tau_l(c, k as i32 - 1)?)?])?);
        let tot = k + n;
        let mut rhs = zero(c);
        if tot >= 1 {
            rhs = c.corr(2, &[&c.big_t(&xb[tot - 1])?])?.scale(&qi(2 * (k as i64 - n as i64)));
            for i in 0..k {
                let f = c.qprod(&xb[i], &c.gstar(&xb[tot - 1 - i]))?;
                rhs = &rhs + &c.corr(2, &[&c.big_t(&f)?])?.scale(&qi(2));
            }
            for i in 0..n {
                let f = c.qprod(&xb[i], &c.gstar(&xb[tot - 1 - i]))?;
                rhs = &rhs - &c.corr(2, &[&c.big_t(&f)?])?.scale(&qi(2));
            }
        }
        rhs = &rhs + &a2(c, &xb[k], &sv::bar_tau_l(c, n as i32 - 1)?)?;
        rhs = &rhs - &a2(c, &xb[n], &sv::bar_tau_l(c, k as i32 - 1)?)?;
        named(&mut r, format!("k={k} n={n}"), &lhs - &rhs);
    }
    Ok(r)
}

fn bpe2(c: &Context, _: &Samples) -> Out {
    let mut r = Residuals::new();
    let xb = c.xbar_powers(4)?;
    for ms in [[1usize, 1, 1], [2, 1, 0], [0, 0, 1]] {
        let m: usize = ms.iter().sum();
        let mut lhs = c.corr(2, &[&xb[m]])?.scale(&qi(2));
        let mut four = zero(c);
        for a in 1..=c.n() {
            let f = c.corr(0, &[&xb[ms[0]], &xb[ms[1]], &xb[ms[2]], &c.gamma_up(a)])?;
            four = &four + &(&f * &c.corr(2, &[&c.big_t(&c.gamma(a))?])?);
        }
        lhs = &lhs - &four.scale(&qi(2));
        for &mi in &ms {
            let rest = m - mi;
            lhs = &lhs + &c.deriv(&c.big_t(&xb[rest])?, &c.corr(2, &[&xb[mi]])?);
            lhs = &lhs - &c.deriv(&c.big_t(&xb[mi])?, &c.corr(2, &[&xb[rest]])?);
        }
        let rhs = btensor(c, &xb[ms[0]], &xb[ms[1]], &xb[ms[2]])?;
        named(&mut r, format!("{ms:?}"), &lhs - &rhs);
    }
    Ok(r)
}

// ----------------------------------------------------------------- solver

fn euler_wrap(c: &Context, _: &Samples) -> Out {
    let mut r = Residuals::new();
    let rel = sv::solve_euler_relation(c)?;
    for k in 0..=2 {
        named(&mut r, format!("k={k}"), sv::euler_relation_residual(c, &rel, k)?);
    }
    Ok(r)
}

fn tw_f(c: &Context, sm: &Samples) -> Out {
    let mut r = Residuals::new();
    let rel = sv::solve_euler_relation(c)?;
    for (i, w) in sm.all().into_iter().enumerate() {
        let tw = c.big_t(w)?;
        for (j, f) in rel.f.iter().enumerate() {
            named(&mut r, format!("field {i} f_{j}"), c.deriv(&tw, f));
        }
    }
    Ok(r)
}

fn compct(c: &Context, _: &Samples) -> Out {
    let mut r = Residuals::new();
    let rel = sv::solve_euler_relation(c)?;
    for k in 0..=2 {
        let res = sv::compat_residual(c, &rel, k)?;
        r.push(format!("primary k={k}"), Residual::Flag(res.is_primary(), "residual must be primary".into()));
        named(&mut r, format!("k={k}"), res);
    }
    Ok(r)
}

fn compct_w(c: &Context, sm: &Samples) -> Out {
    let mut r = Residuals::new();
    let rel = sv::solve_euler_relation(c)?;
    for (i, w) in sm.all().into_iter().enumerate() {
        for k in 0..=2 {
            named(&mut r, format!("field {i} k={k}"), sv::compat_w_residual(c, &rel, k, w)?);
        }
    }
    Ok(r)
}

fn yk_derivative(c: &Context, sm: &Samples) -> Out {
    let mut r = Residuals::new();
    named(&mut r, "Y_0".into(), sv::y_field(c, 0)?);
    let sbar = c.xbar_power(0)?;
    named(&mut r, "Y_1".into(), sv::y_field(c, 1)?.sub(&c.qprod(&sbar, &c.g_half(&sbar))?));
    for (i, w) in sm.all().into_iter().enumerate() {
        let tw = c.big_t(w)?;
        for k in 0..=3 {
            named(&mut r, format!("field {i} k={k}"), sv::y_of(c, k, w)?.add(&c.nabla(&tw, &sv::y_field(c, k)?)));
        }
    }
    let xb = c.xbar_powers(4)?;
    for k in 0..=3usize {
        let rhs = sv::y_of(c, k, &xb[1])?.add(&c.qprod(&xb[k], &c.g_half(&xb[0]))?);
        named(&mut r, format!("Y_{} recursion", k + 1), sv::y_field(c, k + 1)?.sub(&rhs));
    }
    Ok(r)
}

fn ytau_l(c: &Context, _: &Samples) -> Out {
    let mut r = Residuals::new();
    let xb = c.xbar_powers(5)?;
    let ts = s(c).tau_minus();
    for k in 1..=4usize {
        let lhs = sv::bar_tau_l(c, k as i32 - 1)?.add(&xb[k - 1].scale(&q(3 * k as i64, 2)));
        let rhs = c.qprod(&xb[k], &ts)?.add(&sv::y_field(c, k)?).neg();
        named(&mut r, format!("k={k}"), lhs.sub(&rhs));
    }
    Ok(r)
}

fn psi_tilde_forms(c: &Context, _: &Samples) -> Out {
    let mut r = Residuals::new();
    for k in 0..=4u32 {
        named(&mut r, format!("k={k}"), &sv::psi_tilde(c, k)? - &sv::psi_tilde_via_y(c, k)?);
    }
    Ok(r)
}

fn psicomp(c: &Context, _: &Samples) -> Out {
    let mut r = Residuals::new();
    let rel = sv::solve_euler_relation(c)?;
    for k in 0..=2usize {
        let mut res = sv::psi_tilde(c, (rel.n + 1 + k) as u32)?;
        for i in 0..=rel.n {
            res = &res - &(&rel.f[i] * &sv::psi_tilde(c, (i + k) as u32)?);
        }
        named(&mut r, format!("k={k}"), res);
    }
    Ok(r)
}

fn psiwrap(c: &Context, _: &Samples) -> Out {
    let mut r = Residuals::new();
    let rel = sv::solve_euler_relation(c)?;
    let n = rel.n;
    let bm = sv::b_matrix(c, &rel, n + 2);
    let pt: Vec<Series> = (0..=(2 * n + 3) as u32).map(|k| sv::psi_tilde(c, k)).collect::<Result<_>>()?;
    for k in 1..=2usize {
        let mut res = pt[n + 1 + k].clone();
        for i in 1..=n + 1 {
            res = &res - &(&bm[k - 1][i - 1] * &pt[i]);
        }
        named(&mut r, format!("k={k}"), res);
    }
    Ok(r)
}

fn t_psi_tilde(c: &Context, _: &Samples) -> Out {
    let mut r = Residuals::new();
    let xb = c.xbar_powers(5)?;
    let tx = c.big_t(&xb[1])?;
    for k in 0..=3u32 {
        let lhs = c.deriv(&tx, &sv::psi_tilde(c, k)?);
        let mut rhs = sv::psi_tilde(c, k + 1)?.scale(&q(2 * (k as i64 - 1), k as i64 + 1));
        rhs = &rhs - &c.corr(2, &[&c.big_t(&xb[k as usize])?])?.scale(&qi(3));
        rhs = &rhs - &sv::h_k(c, k)?;
        named(&mut r, format!("k={k}"), &lhs - &rhs);
    }
    Ok(r)
}

fn lineqnpsi(c: &Context, _: &Samples) -> Out {
    let mut r = Residuals::new();
    let rel = sv::solve_euler_relation(c)?;
    let n = rel.n as i64;
    for k in 0..=2i64 {
        let mut lhs = zero(c);
        for i in 0..=n {
            let coef = q(n + k, n + k + 2) - q(i + k - 1, i + k + 1);
            lhs = &lhs + &(&rel.f[i as usize] * &sv::psi_tilde(c, (i + k + 1) as u32)?).scale(&coef);
        }
        named(&mut r, format!("k={k}"), &lhs - &sv::g_k(c, &rel, k as u32)?);
    }
    Ok(r)
}

fn g_from_h(c: &Context, _: &Samples) -> Out {
    let mut r = Residuals::new();
    let rel = sv::solve_euler_relation(c)?;
    let n = rel.n as u32;
    for k in 0..=2u32 {
        let mut hs = sv::h_k(c, n + k + 1)?;
        for i in 0..=n {
            hs = &hs - &(&rel.f[i as usize] * &sv::h_k(c, i + k)?);
        }
        named(&mut r, format!("k={k}"), &hs.scale(&q(1, 2)) - &sv::g_k(c, &rel, k)?);
    }
    Ok(r)
}

fn solver_matrices(c: &Context, _: &Samples) -> Out {
    let mut r = Residuals::new();
    let ctx = c.with_gen(c.gen.without_f2())?;
    let rel = sv::solve_euler_relation(&ctx)?;
    let m = sv::build_matrices(&ctx, &rel)?;
    let n = rel.n;
    for i in 1..=n + 1 {
        named(&mut r, format!("b_1,{i}"), &m.b[0][i - 1] - &rel.fj(i as i64 - 1, &ctx));
        let c0 = &rel.fj(i as i64 - 1, &ctx).scale(&(q(n as i64, n as i64 + 2) - q(i as i64 - 2, i as i64)));
        named(&mut r, format!("c_0,{i}"), &m.c[0][i - 1] - c0);
    }
    for i in 0..=n {
        for j in 0..=n {
            let mut acc = zero(&ctx);
            for k in 0..=n {
                acc = &acc + &(&m.lambda[i][k] * &m.c[k][j]);
            }
            if i == j {
                acc = &acc - &Series::one(ctx.window());
            }
            named(&mut r, format!("lambda c [{i}][{j}]"), acc);
        }
    }
    Ok(r)
}

fn vir_nondeg(c: &Context, _: &Samples) -> Out {
    let mut r = Residuals::new();
    let rep = sv::reconstruct_f2(c)?;
    named(&mut r, "F2".into(), &rep.f2 - c.gen.f(2)?);
    for (i, p) in rep.psi.iter().enumerate() {
        named(&mut r, format!("psi_{}", i + 1), p - &sv::psi_direct(c, i as u32 + 1)?);
    }
    for (i, p) in rep.psi_tilde.iter().enumerate() {
        named(&mut r, format!("psi-tilde_{}", i + 1), p - &sv::psi_tilde(c, i as u32 + 1)?);
    }
    for (name, ok, _) in &rep.diagnostics {
        r.push(format!("diagnostic {name}"), Residual::Flag(*ok, name.clone()));
    }
    Ok(r)
}

// ------------------------------------------------------------ constraints

fn constraints(c: &Context, _: &Samples) -> Out {
    let mut r = Residuals::new();
    for g in 0..=2u32 {
        for n in -1..=3 {
            named(&mut r, format!("g={g} n={n}"), vir::constraint_residual(c, g, n)?);
        }
    }
    Ok(r)
}

fn rho1_alt(c: &Context, _: &Samples) -> Out {
    let mut r = Residuals::new();
    for k in 0..=3 {
        named(&mut r, format!("k={k}"), &vir::rho(c, 1, k as i32)? - &vir::rho1_alt(c, k)?);
    }
    Ok(r)
}

fn rho_explicit(c: &Context, _: &Samples) -> Out {
    let mut r = Residuals::new();
    for g in 0..=2 {
        for n in 1..=2 {
            named(&mut r, format!("g={g} n={n}"), &vir::rho(c, g, n)? - &vir::rho_explicit(c, g, n)?);
        }
    }
    Ok(r)
}

// --------------------------------------------------------------- appendix

fn appendix(c: &Context, _: &Samples) -> Out {
    let rel = sv::solve_euler_relation(c)?;
    sv::appendix_suite(c, &rel)
}
