//! Geometric input: pairing, grading exponents and first Chern matrix.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::series::{q, qi, Q};

/// Square rational matrix, row-major, 0-based indices.
pub type Mat = Vec<Vec<Q>>;

/// Target data. Classes are 1-based in the public API (`γ_1` is the
/// identity class); internal storage is 0-based.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ManifoldModel {
    pub num_classes: usize,
    pub eta: Mat,
    pub eta_inv: Mat,
    pub b: Vec<Q>,
    /// `chern[α][β] = C_α^β` with `c₁ ∪ γ_α = Σ_β C_α^β γ_β`.
    pub chern: Mat,
    /// Euler characteristic of the target.
    pub chi: Q,
    /// `∫ c₁ ∪ c_{d−1}`.
    pub c1_cdm1: Q,
}

impl ManifoldModel {
    /// Builds a model, inverting the pairing. Missing topological numbers
    /// are derived: `χ = N` (even cohomology only) and `∫c₁c_{d−1}` from the
    /// Libgober–Wood identity `Σ(b_α − ½)² = dN/12 + ∫c₁c_{d−1}/6` with
    /// `d = 1 − 2b₁`.
    pub fn new(eta: Mat, b: Vec<Q>, chern: Mat, chi: Option<Q>, c1_cdm1: Option<Q>) -> Result<Self> {
        let n = b.len();
        if n == 0 {
            return Err(Error::Model("model needs at least one class".into()));
        }
        if eta.len() != n || eta.iter().any(|r| r.len() != n) {
            return Err(Error::Model(format!("pairing must be {n}x{n}")));
        }
        if chern.len() != n || chern.iter().any(|r| r.len() != n) {
            return Err(Error::Model(format!("Chern matrix must be {n}x{n}")));
        }
        let eta_inv = invert(&eta).ok_or_else(|| Error::Model("pairing is not invertible".into()))?;
        let chi = chi.unwrap_or_else(|| qi(n as i64));
        let c1_cdm1 = c1_cdm1.unwrap_or_else(|| {
            let half = q(1, 2);
            let dim = qi(1) - &b[0] * qi(2);
            let sq: Q = b.iter().map(|x| (x - &half) * (x - &half)).fold(Q::zero(), |a, x| a + x);
            sq * qi(6) - dim * qi(n as i64) / qi(2)
        });
        Ok(ManifoldModel { num_classes: n, eta, eta_inv, b, chern, chi, c1_cdm1 })
    }

    /// Complex dimension `d = 1 − 2b₁`.
    pub fn dim(&self) -> Q {
        qi(1) - &self.b[0] * qi(2)
    }

    /// `C_{αβ} = Σ_μ C_α^μ η_{μβ}` (0-based).
    pub fn chern_lower(&self, a: usize, b: usize) -> Q {
        (0..self.num_classes).map(|m| &self.chern[a][m] * &self.eta[m][b]).fold(Q::zero(), |x, y| x + y)
    }

    /// Power `C^k` of the Chern matrix.
    pub fn chern_pow(&self, k: u32) -> Mat {
        let mut r = identity(self.num_classes);
        for _ in 0..k {
            r = mat_mul(&r, &self.chern);
        }
        r
    }
}

/// The point target: `N = 1`, `η = [1]`, `b = [½]`, `C = [0]`.
pub fn point_model() -> ManifoldModel {
    ManifoldModel::new(vec![vec![qi(1)]], vec![q(1, 2)], vec![vec![qi(0)]], Some(qi(1)), Some(qi(0)))
        .expect("point model is valid")
}

/// Lists every violated model invariant; empty when the model is valid.
pub fn validate_model(m: &ManifoldModel) -> Vec<String> {
    let n = m.num_classes;
    let mut out = Vec::new();
    let prod = mat_mul(&m.eta_inv, &m.eta);
    if prod != identity(n) {
        out.push(String::from("eta_inv * eta is not the identity"));
    }
    for a in 0..n {
        for b in 0..n {
            if m.eta[a][b] != m.eta[b][a] {
                out.push(format!("pairing not symmetric at ({}, {})", a + 1, b + 1));
            }
            let paired = !m.eta[a][b].is_zero() || !m.eta_inv[a][b].is_zero();
            if paired && m.b[a] != qi(1) - &m.b[b] {
                out.push(format!(
                    "pairing-grading violation at ({}, {}): b_{} != 1 - b_{}",
                    a + 1,
                    b + 1,
                    a + 1,
                    b + 1
                ));
            }
            if !m.chern[a][b].is_zero() && m.b[b] != qi(1) + &m.b[a] {
                out.push(format!("Chern-grading violation at ({}, {}): b_{} != 1 + b_{}", a + 1, b + 1, b + 1, a + 1));
            }
            if !m.chern_lower(a, b).is_zero() && m.b[b] != -m.b[a].clone() {
                out.push(format!("lowered-Chern violation at ({}, {}): b_{} != -b_{}", a + 1, b + 1, b + 1, a + 1));
            }
        }
    }
    out
}

pub fn identity(n: usize) -> Mat {
    (0..n).map(|i| (0..n).map(|j| if i == j { Q::one() } else { Q::zero() }).collect()).collect()
}

pub fn mat_mul(a: &Mat, b: &Mat) -> Mat {
    let n = a.len();
    let k = b.len();
    let m = if k == 0 { 0 } else { b[0].len() };
    (0..n)
        .map(|i| (0..m).map(|j| (0..k).map(|l| &a[i][l] * &b[l][j]).fold(Q::zero(), |x, y| x + y)).collect())
        .collect()
}

/// Gauss–Jordan inverse over the rationals.
pub fn invert(a: &Mat) -> Option<Mat> {
    let n = a.len();
    let mut m: Vec<Vec<Q>> = a.clone();
    let mut inv = identity(n);
    for col in 0..n {
        let piv = (col..n).find(|&r| !m[r][col].is_zero())?;
        m.swap(col, piv);
        inv.swap(col, piv);
        let p = m[col][col].clone();
        for j in 0..n {
            m[col][j] = &m[col][j] / &p;
            inv[col][j] = &inv[col][j] / &p;
        }
        for r in 0..n {
            if r != col && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                for j in 0..n {
                    let t = &f * &m[col][j];
                    m[r][j] -= t;
                    let t = &f * &inv[col][j];
                    inv[r][j] -= t;
                }
            }
        }
    }
    Some(inv)
}
