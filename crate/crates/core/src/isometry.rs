//! Isometries of the LLV space: `e_λ`, `B_λ`, reflections, the duality `D̃`
//! and the extension `η` from a K3 surface to its Hilbert schemes.
//!
//! Matrices act on column coordinates in the basis `(alpha, h2.., beta)`.

use std::sync::Arc;

use num::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{DefType, LLVSpace, LLVVector};
use crate::linalg::{diagonalize, Mat};
use crate::rational::{q, qr, Q};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Isometry {
    space: Arc<LLVSpace>,
    m: Mat,
}

/// Serialized form of an isometry.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IsometryDoc {
    pub matrix: Mat,
    pub gram_compatible: bool,
}

/// `e_λ` as a matrix: `α ↦ λ`, `μ ↦ (λ,μ)β`, `β ↦ 0`.
pub fn e_lambda(space: &LLVSpace, lambda: &[Q]) -> Result<Mat> {
    if lambda.len() != space.rank() {
        return Err(Error::Dimension { expected: space.rank(), got: lambda.len() });
    }
    let d = space.dim();
    let b = space.beta_index();
    let mut e = Mat::zeros(d, d);
    for (i, x) in lambda.iter().enumerate() {
        e.set(i + 1, 0, x.clone());
    }
    for (i, x) in space.h2.lower(lambda).into_iter().enumerate() {
        e.set(b, i + 1, x);
    }
    Ok(e)
}

/// `B_λ = exp(e_λ) = id + e_λ + e_λ²/2`.
pub fn b_lambda(space: &LLVSpace, lambda: &[Q]) -> Result<Isometry> {
    let e = e_lambda(space, lambda)?;
    let m = Mat::identity(space.dim()).add(&e).add(&e.mul(&e).scale(&qr(1, 2)));
    Isometry::new(space, m)
}

/// `R_u(x) = x − 2(x,u)/(u,u)·u`.
pub fn reflection(space: &LLVSpace, u: &LLVVector) -> Result<Isometry> {
    let uu = space.square(u)?;
    if uu.is_zero() {
        return Err(Error::Isotropic);
    }
    let g = space.gram_tilde();
    let uc = u.coords();
    let gu = g.apply(&uc);
    let d = space.dim();
    let mut m = Mat::identity(d);
    let f = q(-2) / uu;
    for i in 0..d {
        if uc[i].is_zero() {
            continue;
        }
        for j in 0..d {
            if !gu[j].is_zero() {
                let v = m.get(i, j) + &f * &uc[i] * &gu[j];
                m.set(i, j, v);
            }
        }
    }
    Isometry::new(space, m)
}

/// `D̃(rα+λ+sβ) = rα−λ+sβ`.
pub fn duality_d(space: &LLVSpace) -> Isometry {
    let d = space.dim();
    let mut m = Mat::identity(d);
    for i in 1..d - 1 {
        m.set(i, i, q(-1));
    }
    Isometry::new(space, m).expect("duality is an isometry")
}

/// `η_g` on `H̃(S^[n])`: `θ̃∘g` on the image of `θ̃`, identity on `δ`.
pub fn eta_extend(g: &Isometry, target: &LLVSpace) -> Result<Isometry> {
    if g.space().dtype != DefType::K3 || g.space().rank() != 22 {
        return Err(Error::WrongType("eta needs an isometry of the K3 Mukai space".into()));
    }
    if target.dtype != DefType::Hilb {
        return Err(Error::WrongType("eta targets a HilbK3 space".into()));
    }
    let d = target.dim();
    let db = target.rank();
    // K3 index k (0..24) sits at target index emb(k)
    let emb = |k: usize| if k == 23 { d - 1 } else { k };
    let mut m = Mat::zeros(d, d);
    for i in 0..24 {
        for j in 0..24 {
            let x = g.matrix().get(i, j);
            if !x.is_zero() {
                m.set(emb(i), emb(j), x.clone());
            }
        }
    }
    m.set(db, db, q(1));
    Isometry::new(target, m)
}

impl Isometry {
    /// Checks `MᵀGM = G`.
    pub fn new(space: &LLVSpace, m: Mat) -> Result<Self> {
        Self::with_arc(Arc::new(space.clone()), m)
    }

    fn with_arc(space: Arc<LLVSpace>, m: Mat) -> Result<Self> {
        let d = space.dim();
        if m.nrows() != d || m.ncols() != d {
            return Err(Error::Dimension { expected: d, got: m.nrows() });
        }
        let g = space.gram_tilde();
        if m.transpose().mul(&g).mul(&m) != g {
            return Err(Error::NotIsometry("Mᵀ·G·M differs from G".into()));
        }
        Ok(Isometry { space, m })
    }

    pub fn from_doc(space: &LLVSpace, doc: &IsometryDoc) -> Result<Self> {
        Self::new(space, doc.matrix.clone())
    }

    pub fn to_doc(&self) -> IsometryDoc {
        IsometryDoc { matrix: self.m.clone(), gram_compatible: true }
    }

    pub fn identity(space: &LLVSpace) -> Self {
        Isometry { space: Arc::new(space.clone()), m: Mat::identity(space.dim()) }
    }

    pub fn space(&self) -> &LLVSpace {
        &self.space
    }

    pub fn matrix(&self) -> &Mat {
        &self.m
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Isometry) -> Result<Isometry> {
        if self.space != other.space {
            return Err(Error::Invalid("composing isometries of different spaces".into()));
        }
        Ok(Isometry { space: self.space.clone(), m: self.m.mul(&other.m) })
    }

    pub fn apply(&self, x: &LLVVector) -> Result<LLVVector> {
        if x.v.len() != self.space.rank() {
            return Err(Error::Dimension { expected: self.space.rank(), got: x.v.len() });
        }
        Ok(LLVVector::from_coords(&self.m.apply(&x.coords())))
    }

    /// `G⁻¹MᵀG`.
    pub fn inverse(&self) -> Isometry {
        let g = self.space.gram_tilde();
        let gi = g.inverse().expect("LLV gram is nondegenerate");
        Isometry { space: self.space.clone(), m: gi.mul(&self.m.transpose()).mul(&g) }
    }

    /// `c·M` for `c = ±1`.
    pub fn signed(&self, sign: i32) -> Isometry {
        Isometry { space: self.space.clone(), m: self.m.scale(&q(sign as i64)) }
    }

    pub fn det(&self) -> Q {
        self.m.det()
    }

    /// `(det, plus_sign)`, the latter the sign of `det[(g wᵢ, wⱼ)]` for a fixed
    /// positive frame `w`.
    pub fn det_and_orientation(&self) -> (i32, i32) {
        let det = if self.det().is_positive() { 1 } else { -1 };
        let w = positive_frame(&self.space);
        let k = w.len();
        let mut p = Mat::zeros(k, k);
        for (i, wi) in w.iter().enumerate() {
            let gw = LLVVector::from_coords(&self.m.apply(&wi.coords()));
            for (j, wj) in w.iter().enumerate() {
                p.set(i, j, self.space.ip(&gw, wj));
            }
        }
        (det, if p.det().is_positive() { 1 } else { -1 })
    }

    pub fn is_integral(&self) -> bool {
        self.m.is_integral()
    }

    /// True iff `g` and `g⁻¹` map `Λ_X` into itself.
    pub fn preserves_integral_llv(&self) -> Result<bool> {
        let sp = &self.space;
        if sp.dtype != DefType::Hilb {
            return Err(Error::WrongType("integral LLV lattice needs a HilbK3 space".into()));
        }
        let half: Vec<Q> = sp.delta()?.iter().map(|x| x / q(2)).collect();
        let b = b_lambda(sp, &half)?;
        let conj = b.compose(self)?.compose(&b.inverse())?;
        Ok(conj.is_integral() && conj.inverse().is_integral())
    }
}

/// `(α−β, e1+f1, e2+f2, e3+f3)` when the lattice starts with `U³`, otherwise
/// the positive vectors of an exact diagonalization.
pub fn positive_frame(space: &LLVSpace) -> Vec<LLVVector> {
    let h = &space.h2;
    let mut w = vec![space.alpha().sub(&space.beta())];
    let mut ok = true;
    for k in 1..=3 {
        match (h.index_of(&format!("e{k}")), h.index_of(&format!("f{k}"))) {
            (Some(e), Some(f)) => {
                let mut v = vec![Q::zero(); space.rank()];
                v[e] = q(1);
                v[f] = q(1);
                w.push(space.h2_vector(v));
            }
            _ => ok = false,
        }
    }
    if ok {
        return w;
    }
    let d = diagonalize(&space.gram_tilde()).expect("gram is symmetric");
    let pt = d.p.transpose();
    d.diag
        .iter()
        .enumerate()
        .filter(|(_, x)| x.is_positive())
        .map(|(i, _)| LLVVector::from_coords(&pt.rows()[i]))
        .collect()
}
