//! Even cohomology of a K3^[2]-type manifold in its monodromy-invariant
//! presentation.
//!
//! A class has components in degrees 0, 2, 4, 6, 8:
//!
//! * `H⁴ = Sym²H²`, stored as a symmetric matrix `A` with `x·y = (xyᵀ+yxᵀ)/2`;
//! * `H⁶` stored as the vector `w` with `∫(class)·y = (w,y)`;
//! * `H⁸` as a multiple of `[pt]`.
//!
//! With `c(A) = tr(AG)` and `A♯x = AGx` the products are
//! `x·A ↦ c(A)x + 2A♯x`, `∫A·B = c(A)c(B) + 2tr(AGBG)` and `∫x·w = (x,w)`.
//! The second Chern class is `c₂ = (138/5)·b_X` with `b_X = G⁻¹/23`.

use num::Zero;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::harmonic::{basis_context, GeneratorContext, ReducedSymElement};
use crate::lattice::{DefType, LLVSpace};
use crate::linalg::Mat;
use crate::rational::{fmt_q, q, qr, Q};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CohClass {
    pub a0: Q,
    pub a2: Vec<Q>,
    pub a4: Mat,
    pub a6: Vec<Q>,
    pub a8: Q,
}

impl Serialize for CohClass {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let n = self.a2.len();
        let upper: Vec<Vec<String>> =
            (0..n).map(|i| (i..n).map(|j| fmt_q(self.a4.get(i, j))).collect()).collect();
        let mut st = s.serialize_struct("CohClass", 5)?;
        st.serialize_field("a0", &fmt_q(&self.a0))?;
        st.serialize_field("a2", &self.a2.iter().map(fmt_q).collect::<Vec<_>>())?;
        st.serialize_field("a4", &upper)?;
        st.serialize_field("a6", &self.a6.iter().map(fmt_q).collect::<Vec<_>>())?;
        st.serialize_field("a8", &fmt_q(&self.a8))?;
        st.end()
    }
}

impl CohClass {
    pub fn zero(b2: usize) -> Self {
        CohClass {
            a0: Q::zero(),
            a2: vec![Q::zero(); b2],
            a4: Mat::zeros(b2, b2),
            a6: vec![Q::zero(); b2],
            a8: Q::zero(),
        }
    }

    pub fn add(&self, o: &CohClass) -> CohClass {
        CohClass {
            a0: &self.a0 + &o.a0,
            a2: add_vec(&self.a2, &o.a2),
            a4: self.a4.add(&o.a4),
            a6: add_vec(&self.a6, &o.a6),
            a8: &self.a8 + &o.a8,
        }
    }

    pub fn sub(&self, o: &CohClass) -> CohClass {
        self.add(&o.scale(&q(-1)))
    }

    pub fn scale(&self, c: &Q) -> CohClass {
        CohClass {
            a0: &self.a0 * c,
            a2: self.a2.iter().map(|x| x * c).collect(),
            a4: self.a4.scale(c),
            a6: self.a6.iter().map(|x| x * c).collect(),
            a8: &self.a8 * c,
        }
    }

    /// Degrees (0, 2, .., 8) carrying a nonzero component.
    pub fn support(&self) -> Vec<u32> {
        let mut d = Vec::new();
        if !self.a0.is_zero() {
            d.push(0);
        }
        if self.a2.iter().any(|x| !x.is_zero()) {
            d.push(2);
        }
        if self.a4.rows().iter().flatten().any(|x| !x.is_zero()) {
            d.push(4);
        }
        if self.a6.iter().any(|x| !x.is_zero()) {
            d.push(6);
        }
        if !self.a8.is_zero() {
            d.push(8);
        }
        d
    }

    pub fn is_zero(&self) -> bool {
        self.support().is_empty()
    }

    /// Component of degree `d` only.
    pub fn part(&self, d: u32) -> CohClass {
        let mut z = CohClass::zero(self.a2.len());
        match d {
            0 => z.a0 = self.a0.clone(),
            2 => z.a2 = self.a2.clone(),
            4 => z.a4 = self.a4.clone(),
            6 => z.a6 = self.a6.clone(),
            8 => z.a8 = self.a8.clone(),
            _ => {}
        }
        z
    }
}

fn add_vec(a: &[Q], b: &[Q]) -> Vec<Q> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

/// Todd class data.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ToddData {
    pub td: CohClass,
    pub sqrt_td: CohClass,
    pub inv_sqrt_td: CohClass,
}

/// The ring `H^even(X,Q)` for `X` of K3^[2] type.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct K32Ring {
    space: LLVSpace,
    g: Mat,
    ginv: Mat,
    c2: Mat,
}

impl K32Ring {
    pub fn new(space: &LLVSpace) -> Result<Self> {
        if space.dtype != DefType::Hilb || space.n != 2 {
            return Err(Error::WrongType("the cohomology ring is provided for K3^[2] type only".into()));
        }
        let g = space.h2.gram_mat();
        let ginv = g.inverse()?;
        let c2 = ginv.scale(&qr(138, 5 * 23));
        Ok(K32Ring { space: space.clone(), g, ginv, c2 })
    }

    pub fn space(&self) -> &LLVSpace {
        &self.space
    }

    pub fn b2(&self) -> usize {
        self.space.rank()
    }

    pub fn zero(&self) -> CohClass {
        CohClass::zero(self.b2())
    }

    pub fn one(&self) -> CohClass {
        let mut z = self.zero();
        z.a0 = q(1);
        z
    }

    pub fn point(&self) -> CohClass {
        let mut z = self.zero();
        z.a8 = q(1);
        z
    }

    pub fn h2(&self, x: &[Q]) -> Result<CohClass> {
        self.check(x)?;
        let mut z = self.zero();
        z.a2 = x.to_vec();
        Ok(z)
    }

    /// Degree-4 class `x·y`.
    pub fn sym2(&self, x: &[Q], y: &[Q]) -> Result<CohClass> {
        self.check(x)?;
        self.check(y)?;
        let b = self.b2();
        let mut a = Mat::zeros(b, b);
        for i in 0..b {
            for j in 0..b {
                let v = (&x[i] * &y[j] + &y[i] * &x[j]) / q(2);
                if !v.is_zero() {
                    a.set(i, j, v);
                }
            }
        }
        let mut z = self.zero();
        z.a4 = a;
        Ok(z)
    }

    /// Degree-6 class with dual vector `w`.
    pub fn deg6(&self, w: &[Q]) -> Result<CohClass> {
        self.check(w)?;
        let mut z = self.zero();
        z.a6 = w.to_vec();
        Ok(z)
    }

    pub fn c2(&self) -> CohClass {
        let mut z = self.zero();
        z.a4 = self.c2.clone();
        z
    }

    /// `b_X = (1/23)·Σ yᵢ²/(yᵢ,yᵢ)`.
    pub fn b_x(&self) -> CohClass {
        let mut z = self.zero();
        z.a4 = self.ginv.scale(&qr(1, 23));
        z
    }

    fn check(&self, x: &[Q]) -> Result<()> {
        if x.len() != self.b2() {
            return Err(Error::Dimension { expected: self.b2(), got: x.len() });
        }
        Ok(())
    }

    fn pair(&self, x: &[Q], y: &[Q]) -> Q {
        self.space.h2.ip(x, y)
    }

    /// `c(A) = tr(AG)`.
    pub fn contract(&self, a: &Mat) -> Q {
        let ag = a.mul(&self.g);
        (0..self.b2()).map(|i| ag.get(i, i).clone()).fold(Q::zero(), |s, x| s + x)
    }

    /// `x·A` as a degree-6 dual vector: `c(A)x + 2AGx`.
    fn mul_2_4(&self, x: &[Q], a: &Mat) -> Vec<Q> {
        let c = self.contract(a);
        let agx = a.apply(&self.g.apply(x));
        x.iter().zip(agx).map(|(xi, yi)| &c * xi + q(2) * yi).collect()
    }

    /// `∫A·B = c(A)c(B) + 2tr(AGBG)`.
    fn int_4_4(&self, a: &Mat, b: &Mat) -> Q {
        let agbg = a.mul(&self.g).mul(b).mul(&self.g);
        let tr = (0..self.b2()).map(|i| agbg.get(i, i).clone()).fold(Q::zero(), |s, x| s + x);
        self.contract(a) * self.contract(b) + q(2) * tr
    }

    /// Product in `H^even`, where everything above degree 8 vanishes.
    pub fn mul(&self, x: &CohClass, y: &CohClass) -> CohClass {
        let mut z = self.zero();
        z.a0 = &x.a0 * &y.a0;
        z.a2 = add_vec(
            &x.a2.iter().map(|v| v * &y.a0).collect::<Vec<_>>(),
            &y.a2.iter().map(|v| v * &x.a0).collect::<Vec<_>>(),
        );
        let xy = self.sym2(&x.a2, &y.a2).expect("dimensions checked").a4;
        z.a4 = y.a4.scale(&x.a0).add(&x.a4.scale(&y.a0)).add(&xy);
        let w1 = self.mul_2_4(&x.a2, &y.a4);
        let w2 = self.mul_2_4(&y.a2, &x.a4);
        z.a6 = (0..self.b2())
            .map(|i| &x.a0 * &y.a6[i] + &y.a0 * &x.a6[i] + &w1[i] + &w2[i])
            .collect();
        z.a8 = &x.a0 * &y.a8
            + &y.a0 * &x.a8
            + self.pair(&x.a2, &y.a6)
            + self.pair(&y.a2, &x.a6)
            + self.int_4_4(&x.a4, &y.a4);
        z
    }

    /// Strict cup product: errors if two nonzero components land above degree 8.
    pub fn cup(&self, x: &CohClass, y: &CohClass) -> Result<CohClass> {
        let (sx, sy) = (x.support(), y.support());
        if let Some(d) = sx.iter().flat_map(|a| sy.iter().map(move |b| a + b)).filter(|d| *d > 8).max() {
            return Err(Error::DegreeOverflow(d));
        }
        Ok(self.mul(x, y))
    }

    pub fn pow(&self, x: &CohClass, k: u32) -> CohClass {
        let mut p = self.one();
        for _ in 0..k {
            p = self.mul(&p, x);
        }
        p
    }

    /// `exp(x) = Σ xᵏ/k!` (finite).
    pub fn exp(&self, x: &CohClass) -> CohClass {
        let mut s = self.zero();
        let mut term = self.one();
        for k in 0..=4 {
            if k > 0 {
                term = self.mul(&term, x).scale(&qr(1, k));
            }
            s = s.add(&term);
        }
        s
    }

    pub fn integrate(&self, x: &CohClass) -> Q {
        x.a8.clone()
    }

    /// `√td = 1 + c₂/24 + (25/32)[pt]`, `(√td)⁻¹ = 1 − c₂/24 + (21/32)[pt]`,
    /// `td = √td²`; identities verified in the ring.
    pub fn todd_data(&self) -> Result<ToddData> {
        let c2 = self.c2();
        let sqrt_td = self.one().add(&c2.scale(&qr(1, 24))).add(&self.point().scale(&qr(25, 32)));
        let inv_sqrt_td = self.one().sub(&c2.scale(&qr(1, 24))).add(&self.point().scale(&qr(21, 32)));
        let td = self.mul(&sqrt_td, &sqrt_td);
        if self.mul(&sqrt_td, &inv_sqrt_td) != self.one() {
            return Err(Error::Invalid("√td·(√td)⁻¹ ≠ 1".into()));
        }
        let want = self.one().add(&c2.scale(&qr(1, 12))).add(&self.point().scale(&q(3)));
        if td != want {
            return Err(Error::Invalid("√td² differs from 1 + c₂/12 + 3[pt]".into()));
        }
        Ok(ToddData { td, sqrt_td, inv_sqrt_td })
    }

    /// Assembles `ch` from its components.
    pub fn chern_character(&self, rank: &Q, c1: &[Q], ch2: &Mat, ch3: &[Q], ch4: &Q) -> Result<CohClass> {
        self.check(c1)?;
        self.check(ch3)?;
        Ok(CohClass { a0: rank.clone(), a2: c1.to_vec(), a4: ch2.clone(), a6: ch3.to_vec(), a8: ch4.clone() })
    }

    /// `v = ch·√td`.
    pub fn mukai_vector(&self, ch: &CohClass) -> Result<CohClass> {
        Ok(self.mul(ch, &self.todd_data()?.sqrt_td))
    }

    /// `χ = ∫ ch·td`.
    pub fn euler_characteristic(&self, ch: &CohClass) -> Result<Q> {
        Ok(self.integrate(&self.mul(ch, &self.todd_data()?.td)))
    }

    /// Generators `[α, β, e_1..e_23]` used by [`K32Ring::psi`].
    pub fn psi_context(&self) -> GeneratorContext {
        basis_context(&self.space)
    }

    /// `Ψ: H^even → Sym²H̃` with `Ψ(1) = α²/2`, `Ψ(x) = xα`, `Ψ(w) = wβ`,
    /// `Ψ([pt]) = β²` and
    /// `Ψ(A) = A₀ + c(A)(b₂+2)/b₂·(q̃ + αβ)`, `A₀ = A − c(A)G⁻¹/b₂`.
    pub fn psi(&self, x: &CohClass) -> ReducedSymElement {
        let b2 = self.b2();
        let mut e = ReducedSymElement::zero(2);
        e.add_term((0, vec![0, 0]), &x.a0 / q(2));
        for i in 0..b2 {
            e.add_term((0, vec![0, i + 2]), x.a2[i].clone());
            e.add_term((0, vec![1, i + 2]), x.a6[i].clone());
        }
        let c = self.contract(&x.a4);
        let a0 = x.a4.add(&self.ginv.scale(&(-&c / q(b2 as i64))));
        for i in 0..b2 {
            for j in 0..b2 {
                e.add_term((0, if i <= j { vec![i + 2, j + 2] } else { vec![j + 2, i + 2] }), a0.get(i, j).clone());
            }
        }
        let f = &c * q(b2 as i64 + 2) / q(b2 as i64);
        e.add_term((1, vec![]), f.clone());
        e.add_term((0, vec![0, 1]), f);
        e.add_term((0, vec![1, 1]), x.a8.clone());
        e
    }
}
