//! Derived monodromy of `S^[n]` acting on `H̃`, and the bundle invariants it yields.

use num::{Signed, Zero};
use serde::Serialize;

use crate::arithmetic::lagrangian_chern;
use crate::cohomology::K32Ring;
use crate::error::{Error, Result};
use crate::isometry::{b_lambda, eta_extend, reflection, Isometry};
use crate::lattice::{DefType, LLVSpace, LLVVector};
use crate::lines::{ell_lagrangian, isotropic_gamma, twist_multiple, LLVLine};
use crate::linalg::Mat;
use crate::rational::{factorial, pow_q, q, qi, serde_q, serde_qvec, Q};

/// `φ_P(r,a,s) = (s,−a,r)` on the K3 Mukai space.
pub fn phi_p(k3: &LLVSpace) -> Result<Isometry> {
    if k3.dtype != DefType::K3 {
        return Err(Error::WrongType("φ_P acts on the K3 Mukai space".into()));
    }
    let d = k3.dim();
    let mut m = Mat::zeros(d, d);
    m.set(0, d - 1, q(1));
    m.set(d - 1, 0, q(1));
    for i in 1..d - 1 {
        m.set(i, i, q(-1));
    }
    Isometry::new(k3, m)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DMonLift {
    pub g: Isometry,
    pub n: u32,
    pub det: i32,
    pub lifted: Isometry,
}

/// `det(g)^{n+1}·(B_{−δ/2}∘η_g∘B_{δ/2})` on `H̃(S^[n])`.
pub fn dmon_lift(g: &Isometry, n: u32) -> Result<DMonLift> {
    dmon_lift_into(g, &LLVSpace::hilb(n)?)
}

pub fn dmon_lift_into(g: &Isometry, target: &LLVSpace) -> Result<DMonLift> {
    let det = g.det();
    let det = if det == q(1) {
        1
    } else if det == q(-1) {
        -1
    } else {
        return Err(Error::NotIsometry(format!("det = {det}")));
    };
    let half: Vec<Q> = target.delta()?.iter().map(|x| x / q(2)).collect();
    let minus: Vec<Q> = half.iter().map(|x| -x).collect();
    let eta = eta_extend(g, target)?;
    let conj = b_lambda(target, &minus)?.compose(&eta)?.compose(&b_lambda(target, &half)?)?;
    let sign = if det < 0 && (target.n + 1) % 2 == 1 { -1 } else { 1 };
    Ok(DMonLift { g: g.clone(), n: target.n, det, lifted: conj.signed(sign) })
}

/// `u₀ = (0, δ, n−1)`.
pub fn chi_vector(space: &LLVSpace) -> Result<LLVVector> {
    Ok(space.triple(Q::zero(), space.delta()?, q(space.n as i64 - 1)))
}

/// `(−1)^{n+1}·R_{u₀}`.
pub fn chi_involution(space: &LLVSpace) -> Result<Isometry> {
    if space.dtype != DefType::Hilb || space.n < 2 {
        return Err(Error::WrongType("the χ-involution needs K3^[n] with n ≥ 2".into()));
    }
    let r = reflection(space, &chi_vector(space)?)?;
    Ok(r.signed(if space.n % 2 == 0 { -1 } else { 1 }))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum BkrSign {
    Plus,
    Minus,
}

/// Invariants of the BKR image of `G^{⊠n}⊗χ^i`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BkrBundle {
    #[serde(with = "serde_q")]
    pub rank: Q,
    #[serde(with = "serde_qvec")]
    pub c1: Vec<Q>,
    #[serde(with = "serde_q")]
    pub t: Q,
    #[serde(with = "serde_q")]
    pub s: Q,
    pub line: LLVLine,
}

pub fn bkr_bundle_c1(r0: i64, c1g: &[Q], n: u32, sign: BkrSign) -> Result<BkrBundle> {
    bkr_bundle_c1_in(&LLVSpace::hilb(n)?, r0, c1g, sign)
}

pub fn bkr_bundle_c1_in(space: &LLVSpace, r0: i64, c1g: &[Q], sign: BkrSign) -> Result<BkrBundle> {
    if r0 < 1 {
        return Err(Error::Invalid("r₀ must be at least 1".into()));
    }
    let n = space.n;
    let r = q(r0);
    let rn1 = pow_q(&r, n - 1);
    let t = match sign {
        BkrSign::Plus => -(&rn1 * (&r - q(1))) / q(2),
        BkrSign::Minus => -(&rn1 * (&r + q(1))) / q(2),
    };
    let gg = space.h2.pair(&space.theta(c1g)?, &space.theta(c1g)?)?;
    let delta = space.delta()?;
    let c1: Vec<Q> = space.theta(c1g)?.iter().zip(&delta).map(|(x, d)| x * &rn1 + d * &t).collect();
    let nm1 = q(n as i64 - 1);
    let rank = pow_q(&r, n);
    let s = pow_q(&r, n) / &r / &r * (&gg + q(2)) / q(2) + &rank * &nm1 / q(4) + &nm1 * &t;
    let line = LLVLine::new(space, space.triple(rank.clone(), c1.clone(), s.clone()))?;
    Ok(BkrBundle { rank, c1, t, s, line })
}

/// Invariants of `F_z` built from a point of a moduli space of rank `r₀` sheaves.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FzBundle {
    #[serde(with = "serde_q")]
    pub rank: Q,
    #[serde(with = "serde_qvec")]
    pub c1: Vec<Q>,
    /// `B_{−δ/2}(θ̃(r₀, λ, (λ,λ)/(2r₀)))`.
    pub line: LLVLine,
    pub matches_isotropic: bool,
}

pub fn fz_bundle_c1(r0: i64, lambda: &[Q], n: u32) -> Result<FzBundle> {
    fz_bundle_c1_in(&LLVSpace::hilb(n)?, r0, lambda)
}

pub fn fz_bundle_c1_in(space: &LLVSpace, r0: i64, lambda: &[Q]) -> Result<FzBundle> {
    if r0 < 1 {
        return Err(Error::Invalid("r₀ must be at least 1".into()));
    }
    let n = space.n;
    let r = q(r0);
    let nf = qi(&factorial(n));
    let th = space.theta(lambda)?;
    let delta = space.delta()?;
    let scale = &nf * pow_q(&r, n - 1);
    let c1: Vec<Q> = th.iter().zip(&delta).map(|(x, d)| &scale * (x - &r * d / q(2))).collect();
    let ll = space.h2.pair(&th, &th)?;
    let v = space.triple(r.clone(), th, &ll / (q(2) * &r));
    let half: Vec<Q> = delta.iter().map(|x| -x / q(2)).collect();
    let line = LLVLine::new(space, space.b_apply(&half, &v))?;
    let gamma = isotropic_gamma(space, r0, &c1)?;
    let matches_isotropic = line.contains(&gamma);
    Ok(FzBundle { rank: &nf * pow_q(&r, n), c1, line, matches_isotropic })
}

/// Constant rank of the kernel bundle `F_k` in the `E_k` construction.
pub const EK_KERNEL_RANK: i64 = 12;

/// The `E_k` pipeline: twist, `φ_P`, χ-involution, rescale.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EkPipeline {
    pub k: i64,
    #[serde(with = "serde_qvec")]
    pub h_tilde: Vec<Q>,
    #[serde(with = "serde_qvec")]
    pub lambda: Vec<Q>,
    pub twisted: LLVVector,
    pub after_phi_p: LLVVector,
    pub after_chi: LLVVector,
    #[serde(with = "serde_q")]
    pub rank: Q,
    #[serde(with = "serde_qvec")]
    pub c1: Vec<Q>,
    pub generator: LLVVector,
    #[serde(with = "serde_qvec")]
    pub stated_c1: Vec<Q>,
    pub c1_matches_stated: bool,
}

/// `h = e1 + 3f1`, `(h,h) = 6`, `λ = 2h̃ − 3δ`.
pub fn ek_preset(space: &LLVSpace) -> Result<(Vec<Q>, Vec<Q>)> {
    let k3 = LLVSpace::k3();
    let h = k3.h2.parse_vector("e1+3*f1")?;
    let ht = space.theta(&h)?;
    let lambda: Vec<Q> = ht.iter().zip(space.delta()?).map(|(x, d)| q(2) * x - q(3) * d).collect();
    Ok((ht, lambda))
}

pub fn ek_pipeline(k: i64) -> Result<EkPipeline> {
    if k < 1 {
        return Err(Error::Invalid("k must be at least 1".into()));
    }
    let space = LLVSpace::hilb(2)?;
    let ring = K32Ring::new(&space)?;
    let (ht, lambda) = ek_preset(&space)?;
    let delta = space.delta()?;

    let oz = lagrangian_chern(&space, &lambda, 27)?;
    if oz.data.t != q(1) {
        return Err(Error::Invalid("preset surface must have t = 1".into()));
    }
    let l = ring.h2(&lambda)?;
    let chi_k = |j: i64| -> Result<Q> {
        let tw = ring.exp(&l.scale(&q(j)));
        ring.euler_characteristic(&ring.mul(&oz.ch, &tw))
    };
    let rank = chi_k(k + 1)? + chi_k(k)? - q(EK_KERNEL_RANK);

    let start = ell_lagrangian(&space, &lambda, &q(1))?.lemma;
    let twisted = twist_multiple(&space, &start, &lambda, k)?.generator;
    let lift = dmon_lift_into(&phi_p(&LLVSpace::k3())?, &space)?;
    let after_phi_p = lift.lifted.apply(&twisted)?;
    let after_chi = chi_involution(&space)?.apply(&after_phi_p)?;
    if after_chi.r.is_zero() {
        return Err(Error::Invalid("transported line has rank zero".into()));
    }
    let generator = after_chi.scale(&(&rank / &after_chi.r));
    let c1 = generator.v.clone();
    let kq = q(k);
    let stated_c1: Vec<Q> =
        ht.iter().zip(&delta).map(|(x, d)| q(-15) * &kq * x - q(45) * &kq * (&kq + q(1)) / q(2) * d).collect();
    let c1_matches_stated = c1 == stated_c1;
    if generator.r.is_negative() {
        return Err(Error::Invalid("negative rank".into()));
    }
    Ok(EkPipeline {
        k,
        h_tilde: ht,
        lambda,
        twisted,
        after_phi_p,
        after_chi,
        rank,
        c1,
        generator,
        stated_c1,
        c1_matches_stated,
    })
}

/// `ℓ(O(−δ))` for the structure sheaf line of `S^[n]`.
pub fn structure_sheaf_minus_delta(space: &LLVSpace) -> Result<LLVVector> {
    let n = q(space.n as i64);
    let d: Vec<Q> = space.delta()?.iter().map(|x| q(-4) * x).collect();
    Ok(space.triple(q(4), d, q(7) - q(3) * n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::isometry::duality_d;
    use crate::rational::qr;

    fn k3v(s: &str) -> Vec<Q> {
        LLVSpace::k3().h2.parse_vector(s).unwrap()
    }

    #[test]
    fn phi_p_basics() {
        let k3 = LLVSpace::k3();
        let p = phi_p(&k3).unwrap();
        assert_eq!(p.det(), q(-1));
        let x = k3.triple(q(2), k3v("e1-f2"), q(5));
        assert_eq!(p.apply(&x).unwrap(), k3.triple(q(5), k3v("-e1+f2"), q(2)));
        assert_eq!(p.compose(&p).unwrap(), Isometry::identity(&k3));
    }

    #[test]
    fn lift_examples() {
        let k3 = LLVSpace::k3();
        let s = LLVSpace::hilb(2).unwrap();
        let id = dmon_lift(&Isometry::identity(&k3), 2).unwrap();
        assert_eq!(id.lifted, Isometry::identity(&s));
        let mu = k3v("e1+2*f3-x4");
        let b = dmon_lift(&b_lambda(&k3, &mu).unwrap(), 2).unwrap();
        assert_eq!(b.lifted, b_lambda(&s, &s.theta(&mu).unwrap()).unwrap());
        let (ht, lambda) = ek_preset(&s).unwrap();
        let delta = s.delta().unwrap();
        let p = dmon_lift(&phi_p(&k3).unwrap(), 2).unwrap();
        for k in 1..4i64 {
            let x = s.triple(Q::zero(), lambda.clone(), q(6 * k - 3));
            let want_v: Vec<Q> = ht.iter().zip(&delta).map(|(h, d)| q(2) * h + q(3 + 3 * k) * d).collect();
            let want = s.triple(q(-6 * k), want_v, q(3) + qr(3 * k, 2));
            assert_eq!(p.lifted.apply(&x).unwrap(), want);
        }
        assert!(p.lifted.preserves_integral_llv().unwrap());
        let d = dmon_lift(&duality_d(&k3), 3).unwrap();
        assert!(d.lifted.preserves_integral_llv().unwrap());
    }

    #[test]
    fn chi_examples() {
        for n in 2..=5u32 {
            let s = LLVSpace::hilb(n).unwrap();
            let c = chi_involution(&s).unwrap();
            assert_eq!(c.compose(&c).unwrap(), Isometry::identity(&s));
            let o = s.triple(q(4), vec![Q::zero(); s.rank()], q(n as i64 + 3));
            let od = structure_sheaf_minus_delta(&s).unwrap();
            assert!(c.apply(&o).unwrap().same_line(&od));
            assert!(c.apply(&od).unwrap().same_line(&o));
            assert!(c.apply(&s.beta()).unwrap().same_line(&s.beta()));
            assert!(c.preserves_integral_llv().unwrap());
        }
        assert!(chi_involution(&LLVSpace::k3()).is_err());
    }

    #[test]
    fn bkr_examples() {
        let s = LLVSpace::hilb(2).unwrap();
        let g = k3v("e1+f1");
        let b = bkr_bundle_c1(2, &g, 2, BkrSign::Plus).unwrap();
        let want: Vec<Q> = s.theta(&g).unwrap().iter().zip(s.delta().unwrap()).map(|(x, d)| q(2) * x - d).collect();
        assert_eq!((b.rank, b.c1), (q(4), want));
        let b = bkr_bundle_c1(3, &g, 2, BkrSign::Plus).unwrap();
        assert_eq!(b.t, q(-3));
        let b = bkr_bundle_c1(1, &k3v("0*e1"), 2, BkrSign::Plus).unwrap();
        assert!(b.line.contains(&s.triple(q(4), vec![Q::zero(); 23], q(5))));
        for n in 2..=4 {
            let b = bkr_bundle_c1(1, &k3v("0*e1"), n, BkrSign::Minus).unwrap();
            let sn = LLVSpace::hilb(n).unwrap();
            assert!(b.line.contains(&structure_sheaf_minus_delta(&sn).unwrap()));
        }
    }

    #[test]
    fn fz_examples() {
        let s = LLVSpace::hilb(2).unwrap();
        let lam = k3v("e1+f1");
        let f = fz_bundle_c1(1, &lam, 2).unwrap();
        let want: Vec<Q> = s.theta(&lam).unwrap().iter().zip(s.delta().unwrap()).map(|(x, d)| q(2) * x - d).collect();
        assert_eq!((f.rank.clone(), f.c1.clone()), (q(2), want));
        assert!(f.matches_isotropic);
        for n in 2..=4u32 {
            for r0 in 1..=3 {
                let f = fz_bundle_c1(r0, &k3v("e1+2*f1-x3"), n).unwrap();
                let d = f.c1[f.c1.len() - 1].clone();
                assert_eq!(d, -qi(&factorial(n)) * pow_q(&q(r0), n) / q(2));
                assert!(f.matches_isotropic);
            }
        }
    }

    #[test]
    fn ek_values() {
        for k in 1..=5i64 {
            let e = ek_pipeline(k).unwrap();
            let kq = q(k);
            assert_eq!(e.rank, q(45 * k * k));
            let (ht, d) = (&e.h_tilde, LLVSpace::hilb(2).unwrap().delta().unwrap());
            let want: Vec<Q> =
                ht.iter().zip(&d).map(|(x, dd)| q(-15) * &kq * x - q(45) * &kq * (&kq - q(1)) / q(2) * dd).collect();
            assert_eq!(e.c1, want);
            assert_eq!(e.generator.s, q(-45) * &kq * (&kq - q(2)) / q(4));
            assert!(!e.c1_matches_stated);
        }
    }
}
