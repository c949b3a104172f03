//! Diophantine constraints on lagrangian surfaces and related congruences.

use num::{BigInt, Integer, One, Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::cohomology::{CohClass, K32Ring};
use crate::error::{Error, Result};
use crate::lattice::LLVSpace;
use crate::lines::{chern_phio, phio_h_with_square};
use crate::rational::{fmt_q, is_square, q, qi, qr, serde_q, sign, sqrt_exact, to_int, Q};

/// Invariants of a lagrangian surface `Z ⊂ X` of K3^[2] type.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LagrangianData {
    #[serde(with = "serde_q")]
    pub lambda_sq: Q,
    pub div: Option<u8>,
    pub chi_z: i64,
    #[serde(with = "serde_q")]
    pub c: Q,
    /// Non-negative root; `−t` is equally admissible.
    #[serde(with = "serde_q")]
    pub t: Q,
    #[serde(with = "serde_q")]
    pub chi_oz: Q,
}

/// `ch(ι_*O_Z)` for an explicit `λ`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LagrangianChern {
    pub data: LagrangianData,
    pub ch: CohClass,
}

fn inadmissible(msg: String) -> Error {
    Error::Inadmissible(msg)
}

fn base_data(lambda_sq: &Q, chi_z: i64) -> Result<LagrangianData> {
    if lambda_sq.is_zero() {
        return Err(inadmissible("(λ,λ) = 0".into()));
    }
    if chi_z <= 0 {
        return Err(inadmissible(format!("χ(Z) = {chi_z} must be positive")));
    }
    let root = sqrt_exact(&qr(chi_z, 3))
        .ok_or_else(|| inadmissible(format!("χ(Z)/3 = {chi_z}/3 is not a rational square")))?;
    let abs = lambda_sq.abs();
    let c = q(5) / (q(4) * &abs) * &root;
    let t2 = q(48) * &c / q(25) - q(6) / (q(5) * lambda_sq);
    if t2.is_negative() {
        return Err(inadmissible(format!("t² = {} < 0", fmt_q(&t2))));
    }
    let t = sqrt_exact(&t2).ok_or_else(|| inadmissible(format!("t² = {} is not a rational square", fmt_q(&t2))))?;
    let chi_oz = (qi(&BigInt::from(chi_z)) - q(sign(lambda_sq) as i64) * &root) / q(4);
    let alt = &c * (lambda_sq / q(10) + &t2 * lambda_sq * lambda_sq / q(4));
    if alt != chi_oz {
        return Err(Error::Invalid("the two expressions for χ(O_Z) disagree".into()));
    }
    Ok(LagrangianData { lambda_sq: lambda_sq.clone(), div: None, chi_z, c, t, chi_oz })
}

/// `c`, `t`, `χ(O_Z)` from `(λ,λ)` and `χ(Z)`, verified in the K3^[2] ring with
/// a representative `λ` of the given square.
pub fn lagrangian_data(lambda_sq: &Q, chi_z: i64) -> Result<LagrangianData> {
    let space = LLVSpace::hilb(2)?;
    let lambda = space.vector_with_square(lambda_sq)?;
    Ok(lagrangian_chern(&space, &lambda, chi_z)?.data)
}

/// `ch₂ = c(λ² − ((λ,λ)/30)c₂)`, `ch₃ = −(ct/3)λ³`, `ch₄ = c(t²(λ,λ)²/4 − (λ,λ)/10)[pt]`;
/// checks `∫ch₂² = χ(Z)` and `∫ch·td = χ(O_Z)`.
pub fn lagrangian_chern(space: &LLVSpace, lambda: &[Q], chi_z: i64) -> Result<LagrangianChern> {
    let ring = K32Ring::new(space)?;
    let ll = space.h2.pair(lambda, lambda)?;
    let data = base_data(&ll, chi_z)?;
    let l = ring.h2(lambda)?;
    let l2 = ring.pow(&l, 2);
    let ch2 = l2.sub(&ring.c2().scale(&(&ll / q(30)))).scale(&data.c);
    let ch3 = ring.pow(&l, 3).scale(&(-(&data.c * &data.t) / q(3)));
    let ch4 = &data.c * (&data.t * &data.t * &ll * &ll / q(4) - &ll / q(10));
    let ch = ch2.add(&ch3).add(&ring.point().scale(&ch4));
    if ring.integrate(&ring.cup(&ch2, &ch2)?) != qi(&BigInt::from(chi_z)) {
        return Err(Error::Invalid("∫[Z]² ≠ χ(Z)".into()));
    }
    if ring.euler_characteristic(&ch)? != data.chi_oz {
        return Err(Error::Invalid("∫ch·td ≠ χ(O_Z)".into()));
    }
    Ok(LagrangianChern { data, ch })
}

/// Hodge numbers of `Z` from `χ(Z)`, `h¹⁰` and the sign of `(λ,λ)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HodgeNumbers {
    #[serde(with = "serde_q")]
    pub h20: Q,
    #[serde(with = "serde_q")]
    pub h11: Q,
    pub flags: Vec<String>,
}

/// Solves `h¹¹ − 2h²⁰ = 2 ± √(χ/3)` and `h¹¹ + 2h²⁰ = χ − 2 + 4h¹⁰`.
pub fn hodge_relations(chi_z: i64, h10: i64, lambda_sign: i32) -> Result<HodgeNumbers> {
    if chi_z <= 0 {
        return Err(inadmissible(format!("χ(Z) = {chi_z} must be positive")));
    }
    if lambda_sign != 1 && lambda_sign != -1 {
        return Err(Error::Invalid("sign must be +1 or −1".into()));
    }
    let root = sqrt_exact(&qr(chi_z, 3))
        .ok_or_else(|| inadmissible(format!("χ(Z)/3 = {chi_z}/3 is not a rational square")))?;
    let sr = q(lambda_sign as i64) * root;
    let (chi, h10q) = (q(chi_z), q(h10));
    let h11 = (&chi + q(4) * &h10q + &sr) / q(2);
    let h20 = (&chi - q(4) + q(4) * &h10q - &sr) / q(4);
    let mut flags = Vec::new();
    for (name, v) in [("h²⁰", &h20), ("h¹¹", &h11)] {
        if v.is_negative() {
            flags.push(format!("{name} = {} is negative", fmt_q(v)));
        }
        if !v.is_integer() {
            flags.push(format!("{name} = {} is not an integer", fmt_q(v)));
        }
    }
    if q(2) - q(4) * &h10q + q(2) * &h20 + &h11 != chi {
        return Err(Error::Invalid("Hodge numbers do not reproduce χ(Z)".into()));
    }
    Ok(HodgeNumbers { h20, h11, flags })
}

/// One admissible `(λ,λ), div, c` found by [`arithmetic_search`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SearchRow {
    pub lambda_sq: i64,
    pub div: u8,
    #[serde(with = "serde_q")]
    pub c: Q,
    #[serde(with = "serde_q")]
    pub t: Q,
    pub chi_z: String,
    #[serde(with = "serde_q")]
    pub chi_oz: Q,
}

fn candidates(x: i64, div: u8, c_bound: &Q) -> Vec<Q> {
    // c = step·k for k ≥ 1
    let step = if x % 3 == 0 {
        if div != 2 || x % 8 != 3 {
            return Vec::new();
        }
        qr(5, 8)
    } else if div == 1 {
        q(5)
    } else {
        qr(5, (5 + x).gcd(&8))
    };
    let kmax = (c_bound / &step).floor().to_integer();
    let kmax = kmax.try_into().unwrap_or(i64::MAX);
    (1..=kmax).map(|k| &step * q(k)).collect()
}

fn admissible(x: i64, c: &Q) -> bool {
    let xq = q(x);
    let m = q(16) * c * &xq - q(5);
    if x % 3 == 0 {
        is_square(&(q(3) * &xq)) && is_square(&m)
    } else {
        is_square(&xq) && is_square(&(q(3) * m))
    }
}

/// Enumerates `(λ,λ) = 2x ≤ lambda_sq_max` with `c ≤ c_bound` passing the
/// positive-square constraints, then requires `t ∈ Q`. Divisibility-2 classes
/// need `(λ,λ) ≡ 6 (mod 8)`. Output sorted by `((λ,λ), div, c)`.
pub fn arithmetic_search(lambda_sq_max: i64, c_bound: &Q, divs: &[u8]) -> Result<Vec<SearchRow>> {
    if lambda_sq_max < 1 || !c_bound.is_positive() {
        return Err(Error::Invalid("search bounds must be positive".into()));
    }
    if divs.iter().any(|d| *d != 1 && *d != 2) {
        return Err(Error::Invalid("div must be 1 or 2".into()));
    }
    let jobs: Vec<(i64, u8)> =
        (1..=lambda_sq_max / 2).flat_map(|x| divs.iter().map(move |d| (x, *d))).collect();
    let mut rows: Vec<SearchRow> = jobs
        .par_iter()
        .map(|&(x, div)| -> Result<Vec<SearchRow>> {
            let ls = 2 * x;
            if ls % 5 == 0 || (div == 2 && ls % 8 != 6) {
                return Ok(Vec::new());
            }
            let mut out = Vec::new();
            for c in candidates(x, div, c_bound) {
                if !admissible(x, &c) {
                    continue;
                }
                let t2 = q(48) * &c / q(25) - q(6) / q(5 * ls);
                let Some(t) = sqrt_exact(&t2) else { continue };
                let root = q(8 * x) * &c / q(5);
                let chi = to_int(&(q(3) * &root * &root)).ok_or_else(|| Error::Invalid("χ(Z) not integral".into()))?;
                let chi_i: i64 = (&chi).try_into().map_err(|_| Error::Invalid("χ(Z) overflows i64".into()))?;
                let data = base_data(&q(ls), chi_i)?;
                if data.c != c || data.t != t {
                    return Err(Error::Invalid("search row disagrees with lagrangian data".into()));
                }
                out.push(SearchRow { lambda_sq: ls, div, c, t, chi_z: chi.to_string(), chi_oz: data.chi_oz });
            }
            Ok(out)
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();
    rows.sort_by(|a, b| (a.lambda_sq, a.div, &a.c).cmp(&(b.lambda_sq, b.div, &b.c)));
    Ok(rows)
}

/// The primitive integral class on the line of `5λ² − ((λ,λ)/6)c₂`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IntegralLagrangianClass {
    pub class: CohClass,
    pub div: String,
    pub divisor: String,
    /// `c` with `class = c(λ² − ((λ,λ)/30)c₂)`.
    #[serde(with = "serde_q")]
    pub c: Q,
}

pub fn integral_lagrangian_class(space: &LLVSpace, lambda: &[Q]) -> Result<IntegralLagrangianClass> {
    let ring = K32Ring::new(space)?;
    if !space.h2.is_primitive(lambda)? {
        return Err(Error::NotPrimitive);
    }
    let d = space.h2.divisibility(lambda)?;
    let ll = to_int(&space.h2.pair(lambda, lambda)?).expect("integral Gram");
    let divisor = if d.is_one() {
        BigInt::from(5).gcd(&ll)
    } else if d == BigInt::from(2) {
        BigInt::from(40).gcd(&(BigInt::from(5) + &ll / BigInt::from(2)))
    } else {
        return Err(Error::Inadmissible(format!("div(λ) = {d} is not 1 or 2")));
    };
    let l = ring.h2(lambda)?;
    let base = ring.pow(&l, 2).scale(&q(5)).sub(&ring.c2().scale(&(qi(&ll) / q(6))));
    let class = base.scale(&(q(1) / qi(&divisor)));
    Ok(IntegralLagrangianClass { class, div: d.to_string(), divisor: divisor.to_string(), c: q(5) / qi(&divisor) })
}

/// A class `β` tested by [`untwisted_lift_check`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LiftCandidate {
    pub div_beta: i64,
    pub beta_sq: i64,
    pub k: i64,
}

/// `ρ = r/gcd(a,r)`: a candidate passes iff `gcd(k,ρ) = 1`,
/// `gcd(ρ,div β) = gcd(ρ,div α)` and `k²(β,β)/2 ≡ (α,α)/2` modulo `ρ`
/// (modulo `2ρ` if that gcd is 2).
pub fn untwisted_lift_check(
    r: i64,
    a: i64,
    div_alpha: i64,
    alpha_sq: i64,
    candidates: &[LiftCandidate],
) -> Result<Vec<bool>> {
    if r == 0 {
        return Err(Error::Invalid("r must be nonzero".into()));
    }
    if alpha_sq % 2 != 0 || candidates.iter().any(|c| c.beta_sq % 2 != 0) {
        return Err(Error::Invalid("squares must be even".into()));
    }
    let rho = (r / a.gcd(&r)).abs();
    let g = rho.gcd(&div_alpha);
    if g != 1 && g != 2 {
        return Err(Error::Inadmissible(format!("gcd(ρ, div α) = {g} is not 1 or 2")));
    }
    let m = BigInt::from(if g == 1 { rho } else { 2 * rho });
    Ok(candidates
        .iter()
        .map(|c| {
            let lhs = BigInt::from(c.k) * BigInt::from(c.k) * BigInt::from(c.beta_sq / 2);
            c.k.gcd(&rho) == 1
                && rho.gcd(&c.div_beta) == g
                && (lhs - BigInt::from(alpha_sq / 2)).mod_floor(&m).is_zero()
        })
        .collect())
}

/// A solution `(h,h) = 5r₀²(r₀²−1)/(2(r₀²+1))`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SegreRow {
    pub r0: i64,
    #[serde(with = "serde_q")]
    pub eta_sq: Q,
    #[serde(with = "serde_q")]
    pub h_sq: Q,
    #[serde(with = "serde_q")]
    pub chi: Q,
}

pub fn segre_enumerate(r0_max: i64) -> Result<Vec<SegreRow>> {
    if r0_max < 1 {
        return Err(Error::Invalid("r0_max must be positive".into()));
    }
    let space = LLVSpace::hilb(2)?;
    let mut out = Vec::new();
    for r0 in 1..=r0_max {
        let r2 = q(r0 * r0);
        let hh = q(5) * &r2 * (&r2 - q(1)) / (q(2) * (&r2 + q(1)));
        if !hh.is_integer() {
            continue;
        }
        let g = r0.gcd(&2);
        let ee = &hh * q(g * g) / &r2;
        if !(&ee / q(2)).is_integer() {
            continue;
        }
        let h = phio_h_with_square(&space, r0, &hh)?;
        let chern = chern_phio(&space, r0, &h)?;
        out.push(SegreRow { r0, eta_sq: ee, h_sq: hh, chi: chern.data.chi });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lagrangian_examples() {
        let d = lagrangian_data(&q(6), 27).unwrap();
        assert_eq!((d.c, d.t, d.chi_oz), (qr(5, 8), q(1), q(6)));
        let d = lagrangian_data(&q(-10), 3).unwrap();
        assert_eq!((d.c, d.t, d.chi_oz), (qr(1, 8), qr(3, 5), q(1)));
        let d = lagrangian_data(&q(2), 192).unwrap();
        assert_eq!((d.c, d.t), (q(5), q(3)));
        assert!(lagrangian_data(&q(6), 12).is_err());
    }

    #[test]
    fn hodge_examples() {
        let h = hodge_relations(27, 5, 1).unwrap();
        assert_eq!((h.h20, h.h11), (q(10), q(25)));
        assert!(h.flags.is_empty());
        let h = hodge_relations(3, 0, 1).unwrap();
        assert_eq!(h.h20, qr(-1, 2));
        assert!(!h.flags.is_empty());
        let h = hodge_relations(3, 0, -1).unwrap();
        assert_eq!((h.h20, h.h11), (q(0), q(1)));
    }

    #[test]
    fn search_contains_known_hits() {
        let rows = arithmetic_search(60, &q(1000), &[1, 2]).unwrap();
        let has = |ls: i64, c: Q, t: Q| rows.iter().any(|r| r.lambda_sq == ls && r.c == c && r.t == t);
        assert!(has(8, q(620), qr(69, 2)));
        assert!(has(54, qr(245, 8), qr(23, 3)));
        assert!(rows.iter().all(|r| r.lambda_sq % 5 != 0));
        assert!(rows.windows(2).all(|w| (w[0].lambda_sq, w[0].div, &w[0].c) <= (w[1].lambda_sq, w[1].div, &w[1].c)));
    }

    #[test]
    fn integral_classes() {
        let s = LLVSpace::hilb(2).unwrap();
        let ring = K32Ring::new(&s).unwrap();
        let lam = s.h2.parse_vector("2*e1+2*f1+delta").unwrap();
        let c = integral_lagrangian_class(&s, &lam).unwrap();
        let l2 = ring.pow(&ring.h2(&lam).unwrap(), 2);
        assert_eq!(c.div, "2");
        assert_eq!(c.class, l2.scale(&q(5)).sub(&ring.c2()).scale(&qr(1, 8)));
        let lam = s.h2.parse_vector("e1+f1").unwrap();
        let c = integral_lagrangian_class(&s, &lam).unwrap();
        let l2 = ring.pow(&ring.h2(&lam).unwrap(), 2);
        assert_eq!(c.class, l2.scale(&q(5)).sub(&ring.c2().scale(&qr(1, 3))));
        let lam = s.h2.parse_vector("2*e1-delta-2*f1").unwrap();
        assert_eq!(s.h2.pair(&lam, &lam).unwrap(), q(-10));
        let c = integral_lagrangian_class(&s, &lam).unwrap();
        let l2 = ring.pow(&ring.h2(&lam).unwrap(), 2);
        assert_eq!(c.class, l2.add(&ring.c2().scale(&qr(1, 3))).scale(&qr(1, 8)));
        assert_eq!(c.c, qr(1, 8));
    }

    #[test]
    fn lift_examples() {
        let cand = |d, b, k| LiftCandidate { div_beta: d, beta_sq: b, k };
        let v = untwisted_lift_check(4, 1, 2, 6, &[cand(2, 22, 1), cand(2, 14, 1), cand(1, 6, 1), cand(2, 6, 3)])
            .unwrap();
        assert_eq!(v, vec![true, false, false, true]);
        let v = untwisted_lift_check(9, 3, 1, 2, &[cand(1, 2, 1), cand(1, 8, 1), cand(1, 4, 1)]).unwrap();
        assert_eq!(v, vec![true, true, false]);
        assert!(untwisted_lift_check(9, 1, 3, 2, &[]).is_err());
    }

    #[test]
    fn segre_rows() {
        let rows = segre_enumerate(10).unwrap();
        let got: Vec<(i64, Q, Q)> = rows.iter().map(|r| (r.r0, r.eta_sq.clone(), r.chi.clone())).collect();
        assert_eq!(got, vec![(1, q(0), q(3)), (2, q(6), q(6)), (3, q(2), q(10))]);
    }
}
