//! LLV lines of sheaf families and their Chern data.

use num::{BigInt, Integer, One, Zero};
use serde::{Deserialize, Serialize};

use crate::arithmetic::lagrangian_data;
use crate::cohomology::{CohClass, K32Ring};
use crate::error::{Error, Result};
use crate::harmonic::{equal_in_sym, project_harmonic, recover_line, GeneratorContext, ReducedSymElement};
use crate::isometry::duality_d;
use crate::lattice::{DefType, LLVSpace, LLVVector, Preset};
use crate::linalg::Mat;
use crate::rational::{factorial, fmt_q, nth_root_exact, parse_q, pow_q, q, qi, qr, serde_q, to_int, Q};

/// A rational line in `H̃`, stored with a preferred generator.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LLVLine {
    pub generator: LLVVector,
    #[serde(with = "serde_q")]
    pub square: Q,
}

impl LLVLine {
    pub fn new(space: &LLVSpace, generator: LLVVector) -> Result<Self> {
        if generator.is_zero() {
            return Err(Error::ZeroVector);
        }
        let square = space.square(&generator)?;
        Ok(LLVLine { generator, square })
    }

    /// Projective equality.
    pub fn same_as(&self, other: &LLVLine) -> bool {
        self.generator.same_line(&other.generator)
    }

    pub fn contains(&self, v: &LLVVector) -> bool {
        self.generator.same_line(v)
    }
}

/// One congruence condition with its outcome.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Congruence {
    pub condition: String,
    pub holds: bool,
    pub detail: String,
}

impl Congruence {
    fn new(condition: &str, holds: bool, detail: String) -> Self {
        Congruence { condition: condition.to_string(), holds, detail }
    }

    fn into_error(self) -> Error {
        Error::NotRealizable { condition: self.condition, detail: self.detail }
    }
}

fn first_failure(cs: &[Congruence]) -> Result<()> {
    match cs.iter().find(|c| !c.holds) {
        Some(c) => Err(c.clone().into_error()),
        None => Ok(()),
    }
}

fn require_k32(space: &LLVSpace) -> Result<()> {
    if space.dtype != DefType::Hilb || space.n != 2 {
        return Err(Error::WrongType("this family is implemented on K3^[2] type only".into()));
    }
    Ok(())
}

fn require_r0(r0: i64) -> Result<()> {
    if r0 < 1 {
        return Err(Error::Invalid(format!("r0 must be positive, got {r0}")));
    }
    Ok(())
}

fn divides(d: &BigInt, x: &BigInt) -> bool {
    if d.is_zero() {
        x.is_zero()
    } else {
        (x % d).is_zero()
    }
}

fn int_of(x: &Q, what: &str) -> Result<BigInt> {
    to_int(x).ok_or_else(|| Error::Invalid(format!("{what} = {} is not an integer", fmt_q(x))))
}

fn scaled(v: &[Q], c: &Q) -> Vec<Q> {
    v.iter().map(|x| x * c).collect()
}

/// `tⁿ = n!·∫√td / c_X` for the structure sheaf.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StructureSheafCertificate {
    #[serde(with = "serde_q")]
    pub integral_sqrt_td: Q,
    #[serde(with = "serde_q")]
    pub t_pow_n: Q,
    #[serde(with = "serde_q")]
    pub t: Q,
}

/// `∫√td`: `(n+3)ⁿ/(4ⁿn!)` for K3^[n] type, `(n+1)^{n+1}/(4ⁿn!)` for Kummer type.
pub fn integral_sqrt_td(space: &LLVSpace) -> Result<Q> {
    let n = space.n;
    let den = qi(&(num::pow(BigInt::from(4), n as usize) * factorial(n)));
    match space.dtype {
        DefType::Hilb => Ok(pow_q(&q(n as i64 + 3), n) / den),
        DefType::Kummer => Ok(pow_q(&q(n as i64 + 1), n + 1) / den),
        DefType::K3 => Err(Error::WrongType("structure sheaf line is defined for n ≥ 2".into())),
    }
}

/// `ℓ(O_X) = span{4α + 4tβ}` from the certificate.
pub fn ell_structure_sheaf(space: &LLVSpace) -> Result<(LLVLine, StructureSheafCertificate)> {
    let integral = integral_sqrt_td(space)?;
    let n = space.n;
    let t_pow_n = qi(&factorial(n)) * &integral / &space.fujiki;
    let t = nth_root_exact(&t_pow_n, n)
        .ok_or_else(|| Error::Invalid(format!("tⁿ = {} has no rational n-th root", fmt_q(&t_pow_n))))?;
    let gen = space.triple(q(4), vec![Q::zero(); space.rank()], q(4) * &t);
    let line = LLVLine::new(space, gen)?;
    Ok((line, StructureSheafCertificate { integral_sqrt_td: integral, t_pow_n, t }))
}

/// The structure sheaf line recovered from the harmonic element with
/// `αⁿ`-coefficient `1/n!` and `βⁿ`-coefficient `∫√td/c_X`.
pub fn ell_structure_sheaf_harmonic(space: &LLVSpace) -> Result<LLVLine> {
    let (_, cert) = ell_structure_sheaf(space)?;
    let n = space.n;
    let ctx = GeneratorContext::new(space, vec![space.alpha(), space.beta()])?;
    let nf = qi(&factorial(n));
    let h = project_harmonic(&ctx, &ReducedSymElement::linear(&[q(1), cert.t.clone()]).pow(n))?
        .scale(&(q(1) / &nf));
    let top = h.coefficient(0, &vec![1; n as usize]);
    if top != &cert.integral_sqrt_td / &space.fujiki {
        return Err(Error::Recovery("βⁿ coefficient differs from ∫√td/c_X".into()));
    }
    let gamma = recover_line(&ctx, &h, space)?;
    LLVLine::new(space, gamma.scale(&q(4)))
}

pub fn ell_skyscraper(space: &LLVSpace) -> LLVLine {
    LLVLine { generator: space.beta(), square: Q::zero() }
}

/// Both candidate lines of `ι_*O_Z`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LagrangianLines {
    /// `λ − t(λ,λ)/2·β`.
    pub lemma: LLVLine,
    /// `λ + t(λ,λ)/2·β`, the alternative sign.
    pub intro: LLVLine,
}

pub fn ell_lagrangian(space: &LLVSpace, lambda: &[Q], t: &Q) -> Result<LagrangianLines> {
    let ll = space.h2.pair(lambda, lambda)?;
    if lambda.iter().all(|x| x.is_zero()) {
        return Err(Error::ZeroVector);
    }
    let s = t * &ll / q(2);
    Ok(LagrangianLines {
        lemma: LLVLine::new(space, space.triple(Q::zero(), lambda.to_vec(), -&s))?,
        intro: LLVLine::new(space, space.triple(Q::zero(), lambda.to_vec(), s))?,
    })
}

/// Line, `γ` and congruence report of a Φ(O)-type bundle.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PhiOLine {
    pub line: LLVLine,
    pub gamma: LLVVector,
    #[serde(with = "crate::rational::serde_qvec")]
    pub eta: Vec<Q>,
    pub div_in_lattice: String,
    pub congruences: Vec<Congruence>,
}

pub const PHIO_ODD: &str = "r₀∣(5+2(η,η))";
pub const PHIO_EVEN: &str = "r₀∣(5+(η,η)/2)";
pub const PHIO_GATE: &str = "γ primitive of divisibility 2 in Λ_X";

/// `γ = 2r₀α + 2h/r₀ + ((5r₀²+2(h,h))/(2r₀³))β`.
pub fn phio_gamma(space: &LLVSpace, r0: i64, h: &[Q]) -> Result<LLVVector> {
    require_r0(r0)?;
    let r = q(r0);
    let hh = space.h2.pair(h, h)?;
    let s = (q(5) * &r * &r + q(2) * &hh) / (q(2) * pow_q(&r, 3));
    Ok(space.triple(q(2) * &r, scaled(h, &(q(2) / &r)), s))
}

pub fn ell_phio(space: &LLVSpace, r0: i64, h: &[Q]) -> Result<PhiOLine> {
    require_k32(space)?;
    let gamma = phio_gamma(space, r0, h)?;
    let g = r0.gcd(&2);
    let eta = scaled(h, &qr(g, r0));
    let mut cs = Vec::new();
    let eta_ok = eta.iter().all(|x| x.is_integer());
    cs.push(Congruence::new(
        "h = (r₀/gcd(r₀,2))·η with η integral",
        eta_ok,
        format!("η = {}", space.h2.render(&eta)),
    ));
    first_failure(&cs)?;
    let ee = int_of(&space.h2.pair(&eta, &eta)?, "(η,η)")?;
    let rb = BigInt::from(r0);
    if r0 % 2 == 1 {
        let m = BigInt::from(5) + BigInt::from(2) * &ee;
        cs.push(Congruence::new(PHIO_ODD, divides(&rb, &m), format!("r₀ = {r0}, 5+2(η,η) = {m}")));
    } else {
        let m = BigInt::from(5) + &ee / BigInt::from(2);
        cs.push(Congruence::new(PHIO_EVEN, divides(&rb, &m), format!("r₀ = {r0}, 5+(η,η)/2 = {m}")));
    }
    first_failure(&cs)?;
    let member = space.in_integral_llv(&gamma)?;
    let (gate, div) = if member {
        let d = space.div_in_integral_llv(&gamma)?;
        (space.primitive_in_integral_llv(&gamma)? && d == BigInt::from(2), d.to_string())
    } else {
        (false, "-".to_string())
    };
    let detail = if r0 % 2 == 0 {
        format!("member: {member}, div: {div}; for even r₀ this is 2r₀∣(5+(η,η)/2)")
    } else {
        format!("member: {member}, div: {div}")
    };
    cs.push(Congruence::new(PHIO_GATE, gate, detail));
    first_failure(&cs)?;
    let line = LLVLine::new(space, gamma.clone())?;
    if line.square != q(-10) {
        return Err(Error::Invalid(format!("(γ,γ) = {} ≠ −10", fmt_q(&line.square))));
    }
    Ok(PhiOLine { line, gamma, eta, div_in_lattice: div, congruences: cs })
}

/// A first Chern class `h` with `(h,h) = h_sq` for which [`ell_phio`] succeeds,
/// searched among `η = k·(e1 + m·f1) + b·δ`.
pub fn phio_h_with_square(space: &LLVSpace, r0: i64, h_sq: &Q) -> Result<Vec<Q>> {
    require_k32(space)?;
    require_r0(r0)?;
    let g = r0.gcd(&2);
    let ee = h_sq * q(g * g) / q(r0 * r0);
    let (e, f) = (space.h2.index_of("e1"), space.h2.index_of("f1"));
    let (Some(e), Some(f), Some(d)) = (e, f, space.h2.index_of("delta")) else {
        return Err(Error::WrongType("lattice has no U summand".into()));
    };
    for k in 1..=2i64 {
        for b in 0..=3i64 {
            let aa = (&ee + q(2 * b * b)) / q(k * k);
            let m = &aa / q(2);
            if !m.is_integer() {
                continue;
            }
            let mut eta = vec![Q::zero(); space.rank()];
            eta[e] = q(k);
            eta[f] = m * q(k);
            eta[d] = q(b);
            let h = scaled(&eta, &qr(r0, g));
            if ell_phio(space, r0, &h).is_ok() {
                return Ok(h);
            }
        }
    }
    Err(Error::NotRealizable {
        condition: PHIO_GATE.into(),
        detail: format!("no class with (h,h) = {} found for r₀ = {r0}", fmt_q(h_sq)),
    })
}

/// `κ = x + y·c₂ + z[pt]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KappaTriple {
    #[serde(with = "serde_q")]
    pub x: Q,
    #[serde(with = "serde_q")]
    pub y: Q,
    #[serde(with = "serde_q")]
    pub z: Q,
}

impl KappaTriple {
    pub fn new(x: Q, y: Q, z: Q) -> Self {
        KappaTriple { x, y, z }
    }

    /// `450y² + 3xy − xz`.
    pub fn quadric(&self) -> Q {
        q(450) * &self.y * &self.y + q(3) * &self.x * &self.y - &self.x * &self.z
    }

    /// `κ(F₁⊗F₂)`.
    pub fn tensor(&self, o: &KappaTriple) -> KappaTriple {
        KappaTriple {
            x: &self.x * &o.x,
            y: &self.x * &o.y + &o.x * &self.y,
            z: &self.x * &o.z + &o.x * &self.z + q(828) * &self.y * &o.y,
        }
    }

    pub fn class(&self, ring: &K32Ring) -> CohClass {
        ring.one().scale(&self.x).add(&ring.c2().scale(&self.y)).add(&ring.point().scale(&self.z))
    }
}

/// `κ` of a Φ(O)-type bundle of rank `r₀²`.
pub fn phio_kappa(r0: i64) -> KappaTriple {
    let r2 = q(r0 * r0);
    KappaTriple::new(
        r2.clone(),
        (q(1) - &r2) / q(24),
        (q(21) * &r2 + q(25) / &r2 - q(46)) / q(32),
    )
}

/// Chern data on K3^[2] type.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ChernData {
    #[serde(with = "serde_q")]
    pub rank: Q,
    pub ch: CohClass,
    pub mukai: CohClass,
    #[serde(with = "serde_q")]
    pub chi: Q,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PhiOChern {
    pub data: ChernData,
    pub kappa: KappaTriple,
    pub line: PhiOLine,
}

/// `χ = (4(h,h)² + 20(h,h)r₀²(r₀²+1) + 25r₀⁴(r₀⁴+1) + 46r₀⁶)/(32r₀⁶)`.
pub fn phio_chi_closed(r0: i64, hh: &Q) -> Q {
    let r = q(r0);
    let r2 = &r * &r;
    let r4 = &r2 * &r2;
    let r6 = &r4 * &r2;
    (q(4) * hh * hh + q(20) * hh * &r2 * (&r2 + q(1)) + q(25) * &r4 * (&r4 + q(1)) + q(46) * &r6) / (q(32) * r6)
}

/// Chern character, κ and χ of a Φ(O)-type bundle, cross-checked against
/// `Ψ(v(F)) = ⅛(γ² + 10q̃)`.
pub fn chern_phio(space: &LLVSpace, r0: i64, h: &[Q]) -> Result<PhiOChern> {
    let line = ell_phio(space, r0, h)?;
    let ring = K32Ring::new(space)?;
    let r = q(r0);
    let r2 = &r * &r;
    let hh = space.h2.pair(h, h)?;
    let hc = ring.h2(h)?;
    let c2 = ring.c2();
    let k = (q(1) - &r2) / q(24);
    let ch2 = ring.pow(&hc, 2).scale(&(q(1) / (q(2) * &r2))).add(&c2.scale(&k));
    let ch3 = ring
        .pow(&hc, 3)
        .scale(&(q(1) / (q(6) * pow_q(&r, 4))))
        .add(&ring.mul(&hc, &c2).scale(&(&k / &r2)));
    let ch4 = (q(4) * &hh * &hh + q(20) * &r2 * (q(1) - &r2) * &hh + q(25) * pow_q(&r, 4) - q(46) * pow_q(&r, 6)
        + q(21) * pow_q(&r, 8))
        / (q(32) * pow_q(&r, 6));
    let ch = ring.one().scale(&r2).add(&hc).add(&ch2).add(&ch3).add(&ring.point().scale(&ch4));
    let mukai = ring.mukai_vector(&ch)?;
    let ctx = ring.psi_context();
    let mut coeffs = vec![line.gamma.r.clone(), line.gamma.s.clone()];
    coeffs.extend(line.gamma.v.iter().cloned());
    let want = ReducedSymElement::linear(&coeffs)
        .pow(2)
        .add(&ReducedSymElement::qtilde().scale(&q(10)))?
        .scale(&qr(1, 8));
    if !equal_in_sym(&ctx, space, &ring.psi(&mukai), &want)? {
        return Err(Error::Invalid("Ψ(v(F)) ≠ ⅛(γ²+10q̃)".into()));
    }
    let kappa = phio_kappa(r0);
    let kr = ring.mul(&ch, &ring.exp(&hc.scale(&(q(-1) / &r2))));
    if kr != kappa.class(&ring) {
        return Err(Error::Invalid("κ(F) differs from r₀² + (1−r₀²)/24·c₂ + z[pt]".into()));
    }
    let chi = ring.euler_characteristic(&ch)?;
    if chi != phio_chi_closed(r0, &hh) {
        return Err(Error::Invalid("χ(F) differs from the closed form".into()));
    }
    if !chi.is_integer() {
        return Err(Error::Invalid(format!("χ(F) = {} is not integral", fmt_q(&chi))));
    }
    Ok(PhiOChern { data: ChernData { rank: r2, ch, mukai, chi }, kappa, line })
}

/// Line of an object with isotropic Mukai line.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IsotropicLine {
    pub line: LLVLine,
    pub gamma: LLVVector,
    #[serde(with = "serde_q")]
    pub rank: Q,
    pub congruences: Vec<Congruence>,
}

pub const ISO_PSI: &str = "h = r₀·gcd(2,r₀)·ψ with ψ integral";
pub const ISO_DIV: &str = "2∣div(ψ) for odd r₀";
pub const ISO_SQ: &str = "(2r₀/gcd(2,r₀)²)∣(ψ,ψ)";
pub const ISO_MOD4: &str = "(ψ,ψ)·gcd(2,r₀)²/(2r₀) ≡ −r₀ (mod 4)";
pub const ISO_GATE: &str = "γ primitive of divisibility 1 in Λ_X";

/// `γ = r₀α + h/(n!r₀^{n−1}) + ((h,h)/(2(n!)²r₀^{2n−1}))β`.
pub fn isotropic_gamma(space: &LLVSpace, r0: i64, h: &[Q]) -> Result<LLVVector> {
    require_r0(r0)?;
    let n = space.n;
    let r = q(r0);
    let nf = qi(&factorial(n));
    let hh = space.h2.pair(h, h)?;
    let lam = scaled(h, &(q(1) / (&nf * pow_q(&r, n - 1))));
    let s = hh / (q(2) * &nf * &nf * pow_q(&r, 2 * n - 1));
    Ok(space.triple(r, lam, s))
}

fn isotropic_congruences(space: &LLVSpace, r0: i64, h: &[Q], gamma: &LLVVector) -> Result<Vec<Congruence>> {
    let g = r0.gcd(&2);
    let psi = scaled(h, &qr(1, r0 * g));
    let mut cs = vec![Congruence::new(
        ISO_PSI,
        psi.iter().all(|x| x.is_integer()),
        format!("ψ = {}", space.h2.render(&psi)),
    )];
    first_failure(&cs)?;
    let pp = int_of(&space.h2.pair(&psi, &psi)?, "(ψ,ψ)")?;
    if r0 % 2 == 1 {
        let d = if psi.iter().all(|x| x.is_zero()) { BigInt::zero() } else { space.h2.divisibility(&psi)? };
        cs.push(Congruence::new(ISO_DIV, divides(&BigInt::from(2), &d), format!("div(ψ) = {d}")));
    }
    let m = BigInt::from(2 * r0 / (g * g));
    cs.push(Congruence::new(ISO_SQ, divides(&m, &pp), format!("(ψ,ψ) = {pp}")));
    if divides(&m, &pp) {
        let lhs = &pp * BigInt::from(g * g) / BigInt::from(2 * r0);
        let holds = (lhs.clone() + BigInt::from(r0)).mod_floor(&BigInt::from(4)).is_zero();
        cs.push(Congruence::new(ISO_MOD4, holds, format!("(ψ,ψ)·gcd²/(2r₀) = {lhs}, r₀ = {r0}")));
    }
    first_failure(&cs)?;
    let member = space.in_integral_llv(gamma)?;
    let (gate, div) = if member {
        let d = space.div_in_integral_llv(gamma)?;
        (space.primitive_in_integral_llv(gamma)? && d.is_one(), d.to_string())
    } else {
        (false, "-".to_string())
    };
    cs.push(Congruence::new(ISO_GATE, gate, format!("member: {member}, div: {div}")));
    first_failure(&cs)?;
    Ok(cs)
}

/// For n = 2 on K3^[2] type the congruences and the Λ_X gate are enforced.
pub fn ell_isotropic(space: &LLVSpace, r0: i64, h: &[Q]) -> Result<IsotropicLine> {
    let gamma = isotropic_gamma(space, r0, h)?;
    let line = LLVLine::new(space, gamma.clone())?;
    if !line.square.is_zero() {
        return Err(Error::Invalid(format!("(γ,γ) = {} ≠ 0", fmt_q(&line.square))));
    }
    let congruences = if space.dtype == DefType::Hilb && space.n == 2 {
        isotropic_congruences(space, r0, h, &gamma)?
    } else {
        Vec::new()
    };
    let rank = qi(&factorial(space.n)) * pow_q(&q(r0), space.n);
    Ok(IsotropicLine { line, gamma, rank, congruences })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IsotropicChern {
    pub data: ChernData,
    pub line: IsotropicLine,
}

/// `χ = (((h,h) + 10r₀⁴)/(8r₀³))²`.
pub fn isotropic_chi_closed(r0: i64, hh: &Q) -> Q {
    let r = q(r0);
    let b = (hh + q(10) * pow_q(&r, 4)) / (q(8) * pow_q(&r, 3));
    &b * &b
}

/// Chern data of a rank `2r₀²` object with isotropic LLV line on K3^[2] type.
pub fn chern_isotropic_k32(space: &LLVSpace, r0: i64, h: &[Q]) -> Result<IsotropicChern> {
    require_k32(space)?;
    let line = ell_isotropic(space, r0, h)?;
    let ring = K32Ring::new(space)?;
    let r = q(r0);
    let r2 = &r * &r;
    let hh = space.h2.pair(h, h)?;
    let hc = ring.h2(h)?;
    let c2 = ring.c2();
    let ch2 = ring.pow(&hc, 2).scale(&(q(1) / (q(4) * &r2))).sub(&c2.scale(&(&r2 / q(12))));
    let ch3 = ring
        .pow(&hc, 3)
        .scale(&(q(1) / (q(24) * pow_q(&r, 4))))
        .sub(&ring.mul(&c2, &hc).scale(&qr(1, 24)));
    let ch4 = &hh * &hh / (q(64) * pow_q(&r, 6)) - q(5) * &hh / (q(16) * &r2) + q(21) * &r2 / q(16);
    let rank = q(2) * &r2;
    let ch = ring.one().scale(&rank).add(&hc).add(&ch2).add(&ch3).add(&ring.point().scale(&ch4));
    let mukai = ring.mukai_vector(&ch)?;
    let ctx = ring.psi_context();
    let mut coeffs = vec![line.gamma.r.clone(), line.gamma.s.clone()];
    coeffs.extend(line.gamma.v.iter().cloned());
    if !equal_in_sym(&ctx, space, &ring.psi(&mukai), &ReducedSymElement::linear(&coeffs).pow(2))? {
        return Err(Error::Invalid("Ψ(v(F)) ≠ γ²".into()));
    }
    let chi = ring.euler_characteristic(&ch)?;
    if chi != isotropic_chi_closed(r0, &hh) {
        return Err(Error::Invalid("χ(F) differs from the closed form".into()));
    }
    if !chi.is_integer() {
        return Err(Error::Invalid(format!("χ(F) = {} is not integral", fmt_q(&chi))));
    }
    Ok(IsotropicChern { data: ChernData { rank, ch, mukai, chi }, line })
}

/// Outcome of [`ell_from_kappa`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "outcome")]
pub enum KappaLine {
    Line { line: LLVLine },
    /// `450y² + 3xy − xz ≠ 0`: no deformation in codimension one.
    QuadricViolated {
        #[serde(with = "serde_q")]
        value: Q,
    },
}

/// `span{x²α + x·c₁ + (5x²/4 + 30xy + (c₁,c₁)/2)β}` when `κ` lies on the quadric.
pub fn ell_from_kappa(space: &LLVSpace, kappa: &KappaTriple, c1: &[Q]) -> Result<KappaLine> {
    require_k32(space)?;
    if kappa.x.is_zero() {
        return Err(Error::Invalid("x = 0: rank zero".into()));
    }
    let value = kappa.quadric();
    if !value.is_zero() {
        return Ok(KappaLine::QuadricViolated { value });
    }
    let ring = K32Ring::new(space)?;
    let v = ring.mukai_vector(&kappa.class(&ring))?;
    let tt = ring.contract(&v.a4) / ring.contract(&ring.c2().a4);
    if q(450) * &tt * &tt != &v.a8 * &kappa.x {
        return Err(Error::Invalid("Ψ(κ√td) is not a projected square".into()));
    }
    let x = &kappa.x;
    let base = space.triple(x * x, vec![Q::zero(); space.rank()], q(30) * &tt * x);
    let gen = space.b_apply(&scaled(c1, &(q(1) / x)), &base);
    Ok(KappaLine::Line { line: LLVLine::new(space, gen)? })
}

/// Whether `κ(F₁⊗F₂)` lies on the quadric, given both factors do.
pub fn kappa_tensor_check(t1: &KappaTriple, t2: &KappaTriple) -> Result<bool> {
    for t in [t1, t2] {
        if t.x.is_zero() {
            return Err(Error::Invalid("x = 0: rank zero".into()));
        }
        if !t.quadric().is_zero() {
            return Err(Error::Invalid("factor violates 450y²+3xy−xz = 0".into()));
        }
    }
    Ok(t1.tensor(t2).quadric().is_zero())
}

pub fn ell_dual(space: &LLVSpace, line: &LLVLine) -> Result<LLVLine> {
    LLVLine::new(space, duality_d(space).apply(&line.generator)?)
}

pub fn ell_twist(space: &LLVSpace, line: &LLVLine, mu: &[Q]) -> Result<LLVLine> {
    if mu.len() != space.rank() {
        return Err(Error::Dimension { expected: space.rank(), got: mu.len() });
    }
    LLVLine::new(space, space.b_apply(mu, &line.generator))
}

/// `B_{Σc₁ᵢ/rᵢ}(span{α,β})` with the functionals `λ ↦ (λ, c₁ᵢ/rᵢ)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TensorPlane {
    pub span: [LLVVector; 2],
    #[serde(with = "crate::rational::serde_qmat")]
    pub theta: Vec<Vec<Q>>,
}

pub fn llv_tensor_plane(space: &LLVSpace, factors: &[(Vec<Q>, Q)]) -> Result<TensorPlane> {
    let mut mu = vec![Q::zero(); space.rank()];
    let mut theta = Vec::new();
    for (c1, r) in factors {
        if r.is_zero() {
            return Err(Error::Invalid("tensor factor of rank zero".into()));
        }
        if c1.len() != space.rank() {
            return Err(Error::Dimension { expected: space.rank(), got: c1.len() });
        }
        let m = scaled(c1, &(q(1) / r));
        theta.push(space.h2.lower(&m));
        for (a, b) in mu.iter_mut().zip(&m) {
            *a += b;
        }
    }
    Ok(TensorPlane { span: [space.b_apply(&mu, &space.alpha()), space.b_apply(&mu, &space.beta())], theta })
}

impl TensorPlane {
    /// Membership of `v` in the plane.
    pub fn contains(&self, v: &LLVVector) -> bool {
        let rows: Vec<Vec<Q>> = vec![self.span[0].coords(), self.span[1].coords(), v.coords()];
        Mat::from_rows(rows).map(|m| m.rank() <= 2).unwrap_or(false)
    }
}

/// A rational given either as a JSON number or a `"p/q"` string.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum QValue {
    Int(i64),
    Str(String),
}

impl QValue {
    pub fn value(&self) -> Result<Q> {
        match self {
            QValue::Int(i) => Ok(q(*i)),
            QValue::Str(s) => parse_q(s),
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
pub struct LagrangianParams {
    pub lambda: String,
    #[serde(default)]
    pub t: Option<QValue>,
    #[serde(default, rename = "chiZ")]
    pub chi_z: Option<i64>,
}

#[derive(Debug, Clone, Deserialize)]
pub struct RankParams {
    pub r0: i64,
    #[serde(default)]
    pub h: Option<String>,
}

#[derive(Debug, Clone, Deserialize)]
pub struct KappaParams {
    pub x: QValue,
    pub y: QValue,
    pub z: QValue,
    #[serde(default)]
    pub c1: Option<String>,
}

/// Object families, tagged by `family`.
#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "family")]
pub enum Family {
    StructureSheaf,
    Skyscraper,
    Lagrangian(LagrangianParams),
    PhiO(RankParams),
    Isotropic(RankParams),
    KappaTriple(KappaParams),
}

/// Request document: a family plus the space (`type`, `n`; default K3^[2]).
#[derive(Debug, Clone, Deserialize)]
pub struct ObjectSpec {
    #[serde(flatten)]
    pub family: Family,
    #[serde(default, rename = "type")]
    pub space_type: Option<String>,
    #[serde(default)]
    pub n: Option<u32>,
}

#[derive(Deserialize)]
struct SpaceFields {
    #[serde(default, rename = "type")]
    space_type: Option<String>,
    #[serde(default)]
    n: Option<u32>,
}

fn field_part<T: serde::de::DeserializeOwned>(v: &serde_json::Value) -> Result<T> {
    serde_path_to_error::deserialize(v.clone()).map_err(|e| {
        let path = e.path().to_string();
        if path == "." {
            Error::Parse(format!("object spec: {}", e.inner()))
        } else {
            Error::Parse(format!("object spec field `{path}`: {}", e.inner()))
        }
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NamedVector {
    pub name: String,
    pub vector: String,
}

/// Evaluation of an [`ObjectSpec`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LineReport {
    pub family: String,
    pub space: String,
    pub generator: String,
    pub square: String,
    pub in_integral_lattice: Option<bool>,
    pub div_in_integral_lattice: Option<String>,
    pub congruences: Vec<Congruence>,
    pub alternatives: Vec<NamedVector>,
    pub notes: Vec<String>,
}

impl ObjectSpec {
    /// Parses a JSON request; errors name the offending field.
    pub fn from_json(text: &str) -> Result<ObjectSpec> {
        let v: serde_json::Value =
            serde_json::from_str(text).map_err(|e| Error::Parse(format!("object spec: {e}")))?;
        let obj = v.as_object().ok_or_else(|| Error::Parse("object spec: expected a JSON object".into()))?;
        let tag = match obj.get("family") {
            None => return Err(Error::Parse("object spec: missing field `family`".into())),
            Some(t) => t
                .as_str()
                .ok_or_else(|| Error::Parse("object spec field `family`: expected a string".into()))?,
        };
        let family = match tag {
            "StructureSheaf" => Family::StructureSheaf,
            "Skyscraper" => Family::Skyscraper,
            "Lagrangian" => Family::Lagrangian(field_part(&v)?),
            "PhiO" => Family::PhiO(field_part(&v)?),
            "Isotropic" => Family::Isotropic(field_part(&v)?),
            "KappaTriple" => Family::KappaTriple(field_part(&v)?),
            other => return Err(Error::Parse(format!("object spec field `family`: unknown family `{other}`"))),
        };
        let sp: SpaceFields = field_part(&v)?;
        Ok(ObjectSpec { family, space_type: sp.space_type, n: sp.n })
    }

    pub fn space(&self) -> Result<LLVSpace> {
        let name = self.space_type.as_deref().unwrap_or("HilbK3");
        let n = self.n.or(Some(2));
        LLVSpace::from_preset(Preset::parse(name, n)?)
    }

    fn vector(space: &LLVSpace, expr: Option<&str>) -> Result<Vec<Q>> {
        match expr {
            None => Ok(vec![Q::zero(); space.rank()]),
            Some(e) if e.trim() == "0" || e.trim().is_empty() => Ok(vec![Q::zero(); space.rank()]),
            Some(e) => space.h2.parse_vector(e),
        }
    }

    pub fn evaluate(&self) -> Result<LineReport> {
        let space = self.space()?;
        let labels = &space.h2.labels;
        let mut report = LineReport {
            family: String::new(),
            space: format!("{} (n = {})", space.h2.name, space.n),
            generator: String::new(),
            square: String::new(),
            in_integral_lattice: None,
            div_in_integral_lattice: None,
            congruences: Vec::new(),
            alternatives: Vec::new(),
            notes: Vec::new(),
        };
        let line = match &self.family {
            Family::StructureSheaf => {
                report.family = "StructureSheaf".into();
                let (line, cert) = ell_structure_sheaf(&space)?;
                report.notes.push(format!(
                    "∫√td = {}, tⁿ = {}, t = {}",
                    fmt_q(&cert.integral_sqrt_td),
                    fmt_q(&cert.t_pow_n),
                    fmt_q(&cert.t)
                ));
                line
            }
            Family::Skyscraper => {
                report.family = "Skyscraper".into();
                ell_skyscraper(&space)
            }
            Family::Lagrangian(LagrangianParams { lambda, t, chi_z }) => {
                report.family = "Lagrangian".into();
                let lam = space.h2.parse_vector(lambda)?;
                let t = match (t, chi_z) {
                    (Some(t), _) => t.value()?,
                    (None, Some(chi)) => {
                        let d = lagrangian_data(&space.h2.pair(&lam, &lam)?, *chi)?;
                        report.notes.push(format!("c = {}, t = ±{}", fmt_q(&d.c), fmt_q(&d.t)));
                        d.t
                    }
                    (None, None) => return Err(Error::Parse("Lagrangian needs `t` or `chiZ`".into())),
                };
                let lines = ell_lagrangian(&space, &lam, &t)?;
                report.alternatives.push(NamedVector {
                    name: "opposite sign".into(),
                    vector: lines.intro.generator.render(labels),
                });
                lines.lemma
            }
            Family::PhiO(RankParams { r0, h }) => {
                report.family = "PhiO".into();
                let h = Self::vector(&space, h.as_deref())?;
                let p = ell_phio(&space, *r0, &h)?;
                report.congruences = p.congruences.clone();
                p.line
            }
            Family::Isotropic(RankParams { r0, h }) => {
                report.family = "Isotropic".into();
                let h = Self::vector(&space, h.as_deref())?;
                let p = ell_isotropic(&space, *r0, &h)?;
                report.congruences = p.congruences.clone();
                report.notes.push(format!("rank = {}", fmt_q(&p.rank)));
                p.line
            }
            Family::KappaTriple(KappaParams { x, y, z, c1 }) => {
                report.family = "KappaTriple".into();
                let k = KappaTriple::new(x.value()?, y.value()?, z.value()?);
                let c1 = Self::vector(&space, c1.as_deref())?;
                match ell_from_kappa(&space, &k, &c1)? {
                    KappaLine::Line { line } => line,
                    KappaLine::QuadricViolated { value } => {
                        return Err(Error::NotRealizable {
                            condition: "450y²+3xy−xz = 0".into(),
                            detail: format!("value {}: does not deform in codimension 1", fmt_q(&value)),
                        })
                    }
                }
            }
        };
        report.generator = line.generator.render(labels);
        report.square = fmt_q(&line.square);
        if space.dtype == DefType::Hilb {
            let member = space.in_integral_llv(&line.generator)?;
            report.in_integral_lattice = Some(member);
            if member {
                report.div_in_integral_lattice = Some(space.div_in_integral_llv(&line.generator)?.to_string());
            }
        }
        Ok(report)
    }
}

/// `B_{kλ}` applied `k` times is `B_{kλ}`; convenience for twists by integral multiples.
pub fn twist_multiple(space: &LLVSpace, line: &LLVLine, lambda: &[Q], k: i64) -> Result<LLVLine> {
    ell_twist(space, line, &scaled(lambda, &q(k)))
}
