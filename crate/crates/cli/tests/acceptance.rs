//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! The process exits 0 after reporting unless `LLV_ACCEPTANCE_STRICT=1`, in
//! which case any failing criterion makes the exit status nonzero.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::Command;

use llv_core::arithmetic::{arithmetic_search, hodge_relations, lagrangian_data, segre_enumerate, untwisted_lift_check, LiftCandidate};
use llv_core::fullsym::{FullSym, Poly};
use llv_core::harmonic::{delta_apply, equal_in_sym, project_harmonic};
use llv_core::isometry::{b_lambda, duality_d, reflection};
use llv_core::lattice::orbit_invariants_equal;
use llv_core::lines::{
    chern_isotropic_k32, chern_phio, ell_isotropic, ell_phio, ell_structure_sheaf, ell_structure_sheaf_harmonic,
    isotropic_chi_closed, phio_h_with_square, ISO_DIV, ISO_GATE, ISO_MOD4, ISO_PSI, ISO_SQ,
};
use llv_core::monodromy::{chi_involution, dmon_lift, ek_pipeline, phi_p, structure_sheaf_minus_delta};
use llv_core::{q, qr, Error, GeneratorContext, Isometry, K32Ring, LLVSpace, ReducedSymElement, Q};
use num::{BigInt, Integer, One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Default)]
struct Tally {
    checks: usize,
    failures: Vec<String>,
}

impl Tally {
    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok && self.failures.len() < 8 {
            self.failures.push(what());
        } else if !ok {
            self.failures.push(String::new());
        }
    }

    fn eq<T: PartialEq + std::fmt::Debug>(&mut self, got: T, want: T, what: &str) {
        let ok = got == want;
        self.check(ok, || format!("{what}: expected {want:?}, got {got:?}"));
    }
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn random_vec(r: &mut ChaCha8Rng, rank: usize, terms: usize, c: i64) -> Vec<Q> {
    let mut v = vec![Q::zero(); rank];
    for _ in 0..terms {
        v[r.gen_range(0..rank)] += q(r.gen_range(-c..=c));
    }
    v
}

fn sq(s: &LLVSpace, x: &[Q]) -> Q {
    s.h2.pair(x, x).unwrap()
}

fn render(v: &[Q]) -> String {
    v.iter().map(llv_core::fmt_q).collect::<Vec<_>>().join(",")
}

fn c1_ring() -> Tally {
    let mut t = Tally::default();
    let s = LLVSpace::hilb(2).unwrap();
    let ring = K32Ring::new(&s).unwrap();
    let c2 = ring.c2();
    t.eq(ring.integrate(&ring.mul(&c2, &c2)), q(828), "∫c₂²");
    let td = ring.todd_data().unwrap();
    t.eq(ring.integrate(&td.sqrt_td), qr(25, 32), "∫√td");
    t.eq(ring.integrate(&td.td), q(3), "∫td");
    let mut r = rng(1);
    for _ in 0..20 {
        let lv = random_vec(&mut r, 23, 5, 6);
        let mv = random_vec(&mut r, 23, 5, 6);
        let (l, m) = (ring.h2(&lv).unwrap(), ring.h2(&mv).unwrap());
        let ll = sq(&s, &lv);
        let mm = sq(&s, &mv);
        let lm = s.h2.pair(&lv, &mv).unwrap();
        t.eq(ring.integrate(&ring.mul(&c2, &ring.pow(&l, 2))), q(30) * &ll, "∫c₂λ²");
        t.eq(ring.integrate(&ring.mul(&ring.mul(&c2, &l), &m)), q(30) * &lm, "∫c₂λμ");
        t.eq(ring.integrate(&ring.pow(&l, 4)), q(3) * &ll * &ll, "∫λ⁴");
        t.eq(
            ring.integrate(&ring.mul(&ring.pow(&l, 2), &ring.pow(&m, 2))),
            &ll * &mm + q(2) * &lm * &lm,
            "∫λ²μ²",
        );
        t.eq(ring.integrate(&ring.mul(&ring.pow(&l, 3), &m)), q(3) * &ll * &lm, "∫λ³μ");
        t.eq(ring.pow(&l, 3), ring.mul(&c2, &l).scale(&(&ll / q(10))), "λ³ in degree 6");
        t.eq(ring.mul(&ring.pow(&l, 3), &m), ring.point().scale(&(q(3) * &ll * &lm)), "λ³μ = 3(λ,λ)(λ,μ)[pt]");
    }
    t
}

fn fact(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |a, i| a * BigInt::from(i))
}

fn c2_structure_sheaf() -> Tally {
    let mut t = Tally::default();
    for n in 2..=6u32 {
        for kum in [false, true] {
            let s = if kum { LLVSpace::kummer(n).unwrap() } else { LLVSpace::hilb(n).unwrap() };
            let m = if kum { n as i64 + 1 } else { n as i64 + 3 };
            let want = s.triple(q(4), vec![Q::zero(); s.rank()], q(m));
            let (line, cert) = ell_structure_sheaf(&s).unwrap();
            let tag = if kum { format!("Kum({n})") } else { format!("K3^[{n}]") };
            t.check(line.generator.same_line(&want), || format!("{tag} closed form: {:?}", line.generator));
            let h = ell_structure_sheaf_harmonic(&s).unwrap();
            t.check(h.generator.same_line(&want), || format!("{tag} harmonic: {:?}", h.generator));
            let want_td = if kum {
                Q::new(BigInt::from(m).pow(n + 1), BigInt::from(4).pow(n) * fact(n))
            } else {
                Q::new(BigInt::from(m).pow(n), BigInt::from(4).pow(n) * fact(n))
            };
            t.eq(cert.integral_sqrt_td.clone(), want_td, &format!("{tag} ∫√td"));
            t.eq(cert.t.clone(), qr(m, 4), &format!("{tag} t"));
            t.eq(cert.t_pow_n.clone(), num::pow(qr(m, 4), n as usize), &format!("{tag} tⁿ"));
        }
    }
    t
}

struct OracleCase {
    fs: FullSym,
    gens: Vec<Vec<Q>>,
    ctx: GeneratorContext,
}

fn oracle_case(r: &mut ChaCha8Rng, n: usize) -> OracleCase {
    let diag: Vec<Q> = (0..n).map(|_| q(r.gen_range(1..=4) * if r.gen_bool(0.5) { 1 } else { -1 })).collect();
    let k = r.gen_range(2..=4);
    let gens: Vec<Vec<Q>> = (0..k).map(|_| (0..n).map(|_| q(r.gen_range(-2..=2))).collect()).collect();
    let gram = gens
        .iter()
        .map(|a| gens.iter().map(|b| a.iter().zip(b).zip(&diag).map(|((x, y), d)| x * y * d).sum()).collect())
        .collect();
    OracleCase { fs: FullSym::new(diag).unwrap(), ctx: GeneratorContext::from_gram(n, gram).unwrap(), gens }
}

fn oracle_embed(c: &OracleCase, x: &ReducedSymElement) -> Poly {
    let qt = c.fs.qtilde();
    let mut out = Poly::zero(c.fs.dim());
    for ((j, m), coeff) in x.terms() {
        let mut p = qt.pow(*j);
        for i in m {
            p = p.mul(&Poly::linear(&c.gens[*i]));
        }
        out = out.add(&p.scale(coeff));
    }
    out
}

fn c3_oracle() -> Tally {
    let mut t = Tally::default();
    let mut r = rng(3);
    for n in [4usize, 6, 8] {
        for deg in [2u32, 3, 4] {
            for _ in 0..100 {
                let c = oracle_case(&mut r, n);
                let mut x = ReducedSymElement::zero(deg);
                for _ in 0..r.gen_range(1..=5) {
                    let j = r.gen_range(0..=deg / 2);
                    let mut m: Vec<usize> = (0..deg - 2 * j).map(|_| r.gen_range(0..c.gens.len())).collect();
                    m.sort_unstable();
                    x.add_term((j, m), q(r.gen_range(-9..=9)));
                }
                let ex = oracle_embed(&c, &x);
                let d_ok = oracle_embed(&c, &delta_apply(&c.ctx, &x)) == c.fs.delta(&ex);
                t.check(d_ok, || format!("Δ mismatch at N={n}, n={deg}"));
                let p_ok = oracle_embed(&c, &project_harmonic(&c.ctx, &x).unwrap()) == c.fs.project(&ex, deg).unwrap();
                t.check(p_ok, || format!("Π mismatch at N={n}, n={deg}"));
            }
        }
    }
    t
}

fn c4_phio() -> Tally {
    let mut t = Tally::default();
    let s = LLVSpace::hilb(2).unwrap();
    let ring = K32Ring::new(&s).unwrap();
    for (r0, hh, chi) in [(1, 0, 3), (2, 6, 6), (2, 22, 10)] {
        let h = phio_h_with_square(&s, r0, &q(hh)).unwrap();
        let c = chern_phio(&s, r0, &h).unwrap();
        t.eq(c.data.chi.clone(), q(chi), &format!("χ at (r₀,(h,h)) = ({r0},{hh})"));
    }
    let mut r = rng(4);
    for r0 in 1..=5i64 {
        let g = r0.gcd(&2);
        let mut found = 0;
        let mut tries = 0;
        while found < 4 && tries < 20000 {
            tries += 1;
            let eta = random_vec(&mut r, 23, 4, 6);
            let h: Vec<Q> = eta.iter().map(|x| x * qr(r0, g)).collect();
            let Ok(line) = ell_phio(&s, r0, &h) else { continue };
            found += 1;
            t.eq(s.square(&line.gamma).unwrap(), q(-10), "(γ,γ)");
            t.eq(s.div_in_integral_llv(&line.gamma).unwrap(), BigInt::from(2), "div_Λ(γ)");
            let c = chern_phio(&s, r0, &h).unwrap();
            let mut coeffs = vec![line.gamma.r.clone(), line.gamma.s.clone()];
            coeffs.extend(line.gamma.v.iter().cloned());
            let want = ReducedSymElement::linear(&coeffs)
                .pow(2)
                .add(&ReducedSymElement::qtilde().scale(&q(10)))
                .unwrap()
                .scale(&qr(1, 8));
            let ok = equal_in_sym(&ring.psi_context(), &s, &ring.psi(&c.data.mukai), &want).unwrap();
            t.check(ok, || format!("Ψ(v(F)) ≠ ⅛(γ²+10q̃) at r₀ = {r0}, h = {}", render(&h)));
        }
        t.check(found == 4, || format!("only {found} valid h found for r₀ = {r0}"));
    }
    let rows: Vec<(i64, Q, Q)> = segre_enumerate(25).unwrap().into_iter().map(|x| (x.r0, x.eta_sq, x.chi)).collect();
    t.eq(rows, vec![(1, q(0), q(3)), (2, q(6), q(6)), (3, q(2), q(10))], "Segre enumeration to r₀ = 25");
    t
}

/// `γ` is primitive of divisibility 1 in `Λ_X = B_{−δ/2}(ℤα ⊕ H² ⊕ ℤβ)`,
/// decided on `B_{δ/2}γ = (r, λ, s)` by `gcd(r, λ, s) = 1` and `gcd(r, s, div λ) = 1`.
fn gate_holds(s: &LLVSpace, r0: i64, h: &[Q]) -> bool {
    let r = q(r0);
    let lam: Vec<Q> = h.iter().map(|x| x / (q(2) * &r)).collect();
    let st = sq(s, h) / (q(2) * q(4) * &r * &r * &r);
    let d: Vec<Q> = s.delta().unwrap().iter().map(|x| x / q(2)).collect();
    let lam2: Vec<Q> = lam.iter().zip(&d).map(|(a, b)| a + &r * b).collect();
    let s2 = &st + s.h2.pair(&d, &lam).unwrap() + &r * sq(s, &d) / q(2);
    if !s2.is_integer() || lam2.iter().any(|x| !x.is_integer()) {
        return false;
    }
    let coords = lam2.iter().map(|x| x.to_integer());
    let g = coords.fold(r.to_integer().gcd(&s2.to_integer()), |a, x| a.gcd(&x));
    let dl = if lam2.iter().all(|x| x.is_zero()) { BigInt::zero() } else { s.h2.divisibility(&lam2).unwrap() };
    g.is_one() && r.to_integer().gcd(&s2.to_integer()).gcd(&dl).is_one()
}

fn c5_isotropic() -> Tally {
    let mut t = Tally::default();
    let mut r = rng(5);
    for n in 2..=5u32 {
        let s = LLVSpace::hilb(n).unwrap();
        for r0 in 1..=4i64 {
            for _ in 0..5 {
                let h = random_vec(&mut r, s.rank(), 4, 5);
                if n == 2 {
                    continue;
                }
                let l = ell_isotropic(&s, r0, &h).unwrap();
                t.eq(s.square(&l.gamma).unwrap(), q(0), &format!("(γ,γ) on K3^[{n}], r₀ = {r0}"));
            }
        }
    }
    let s = LLVSpace::hilb(2).unwrap();
    let mut gated = [0usize; 4];
    for r0 in 1..=4i64 {
        let g = r0.gcd(&2);
        for _ in 0..150 {
            let psi = random_vec(&mut r, 23, 4, 4);
            let h: Vec<Q> = psi.iter().map(|x| x * q(r0 * g)).collect();
            let pp = sq(&s, &psi).to_integer();
            let div = if psi.iter().all(|x| x.is_zero()) { BigInt::zero() } else { s.h2.divisibility(&psi).unwrap() };
            let m = BigInt::from(2 * r0 / (g * g));
            let div_ok = r0 % 2 == 0 || div.is_even();
            let sq_ok = pp.mod_floor(&m).is_zero();
            let mod4_ok = sq_ok && (&pp * BigInt::from(g * g) / BigInt::from(2 * r0) + BigInt::from(r0)).mod_floor(&BigInt::from(4)).is_zero();
            let gate_ok = div_ok && sq_ok && mod4_ok && gate_holds(&s, r0, &h);
            let expect = gate_ok;
            match ell_isotropic(&s, r0, &h) {
                Ok(l) => {
                    gated[(r0 - 1) as usize] += 1;
                    t.check(expect, || format!("accepted ungated ψ = {} at r₀ = {r0}", render(&psi)));
                    t.eq(s.square(&l.gamma).unwrap(), q(0), "(γ,γ)");
                    t.eq(s.div_in_integral_llv(&l.gamma).unwrap(), BigInt::one(), "div_Λ(γ)");
                    let hh = sq(&s, &h);
                    let chi = isotropic_chi_closed(r0, &hh);
                    let root = chi.numer().sqrt();
                    t.check(chi.is_integer() && &root * &root == *chi.numer(), || format!("χ = {chi} not a square"));
                    let c = chern_isotropic_k32(&s, r0, &h).unwrap();
                    t.eq(c.data.chi, chi, "χ ring vs closed form");
                }
                Err(Error::NotRealizable { condition, .. }) => {
                    let want = if !div_ok {
                        ISO_DIV
                    } else if !sq_ok {
                        ISO_SQ
                    } else if !mod4_ok {
                        ISO_MOD4
                    } else {
                        ISO_GATE
                    };
                    t.check(!expect && condition == want, || format!("r₀ = {r0}, ψ = {}: rejected by {condition}", render(&psi)));
                }
                Err(e) => t.check(false, || format!("unexpected error {e}")),
            }
        }
        let bad: Vec<Q> = {
            let mut v = vec![Q::zero(); 23];
            v[0] = q(1);
            v
        };
        let e = ell_isotropic(&s, r0, &bad).err();
        t.check(matches!(&e, Some(Error::NotRealizable { condition, .. }) if condition == ISO_PSI || r0 == 1), || {
            format!("h = e1 at r₀ = {r0}: {e:?}")
        });
    }
    t.check(gated.iter().all(|&c| c > 0), || format!("no gated inputs for some r₀: {gated:?}"));
    t
}

fn c6_lagrangian() -> (Tally, String) {
    let mut t = Tally::default();
    let d = lagrangian_data(&q(6), 27).unwrap();
    t.eq((d.c, d.t), (qr(5, 8), q(1)), "(6,27)");
    let d = lagrangian_data(&q(-10), 3).unwrap();
    t.eq((d.c, d.t), (qr(1, 8), qr(3, 5)), "(−10,3)");
    let d = lagrangian_data(&q(2), 192).unwrap();
    t.eq((d.c, d.t), (q(5), q(3)), "(2,192)");
    let h = hodge_relations(27, 5, 1).unwrap();
    t.eq((h.h20, h.h11), (q(10), q(25)), "hodge (27,5)");
    let rows = arithmetic_search(60, &q(1000), &[1, 2]).unwrap();
    let mut hits: Vec<(i64, Q, Q)> = rows.iter().map(|r| (r.lambda_sq, r.c.clone(), r.t.clone())).collect();
    hits.dedup();
    t.check(rows.iter().all(|r| r.lambda_sq % 5 != 0), || "a hit has 5 ∣ (λ,λ)".into());
    let want = vec![(8, q(620), qr(69, 2)), (54, qr(245, 8), qr(23, 3))];
    for w in &want {
        t.check(hits.contains(w), || format!("missing hit {w:?}"));
    }
    let extra: Vec<String> = hits
        .iter()
        .filter(|h| !want.contains(h))
        .map(|(l, c, tt)| format!("({l},{},{})", llv_core::fmt_q(c), llv_core::fmt_q(tt)))
        .collect();
    t.check(extra.is_empty(), || format!("{} hits beyond the two expected, e.g. {}", extra.len(), extra[..extra.len().min(4)].join(" ")));
    (t, format!("{} hits", hits.len()))
}

#[derive(Clone, Copy)]
enum Gen {
    B,
    D,
    P,
    R,
}

fn random_k3_isometry(r: &mut ChaCha8Rng, k3: &LLVSpace) -> Isometry {
    let len = r.gen_range(1..=4);
    let mut g = Isometry::identity(k3);
    for _ in 0..len {
        let pick = [Gen::B, Gen::D, Gen::P, Gen::R][r.gen_range(0..4)];
        let step = match pick {
            Gen::B => b_lambda(k3, &random_vec(r, 22, 3, 2)).unwrap(),
            Gen::D => duality_d(k3),
            Gen::P => phi_p(k3).unwrap(),
            Gen::R => {
                let i = r.gen_range(0..3);
                let mut v = vec![Q::zero(); 22];
                v[2 * i] = q(1);
                v[2 * i + 1] = q(if r.gen_bool(0.5) { 1 } else { -1 });
                let u = if r.gen_bool(0.25) { k3.triple(q(1), vec![Q::zero(); 22], q(1)) } else { k3.h2_vector(v) };
                reflection(k3, &u).unwrap()
            }
        };
        g = g.compose(&step).unwrap();
    }
    g
}

fn c7_monodromy() -> Tally {
    let mut t = Tally::default();
    for n in 2..=5u32 {
        let s = LLVSpace::hilb(n).unwrap();
        let c = chi_involution(&s).unwrap();
        t.eq(c.compose(&c).unwrap(), Isometry::identity(&s), &format!("χ² on K3^[{n}]"));
        t.check(c.preserves_integral_llv().unwrap(), || format!("χ leaves Λ_X on K3^[{n}]"));
        let o = s.triple(q(4), vec![Q::zero(); s.rank()], q(n as i64 + 3));
        let m = structure_sheaf_minus_delta(&s).unwrap();
        let mut dv = s.delta().unwrap();
        dv.iter_mut().for_each(|x| *x *= q(-4));
        t.eq(m.clone(), s.triple(q(4), dv, q(7 - 3 * n as i64)), "(4,−4δ,7−3n)");
        t.check(c.apply(&o).unwrap().same_line(&m), || format!("χ(ℓ(O)) on K3^[{n}]"));
        t.check(c.apply(&m).unwrap().same_line(&o), || format!("χ(ℓ(O(−δ))) on K3^[{n}]"));
    }
    let k3 = LLVSpace::k3();
    let mut r = rng(7);
    for i in 0..50 {
        let n = 2 + (i % 3) as u32;
        let g = random_k3_isometry(&mut r, &k3);
        let h = random_k3_isometry(&mut r, &k3);
        let lg = dmon_lift(&g, n).unwrap().lifted;
        let lh = dmon_lift(&h, n).unwrap().lifted;
        let lgh = dmon_lift(&g.compose(&h).unwrap(), n).unwrap().lifted;
        t.eq(lgh, lg.compose(&lh).unwrap(), "lift(gh) = lift(g)lift(h)");
        t.check(lg.preserves_integral_llv().unwrap(), || format!("lift leaves Λ_X (word {i})"));
    }
    for n in 2..=4u32 {
        let s = LLVSpace::hilb(n).unwrap();
        for _ in 0..5 {
            let mu = random_vec(&mut r, 22, 4, 3);
            let lifted = dmon_lift(&b_lambda(&k3, &mu).unwrap(), n).unwrap().lifted;
            t.eq(lifted, b_lambda(&s, &s.theta(&mu).unwrap()).unwrap(), "(B_μ)^[n] = B_θ(μ)");
        }
    }
    t
}

fn c8_ek() -> Tally {
    let mut t = Tally::default();
    let s = LLVSpace::hilb(2).unwrap();
    for k in 1..=5i64 {
        let e = ek_pipeline(k).unwrap();
        let d = s.delta().unwrap();
        let comb = |a: &Q, b: &Q| -> Vec<Q> { e.h_tilde.iter().zip(&d).map(|(h, x)| a * h + b * x).collect() };
        t.check(e.after_chi.same_line(&e.generator), || format!("k = {k}: generator off the chain"));
        t.eq(e.rank.clone(), q(45 * k * k), &format!("k = {k} rank"));
        let line = s.triple(q(45 * k * k), comb(&q(-15 * k), &qr(-45 * k * (k - 1), 2)), qr(-45 * k * (k - 2), 4));
        t.eq(e.generator.clone(), line, &format!("k = {k} line"));
        let stated_c1 = comb(&q(-15 * k), &qr(-45 * k * (k + 1), 2));
        t.check(e.c1 == stated_c1, || {
            format!("k = {k}: c₁ = {} but expected −15kh̃−45k(k+1)/2·δ = {}", s.h2.render(&e.c1), s.h2.render(&stated_c1))
        });
    }
    t
}

fn primitive(mut v: Vec<Q>) -> Vec<Q> {
    let g = v.iter().fold(BigInt::zero(), |a, x| a.gcd(x.numer()));
    if !g.is_zero() {
        v.iter_mut().for_each(|x| *x /= Q::from(g.clone()));
    }
    v
}

fn c9_lift_orbit() -> Tally {
    let mut t = Tally::default();
    let s = LLVSpace::hilb(2).unwrap();
    let mut r = rng(9);
    let div = |x: &[Q]| i64::try_from(s.h2.divisibility(x).unwrap()).unwrap();
    let half_sq = |x: &[Q]| i64::try_from((sq(&s, x) / q(2)).to_integer()).unwrap();
    for i in 0..50 {
        let r0_two = i % 2 == 0;
        let k = r.gen_range(1..=24i64);
        let beta = primitive(loop {
            let b = random_vec(&mut r, 23, 4, 4);
            if b.iter().any(|x| !x.is_zero()) {
                break b;
            }
        });
        let (div_b, b2) = (div(&beta), half_sq(&beta));
        let verdict;
        let expect;
        if r0_two {
            let mut alpha = random_vec(&mut r, 23, 3, 3);
            alpha.iter_mut().take(22).for_each(|x| *x *= q(2));
            alpha[22] = q(2 * r.gen_range(-3..=3) + 1);
            let alpha = primitive(alpha);
            let (div_a, a2) = (div(&alpha), half_sq(&alpha));
            let a = 2 * r.gen_range(0..10) + 1;
            verdict = untwisted_lift_check(4, a, div_a, 2 * a2, &[LiftCandidate { div_beta: div_b, beta_sq: 2 * b2, k }]).unwrap()[0];
            expect = div_a == 2 && k % 2 == 1 && div_b == 2 && (b2 - a2).rem_euclid(8) == 0;
        } else {
            let alpha = primitive(loop {
                let a = random_vec(&mut r, 23, 4, 4);
                if a.iter().any(|x| !x.is_zero()) {
                    break a;
                }
            });
            let (div_a, a2) = (div(&alpha), half_sq(&alpha));
            let a = 3 * (3 * r.gen_range(0..5) + r.gen_range(1..=2));
            verdict = untwisted_lift_check(9, a, div_a, 2 * a2, &[LiftCandidate { div_beta: div_b, beta_sq: 2 * b2, k }]).unwrap()[0];
            expect = k % 3 != 0 && (b2 - a2).rem_euclid(3) == 0;
        }
        t.check(verdict == expect, || format!("lift triple {i}: check says {verdict}, brute force {expect}"));
    }
    let images = |x: &[Q], r: &mut ChaCha8Rng| -> Vec<Q> {
        let mut y = x.to_vec();
        for _ in 0..r.gen_range(1..=4) {
            match r.gen_range(0..4) {
                0 => {
                    let u = r.gen_range(0..3);
                    y.swap(2 * u, 2 * u + 1);
                }
                1 => {
                    let (u, w) = (r.gen_range(0..3), r.gen_range(0..3));
                    y.swap(2 * u, 2 * w);
                    y.swap(2 * u + 1, 2 * w + 1);
                }
                2 => y.iter_mut().for_each(|c| *c = -c.clone()),
                _ => {
                    let mut v = vec![Q::zero(); 23];
                    match r.gen_range(0..3) {
                        0 => {
                            let u = r.gen_range(0..3);
                            v[2 * u] = q(1);
                            v[2 * u + 1] = q(-1);
                        }
                        1 => v[6 + r.gen_range(0..16)] = q(1),
                        _ => v[22] = q(1),
                    }
                    let f = q(2) * s.h2.pair(&y, &v).unwrap() / sq(&s, &v);
                    y = y.iter().zip(&v).map(|(a, b)| a - &f * b).collect();
                }
            }
        }
        y
    };
    for i in 0..100 {
        let x = primitive(loop {
            let a = random_vec(&mut r, 23, 4, 4);
            if a.iter().any(|c| !c.is_zero()) {
                break a;
            }
        });
        let y = if i % 2 == 0 {
            images(&x, &mut r)
        } else {
            primitive(loop {
                let a = random_vec(&mut r, 23, 4, 4);
                if a.iter().any(|c| !c.is_zero()) {
                    break a;
                }
            })
        };
        let same = orbit_invariants_equal(&s.h2, &x, &y).unwrap();
        let inv_eq = sq(&s, &x) == sq(&s, &y) && div(&x) == div(&y);
        if i % 2 == 0 {
            t.check(same, || format!("isometric pair {i} reported as different orbits"));
        }
        t.check(!same || inv_eq, || format!("pair {i}: equal orbits but different square or div"));
    }
    t
}

fn c10_verify() -> (Tally, String) {
    let mut t = Tally::default();
    let out = Command::new(env!("CARGO_BIN_EXE_llv")).args(["--json", "verify"]).output().expect("llv runs");
    t.eq(out.status.code(), Some(0), "exit status");
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).expect("json report");
    let total = v["total"].as_u64().unwrap_or(0);
    let failed = v["failed"].as_u64().unwrap_or(u64::MAX);
    t.check(total >= 40, || format!("only {total} golden values"));
    t.eq(failed, 0, "failed checks");
    (t, format!("{total} golden values"))
}

fn run(n: usize, name: &str, f: impl FnOnce() -> (Tally, String)) -> bool {
    let start = std::time::Instant::now();
    let res = catch_unwind(AssertUnwindSafe(f));
    let secs = start.elapsed().as_secs_f64();
    match res {
        Ok((t, note)) if t.failures.is_empty() => {
            let note = if note.is_empty() { String::new() } else { format!(", {note}") };
            println!("criterion {n} PASS: {name} ({} exact checks{note}, {secs:.1}s)", t.checks);
            true
        }
        Ok((t, _)) => {
            let shown: Vec<&String> = t.failures.iter().filter(|s| !s.is_empty()).collect();
            println!(
                "criterion {n} FAIL: {name} ({} of {} checks failed: {})",
                t.failures.len(),
                t.checks,
                shown.iter().map(|s| s.as_str()).collect::<Vec<_>>().join("; ")
            );
            false
        }
        Err(p) => {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            println!("criterion {n} FAIL: {name} (panicked: {msg})");
            false
        }
    }
}

fn plain(f: fn() -> Tally) -> impl FnOnce() -> (Tally, String) {
    move || (f(), String::new())
}

fn main() {
    std::panic::set_hook(Box::new(|_| {}));
    let results = [
        run(1, "cohomology ring golden set on K3^[2]", plain(c1_ring)),
        run(2, "structure-sheaf lines, closed form and harmonic round trip", plain(c2_structure_sheaf)),
        run(3, "harmonic rules against the full-basis oracle", plain(c3_oracle)),
        run(4, "ΦO family: χ values, γ invariants, Ψ identity, Segre enumeration", plain(c4_phio)),
        run(5, "isotropic family: (γ,γ)=0, gates, square χ", plain(c5_isotropic)),
        run(6, "lagrangian data, Hodge relations and the admissibility search", c6_lagrangian),
        run(7, "χ-involution and the derived-monodromy lift", plain(c7_monodromy)),
        run(8, "E_k pipeline (rank, c₁, line) for k = 1..5", plain(c8_ek)),
        run(9, "untwisted-lift criteria and orbit invariants", plain(c9_lift_orbit)),
        run(10, "llv verify", c10_verify),
    ];
    let passed = results.iter().filter(|&&b| b).count();
    let failing: Vec<String> =
        results.iter().enumerate().filter(|(_, &b)| !b).map(|(i, _)| (i + 1).to_string()).collect();
    if failing.is_empty() {
        println!("acceptance: {passed}/10 criteria passed");
    } else {
        println!("acceptance: {passed}/10 criteria passed; failing: {}", failing.join(", "));
    }
    if !failing.is_empty() && std::env::var("LLV_ACCEPTANCE_STRICT").is_ok_and(|v| v == "1") {
        std::process::exit(1);
    }
}
