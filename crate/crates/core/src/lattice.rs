//! BBF lattices, the extended LLV space, divisibility and the integral LLV lattice.
//!
//! Basis order of every preset: the hyperbolic planes `U` first (labels
//! `e1,f1,e2,f2,e3,f3`), then the `E8(-1)` blocks (labels `x1..x8`, `y1..y8`),
//! then the class `delta` last. Vectors of the LLV space are triples
//! `(r, v, s) = r·alpha + v + s·beta`.

use num::{BigInt, Integer, One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{diagonalize, Mat};
use crate::rational::{factorial, fmt_combination, fmt_q, gcd_all, parse_q, q, qi, serde_q, serde_qvec, Q};

/// Negated E8 Cartan matrix, Bourbaki numbering (branch node 4 joined to node 2).
pub const E8_NEG: [[i64; 8]; 8] = [
    [-2, 0, 1, 0, 0, 0, 0, 0],
    [0, -2, 0, 1, 0, 0, 0, 0],
    [1, 0, -2, 1, 0, 0, 0, 0],
    [0, 1, 1, -2, 1, 0, 0, 0],
    [0, 0, 0, 1, -2, 1, 0, 0],
    [0, 0, 0, 0, 1, -2, 1, 0],
    [0, 0, 0, 0, 0, 1, -2, 1],
    [0, 0, 0, 0, 0, 0, 1, -2],
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Preset {
    U,
    E8Neg,
    K3,
    HilbK3(u32),
    Kum(u32),
}

impl Preset {
    /// Parses `U`, `E8neg`, `K3`, `HilbK3` and `Kum`/`Kummer` (the latter two need `n`).
    pub fn parse(name: &str, n: Option<u32>) -> Result<Preset> {
        let need_n = || n.ok_or_else(|| Error::Parse(format!("preset `{name}` needs n")));
        match name.to_ascii_lowercase().as_str() {
            "u" => Ok(Preset::U),
            "e8neg" | "e8(-1)" | "e8" => Ok(Preset::E8Neg),
            "k3" => Ok(Preset::K3),
            "hilbk3" | "hilb" | "k3n" => Ok(Preset::HilbK3(need_n()?)),
            "kum" | "kummer" => Ok(Preset::Kum(need_n()?)),
            _ => Err(Error::UnknownPreset(name.to_string())),
        }
    }
}

/// Free abelian group with an integral symmetric Gram matrix.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuadLattice {
    pub name: String,
    pub rank: usize,
    /// Row-major Gram matrix.
    pub gram: Vec<Vec<i64>>,
    pub labels: Vec<String>,
}

impl QuadLattice {
    pub fn new(name: impl Into<String>, gram: Vec<Vec<i64>>, labels: Vec<String>) -> Result<Self> {
        let rank = gram.len();
        if labels.len() != rank {
            return Err(Error::Dimension { expected: rank, got: labels.len() });
        }
        for (i, row) in gram.iter().enumerate() {
            if row.len() != rank {
                return Err(Error::Dimension { expected: rank, got: row.len() });
            }
            for (j, x) in row.iter().enumerate() {
                if *x != gram[j][i] {
                    return Err(Error::Invalid(format!("gram not symmetric at ({i},{j})")));
                }
            }
        }
        Ok(QuadLattice { name: name.into(), rank, gram, labels })
    }

    pub fn u() -> Self {
        Self::u_labelled(1)
    }

    fn u_labelled(k: usize) -> Self {
        QuadLattice {
            name: "U".into(),
            rank: 2,
            gram: vec![vec![0, 1], vec![1, 0]],
            labels: vec![format!("e{k}"), format!("f{k}")],
        }
    }

    pub fn e8neg() -> Self {
        Self::e8_labelled(&E8_NEG, "x")
    }

    fn e8_labelled(e8: &[[i64; 8]; 8], prefix: &str) -> Self {
        QuadLattice {
            name: "E8(-1)".into(),
            rank: 8,
            gram: e8.iter().map(|r| r.to_vec()).collect(),
            labels: (1..=8).map(|i| format!("{prefix}{i}")).collect(),
        }
    }

    pub fn rank_one(name: &str, label: &str, square: i64) -> Self {
        QuadLattice { name: name.into(), rank: 1, gram: vec![vec![square]], labels: vec![label.into()] }
    }

    pub fn direct_sum(name: impl Into<String>, parts: &[QuadLattice]) -> Self {
        let rank: usize = parts.iter().map(|p| p.rank).sum();
        let mut gram = vec![vec![0; rank]; rank];
        let mut labels = Vec::with_capacity(rank);
        let mut off = 0;
        for p in parts {
            for i in 0..p.rank {
                for j in 0..p.rank {
                    gram[off + i][off + j] = p.gram[i][j];
                }
            }
            labels.extend(p.labels.iter().cloned());
            off += p.rank;
        }
        QuadLattice { name: name.into(), rank, gram, labels }
    }

    /// `U^3 ⊕ E8(-1)^2` built from the given E8 block.
    pub fn k3_with(e8: &[[i64; 8]; 8]) -> Result<Self> {
        let l = Self::direct_sum(
            "K3",
            &[
                Self::u_labelled(1),
                Self::u_labelled(2),
                Self::u_labelled(3),
                Self::e8_labelled(e8, "x"),
                Self::e8_labelled(e8, "y"),
            ],
        );
        Self::new(l.name, l.gram, l.labels)
    }

    pub fn k3() -> Self {
        Self::k3_with(&E8_NEG).expect("E8 constant is symmetric")
    }

    /// `K3 ⊕ <2-2n>`, `delta` last.
    pub fn hilb_with(n: u32, e8: &[[i64; 8]; 8]) -> Result<Self> {
        if n < 2 {
            return Err(Error::Invalid("HilbK3 needs n >= 2 (use K3 for n = 1)".into()));
        }
        let d = Self::rank_one("<2-2n>", "delta", 2 - 2 * n as i64);
        Ok(Self::direct_sum(format!("HilbK3({n})"), &[Self::k3_with(e8)?, d]))
    }

    pub fn hilb(n: u32) -> Result<Self> {
        Self::hilb_with(n, &E8_NEG)
    }

    /// `U^3 ⊕ <-2n-2>`, `delta` last.
    pub fn kum(n: u32) -> Result<Self> {
        if n < 2 {
            return Err(Error::Invalid("Kum needs n >= 2".into()));
        }
        let d = Self::rank_one("<-2n-2>", "delta", -2 * n as i64 - 2);
        Ok(Self::direct_sum(
            format!("Kum({n})"),
            &[Self::u_labelled(1), Self::u_labelled(2), Self::u_labelled(3), d],
        ))
    }

    pub fn gram_mat(&self) -> Mat {
        Mat::from_i64(&self.gram)
    }

    /// (positive, negative, zero) counts computed by exact diagonalization.
    pub fn signature(&self) -> (usize, usize, usize) {
        diagonalize(&self.gram_mat()).expect("gram is symmetric").signature()
    }

    pub fn is_even(&self) -> bool {
        (0..self.rank).all(|i| self.gram[i][i] % 2 == 0)
    }

    fn check_len(&self, v: &[Q]) -> Result<()> {
        if v.len() != self.rank {
            return Err(Error::Dimension { expected: self.rank, got: v.len() });
        }
        Ok(())
    }

    /// `G·v`.
    pub fn lower(&self, v: &[Q]) -> Vec<Q> {
        (0..self.rank)
            .map(|i| {
                let mut s = Q::zero();
                for (j, x) in v.iter().enumerate() {
                    let g = self.gram[i][j];
                    if g != 0 && !x.is_zero() {
                        s += x * Q::from_integer(g.into());
                    }
                }
                s
            })
            .collect()
    }

    pub fn pair(&self, x: &[Q], y: &[Q]) -> Result<Q> {
        self.check_len(x)?;
        self.check_len(y)?;
        Ok(self.ip(x, y))
    }

    pub(crate) fn ip(&self, x: &[Q], y: &[Q]) -> Q {
        debug_assert_eq!(x.len(), self.rank);
        let gx = self.lower(x);
        gx.iter().zip(y).map(|(a, b)| a * b).fold(Q::zero(), |s, t| s + t)
    }

    pub fn basis_vector(&self, i: usize) -> Vec<Q> {
        let mut v = vec![Q::zero(); self.rank];
        v[i] = Q::one();
        v
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// Greatest common divisor of the pairings of `x` with the basis.
    pub fn divisibility(&self, x: &[Q]) -> Result<BigInt> {
        self.check_len(x)?;
        let xi = integral(x)?;
        if xi.iter().all(|c| c.is_zero()) {
            return Err(Error::ZeroVector);
        }
        let gx: Vec<BigInt> = self.lower(x).iter().map(|c| c.numer().clone()).collect();
        Ok(gcd_all(&gx))
    }

    pub fn is_primitive(&self, x: &[Q]) -> Result<bool> {
        self.check_len(x)?;
        is_primitive(x)
    }

    /// Parses a combination like `2*e1+3*f1-delta` or `1/2*x3`.
    pub fn parse_vector(&self, expr: &str) -> Result<Vec<Q>> {
        parse_combination(expr, &self.labels)
    }

    pub fn render(&self, v: &[Q]) -> String {
        fmt_combination(v, &self.labels)
    }
}

fn integral(x: &[Q]) -> Result<Vec<BigInt>> {
    x.iter()
        .map(|c| if c.is_integer() { Ok(c.numer().clone()) } else { Err(Error::NonIntegral) })
        .collect()
}

/// True iff the coordinates of the integral vector `x` have gcd 1.
pub fn is_primitive(x: &[Q]) -> Result<bool> {
    let xi = integral(x)?;
    let g = gcd_all(&xi);
    if g.is_zero() {
        return Err(Error::ZeroVector);
    }
    Ok(g.is_one())
}

/// Parses `c1*l1 + c2*l2 - ...` against the given labels.
pub fn parse_combination(expr: &str, labels: &[String]) -> Result<Vec<Q>> {
    let mut v = vec![Q::zero(); labels.len()];
    let s: String = expr.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return Err(Error::Parse("empty vector expression".into()));
    }
    if s == "0" {
        return Ok(v);
    }
    let mut terms = Vec::new();
    let mut cur = String::new();
    for (i, ch) in s.chars().enumerate() {
        if (ch == '+' || ch == '-') && i > 0 && !cur.is_empty() {
            terms.push(std::mem::take(&mut cur));
        }
        cur.push(ch);
    }
    terms.push(cur);
    for t in terms {
        let (neg, body) = match t.strip_prefix('-') {
            Some(b) => (true, b),
            None => (false, t.strip_prefix('+').unwrap_or(&t)),
        };
        let (coef, label) = match body.rsplit_once('*') {
            Some((c, l)) => (parse_q(c)?, l),
            None => (Q::one(), body),
        };
        let idx = labels
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| Error::Parse(format!("unknown basis label `{label}`")))?;
        v[idx] += if neg { -coef } else { coef };
    }
    Ok(v)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum DefType {
    K3,
    Hilb,
    Kummer,
}

/// Rational LLV space `Q·alpha ⊕ H²(X,Q) ⊕ Q·beta`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LLVSpace {
    pub h2: QuadLattice,
    pub n: u32,
    #[serde(with = "serde_q")]
    pub fujiki: Q,
    pub dtype: DefType,
}

/// `r·alpha + v + s·beta`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LLVVector {
    #[serde(with = "serde_q")]
    pub r: Q,
    #[serde(with = "serde_qvec")]
    pub v: Vec<Q>,
    #[serde(with = "serde_q")]
    pub s: Q,
}

impl LLVVector {
    pub fn new(r: Q, v: Vec<Q>, s: Q) -> Self {
        LLVVector { r, v, s }
    }

    pub fn zero(rank: usize) -> Self {
        LLVVector { r: Q::zero(), v: vec![Q::zero(); rank], s: Q::zero() }
    }

    pub fn coords(&self) -> Vec<Q> {
        let mut c = Vec::with_capacity(self.v.len() + 2);
        c.push(self.r.clone());
        c.extend(self.v.iter().cloned());
        c.push(self.s.clone());
        c
    }

    pub fn from_coords(c: &[Q]) -> Self {
        let k = c.len();
        LLVVector { r: c[0].clone(), v: c[1..k - 1].to_vec(), s: c[k - 1].clone() }
    }

    pub fn add(&self, o: &LLVVector) -> LLVVector {
        LLVVector {
            r: &self.r + &o.r,
            v: self.v.iter().zip(&o.v).map(|(a, b)| a + b).collect(),
            s: &self.s + &o.s,
        }
    }

    pub fn sub(&self, o: &LLVVector) -> LLVVector {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> LLVVector {
        self.scale(&q(-1))
    }

    pub fn scale(&self, c: &Q) -> LLVVector {
        LLVVector { r: &self.r * c, v: self.v.iter().map(|x| x * c).collect(), s: &self.s * c }
    }

    pub fn is_zero(&self) -> bool {
        self.r.is_zero() && self.s.is_zero() && self.v.iter().all(|x| x.is_zero())
    }

    pub fn is_integral(&self) -> bool {
        self.coords().iter().all(|x| x.is_integer())
    }

    /// Positive rescaling to a primitive integral vector, first nonzero coordinate positive.
    pub fn primitive(&self) -> Result<LLVVector> {
        let c = self.coords();
        let first = c.iter().find(|x| !x.is_zero()).ok_or(Error::ZeroVector)?;
        let lcm = c.iter().fold(BigInt::one(), |l, x| l.lcm(x.denom()));
        let ints: Vec<BigInt> = c.iter().map(|x| (x * qi(&lcm)).numer().clone()).collect();
        let g = gcd_all(&ints);
        let mut f = qi(&lcm) / qi(&g);
        if first.is_negative() {
            f = -f;
        }
        Ok(self.scale(&f))
    }

    /// Projective equality of the spanned lines.
    pub fn same_line(&self, o: &LLVVector) -> bool {
        match (self.primitive(), o.primitive()) {
            (Ok(a), Ok(b)) => a == b,
            _ => false,
        }
    }

    /// Renders as `(r,λ,s)` with `λ` against basis labels.
    pub fn render(&self, labels: &[String]) -> String {
        format!("({},{},{})", fmt_q(&self.r), fmt_combination(&self.v, labels), fmt_q(&self.s))
    }
}

impl LLVSpace {
    pub fn new(h2: QuadLattice, n: u32, fujiki: Q, dtype: DefType) -> Self {
        LLVSpace { h2, n, fujiki, dtype }
    }

    pub fn k3() -> Self {
        Self::new(QuadLattice::k3(), 1, q(1), DefType::K3)
    }

    pub fn hilb(n: u32) -> Result<Self> {
        Ok(Self::new(QuadLattice::hilb(n)?, n, q(1), DefType::Hilb))
    }

    pub fn hilb_with(n: u32, e8: &[[i64; 8]; 8]) -> Result<Self> {
        Ok(Self::new(QuadLattice::hilb_with(n, e8)?, n, q(1), DefType::Hilb))
    }

    pub fn kummer(n: u32) -> Result<Self> {
        Ok(Self::new(QuadLattice::kum(n)?, n, q(n as i64 + 1), DefType::Kummer))
    }

    /// LLV space attached to a preset. `U` and `E8neg` are treated as `n = 1`
    /// surfaces with Fujiki constant 1.
    pub fn from_preset(p: Preset) -> Result<Self> {
        match p {
            Preset::U => Ok(Self::new(QuadLattice::u(), 1, q(1), DefType::K3)),
            Preset::E8Neg => Ok(Self::new(QuadLattice::e8neg(), 1, q(1), DefType::K3)),
            Preset::K3 => Ok(Self::k3()),
            Preset::HilbK3(n) => Self::hilb(n),
            Preset::Kum(n) => Self::kummer(n),
        }
    }

    pub fn rank(&self) -> usize {
        self.h2.rank
    }

    /// `dim H̃ = rank(H²) + 2`.
    pub fn dim(&self) -> usize {
        self.h2.rank + 2
    }

    pub fn beta_index(&self) -> usize {
        self.h2.rank + 1
    }

    pub fn alpha(&self) -> LLVVector {
        LLVVector::new(q(1), vec![Q::zero(); self.rank()], Q::zero())
    }

    pub fn beta(&self) -> LLVVector {
        LLVVector::new(Q::zero(), vec![Q::zero(); self.rank()], q(1))
    }

    pub fn h2_vector(&self, v: Vec<Q>) -> LLVVector {
        LLVVector::new(Q::zero(), v, Q::zero())
    }

    pub fn triple(&self, r: Q, v: Vec<Q>, s: Q) -> LLVVector {
        LLVVector::new(r, v, s)
    }

    /// The last basis vector of `HilbK3(n)` and `Kum(n)`.
    pub fn delta(&self) -> Result<Vec<Q>> {
        match self.dtype {
            DefType::K3 => Err(Error::WrongType("K3 has no delta class".into())),
            _ => Ok(self.h2.basis_vector(self.rank() - 1)),
        }
    }

    /// `θ`: includes a K3 class as the orthogonal complement of `delta`.
    pub fn theta(&self, v: &[Q]) -> Result<Vec<Q>> {
        if self.dtype != DefType::Hilb {
            return Err(Error::WrongType("theta needs a HilbK3 space".into()));
        }
        if v.len() != 22 {
            return Err(Error::Dimension { expected: 22, got: v.len() });
        }
        let mut out = v.to_vec();
        out.push(Q::zero());
        Ok(out)
    }

    /// `θ̃` on LLV vectors: fixes alpha and beta.
    pub fn theta_tilde(&self, x: &LLVVector) -> Result<LLVVector> {
        Ok(LLVVector::new(x.r.clone(), self.theta(&x.v)?, x.s.clone()))
    }

    /// Gram matrix of `H̃` in the basis `(alpha, h2.., beta)`.
    pub fn gram_tilde(&self) -> Mat {
        let d = self.dim();
        let mut g = Mat::zeros(d, d);
        for i in 0..self.rank() {
            for j in 0..self.rank() {
                let x = self.h2.gram[i][j];
                if x != 0 {
                    g.set(i + 1, j + 1, q(x));
                }
            }
        }
        g.set(0, d - 1, q(-1));
        g.set(d - 1, 0, q(-1));
        g
    }

    fn check(&self, x: &LLVVector) -> Result<()> {
        if x.v.len() != self.rank() {
            return Err(Error::Dimension { expected: self.rank(), got: x.v.len() });
        }
        Ok(())
    }

    /// `vᵀGv′ − r·s′ − r′·s`.
    pub fn pair(&self, x: &LLVVector, y: &LLVVector) -> Result<Q> {
        self.check(x)?;
        self.check(y)?;
        Ok(self.ip(x, y))
    }

    pub(crate) fn ip(&self, x: &LLVVector, y: &LLVVector) -> Q {
        self.h2.ip(&x.v, &y.v) - &x.r * &y.s - &y.r * &x.s
    }

    pub fn square(&self, x: &LLVVector) -> Result<Q> {
        self.pair(x, x)
    }

    /// `∫ λ^{2n} = c_X (2n)!/(2ⁿ n!) (λ,λ)ⁿ`.
    pub fn fujiki_integral(&self, lambda: &[Q]) -> Result<Q> {
        let l2 = self.h2.pair(lambda, lambda)?;
        let n = self.n;
        let coef = qi(&factorial(2 * n)) / (qi(&factorial(n)) * Q::from_integer(BigInt::from(2).pow(n)));
        Ok(&self.fujiki * coef * num::pow(l2, n as usize))
    }

    /// `B_μ(r,λ,s) = (r, λ + rμ, s + (μ,λ) + r(μ,μ)/2)`.
    pub fn b_apply(&self, mu: &[Q], x: &LLVVector) -> LLVVector {
        let mm = self.h2.ip(mu, mu);
        let ml = self.h2.ip(mu, &x.v);
        LLVVector::new(
            x.r.clone(),
            x.v.iter().zip(mu).map(|(a, m)| a + &x.r * m).collect(),
            &x.s + ml + &x.r * mm / q(2),
        )
    }

    fn require_hilb(&self) -> Result<()> {
        if self.dtype != DefType::Hilb {
            return Err(Error::WrongType(format!(
                "integral LLV lattice needs a HilbK3 space, got {}",
                self.h2.name
            )));
        }
        Ok(())
    }

    fn half_delta(&self) -> Result<Vec<Q>> {
        Ok(self.delta()?.iter().map(|x| x / q(2)).collect())
    }

    /// `x ∈ Λ_X = B_{-δ/2}(Zα ⊕ H²(X,Z) ⊕ Zβ)`.
    pub fn in_integral_llv(&self, x: &LLVVector) -> Result<bool> {
        self.require_hilb()?;
        self.check(x)?;
        Ok(self.b_apply(&self.half_delta()?, x).is_integral())
    }

    /// Divisibility of `x` in `Λ_X`; errors unless `x ∈ Λ_X` is nonzero.
    pub fn div_in_integral_llv(&self, x: &LLVVector) -> Result<BigInt> {
        self.require_hilb()?;
        self.check(x)?;
        let y = self.b_apply(&self.half_delta()?, x);
        if !y.is_integral() {
            return Err(Error::NonIntegral);
        }
        if y.is_zero() {
            return Err(Error::ZeroVector);
        }
        let g = self.gram_tilde();
        let gy = g.apply(&y.coords());
        Ok(gcd_all(&gy.iter().map(|c| c.numer().clone()).collect::<Vec<_>>()))
    }

    /// Primitivity of `x ∈ Λ_X`.
    pub fn primitive_in_integral_llv(&self, x: &LLVVector) -> Result<bool> {
        self.require_hilb()?;
        let y = self.b_apply(&self.half_delta()?, x);
        is_primitive(&y.coords())
    }

    /// A K3-part vector `e1 + (m/2)·f1` of the requested even square, embedded in H².
    pub fn vector_with_square(&self, square: &Q) -> Result<Vec<Q>> {
        let half = square / q(2);
        if !half.is_integer() {
            return Err(Error::Invalid(format!(
                "no class of square {} in an even lattice",
                fmt_q(square)
            )));
        }
        let (e, f) = (self.h2.index_of("e1"), self.h2.index_of("f1"));
        let (Some(e), Some(f)) = (e, f) else {
            return Err(Error::WrongType("lattice has no U summand".into()));
        };
        let mut v = vec![Q::zero(); self.rank()];
        v[e] = q(1);
        v[f] = half;
        Ok(v)
    }
}

/// Same-orbit test by the invariants (square, divisibility) for primitive
/// classes of divisibility 1 or 2.
pub fn orbit_invariants_equal(lattice: &QuadLattice, x: &[Q], y: &[Q]) -> Result<bool> {
    for v in [x, y] {
        if !lattice.is_primitive(v)? {
            return Err(Error::NotPrimitive);
        }
    }
    let (dx, dy) = (lattice.divisibility(x)?, lattice.divisibility(y)?);
    for d in [&dx, &dy] {
        if *d > BigInt::from(2) {
            return Err(Error::Inconclusive(format!(
                "divisibility {d} outside {{1,2}}: orbit lemma does not apply"
            )));
        }
    }
    Ok(dx == dy && lattice.ip(x, x) == lattice.ip(y, y))
}
