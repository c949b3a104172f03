//! Brute-force model of `Sym*(V)` over an explicit orthogonal basis.
//!
//! Polynomials are stored on the full monomial basis. `Δ` is computed
//! directly from `(eᵢ,eⱼ) = dᵢδᵢⱼ` and the harmonic projection solves the
//! defining linear system by dense Gaussian elimination. Nothing here uses the
//! closed-form rules of [`crate::harmonic`]; it exists to check them.

use std::collections::BTreeMap;

use num::Zero;

use crate::error::{Error, Result};
use crate::linalg::{solve, Mat};
use crate::rational::{q, Q};

/// Polynomial in `nvars` commuting variables, keyed by exponent vectors.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Poly {
    pub nvars: usize,
    pub terms: BTreeMap<Vec<u8>, Q>,
}

impl Poly {
    pub fn zero(nvars: usize) -> Self {
        Poly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: Q) -> Self {
        let mut p = Poly::zero(nvars);
        p.add_term(vec![0; nvars], c);
        p
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        let mut p = Poly::zero(nvars);
        p.add_term(e, q(1));
        p
    }

    /// `Σ cᵢ xᵢ`.
    pub fn linear(coords: &[Q]) -> Self {
        let n = coords.len();
        let mut p = Poly::zero(n);
        for (i, c) in coords.iter().enumerate() {
            let mut e = vec![0; n];
            e[i] = 1;
            p.add_term(e, c.clone());
        }
        p
    }

    pub fn add_term(&mut self, e: Vec<u8>, c: Q) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(e) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add(&self, o: &Poly) -> Poly {
        let mut p = self.clone();
        for (e, c) in &o.terms {
            p.add_term(e.clone(), c.clone());
        }
        p
    }

    pub fn sub(&self, o: &Poly) -> Poly {
        self.add(&o.scale(&q(-1)))
    }

    pub fn scale(&self, c: &Q) -> Poly {
        let mut p = Poly::zero(self.nvars);
        if c.is_zero() {
            return p;
        }
        for (e, x) in &self.terms {
            p.terms.insert(e.clone(), x * c);
        }
        p
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        let mut acc: BTreeMap<Vec<u8>, Q> = BTreeMap::new();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &o.terms {
                let e: Vec<u8> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                *acc.entry(e).or_insert_with(Q::zero) += c1 * c2;
            }
        }
        acc.retain(|_, c| !c.is_zero());
        Poly { nvars: self.nvars, terms: acc }
    }

    pub fn pow(&self, n: u32) -> Poly {
        let mut p = Poly::constant(self.nvars, q(1));
        for _ in 0..n {
            p = p.mul(self);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, e: &[u8]) -> Q {
        self.terms.get(e).cloned().unwrap_or_else(Q::zero)
    }
}

/// All exponent vectors of total degree `d` in `n` variables.
pub fn monomials(n: usize, d: u32) -> Vec<Vec<u8>> {
    fn rec(n: usize, d: u32, prefix: &mut Vec<u8>, out: &mut Vec<Vec<u8>>) {
        if prefix.len() == n - 1 {
            prefix.push(d as u8);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for a in (0..=d).rev() {
            prefix.push(a as u8);
            rec(n, d - a, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if n == 0 {
        return out;
    }
    rec(n, d, &mut Vec::new(), &mut out);
    out
}

/// `Sym*(V)` with `V` spanned by an orthogonal basis of squares `diag`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FullSym {
    diag: Vec<Q>,
}

impl FullSym {
    pub fn new(diag: Vec<Q>) -> Result<Self> {
        if diag.iter().any(|d| d.is_zero()) {
            return Err(Error::Invalid("orthogonal basis must be anisotropic".into()));
        }
        Ok(FullSym { diag })
    }

    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    pub fn diag(&self) -> &[Q] {
        &self.diag
    }

    /// `Δ(e^a) = Σᵢ C(aᵢ,2)·dᵢ·e^{a−2εᵢ}`.
    pub fn delta(&self, p: &Poly) -> Poly {
        let mut out = Poly::zero(self.dim());
        for (e, c) in &p.terms {
            for (i, d) in self.diag.iter().enumerate() {
                let a = e[i] as i64;
                if a < 2 {
                    continue;
                }
                let mut e2 = e.clone();
                e2[i] -= 2;
                out.add_term(e2, c * d * q(a * (a - 1) / 2));
            }
        }
        out
    }

    /// `q̃ = (1/N)Σ eᵢ²/dᵢ`.
    pub fn qtilde(&self) -> Poly {
        let n = self.dim();
        let mut p = Poly::zero(n);
        for (i, d) in self.diag.iter().enumerate() {
            let mut e = vec![0; n];
            e[i] = 2;
            p.add_term(e, q(1) / (d * q(n as i64)));
        }
        p
    }

    /// Harmonic part of a homogeneous polynomial of degree `deg`: solves
    /// `Δ(q̃·y) = Δ(x)` over the full monomial basis of degree `deg − 2`.
    pub fn project(&self, x: &Poly, deg: u32) -> Result<Poly> {
        if deg < 2 {
            return Ok(x.clone());
        }
        let n = self.dim();
        let basis = monomials(n, deg - 2);
        let index: BTreeMap<&Vec<u8>, usize> = basis.iter().enumerate().map(|(i, e)| (e, i)).collect();
        let qt = self.qtilde();
        let k = basis.len();
        let mut a = Mat::zeros(k, k);
        for (col, e) in basis.iter().enumerate() {
            let mut m = Poly::zero(n);
            m.add_term(e.clone(), q(1));
            let img = self.delta(&qt.mul(&m));
            for (f, c) in &img.terms {
                let row = *index
                    .get(f)
                    .ok_or_else(|| Error::Projection("Δ(q̃·m) left the degree".into()))?;
                a.set(row, col, c.clone());
            }
        }
        let dx = self.delta(x);
        let mut b = vec![Q::zero(); k];
        for (f, c) in &dx.terms {
            let row = *index.get(f).ok_or_else(|| Error::Projection("input not homogeneous".into()))?;
            b[row] = c.clone();
        }
        let y = solve(&a, &b).map_err(|e| Error::Projection(e.to_string()))?;
        let mut yp = Poly::zero(n);
        for (e, c) in basis.into_iter().zip(y) {
            yp.add_term(e, c);
        }
        Ok(x.sub(&qt.mul(&yp)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn monomial_counts() {
        assert_eq!(monomials(4, 2).len(), 10);
        assert_eq!(monomials(8, 2).len(), 36);
        assert_eq!(monomials(3, 0), vec![vec![0, 0, 0]]);
    }

    #[test]
    fn qtilde_has_unit_laplacian() {
        let fs = FullSym::new(vec![q(1), q(-2), q(3), q(-1)]).unwrap();
        assert_eq!(fs.delta(&fs.qtilde()), Poly::constant(4, q(1)));
    }

    #[test]
    fn projection_of_square() {
        let fs = FullSym::new(vec![q(2), q(-1), q(-1)]).unwrap();
        let g = Poly::linear(&[q(1), q(2), q(-1)]);
        let gg = q(2) - q(4) - q(1);
        let want = g.mul(&g).sub(&fs.qtilde().scale(&gg));
        let got = fs.project(&g.mul(&g), 2).unwrap();
        assert_eq!(got, want);
        assert!(fs.delta(&got).is_zero());
        let p3 = fs.project(&g.pow(3), 3).unwrap();
        assert!(fs.delta(&p3).is_zero());
        assert_eq!(fs.project(&p3, 3).unwrap(), p3);
    }
}
