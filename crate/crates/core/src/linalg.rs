//! Dense exact matrices over `Q`.

use num::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{serde_qmat, Q};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Mat {
    #[serde(with = "serde_qmat")]
    rows: Vec<Vec<Q>>,
}

impl Mat {
    pub fn from_rows(rows: Vec<Vec<Q>>) -> Result<Self> {
        let n = rows.first().map_or(0, |r| r.len());
        if let Some(r) = rows.iter().find(|r| r.len() != n) {
            return Err(Error::Dimension { expected: n, got: r.len() });
        }
        Ok(Mat { rows })
    }

    pub fn zeros(n: usize, m: usize) -> Self {
        Mat { rows: vec![vec![Q::zero(); m]; n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut a = Mat::zeros(n, n);
        for i in 0..n {
            a.rows[i][i] = Q::one();
        }
        a
    }

    pub fn from_i64(rows: &[Vec<i64>]) -> Self {
        Mat {
            rows: rows
                .iter()
                .map(|r| r.iter().map(|&x| Q::from_integer(x.into())).collect())
                .collect(),
        }
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.rows.first().map_or(0, |r| r.len())
    }

    pub fn is_square(&self) -> bool {
        self.nrows() == self.ncols()
    }

    pub fn get(&self, i: usize, j: usize) -> &Q {
        &self.rows[i][j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: Q) {
        self.rows[i][j] = x;
    }

    pub fn rows(&self) -> &[Vec<Q>] {
        &self.rows
    }

    pub fn transpose(&self) -> Mat {
        let (n, m) = (self.nrows(), self.ncols());
        let mut t = Mat::zeros(m, n);
        for i in 0..n {
            for j in 0..m {
                t.rows[j][i] = self.rows[i][j].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &Mat) -> Mat {
        assert_eq!(self.ncols(), other.nrows(), "matrix shape mismatch");
        let (n, k, m) = (self.nrows(), self.ncols(), other.ncols());
        let mut out = Mat::zeros(n, m);
        for i in 0..n {
            for l in 0..k {
                let a = &self.rows[i][l];
                if a.is_zero() {
                    continue;
                }
                for j in 0..m {
                    let b = &other.rows[l][j];
                    if !b.is_zero() {
                        out.rows[i][j] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn apply(&self, v: &[Q]) -> Vec<Q> {
        assert_eq!(self.ncols(), v.len(), "vector length mismatch");
        self.rows
            .iter()
            .map(|r| {
                r.iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .map(|(a, b)| a * b)
                    .fold(Q::zero(), |s, x| s + x)
            })
            .collect()
    }

    pub fn add(&self, other: &Mat) -> Mat {
        let rows = self
            .rows
            .iter()
            .zip(&other.rows)
            .map(|(a, b)| a.iter().zip(b).map(|(x, y)| x + y).collect())
            .collect();
        Mat { rows }
    }

    pub fn scale(&self, c: &Q) -> Mat {
        Mat {
            rows: self
                .rows
                .iter()
                .map(|r| r.iter().map(|x| x * c).collect())
                .collect(),
        }
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square() && *self == self.transpose()
    }

    pub fn is_integral(&self) -> bool {
        self.rows.iter().flatten().all(|x| x.is_integer())
    }

    /// Determinant by fraction-exact Gaussian elimination.
    pub fn det(&self) -> Q {
        assert!(self.is_square(), "det of non-square matrix");
        let n = self.nrows();
        let mut a = self.rows.clone();
        let mut det = Q::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&r| !a[r][c].is_zero()) else {
                return Q::zero();
            };
            if p != c {
                a.swap(p, c);
                det = -det;
            }
            let piv = a[c][c].clone();
            det *= &piv;
            for r in c + 1..n {
                if a[r][c].is_zero() {
                    continue;
                }
                let f = &a[r][c] / &piv;
                for k in c..n {
                    let t = &f * &a[c][k];
                    a[r][k] -= t;
                }
            }
        }
        det
    }

    pub fn inverse(&self) -> Result<Mat> {
        if !self.is_square() {
            return Err(Error::Invalid("inverse of non-square matrix".into()));
        }
        let n = self.nrows();
        let mut a = self.rows.clone();
        let mut inv = Mat::identity(n).rows;
        for c in 0..n {
            let p = (c..n)
                .find(|&r| !a[r][c].is_zero())
                .ok_or_else(|| Error::Invalid("singular matrix".into()))?;
            a.swap(p, c);
            inv.swap(p, c);
            let piv = a[c][c].clone();
            for k in 0..n {
                a[c][k] /= &piv;
                inv[c][k] /= &piv;
            }
            for r in 0..n {
                if r == c || a[r][c].is_zero() {
                    continue;
                }
                let f = a[r][c].clone();
                for k in 0..n {
                    let t = &f * &a[c][k];
                    a[r][k] -= t;
                    let t = &f * &inv[c][k];
                    inv[r][k] -= t;
                }
            }
        }
        Ok(Mat { rows: inv })
    }

    /// Rank by row reduction.
    pub fn rank(&self) -> usize {
        let (n, m) = (self.nrows(), self.ncols());
        let mut a = self.rows.clone();
        let mut rank = 0;
        for c in 0..m {
            let Some(p) = (rank..n).find(|&r| !a[r][c].is_zero()) else {
                continue;
            };
            a.swap(p, rank);
            let piv = a[rank][c].clone();
            for r in rank + 1..n {
                if a[r][c].is_zero() {
                    continue;
                }
                let f = &a[r][c] / &piv;
                for k in c..m {
                    let t = &f * &a[rank][k];
                    a[r][k] -= t;
                }
            }
            rank += 1;
        }
        rank
    }
}

/// Solves `a x = b` for square invertible `a`.
pub fn solve(a: &Mat, b: &[Q]) -> Result<Vec<Q>> {
    Ok(a.inverse()?.apply(b))
}

/// Result of a congruence diagonalization `Pᵀ G P = D`.
#[derive(Debug, Clone)]
pub struct Diagonalization {
    /// Columns of `p` form an orthogonal basis.
    pub p: Mat,
    pub diag: Vec<Q>,
}

impl Diagonalization {
    pub fn signature(&self) -> (usize, usize, usize) {
        let pos = self.diag.iter().filter(|d| d.is_positive()).count();
        let neg = self.diag.iter().filter(|d| d.is_negative()).count();
        (pos, neg, self.diag.len() - pos - neg)
    }
}

/// Exact congruence diagonalization of a symmetric matrix by simultaneous
/// row and column operations.
pub fn diagonalize(g: &Mat) -> Result<Diagonalization> {
    if !g.is_symmetric() {
        return Err(Error::Invalid("matrix is not symmetric".into()));
    }
    let n = g.nrows();
    let mut a = g.rows.clone();
    // p accumulates column operations
    let mut p = Mat::identity(n).rows;
    let add_col = |a: &mut Vec<Vec<Q>>, p: &mut Vec<Vec<Q>>, dst: usize, src: usize, f: &Q| {
        // column dst += f * column src, then row dst += f * row src
        for r in 0..n {
            let t = f * &a[r][src];
            a[r][dst] += t;
            let t = f * &p[r][src];
            p[r][dst] += t;
        }
        for c in 0..n {
            let t = f * &a[src][c];
            a[dst][c] += t;
        }
    };
    for i in 0..n {
        if a[i][i].is_zero() {
            if let Some(j) = (i + 1..n).find(|&j| !a[j][j].is_zero()) {
                add_col(&mut a, &mut p, i, j, &Q::one());
                if a[i][i].is_zero() {
                    // a[i][i] + 2a[i][j] + a[j][j] vanished; use the opposite sign
                    add_col(&mut a, &mut p, i, j, &Q::from_integer((-2).into()));
                }
            } else if let Some(j) = (i + 1..n).find(|&j| !a[i][j].is_zero()) {
                add_col(&mut a, &mut p, i, j, &Q::one());
            } else {
                continue;
            }
        }
        let piv = a[i][i].clone();
        for k in i + 1..n {
            if a[k][i].is_zero() {
                continue;
            }
            let f = -(&a[k][i] / &piv);
            add_col(&mut a, &mut p, k, i, &f);
        }
    }
    let diag = (0..n).map(|i| a[i][i].clone()).collect();
    Ok(Diagonalization { p: Mat { rows: p }, diag })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    #[test]
    fn det_and_inverse() {
        let a = Mat::from_i64(&[vec![2, 1], vec![1, 1]]);
        assert_eq!(a.det(), q(1));
        let inv = a.inverse().unwrap();
        assert_eq!(a.mul(&inv), Mat::identity(2));
        assert!(Mat::from_i64(&[vec![1, 2], vec![2, 4]]).inverse().is_err());
        assert_eq!(Mat::from_i64(&[vec![1, 2], vec![2, 4]]).rank(), 1);
    }

    #[test]
    fn diagonalize_hyperbolic_plane() {
        let u = Mat::from_i64(&[vec![0, 1], vec![1, 0]]);
        let d = diagonalize(&u).unwrap();
        assert_eq!(d.signature(), (1, 1, 0));
        let check = d.p.transpose().mul(&u).mul(&d.p);
        for i in 0..2 {
            for j in 0..2 {
                let want = if i == j { d.diag[i].clone() } else { q(0) };
                assert_eq!(check.get(i, j), &want);
            }
        }
    }

    #[test]
    fn diagonalize_cancelling_pivot() {
        // a[0][0] = 0, a[1][1] = 2, a[0][1] = -1: adding once gives 0 again
        let g = Mat::from_i64(&[vec![0, -1, 0], vec![-1, 2, 0], vec![0, 0, -2]]);
        let d = diagonalize(&g).unwrap();
        assert_eq!(d.signature(), (1, 2, 0));
        let check = d.p.transpose().mul(&g).mul(&d.p);
        for i in 0..3 {
            for j in 0..3 {
                if i != j {
                    assert_eq!(check.get(i, j), &q(0));
                }
            }
        }
    }
}
