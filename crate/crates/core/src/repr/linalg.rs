//! Dense matrices over the rationals.

use std::fmt;
use std::ops::{Add, Mul, Sub};

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigRational>,
}

impl RatMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RatMatrix {
            rows,
            cols,
            data: vec![BigRational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { BigRational::one() } else { BigRational::zero() })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> BigRational) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        RatMatrix { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigRational {
        &self.data[i * self.cols + j]
    }

    pub fn get_mut(&mut self, i: usize, j: usize) -> &mut BigRational {
        &mut self.data[i * self.cols + j]
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        RatMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x * c).collect(),
        }
    }

    pub fn trace(&self) -> BigRational {
        (0..self.rows.min(self.cols)).map(|i| self.get(i, i)).sum()
    }

    /// `sum x_ij^2`, the squared Hilbert-Schmidt norm.
    pub fn frobenius_sq(&self) -> BigRational {
        self.data.iter().map(|x| x * x).sum()
    }

    /// `A^T A`.
    pub fn gram(&self) -> Self {
        &self.transpose() * self
    }

    pub fn column_sums(&self) -> Vec<BigRational> {
        (0..self.cols)
            .map(|j| (0..self.rows).map(|i| self.get(i, j)).sum())
            .collect()
    }

    pub fn column(&self, j: usize) -> Vec<BigRational> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn mul_vec(&self, v: &[BigRational]) -> Vec<BigRational> {
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j) * &v[j]).sum())
            .collect()
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        let mut rank = 0;
        for col in 0..m.cols {
            let Some(piv) = (rank..m.rows).find(|&r| !m.get(r, col).is_zero()) else {
                continue;
            };
            m.swap_rows(rank, piv);
            let inv = m.get(rank, col).recip();
            for r in rank + 1..m.rows {
                if m.get(r, col).is_zero() {
                    continue;
                }
                let factor = m.get(r, col) * &inv;
                for c in col..m.cols {
                    let sub = &factor * m.get(rank, c);
                    *m.get_mut(r, c) -= sub;
                }
            }
            rank += 1;
        }
        rank
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for c in 0..self.cols {
                self.data.swap(a * self.cols + c, b * self.cols + c);
            }
        }
    }

    /// Pivots of a symmetric elimination; `None` when the matrix is not
    /// positive semidefinite.
    fn ldl_pivots(&self) -> Option<Vec<BigRational>> {
        assert!(self.is_square(), "square matrix expected");
        let n = self.rows;
        let mut m = self.clone();
        let mut pivots = Vec::with_capacity(n);
        for k in 0..n {
            let d = m.get(k, k).clone();
            if d.is_negative() {
                return None;
            }
            if d.is_zero() {
                // a PSD matrix with a zero diagonal entry has a zero row there
                if (k + 1..n).any(|j| !m.get(k, j).is_zero()) {
                    return None;
                }
                pivots.push(d);
                continue;
            }
            let inv = d.recip();
            for i in k + 1..n {
                if m.get(i, k).is_zero() {
                    continue;
                }
                let f = m.get(i, k) * &inv;
                for j in k + 1..n {
                    let sub = &f * m.get(k, j);
                    *m.get_mut(i, j) -= sub;
                }
            }
            pivots.push(d);
        }
        Some(pivots)
    }

    /// Exact test for a symmetric matrix.
    pub fn is_psd(&self) -> bool {
        self.ldl_pivots().is_some()
    }

    /// Exact test for a symmetric matrix.
    pub fn is_pd(&self) -> bool {
        self.ldl_pivots()
            .is_some_and(|p| p.iter().all(|x| x.is_positive()))
    }

    /// `t I - self`, for square matrices.
    pub fn shifted_neg(&self, t: &BigRational) -> Self {
        Self::from_fn(self.rows, self.cols, |i, j| {
            let x = -self.get(i, j);
            if i == j {
                x + t
            } else {
                x
            }
        })
    }
}

impl Mul for &RatMatrix {
    type Output = RatMatrix;

    fn mul(self, rhs: &RatMatrix) -> RatMatrix {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch");
        let mut out = RatMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if !b.is_zero() {
                        *out.get_mut(i, j) += a * b;
                    }
                }
            }
        }
        out
    }
}

impl Add for &RatMatrix {
    type Output = RatMatrix;

    fn add(self, rhs: &RatMatrix) -> RatMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        RatMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &RatMatrix {
    type Output = RatMatrix;

    fn sub(self, rhs: &RatMatrix) -> RatMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        RatMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl fmt::Display for RatMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// Exact square root of a nonnegative rational, if it is one.
pub fn exact_sqrt(x: &BigRational) -> Option<BigRational> {
    if x.is_negative() {
        return None;
    }
    let root = |n: &BigInt| -> Option<BigInt> {
        let u: BigUint = n.to_biguint()?;
        let r = u.sqrt();
        (&r * &r == u).then(|| BigInt::from(r))
    };
    Some(BigRational::new(root(x.numer())?, root(x.denom())?))
}

pub fn to_f64(x: &BigRational) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// Largest eigenvalue of a symmetric PSD matrix `g`, bracketed by exact
/// bisection to relative width `2^-bits`.
pub fn lambda_max_bracket(g: &RatMatrix, bits: u32) -> (BigRational, BigRational) {
    let mut lo = BigRational::zero();
    let mut hi = g.trace();
    if hi.is_zero() {
        return (lo, hi);
    }
    let tol = &hi / BigRational::from_integer(BigInt::one() << bits);
    let two = BigRational::from_integer(2.into());
    while &hi - &lo > tol {
        let mid = (&lo + &hi) / &two;
        if g.shifted_neg(&mid).is_psd() {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    (lo, hi)
}

/// Largest eigenvalue of a symmetric PSD matrix of rank one, certified by
/// an eigenvector: `g v = tr(g) v` for a nonzero column `v`.
pub fn rank_one_eigenvalue(g: &RatMatrix) -> Option<BigRational> {
    let t = g.trace();
    let j = (0..g.cols()).find(|&j| g.get(j, j).is_positive())?;
    let v = g.column(j);
    let gv = g.mul_vec(&v);
    let ok = gv.iter().zip(&v).all(|(a, b)| *a == &t * b);
    (ok && g.is_psd()).then_some(t)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    fn m(rows: &[&[i64]]) -> RatMatrix {
        RatMatrix::from_fn(rows.len(), rows[0].len(), |i, j| r(rows[i][j]))
    }

    #[test]
    fn rank_and_products() {
        let a = m(&[&[1, 2], &[2, 4]]);
        assert_eq!(a.rank(), 1);
        assert_eq!(RatMatrix::identity(3).rank(), 3);
        assert_eq!(RatMatrix::zeros(3, 3).rank(), 0);
        let b = m(&[&[0, 1], &[1, 0]]);
        assert_eq!(&(&b * &b), &RatMatrix::identity(2));
        assert_eq!(a.frobenius_sq(), r(25));
    }

    #[test]
    fn definiteness() {
        assert!(m(&[&[2, -1], &[-1, 2]]).is_pd());
        assert!(m(&[&[1, 1], &[1, 1]]).is_psd());
        assert!(!m(&[&[1, 1], &[1, 1]]).is_pd());
        assert!(!m(&[&[1, 2], &[2, 1]]).is_psd());
        assert!(!m(&[&[0, 1], &[1, 0]]).is_psd());
    }

    #[test]
    fn eigenvalues() {
        let g = m(&[&[2, 1], &[1, 2]]);
        let (lo, hi) = lambda_max_bracket(&g, 30);
        assert!(lo <= r(3) && r(3) <= hi);
        assert!(rank_one_eigenvalue(&g).is_none());
        let g = m(&[&[1, 2], &[2, 4]]);
        assert_eq!(rank_one_eigenvalue(&g), Some(r(5)));
    }

    #[test]
    fn square_roots() {
        assert_eq!(exact_sqrt(&BigRational::new(9.into(), 4.into())), Some(BigRational::new(3.into(), 2.into())));
        assert_eq!(exact_sqrt(&r(2)), None);
        assert_eq!(exact_sqrt(&r(-4)), None);
    }
}
