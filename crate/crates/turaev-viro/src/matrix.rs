//! Small dense matrices over [`Scalar`], with exact elimination for the
//! exact backends and a one-sided Jacobi SVD for numeric rank over complex
//! doubles.

use crate::error::{Result, TvError};
use crate::scalar::{Backend, Scalar};
use num_complex::Complex64;

#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    pub rows: usize,
    pub cols: usize,
    data: Vec<Scalar>,
}

/// Relative singular-value cutoff for numeric rank (complex backend).
pub const RANK_TOL: f64 = 1e-6;

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![Scalar::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Scalar::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Scalar) -> Self {
        let mut m = Matrix::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "matrix shape mismatch");
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                if self[(i, k)].is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    if other[(k, j)].is_zero() {
                        continue;
                    }
                    out[(i, j)] = &out[(i, j)] + &(&self[(i, k)] * &other[(k, j)]);
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                let mut acc = Scalar::zero();
                for j in 0..self.cols {
                    if !self[(i, j)].is_zero() && !v[j].is_zero() {
                        acc = &acc + &(&self[(i, j)] * &v[j]);
                    }
                }
                acc
            })
            .collect()
    }

    pub fn scale(&self, s: &Scalar) -> Matrix {
        Matrix::from_fn(self.rows, self.cols, |i, j| &self[(i, j)] * s)
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix::from_fn(self.rows, self.cols, |i, j| &self[(i, j)] + &other[(i, j)])
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix::from_fn(self.rows, self.cols, |i, j| &self[(i, j)] - &other[(i, j)])
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn trace(&self) -> Scalar {
        assert!(self.is_square());
        let mut acc = Scalar::zero();
        for i in 0..self.rows {
            acc = &acc + &self[(i, i)];
        }
        acc
    }

    fn is_exact(&self) -> bool {
        !self.data.iter().any(|s| s.backend() == Backend::Complex)
    }

    /// Row-reduce a copy, returning (echelon form, rank, pivot columns).
    fn eliminate(&self) -> (Matrix, usize, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            // choose pivot: first nonzero for exact, largest modulus for complex
            let mut best: Option<usize> = None;
            for i in r..m.rows {
                if !m[(i, c)].is_zero() {
                    if m.is_exact() {
                        best = Some(i);
                        break;
                    }
                    match best {
                        None => best = Some(i),
                        Some(b) => {
                            if m[(i, c)].to_c64().norm() > m[(b, c)].to_c64().norm() {
                                best = Some(i);
                            }
                        }
                    }
                }
            }
            let Some(p) = best else { continue };
            m.swap_rows(r, p);
            let inv = m[(r, c)].inv().unwrap();
            for j in c..m.cols {
                m[(r, j)] = &m[(r, j)] * &inv;
            }
            for i in 0..m.rows {
                if i != r && !m[(i, c)].is_zero() {
                    let f = m[(i, c)].clone();
                    for j in c..m.cols {
                        let t = &m[(i, j)] - &(&f * &m[(r, j)]);
                        m[(i, j)] = t;
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, r, pivots)
    }

    /// Exact rank for exact backends; singular-value threshold rank for
    /// complex doubles (values below `RANK_TOL` times the largest count as
    /// zero).
    pub fn rank(&self) -> usize {
        if self.rows == 0 || self.cols == 0 {
            return 0;
        }
        if self.is_exact() {
            self.eliminate().1
        } else {
            let sv = self.singular_values();
            let top = sv.iter().cloned().fold(0.0f64, f64::max);
            if top == 0.0 {
                return 0;
            }
            sv.iter().filter(|&&s| s > RANK_TOL * top).count()
        }
    }

    pub fn inverse(&self) -> Result<Matrix> {
        assert!(self.is_square());
        let n = self.rows;
        let mut aug = Matrix::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug[(i, j)] = self[(i, j)].clone();
            }
            aug[(i, n + i)] = Scalar::one();
        }
        let (red, rank, _) = aug.eliminate();
        if rank < n {
            return Err(TvError::SingularMatrix(format!("rank {rank} < {n}")));
        }
        Ok(Matrix::from_fn(n, n, |i, j| red[(i, n + j)].clone()))
    }

    /// Basis of the column space: indices of pivot columns after elimination.
    pub fn column_space_pivots(&self) -> Vec<usize> {
        self.eliminate().2
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// Singular values via one-sided Jacobi on the complex embedding.
    pub fn singular_values(&self) -> Vec<f64> {
        let mut a: Vec<Vec<Complex64>> = (0..self.cols)
            .map(|j| (0..self.rows).map(|i| self[(i, j)].to_c64()).collect())
            .collect();
        let n = self.cols;
        let dot = |x: &[Complex64], y: &[Complex64]| -> Complex64 {
            x.iter().zip(y).map(|(a, b)| a.conj() * b).sum()
        };
        for _sweep in 0..60 {
            let mut off = 0.0f64;
            for p in 0..n {
                for q in (p + 1)..n {
                    let apq = dot(&a[p].clone(), &a[q]);
                    let app = dot(&a[p].clone(), &a[p]).re;
                    let aqq = dot(&a[q].clone(), &a[q]).re;
                    if apq.norm() <= 1e-15 * (app * aqq).sqrt().max(1e-300) {
                        continue;
                    }
                    off += apq.norm();
                    // complex Jacobi rotation zeroing the (p,q) Gram entry
                    let theta = (aqq - app) / (2.0 * apq.norm());
                    let t = theta.signum() / (theta.abs() + (1.0 + theta * theta).sqrt());
                    let c = 1.0 / (1.0 + t * t).sqrt();
                    let s = c * t;
                    let phase = apq / apq.norm();
                    for i in 0..self.rows {
                        let xp = a[p][i];
                        let xq = a[q][i];
                        a[p][i] = xp * c - xq * phase.conj() * s;
                        a[q][i] = xp * phase * s + xq * c;
                    }
                }
            }
            if off < 1e-14 {
                break;
            }
        }
        let mut sv: Vec<f64> = (0..n).map(|j| dot(&a[j].clone(), &a[j]).re.max(0.0).sqrt()).collect();
        sv.sort_by(|x, y| y.partial_cmp(x).unwrap());
        sv
    }

    pub fn approx_eq(&self, other: &Matrix, tol: f64) -> bool {
        self.rows == other.rows
            && self.cols == other.cols
            && (0..self.rows)
                .all(|i| (0..self.cols).all(|j| self[(i, j)].approx_eq_tol(&other[(i, j)], tol)))
    }
}

impl std::ops::Index<(usize, usize)> for Matrix {
    type Output = Scalar;
    fn index(&self, (i, j): (usize, usize)) -> &Scalar {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Scalar {
        &mut self.data[i * self.cols + j]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_inverse_and_rank() {
        let m = Matrix::from_fn(3, 3, |i, j| Scalar::from_int([[2, 1, 0], [1, 2, 1], [0, 1, 2]][i][j]));
        let inv = m.inverse().unwrap();
        assert!(m.mul(&inv).approx_eq(&Matrix::identity(3), 0.0));
        assert_eq!(m.rank(), 3);

        let sing = Matrix::from_fn(2, 3, |i, j| Scalar::from_int(((i + 1) * (j + 1)) as i64));
        assert_eq!(sing.rank(), 1);
    }

    #[test]
    fn quad_backend_elimination() {
        // [[phi, 1], [1, phi]] over Q(sqrt5): det = phi^2 - 1 = phi != 0
        let phi = Scalar::quad(
            5,
            num_rational::BigRational::new(1.into(), 2.into()),
            num_rational::BigRational::new(1.into(), 2.into()),
        );
        let m = Matrix::from_fn(2, 2, |i, j| if i == j { phi.clone() } else { Scalar::one() });
        assert_eq!(m.rank(), 2);
        let inv = m.inverse().unwrap();
        assert!(m.mul(&inv).approx_eq(&Matrix::identity(2), 0.0));
    }

    #[test]
    fn numeric_rank_threshold() {
        let mut m = Matrix::zeros(3, 3);
        m[(0, 0)] = Scalar::complex(1.0, 0.0);
        m[(1, 1)] = Scalar::complex(0.5, 0.5);
        m[(2, 2)] = Scalar::complex(1e-12, 0.0);
        assert_eq!(m.rank(), 2);
        let sv = m.singular_values();
        assert!((sv[0] - 1.0).abs() < 1e-9);
    }
}
