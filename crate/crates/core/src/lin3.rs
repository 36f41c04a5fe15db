//! Fixed-size 3D linear algebra.
//!
//! Alongside the usual vector/matrix plumbing this module exposes the two
//! cross-product-matrix identities the rest of the crate leans on:
//!
//! * `Aᵀ (A x)ˣ A = det(A) xˣ` ([`lemma1_residual`])
//! * `Aᵀ C = det(A) I` and `C xˣ = (A x)ˣ A`, where `C = [A₂×A₃  A₃×A₁  A₁×A₂]`
//!   ([`cofactor_columns`]).
//!
//! Both hold for every `A`, singular or not.

use std::ops::{Add, AddAssign, Index, IndexMut, Mul, Neg, Sub, SubAssign};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Absolute threshold on `|det A|` below which [`solve3`] refuses to solve.
pub const SINGULAR_TOL: f64 = 1e-12;

/// Real 3-vector.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Vec3(pub [f64; 3]);

/// Real 3×3 matrix, stored row-major.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Mat3(pub [[f64; 3]; 3]);

impl Vec3 {
    pub const ZERO: Vec3 = Vec3([0.0; 3]);

    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Vec3([x, y, z])
    }

    /// Standard basis vector `e_{i+1}`.
    pub fn unit(i: usize) -> Self {
        let mut v = [0.0; 3];
        v[i] = 1.0;
        Vec3(v)
    }

    pub fn dot(&self, other: &Vec3) -> f64 {
        self.0[0] * other.0[0] + self.0[1] * other.0[1] + self.0[2] * other.0[2]
    }

    pub fn cross(&self, other: &Vec3) -> Vec3 {
        let [a1, a2, a3] = self.0;
        let [b1, b2, b3] = other.0;
        Vec3([a2 * b3 - a3 * b2, a3 * b1 - a1 * b3, a1 * b2 - a2 * b1])
    }

    pub fn norm(&self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn norm_squared(&self) -> f64 {
        self.dot(self)
    }

    /// Largest absolute component.
    pub fn max_abs(&self) -> f64 {
        self.0.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|v| v.is_finite())
    }

    /// Cross-product matrix `xˣ`, so that `xˣ y = x × y`.
    #[rustfmt::skip]
    pub fn skew(&self) -> Mat3 {
        let [x, y, z] = self.0;
        Mat3([
            [0.0, -z,   y],
            [z,   0.0, -x],
            [-y,  x,   0.0],
        ])
    }

    /// Outer product `self · otherᵀ`.
    pub fn outer(&self, other: &Vec3) -> Mat3 {
        let mut m = [[0.0; 3]; 3];
        for (i, row) in m.iter_mut().enumerate() {
            for (j, e) in row.iter_mut().enumerate() {
                *e = self.0[i] * other.0[j];
            }
        }
        Mat3(m)
    }
}

impl Mat3 {
    pub const ZERO: Mat3 = Mat3([[0.0; 3]; 3]);
    pub const IDENTITY: Mat3 = Mat3([[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]]);

    pub fn from_rows(r1: Vec3, r2: Vec3, r3: Vec3) -> Self {
        Mat3([r1.0, r2.0, r3.0])
    }

    pub fn from_cols(c1: Vec3, c2: Vec3, c3: Vec3) -> Self {
        Mat3::from_rows(c1, c2, c3).transpose()
    }

    pub fn from_diagonal(d: Vec3) -> Self {
        let [a, b, c] = d.0;
        Mat3([[a, 0.0, 0.0], [0.0, b, 0.0], [0.0, 0.0, c]])
    }

    /// Row-major flat slice of nine entries.
    pub fn from_row_slice(v: &[f64; 9]) -> Self {
        Mat3([[v[0], v[1], v[2]], [v[3], v[4], v[5]], [v[6], v[7], v[8]]])
    }

    pub fn col(&self, j: usize) -> Vec3 {
        Vec3([self.0[0][j], self.0[1][j], self.0[2][j]])
    }

    pub fn row(&self, i: usize) -> Vec3 {
        Vec3(self.0[i])
    }

    pub fn set_col(&mut self, j: usize, v: Vec3) {
        for i in 0..3 {
            self.0[i][j] = v.0[i];
        }
    }

    pub fn transpose(&self) -> Mat3 {
        let m = &self.0;
        Mat3([
            [m[0][0], m[1][0], m[2][0]],
            [m[0][1], m[1][1], m[2][1]],
            [m[0][2], m[1][2], m[2][2]],
        ])
    }

    pub fn det(&self) -> f64 {
        let m = &self.0;
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    }

    pub fn trace(&self) -> f64 {
        self.0[0][0] + self.0[1][1] + self.0[2][2]
    }

    /// Largest absolute entry (the ∞-norm used for all residuals here).
    pub fn max_abs(&self) -> f64 {
        self.0.iter().flatten().fold(0.0_f64, |m, v| m.max(v.abs()))
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().flatten().all(|v| v.is_finite())
    }

    /// Solve `A x = b` by Cramer's rule.
    pub fn solve(&self, b: &Vec3) -> Result<Vec3> {
        let det = self.det();
        if !(det.abs() > SINGULAR_TOL) {
            return Err(Error::SingularMatrix { det });
        }
        // Columns of the cofactor-column matrix are the rows of adj(A)ᵀ, so
        // x = Cᵀ b / det.
        let c = cofactor_columns(self);
        Ok(c.transpose() * *b * (1.0 / det))
    }

    /// Solve `A x = b` for symmetric positive definite `A` by Cholesky
    /// factorization. Only the lower triangle of `A` is read; a non-positive
    /// pivot is reported as [`Error::NotPositiveDefinite`].
    pub fn solve_spd(&self, b: &Vec3) -> Result<Vec3> {
        let a = &self.0;
        let mut l = [[0.0; 3]; 3];
        for i in 0..3 {
            for j in 0..=i {
                let s: f64 = (0..j).map(|k| l[i][k] * l[j][k]).sum();
                if i == j {
                    let pivot = a[i][i] - s;
                    if !(pivot > 0.0) {
                        return Err(Error::NotPositiveDefinite { pivot });
                    }
                    l[i][i] = pivot.sqrt();
                } else {
                    l[i][j] = (a[i][j] - s) / l[j][j];
                }
            }
        }
        let mut y = [0.0; 3];
        for i in 0..3 {
            let s: f64 = (0..i).map(|k| l[i][k] * y[k]).sum();
            y[i] = (b[i] - s) / l[i][i];
        }
        let mut x = [0.0; 3];
        for i in (0..3).rev() {
            let s: f64 = (i + 1..3).map(|k| l[k][i] * x[k]).sum();
            x[i] = (y[i] - s) / l[i][i];
        }
        Ok(Vec3(x))
    }

    pub fn inverse(&self) -> Result<Mat3> {
        let det = self.det();
        if !(det.abs() > SINGULAR_TOL) {
            return Err(Error::SingularMatrix { det });
        }
        Ok(cofactor_columns(self).transpose() * (1.0 / det))
    }
}

impl Index<usize> for Vec3 {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

impl IndexMut<usize> for Vec3 {
    fn index_mut(&mut self, i: usize) -> &mut f64 {
        &mut self.0[i]
    }
}

impl Index<(usize, usize)> for Mat3 {
    type Output = f64;
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.0[i][j]
    }
}

impl IndexMut<(usize, usize)> for Mat3 {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.0[i][j]
    }
}

impl Add for Vec3 {
    type Output = Vec3;
    fn add(self, o: Vec3) -> Vec3 {
        Vec3([self.0[0] + o.0[0], self.0[1] + o.0[1], self.0[2] + o.0[2]])
    }
}

impl AddAssign for Vec3 {
    fn add_assign(&mut self, o: Vec3) {
        *self = *self + o;
    }
}

impl Sub for Vec3 {
    type Output = Vec3;
    fn sub(self, o: Vec3) -> Vec3 {
        Vec3([self.0[0] - o.0[0], self.0[1] - o.0[1], self.0[2] - o.0[2]])
    }
}

impl SubAssign for Vec3 {
    fn sub_assign(&mut self, o: Vec3) {
        *self = *self - o;
    }
}

impl Neg for Vec3 {
    type Output = Vec3;
    fn neg(self) -> Vec3 {
        Vec3([-self.0[0], -self.0[1], -self.0[2]])
    }
}

impl Mul<f64> for Vec3 {
    type Output = Vec3;
    fn mul(self, s: f64) -> Vec3 {
        Vec3([self.0[0] * s, self.0[1] * s, self.0[2] * s])
    }
}

impl Mul<Vec3> for f64 {
    type Output = Vec3;
    fn mul(self, v: Vec3) -> Vec3 {
        v * self
    }
}

impl Add for Mat3 {
    type Output = Mat3;
    fn add(self, o: Mat3) -> Mat3 {
        let mut m = self.0;
        for (i, row) in m.iter_mut().enumerate() {
            for (j, e) in row.iter_mut().enumerate() {
                *e += o.0[i][j];
            }
        }
        Mat3(m)
    }
}

impl AddAssign for Mat3 {
    fn add_assign(&mut self, o: Mat3) {
        *self = *self + o;
    }
}

impl Sub for Mat3 {
    type Output = Mat3;
    fn sub(self, o: Mat3) -> Mat3 {
        self + (-o)
    }
}

impl Neg for Mat3 {
    type Output = Mat3;
    fn neg(self) -> Mat3 {
        self * -1.0
    }
}

impl Mul<f64> for Mat3 {
    type Output = Mat3;
    fn mul(self, s: f64) -> Mat3 {
        let mut m = self.0;
        m.iter_mut().flatten().for_each(|e| *e *= s);
        Mat3(m)
    }
}

impl Mul<Mat3> for f64 {
    type Output = Mat3;
    fn mul(self, m: Mat3) -> Mat3 {
        m * self
    }
}

impl Mul<Vec3> for Mat3 {
    type Output = Vec3;
    fn mul(self, v: Vec3) -> Vec3 {
        Vec3([
            self.row(0).dot(&v),
            self.row(1).dot(&v),
            self.row(2).dot(&v),
        ])
    }
}

impl Mul for Mat3 {
    type Output = Mat3;
    fn mul(self, o: Mat3) -> Mat3 {
        let mut m = [[0.0; 3]; 3];
        for (i, row) in m.iter_mut().enumerate() {
            for (j, e) in row.iter_mut().enumerate() {
                *e = (0..3).map(|k| self.0[i][k] * o.0[k][j]).sum();
            }
        }
        Mat3(m)
    }
}

pub fn skew(x: &Vec3) -> Mat3 {
    x.skew()
}

pub fn cross(x: &Vec3, y: &Vec3) -> Vec3 {
    x.cross(y)
}

pub fn det3(a: &Mat3) -> f64 {
    a.det()
}

pub fn transpose3(a: &Mat3) -> Mat3 {
    a.transpose()
}

pub fn matmul3(a: &Mat3, b: &Mat3) -> Mat3 {
    *a * *b
}

pub fn matvec3(a: &Mat3, x: &Vec3) -> Vec3 {
    *a * *x
}

/// Solves `A x = b`; fails with [`Error::SingularMatrix`] when
/// `|det A| <= SINGULAR_TOL`.
pub fn solve3(a: &Mat3, b: &Vec3) -> Result<Vec3> {
    a.solve(b)
}

/// `Aᵀ (A x)ˣ A − det(A) xˣ`, identically zero in exact arithmetic.
pub fn lemma1_residual(a: &Mat3, x: &Vec3) -> Mat3 {
    a.transpose() * (*a * *x).skew() * *a - x.skew() * a.det()
}

/// The matrix `[A₂×A₃  A₃×A₁  A₁×A₂]` built from the columns of `A`.
///
/// This is the transpose of the adjugate, hence `Aᵀ C = det(A) I`.
pub fn cofactor_columns(a: &Mat3) -> Mat3 {
    let (a1, a2, a3) = (a.col(0), a.col(1), a.col(2));
    Mat3::from_cols(a2.cross(&a3), a3.cross(&a1), a1.cross(&a2))
}

/// `Aᵀ C − det(A) I` with `C` from [`cofactor_columns`].
pub fn lemma2_det_residual(a: &Mat3) -> Mat3 {
    a.transpose() * cofactor_columns(a) - Mat3::IDENTITY * a.det()
}

/// `C xˣ − (A x)ˣ A` with `C` from [`cofactor_columns`].
pub fn lemma2_skew_residual(a: &Mat3, x: &Vec3) -> Mat3 {
    cofactor_columns(a) * x.skew() - (*a * *x).skew() * *a
}
