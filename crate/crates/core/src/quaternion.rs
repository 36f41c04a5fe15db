//! Scalar-first unit quaternions.
//!
//! A quaternion `q = [w, v]` here propagates as `q̇ = ½ q ⊗ [0, ω]` with `ω` in
//! body axes, so [`Quaternion::to_dcm`] returns the body-from-inertial
//! direction-cosine matrix `(w² − |v|²) I + 2 v vᵀ − 2 w vˣ`.

use std::ops::Mul;

use crate::lin3::{Mat3, Vec3};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quaternion {
    pub w: f64,
    pub v: Vec3,
}

impl Quaternion {
    pub const IDENTITY: Quaternion = Quaternion {
        w: 1.0,
        v: Vec3::ZERO,
    };

    pub fn new(w: f64, x: f64, y: f64, z: f64) -> Self {
        Quaternion {
            w,
            v: Vec3::new(x, y, z),
        }
    }

    pub fn from_array(a: [f64; 4]) -> Self {
        Quaternion::new(a[0], a[1], a[2], a[3])
    }

    pub fn to_array(self) -> [f64; 4] {
        [self.w, self.v[0], self.v[1], self.v[2]]
    }

    /// Rotation by `angle` about the unit `axis`.
    pub fn from_axis_angle(axis: Vec3, angle: f64) -> Self {
        let (s, c) = (0.5 * angle).sin_cos();
        Quaternion {
            w: c,
            v: axis * (s / axis.norm()),
        }
    }

    pub fn norm(&self) -> f64 {
        (self.w * self.w + self.v.norm_squared()).sqrt()
    }

    pub fn normalized(self) -> Self {
        let n = self.norm();
        Quaternion {
            w: self.w / n,
            v: self.v * (1.0 / n),
        }
    }

    pub fn conjugate(self) -> Self {
        Quaternion {
            w: self.w,
            v: -self.v,
        }
    }

    /// Attitude rate `½ q ⊗ [0, ω]`.
    pub fn derivative(&self, omega: Vec3) -> Quaternion {
        let p = *self * Quaternion { w: 0.0, v: omega };
        Quaternion {
            w: 0.5 * p.w,
            v: p.v * 0.5,
        }
    }

    /// Body-from-inertial direction-cosine matrix.
    pub fn to_dcm(&self) -> Mat3 {
        let v = self.v;
        Mat3::IDENTITY * (self.w * self.w - v.norm_squared()) + v.outer(&v) * 2.0
            - v.skew() * (2.0 * self.w)
    }

    /// Inverse of [`Quaternion::to_dcm`], returned with `w >= 0`.
    pub fn from_dcm(r: &Mat3) -> Quaternion {
        // Shepperd's method on the inertial-from-body matrix Rᵀ, whose
        // quaternion is the same one.
        let m = r.transpose();
        let tr = m.trace();
        let q = if tr >= m[(0, 0)] && tr >= m[(1, 1)] && tr >= m[(2, 2)] {
            let s = 2.0 * (1.0 + tr).sqrt();
            Quaternion::new(
                0.25 * s,
                (m[(2, 1)] - m[(1, 2)]) / s,
                (m[(0, 2)] - m[(2, 0)]) / s,
                (m[(1, 0)] - m[(0, 1)]) / s,
            )
        } else if m[(0, 0)] >= m[(1, 1)] && m[(0, 0)] >= m[(2, 2)] {
            let s = 2.0 * (1.0 + m[(0, 0)] - m[(1, 1)] - m[(2, 2)]).sqrt();
            Quaternion::new(
                (m[(2, 1)] - m[(1, 2)]) / s,
                0.25 * s,
                (m[(0, 1)] + m[(1, 0)]) / s,
                (m[(0, 2)] + m[(2, 0)]) / s,
            )
        } else if m[(1, 1)] >= m[(2, 2)] {
            let s = 2.0 * (1.0 + m[(1, 1)] - m[(0, 0)] - m[(2, 2)]).sqrt();
            Quaternion::new(
                (m[(0, 2)] - m[(2, 0)]) / s,
                (m[(0, 1)] + m[(1, 0)]) / s,
                0.25 * s,
                (m[(1, 2)] + m[(2, 1)]) / s,
            )
        } else {
            let s = 2.0 * (1.0 + m[(2, 2)] - m[(0, 0)] - m[(1, 1)]).sqrt();
            Quaternion::new(
                (m[(1, 0)] - m[(0, 1)]) / s,
                (m[(0, 2)] + m[(2, 0)]) / s,
                (m[(1, 2)] + m[(2, 1)]) / s,
                0.25 * s,
            )
        };
        let q = q.normalized();
        if q.w < 0.0 {
            Quaternion { w: -q.w, v: -q.v }
        } else {
            q
        }
    }
}

impl Mul for Quaternion {
    type Output = Quaternion;

    /// Hamilton product.
    fn mul(self, o: Quaternion) -> Quaternion {
        Quaternion {
            w: self.w * o.w - self.v.dot(&o.v),
            v: o.v * self.w + self.v * o.w + self.v.cross(&o.v),
        }
    }
}
