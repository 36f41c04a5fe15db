//! Attitude charts: generalized coordinates `q`, the kinematic matrix `S(q)`
//! with `ω = S(q) q̇`, its analytic partials, closed-form determinants and
//! direction-cosine matrices.
//!
//! | chart         | `q`                 | `det S`  | singular when   |
//! |---------------|---------------------|----------|-----------------|
//! | `Euler321`    | `[Φ, Θ, Ψ]` rad     | `cos Θ`  | `Θ = ±π/2`      |
//! | `Euler313`    | `[Ψ, Θ, Φ]` rad     | `sin Θ`  | `Θ ∈ {0, π}`    |
//! | `QuatReduced` | `[q₂, q₃, q₄]`      | `8 / q₁` | never (`q₁>0`)  |
//!
//! All direction-cosine matrices map inertial components to body components.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lin3::{Mat3, Vec3};
use crate::quaternion::Quaternion;

/// `|det S|` at or below this is treated as gimbal lock.
pub const GIMBAL_TOL: f64 = 1e-8;

/// Smallest scalar part accepted when converting an attitude into the reduced
/// quaternion chart.
pub const QUAT_SCALAR_MIN: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Chart {
    #[serde(rename = "euler321")]
    Euler321,
    #[serde(rename = "euler313")]
    Euler313,
    #[serde(rename = "quat")]
    QuatReduced,
}

impl Chart {
    pub const ALL: [Chart; 3] = [Chart::Euler321, Chart::Euler313, Chart::QuatReduced];

    pub fn name(&self) -> &'static str {
        match self {
            Chart::Euler321 => "euler321",
            Chart::Euler313 => "euler313",
            Chart::QuatReduced => "quat",
        }
    }
}

impl fmt::Display for Chart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Chart {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "euler321" | "321" => Ok(Chart::Euler321),
            "euler313" | "313" => Ok(Chart::Euler313),
            "quat" | "quatreduced" | "quat_reduced" => Ok(Chart::QuatReduced),
            other => Err(Error::InvalidArgument(format!("unknown chart '{other}'"))),
        }
    }
}

/// Generalized coordinates in a particular chart.
///
/// Euler angles may take any finite value (the trigonometric formulas are
/// periodic); reduced quaternion coordinates must satisfy `|q|² < 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GenCoords {
    chart: Chart,
    q: Vec3,
}

/// `S(q)`, its partials `∂S/∂qᵢ` and `det S` at one configuration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KinematicsEval {
    pub s: Mat3,
    pub ds: [Mat3; 3],
    pub det: f64,
}

impl KinematicsEval {
    /// `Ṡ = Σᵢ q̇ᵢ ∂S/∂qᵢ`.
    pub fn s_dot(&self, qdot: &Vec3) -> Mat3 {
        self.ds[0] * qdot[0] + self.ds[1] * qdot[1] + self.ds[2] * qdot[2]
    }

    /// `[∂₁S q̇  ∂₂S q̇  ∂₃S q̇]`.
    pub fn partials_times(&self, qdot: &Vec3) -> Mat3 {
        Mat3::from_cols(self.ds[0] * *qdot, self.ds[1] * *qdot, self.ds[2] * *qdot)
    }

    /// Largest entry over the three partial matrices.
    pub fn ds_max_abs(&self) -> f64 {
        self.ds.iter().map(Mat3::max_abs).fold(0.0, f64::max)
    }
}

impl GenCoords {
    pub fn new(chart: Chart, q: Vec3) -> Result<Self> {
        if !q.is_finite() {
            return Err(Error::Domain {
                chart,
                reason: format!("non-finite coordinates {:?}", q.0),
            });
        }
        if chart == Chart::QuatReduced && !(q.norm_squared() < 1.0) {
            return Err(Error::Domain {
                chart,
                reason: format!(
                    "q2²+q3²+q4² = {} must be < 1 (eigenangle π excluded)",
                    q.norm_squared()
                ),
            });
        }
        Ok(GenCoords { chart, q })
    }

    pub fn zero(chart: Chart) -> Self {
        GenCoords {
            chart,
            q: Vec3::ZERO,
        }
    }

    pub fn chart(&self) -> Chart {
        self.chart
    }

    pub fn q(&self) -> Vec3 {
        self.q
    }

    /// Dependent scalar part `q₁ = √(1 − |q|²)` of the reduced quaternion chart.
    fn quat_scalar(&self) -> f64 {
        (1.0 - self.q.norm_squared()).sqrt()
    }

    #[rustfmt::skip]
    pub fn s_matrix(&self) -> Mat3 {
        match self.chart {
            Chart::Euler321 => {
                let [phi, theta, _] = self.q.0;
                let (sp, cp) = phi.sin_cos();
                let (st, ct) = theta.sin_cos();
                Mat3([
                    [1.0, 0.0, -st],
                    [0.0, cp,   sp * ct],
                    [0.0, -sp,  cp * ct],
                ])
            }
            Chart::Euler313 => {
                let [psi, theta, _] = self.q.0;
                let (sp, cp) = psi.sin_cos();
                let (st, ct) = theta.sin_cos();
                Mat3([
                    [0.0, cp,  sp * st],
                    [0.0, -sp, cp * st],
                    [1.0, 0.0, ct],
                ])
            }
            Chart::QuatReduced => {
                let q1 = self.quat_scalar();
                let v = self.q;
                (Mat3::IDENTITY * q1 - v.skew() + v.outer(&v) * (1.0 / q1)) * 2.0
            }
        }
    }

    /// Analytic `[∂S/∂q₁, ∂S/∂q₂, ∂S/∂q₃]`.
    #[rustfmt::skip]
    pub fn s_partials(&self) -> [Mat3; 3] {
        match self.chart {
            Chart::Euler321 => {
                let [phi, theta, _] = self.q.0;
                let (sp, cp) = phi.sin_cos();
                let (st, ct) = theta.sin_cos();
                let d_phi = Mat3([
                    [0.0, 0.0, 0.0],
                    [0.0, -sp, cp * ct],
                    [0.0, -cp, -sp * ct],
                ]);
                let d_theta = Mat3([
                    [0.0, 0.0, -ct],
                    [0.0, 0.0, -sp * st],
                    [0.0, 0.0, -cp * st],
                ]);
                [d_phi, d_theta, Mat3::ZERO]
            }
            Chart::Euler313 => {
                let [psi, theta, _] = self.q.0;
                let (sp, cp) = psi.sin_cos();
                let (st, ct) = theta.sin_cos();
                let d_psi = Mat3([
                    [0.0, -sp, cp * st],
                    [0.0, -cp, -sp * st],
                    [0.0, 0.0, 0.0],
                ]);
                let d_theta = Mat3([
                    [0.0, 0.0, sp * ct],
                    [0.0, 0.0, cp * ct],
                    [0.0, 0.0, -st],
                ]);
                [d_psi, d_theta, Mat3::ZERO]
            }
            Chart::QuatReduced => {
                // ∂q₁/∂qᵢ = −qᵢ/q₁
                let q1 = self.quat_scalar();
                let v = self.q;
                let vvt = v.outer(&v);
                let partial = |i: usize| {
                    let e = Vec3::unit(i);
                    (Mat3::IDENTITY * (-v[i] / q1) - e.skew()
                        + (e.outer(&v) + v.outer(&e)) * (1.0 / q1)
                        + vvt * (v[i] / (q1 * q1 * q1)))
                        * 2.0
                };
                [partial(0), partial(1), partial(2)]
            }
        }
    }

    /// Closed-form `det S(q)`.
    pub fn s_det(&self) -> f64 {
        match self.chart {
            Chart::Euler321 => self.q[1].cos(),
            Chart::Euler313 => self.q[1].sin(),
            Chart::QuatReduced => 8.0 / self.quat_scalar(),
        }
    }

    pub fn kinematics(&self) -> KinematicsEval {
        KinematicsEval {
            s: self.s_matrix(),
            ds: self.s_partials(),
            det: self.s_det(),
        }
    }

    pub fn is_singular(&self) -> bool {
        !(self.s_det().abs() > GIMBAL_TOL)
    }

    pub fn omega_from(&self, qdot: &Vec3) -> Vec3 {
        self.s_matrix() * *qdot
    }

    pub fn qdot_from_omega(&self, omega: &Vec3) -> Result<Vec3> {
        let det = self.s_det();
        if !(det.abs() > GIMBAL_TOL) {
            return Err(Error::GimbalLock {
                chart: self.chart,
                det,
            });
        }
        self.s_matrix().solve(omega)
    }

    /// Body-from-inertial direction-cosine matrix.
    pub fn rotation_matrix(&self) -> Mat3 {
        match self.chart {
            Chart::Euler321 => {
                let [phi, theta, psi] = self.q.0;
                frame_rotation(0, phi) * frame_rotation(1, theta) * frame_rotation(2, psi)
            }
            Chart::Euler313 => {
                let [psi, theta, phi] = self.q.0;
                frame_rotation(2, psi) * frame_rotation(0, theta) * frame_rotation(2, phi)
            }
            Chart::QuatReduced => Quaternion::from_array(self.lift_unchecked()).to_dcm(),
        }
    }

    fn lift_unchecked(&self) -> [f64; 4] {
        [self.quat_scalar(), self.q[0], self.q[1], self.q[2]]
    }

    /// Full Euler-parameter vector `[q₁, q₂, q₃, q₄]` with `q₁ > 0`.
    pub fn quat_lift(&self) -> Result<[f64; 4]> {
        if self.chart != Chart::QuatReduced {
            return Err(Error::InvalidArgument(format!(
                "quat_lift needs reduced quaternion coordinates, got {}",
                self.chart
            )));
        }
        Ok(self.lift_unchecked())
    }

    /// Same attitude expressed in `target`.
    pub fn convert(&self, target: Chart) -> Result<GenCoords> {
        coords_from_dcm(&self.rotation_matrix(), target)
    }
}

/// Elementary frame rotation by `angle` about body axis `axis` (0-based).
#[rustfmt::skip]
pub fn frame_rotation(axis: usize, angle: f64) -> Mat3 {
    let (s, c) = angle.sin_cos();
    match axis {
        0 => Mat3([[1.0, 0.0, 0.0], [0.0, c, s], [0.0, -s, c]]),
        1 => Mat3([[c, 0.0, -s], [0.0, 1.0, 0.0], [s, 0.0, c]]),
        2 => Mat3([[c, s, 0.0], [-s, c, 0.0], [0.0, 0.0, 1.0]]),
        _ => panic!("axis index {axis} out of range"),
    }
}

fn principal_angle(a: f64) -> f64 {
    if a <= -PI {
        a + 2.0 * PI
    } else {
        a
    }
}

/// Coordinates in `target` of the attitude with body-from-inertial matrix `r`.
///
/// Euler angles come back in their principal ranges (`Θ ∈ [−π/2, π/2]` for
/// 3-2-1, `Θ ∈ [0, π]` for 3-1-3, the other two in `(−π, π]`). At a chart
/// singularity the split between the first and third angle is undetermined and
/// the conversion fails with [`Error::GimbalLock`].
pub fn coords_from_dcm(r: &Mat3, target: Chart) -> Result<GenCoords> {
    match target {
        Chart::Euler321 => {
            let cos_theta = r[(0, 0)].hypot(r[(0, 1)]);
            if cos_theta <= GIMBAL_TOL {
                return Err(Error::GimbalLock {
                    chart: target,
                    det: cos_theta,
                });
            }
            let theta = (-r[(0, 2)]).atan2(cos_theta);
            let phi = principal_angle(r[(1, 2)].atan2(r[(2, 2)]));
            let psi = principal_angle(r[(0, 1)].atan2(r[(0, 0)]));
            GenCoords::new(target, Vec3::new(phi, theta, psi))
        }
        Chart::Euler313 => {
            let sin_theta = r[(2, 0)].hypot(r[(2, 1)]);
            if sin_theta <= GIMBAL_TOL {
                return Err(Error::GimbalLock {
                    chart: target,
                    det: sin_theta,
                });
            }
            let theta = sin_theta.atan2(r[(2, 2)]);
            let phi = principal_angle(r[(2, 0)].atan2(-r[(2, 1)]));
            let psi = principal_angle(r[(0, 2)].atan2(r[(1, 2)]));
            GenCoords::new(target, Vec3::new(psi, theta, phi))
        }
        Chart::QuatReduced => {
            let quat = Quaternion::from_dcm(r);
            if quat.w < QUAT_SCALAR_MIN {
                return Err(Error::Domain {
                    chart: target,
                    reason: format!(
                        "eigenangle too close to π (q1 = {:e} < {:e})",
                        quat.w, QUAT_SCALAR_MIN
                    ),
                });
            }
            GenCoords::new(target, quat.v)
        }
    }
}

pub fn s_matrix(c: &GenCoords) -> Mat3 {
    c.s_matrix()
}

pub fn s_partials(c: &GenCoords) -> [Mat3; 3] {
    c.s_partials()
}

pub fn s_det(c: &GenCoords) -> f64 {
    c.s_det()
}

pub fn omega_from(c: &GenCoords, qdot: &Vec3) -> Vec3 {
    c.omega_from(qdot)
}

pub fn qdot_from_omega(c: &GenCoords, omega: &Vec3) -> Result<Vec3> {
    c.qdot_from_omega(omega)
}

pub fn rotation_matrix(c: &GenCoords) -> Mat3 {
    c.rotation_matrix()
}

pub fn quat_lift(c: &GenCoords) -> Result<[f64; 4]> {
    c.quat_lift()
}

pub fn chart_convert(c: &GenCoords, target: Chart) -> Result<GenCoords> {
    c.convert(target)
}
