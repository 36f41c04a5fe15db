//! Equations of motion.
//!
//! Two routes to the same rotational dynamics:
//!
//! * body frame: `J ω̇ + ω × J ω = τ` ([`euler_rhs`]);
//! * generalized coordinates: `SᵀJS q̈ + SᵀJṠq̇ + ṠᵀJSq̇ − [q̇ᵀ(∂ᵢS)ᵀJSq̇]ᵢ = Sᵀτ`
//!   ([`generalized_accel`]).
//!
//! With `ω = S q̇` the second reduces to the first whenever `S` is nonsingular.

use log::warn;

use crate::charts::{GenCoords, GIMBAL_TOL};
use crate::error::{Error, Result};
use crate::lin3::{Mat3, Vec3};

/// Symmetric positive definite inertia matrix about the center of mass, in
/// body axes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Inertia {
    matrix: Mat3,
    inverse: Mat3,
}

impl Inertia {
    pub fn new(matrix: Mat3) -> Result<Self> {
        if !matrix.is_finite() {
            return Err(Error::InvalidInertia("non-finite entries".into()));
        }
        let asym = (matrix - matrix.transpose()).max_abs();
        if asym > 1e-12 * matrix.max_abs() {
            return Err(Error::InvalidInertia(format!(
                "not symmetric (max |J - Jᵀ| = {asym:e})"
            )));
        }
        let m = &matrix.0;
        let minors = [m[0][0], m[0][0] * m[1][1] - m[0][1] * m[1][0], matrix.det()];
        if let Some(k) = minors.iter().position(|&d| !(d > 0.0)) {
            return Err(Error::InvalidInertia(format!(
                "leading principal minor {} is {:e}, not positive",
                k + 1,
                minors[k]
            )));
        }
        let inverse = matrix.inverse()?;
        Ok(Inertia { matrix, inverse })
    }

    /// Whether the principal moments satisfy the triangle inequalities that
    /// every physical mass distribution obeys.
    pub fn is_physical(&self) -> bool {
        let [a, b, c] = self.principal_moments();
        a + b >= c && b + c >= a && a + c >= b
    }

    /// Diagonal inertia from principal moments.
    pub fn principal(moments: Vec3) -> Result<Self> {
        Inertia::new(Mat3::from_diagonal(moments))
    }

    pub fn matrix(&self) -> &Mat3 {
        &self.matrix
    }

    pub fn inverse(&self) -> &Mat3 {
        &self.inverse
    }

    /// Eigenvalues of `J`, ascending.
    pub fn principal_moments(&self) -> [f64; 3] {
        symmetric_eigenvalues(&self.matrix)
    }
}

// Closed-form eigenvalues of a symmetric 3×3 matrix (trigonometric method).
fn symmetric_eigenvalues(a: &Mat3) -> [f64; 3] {
    let m = &a.0;
    let p1 = m[0][1].powi(2) + m[0][2].powi(2) + m[1][2].powi(2);
    if p1 == 0.0 {
        let mut d = [m[0][0], m[1][1], m[2][2]];
        d.sort_by(f64::total_cmp);
        return d;
    }
    let q = a.trace() / 3.0;
    let p2 = (m[0][0] - q).powi(2) + (m[1][1] - q).powi(2) + (m[2][2] - q).powi(2) + 2.0 * p1;
    let p = (p2 / 6.0).sqrt();
    let b = (*a - Mat3::IDENTITY * q) * (1.0 / p);
    let r = (b.det() / 2.0).clamp(-1.0, 1.0);
    let phi = r.acos() / 3.0;
    let hi = q + 2.0 * p * phi.cos();
    let lo = q + 2.0 * p * (phi + 2.0 * std::f64::consts::PI / 3.0).cos();
    [lo, 3.0 * q - hi - lo, hi]
}

/// Body-frame applied torque as a function of time.
#[derive(Debug, Clone, PartialEq)]
pub enum TorqueProfile {
    Zero,
    Constant(Vec3),
    /// Linear interpolation between `(t, τ)` knots, held constant outside.
    PiecewiseLinear(Vec<(f64, Vec3)>),
    /// `magnitude · axis/|axis|` for `t_on <= t < t_off`, zero otherwise.
    SpinUp {
        axis: Vec3,
        magnitude: f64,
        t_on: f64,
        t_off: f64,
    },
}

impl TorqueProfile {
    pub fn validate(&self) -> Result<()> {
        match self {
            TorqueProfile::Zero => Ok(()),
            TorqueProfile::Constant(v) if v.is_finite() => Ok(()),
            TorqueProfile::Constant(_) => Err(Error::InvalidTorque("non-finite torque".into())),
            TorqueProfile::PiecewiseLinear(knots) => {
                if knots.is_empty() {
                    return Err(Error::InvalidTorque("no knots".into()));
                }
                if knots.iter().any(|(t, v)| !t.is_finite() || !v.is_finite()) {
                    return Err(Error::InvalidTorque("non-finite knot".into()));
                }
                if knots.windows(2).any(|w| !(w[1].0 > w[0].0)) {
                    return Err(Error::InvalidTorque(
                        "knot times must be strictly increasing".into(),
                    ));
                }
                Ok(())
            }
            TorqueProfile::SpinUp {
                axis,
                magnitude,
                t_on,
                t_off,
            } => {
                if !axis.is_finite() || axis.norm() == 0.0 {
                    return Err(Error::InvalidTorque("spin-up axis must be nonzero".into()));
                }
                if !magnitude.is_finite() || !t_on.is_finite() || !t_off.is_finite() {
                    return Err(Error::InvalidTorque("non-finite spin-up parameter".into()));
                }
                if t_off < t_on {
                    return Err(Error::InvalidTorque("t_off precedes t_on".into()));
                }
                Ok(())
            }
        }
    }

    pub fn at(&self, t: f64) -> Vec3 {
        match self {
            TorqueProfile::Zero => Vec3::ZERO,
            TorqueProfile::Constant(v) => *v,
            TorqueProfile::PiecewiseLinear(knots) => {
                let i = knots.partition_point(|(tk, _)| *tk <= t);
                if i == 0 {
                    knots[0].1
                } else if i == knots.len() {
                    knots[i - 1].1
                } else {
                    let (t0, v0) = knots[i - 1];
                    let (t1, v1) = knots[i];
                    let a = (t - t0) / (t1 - t0);
                    v0 * (1.0 - a) + v1 * a
                }
            }
            TorqueProfile::SpinUp {
                axis,
                magnitude,
                t_on,
                t_off,
            } => {
                if t >= *t_on && t < *t_off {
                    *axis * (magnitude / axis.norm())
                } else {
                    Vec3::ZERO
                }
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RigidBodyParams {
    pub inertia: Inertia,
    pub torque: TorqueProfile,
}

impl RigidBodyParams {
    /// Validates the torque profile and warns when the inertia could not
    /// belong to a real body.
    pub fn new(inertia: Inertia, torque: TorqueProfile) -> Result<Self> {
        torque.validate()?;
        if !inertia.is_physical() {
            let [a, b, c] = inertia.principal_moments();
            warn!("principal moments {a}, {b}, {c} violate the triangle inequality");
        }
        Ok(RigidBodyParams { inertia, torque })
    }

    pub fn torque_free(inertia: Inertia) -> Self {
        RigidBodyParams {
            inertia,
            torque: TorqueProfile::Zero,
        }
    }
}

/// `ω̇ = J⁻¹(τ − ω × Jω)`.
pub fn euler_rhs(j: &Inertia, omega: &Vec3, tau: &Vec3) -> Vec3 {
    let h = *j.matrix() * *omega;
    *j.inverse() * (*tau - omega.cross(&h))
}

/// `½ ωᵀ J ω`.
pub fn kinetic_energy(j: &Inertia, omega: &Vec3) -> f64 {
    0.5 * omega.dot(&(*j.matrix() * *omega))
}

/// `Q = S(q)ᵀ τ`.
pub fn generalized_force(c: &GenCoords, tau: &Vec3) -> Vec3 {
    c.s_matrix().transpose() * *tau
}

/// `q̈` at time `t` with the torque taken from `params`.
pub fn generalized_accel(
    c: &GenCoords,
    qdot: &Vec3,
    params: &RigidBodyParams,
    t: f64,
) -> Result<Vec3> {
    generalized_accel_with_torque(c, qdot, &params.inertia, &params.torque.at(t))
}

/// Solves `SᵀJS q̈ = Sᵀτ − SᵀJṠq̇ − ṠᵀJSq̇ + [q̇ᵀ(∂ᵢS)ᵀJSq̇]ᵢ` for `q̈`.
pub fn generalized_accel_with_torque(
    c: &GenCoords,
    qdot: &Vec3,
    j: &Inertia,
    tau: &Vec3,
) -> Result<Vec3> {
    let k = c.kinematics();
    if !(k.det.abs() > GIMBAL_TOL) {
        return Err(Error::GimbalLock {
            chart: c.chart(),
            det: k.det,
        });
    }
    let jm = *j.matrix();
    let s = k.s;
    let st = s.transpose();
    let s_dot = k.s_dot(qdot);

    let mass = st * jm * s;
    let asym = (mass - mass.transpose()).max_abs();
    debug_assert!(
        asym <= 1e-10 * (1.0 + mass.max_abs()),
        "SᵀJS lost symmetry: {asym:e}"
    );

    let h = jm * (s * *qdot);
    let gyroscopic = st * (jm * (s_dot * *qdot)) + s_dot.transpose() * h
        - k.partials_times(qdot).transpose() * h;
    mass.solve_spd(&(st * *tau - gyroscopic))
}

/// Body angular acceleration `S q̈ + Ṡ q̇` implied by a generalized acceleration.
pub fn omega_dot_from(c: &GenCoords, qdot: &Vec3, qddot: &Vec3) -> Vec3 {
    let k = c.kinematics();
    k.s * *qddot + k.s_dot(qdot) * *qdot
}

/// Angular momentum `(J S q̇, Rᵀ J S q̇)` in body and inertial components.
pub fn angular_momentum(c: &GenCoords, qdot: &Vec3, j: &Inertia) -> (Vec3, Vec3) {
    let body = *j.matrix() * c.omega_from(qdot);
    let inertial = c.rotation_matrix().transpose() * body;
    (body, inertial)
}
