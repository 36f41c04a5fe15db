//! Fixed-step RK4 propagation of the two formulations and trajectory
//! comparison.
//!
//! [`simulate_generalized`] integrates `(q, q̇)` in one chart with
//! [`generalized_accel`]; [`simulate_body`] integrates a unit quaternion and
//! body rates with Euler's equation. Both emit a [`TrajectorySample`] at the
//! initial time and after every step, on the grid `t₀ + k·dt`.

use log::warn;
use serde::Serialize;
use thiserror::Error;

use crate::charts::{Chart, GenCoords, GIMBAL_TOL};
use crate::dynamics::{euler_rhs, generalized_accel, kinetic_energy, Inertia, RigidBodyParams};
use crate::error::{Error, Result};
use crate::lin3::{Mat3, Vec3};
use crate::quaternion::Quaternion;

/// Bisection passes used to pin down where `det S` crosses zero.
const MAX_BISECTIONS: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimState {
    pub t: f64,
    pub coords: GenCoords,
    pub qdot: Vec3,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BodyState {
    pub t: f64,
    pub attitude: Quaternion,
    pub omega: Vec3,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrajectorySample {
    pub t: f64,
    pub q: Vec3,
    pub qdot: Vec3,
    pub omega: Vec3,
    /// Body-from-inertial direction-cosine matrix.
    pub rotation: Mat3,
    pub energy: f64,
    /// Angular momentum in inertial components.
    pub h_inertial: Vec3,
}

/// A run that stopped before `t_final`.
#[derive(Debug, Clone, PartialEq, Error)]
#[error("simulation stopped at t = {time}: {error}")]
pub struct SimAbort {
    pub error: Error,
    pub time: f64,
    /// State at `time` when one is available (for gimbal lock, the localized
    /// state where `|det S| <= GIMBAL_TOL`).
    pub state: Option<SimState>,
    /// Samples recorded before the failure.
    pub partial: Vec<TrajectorySample>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TrajectoryComparison {
    pub max_rotation_angle_rad: f64,
    pub max_omega_diff: f64,
    pub angle_at_time: f64,
    pub omega_at_time: f64,
}

/// One classical Runge–Kutta step of `ẋ = f(t, x)`.
pub fn rk4_step<const N: usize, F>(mut deriv: F, t: f64, x: &[f64; N], dt: f64) -> Result<[f64; N]>
where
    F: FnMut(f64, &[f64; N]) -> Result<[f64; N]>,
{
    if !(dt > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "dt = {dt} must be positive"
        )));
    }
    let mut eval = |tau: f64, y: &[f64; N]| -> Result<[f64; N]> {
        let k = deriv(tau, y)?;
        if k.iter().all(|v| v.is_finite()) {
            Ok(k)
        } else {
            Err(Error::NonFiniteDerivative { t: tau })
        }
    };
    let axpy = |a: f64, k: &[f64; N]| -> [f64; N] {
        let mut y = *x;
        y.iter_mut().zip(k).for_each(|(y, k)| *y += a * k);
        y
    };
    let half = 0.5 * dt;
    let k1 = eval(t, x)?;
    let k2 = eval(t + half, &axpy(half, &k1))?;
    let k3 = eval(t + half, &axpy(half, &k2))?;
    let k4 = eval(t + dt, &axpy(dt, &k3))?;
    let mut out = *x;
    for i in 0..N {
        out[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    Ok(out)
}

fn step_count(t0: f64, dt: f64, t_final: f64) -> Result<usize> {
    if !(dt > 0.0) || !dt.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "dt = {dt} must be positive"
        )));
    }
    if !t_final.is_finite() || t_final < t0 {
        return Err(Error::InvalidArgument(format!(
            "t_final = {t_final} precedes the initial time {t0}"
        )));
    }
    Ok(((t_final - t0) / dt).round() as usize)
}

fn pack(c: &GenCoords, qdot: &Vec3) -> [f64; 6] {
    let q = c.q();
    [q[0], q[1], q[2], qdot[0], qdot[1], qdot[2]]
}

fn split(x: &[f64; 6]) -> (Vec3, Vec3) {
    (Vec3([x[0], x[1], x[2]]), Vec3([x[3], x[4], x[5]]))
}

pub fn sample_generalized(t: f64, c: &GenCoords, qdot: &Vec3, j: &Inertia) -> TrajectorySample {
    let omega = c.omega_from(qdot);
    let rotation = c.rotation_matrix();
    TrajectorySample {
        t,
        q: c.q(),
        qdot: *qdot,
        omega,
        rotation,
        energy: kinetic_energy(j, &omega),
        h_inertial: rotation.transpose() * (*j.matrix() * omega),
    }
}

/// Integrates `(q, q̇)` with `q̈` from [`generalized_accel`].
///
/// The run stops with [`Error::GimbalLock`] as soon as the chart's `det S`
/// reaches `GIMBAL_TOL` or changes sign over a step; in the latter case the
/// crossing is localized by bisecting the step length so that the reported
/// state has `|det S| <= GIMBAL_TOL`.
pub fn simulate_generalized(
    initial: &SimState,
    params: &RigidBodyParams,
    dt: f64,
    t_final: f64,
) -> Result<Vec<TrajectorySample>, SimAbort> {
    let abort =
        |error: Error, time: f64, state: Option<SimState>, partial: Vec<TrajectorySample>| {
            SimAbort {
                error,
                time,
                state,
                partial,
            }
        };
    let n =
        step_count(initial.t, dt, t_final).map_err(|e| abort(e, initial.t, None, Vec::new()))?;
    let chart = initial.coords.chart();
    let j = &params.inertia;

    let det0 = initial.coords.s_det();
    if !(det0.abs() > GIMBAL_TOL) {
        return Err(abort(
            Error::GimbalLock { chart, det: det0 },
            initial.t,
            Some(*initial),
            Vec::new(),
        ));
    }

    let deriv = |t: f64, x: &[f64; 6]| -> Result<[f64; 6]> {
        let (q, qdot) = split(x);
        let c = GenCoords::new(chart, q)?;
        let qdd = generalized_accel(&c, &qdot, params, t)?;
        Ok([qdot[0], qdot[1], qdot[2], qdd[0], qdd[1], qdd[2]])
    };

    let mut samples = Vec::with_capacity(n + 1);
    samples.push(sample_generalized(
        initial.t,
        &initial.coords,
        &initial.qdot,
        j,
    ));
    let mut x = pack(&initial.coords, &initial.qdot);
    let mut det = det0;

    for k in 0..n {
        let t = initial.t + k as f64 * dt;
        let t_next = initial.t + (k + 1) as f64 * dt;
        let h = t_next - t;
        let crossing = match rk4_step(deriv, t, &x, h) {
            Ok(next) => {
                let (q, qdot) = split(&next);
                match GenCoords::new(chart, q) {
                    Ok(c) => {
                        let d = c.s_det();
                        if d.abs() > GIMBAL_TOL && d.signum() == det.signum() {
                            samples.push(sample_generalized(t_next, &c, &qdot, j));
                            x = next;
                            det = d;
                            continue;
                        }
                        true
                    }
                    Err(e) => return Err(abort(e, t_next, None, samples)),
                }
            }
            Err(Error::GimbalLock { .. }) => true,
            Err(e) => return Err(abort(e, t, None, samples)),
        };
        debug_assert!(crossing);
        let (time, state, d) = localize_singularity(deriv, chart, t, &x, h, det);
        return Err(abort(
            Error::GimbalLock { chart, det: d },
            time,
            Some(state),
            samples,
        ));
    }
    Ok(samples)
}

/// Bisects the step length from `(t, x)` until the end state has
/// `|det S| <= GIMBAL_TOL`. Falls back to the last state reached before the
/// crossing if the bracket collapses first.
fn localize_singularity<F>(
    mut deriv: F,
    chart: Chart,
    t: f64,
    x: &[f64; 6],
    dt: f64,
    det_start: f64,
) -> (f64, SimState, f64)
where
    F: FnMut(f64, &[f64; 6]) -> Result<[f64; 6]>,
{
    let state_at = |y: &[f64; 6], time: f64| -> Option<(SimState, f64)> {
        let (q, qdot) = split(y);
        let coords = GenCoords::new(chart, q).ok()?;
        let d = coords.s_det();
        Some((
            SimState {
                t: time,
                coords,
                qdot,
            },
            d,
        ))
    };
    let (mut best, mut best_det) = state_at(x, t).expect("accepted state is in domain");
    let (mut lo, mut hi) = (0.0, dt);
    for _ in 0..MAX_BISECTIONS {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        match rk4_step(&mut deriv, t, x, mid)
            .ok()
            .and_then(|y| state_at(&y, t + mid))
        {
            Some((state, d)) if d.abs() <= GIMBAL_TOL => return (t + mid, state, d),
            Some((state, d)) if d.signum() == det_start.signum() => {
                lo = mid;
                best = state;
                best_det = d;
            }
            _ => hi = mid,
        }
    }
    // The last stage of any step ending inside the tolerance band is itself
    // singular, so finish with a secant search along q̇ from the last good
    // state. The remaining interval is so short that q̈ no longer matters.
    let det_along = |d: f64| {
        GenCoords::new(chart, best.coords.q() + best.qdot * d)
            .map(|c| c.s_det())
            .unwrap_or(f64::NAN)
    };
    let (mut d0, mut g0) = (0.0, best_det);
    let mut d1 = (hi - lo).max(1e-6 * dt);
    let mut g1 = det_along(d1);
    for _ in 0..MAX_BISECTIONS {
        if !g1.is_finite() || g1 == g0 {
            break;
        }
        if g1.abs() <= GIMBAL_TOL {
            let coords = GenCoords::new(chart, best.coords.q() + best.qdot * d1)
                .expect("secant iterate is in domain");
            let state = SimState {
                t: best.t + d1,
                coords,
                qdot: best.qdot,
            };
            return (state.t, state, g1);
        }
        let d2 = d1 - g1 * (d1 - d0) / (g1 - g0);
        (d0, g0) = (d1, g1);
        d1 = d2;
        g1 = det_along(d1);
    }
    warn!("could not localize the {chart} singularity below GIMBAL_TOL; closest |det S| = {best_det:e}");
    (best.t, best, best_det)
}

/// Integrates a unit quaternion and body rates with Euler's equation,
/// renormalizing the quaternion after every step.
pub fn simulate_body(
    initial: &BodyState,
    params: &RigidBodyParams,
    dt: f64,
    t_final: f64,
) -> Result<Vec<TrajectorySample>, SimAbort> {
    let abort = |error: Error, time: f64, partial: Vec<TrajectorySample>| SimAbort {
        error,
        time,
        state: None,
        partial,
    };
    let n = step_count(initial.t, dt, t_final).map_err(|e| abort(e, initial.t, Vec::new()))?;
    let j = &params.inertia;
    let deriv = |t: f64, x: &[f64; 7]| -> Result<[f64; 7]> {
        let q = Quaternion::new(x[0], x[1], x[2], x[3]);
        let omega = Vec3([x[4], x[5], x[6]]);
        let qd = q.derivative(omega);
        let wd = euler_rhs(j, &omega, &params.torque.at(t));
        Ok([qd.w, qd.v[0], qd.v[1], qd.v[2], wd[0], wd[1], wd[2]])
    };

    let attitude = initial.attitude.normalized();
    let mut samples = Vec::with_capacity(n + 1);
    samples.push(sample_body(initial.t, &attitude, &initial.omega, j));
    let mut x = [
        attitude.w,
        attitude.v[0],
        attitude.v[1],
        attitude.v[2],
        initial.omega[0],
        initial.omega[1],
        initial.omega[2],
    ];
    for k in 0..n {
        let t = initial.t + k as f64 * dt;
        let t_next = initial.t + (k + 1) as f64 * dt;
        let next = rk4_step(deriv, t, &x, t_next - t).map_err(|e| abort(e, t, samples.clone()))?;
        let raw = Quaternion::new(next[0], next[1], next[2], next[3]);
        let drift = (raw.norm() - 1.0).abs();
        if drift > 1e-9 {
            warn!("quaternion norm drifted by {drift:e} in one step at t = {t}");
        }
        let q = raw.normalized();
        let omega = Vec3([next[4], next[5], next[6]]);
        samples.push(sample_body(t_next, &q, &omega, j));
        x = [q.w, q.v[0], q.v[1], q.v[2], next[4], next[5], next[6]];
    }
    Ok(samples)
}

/// Sample for the body-frame integrator. `q` holds the vector part of the
/// attitude quaternion and `qdot` its rate.
pub fn sample_body(t: f64, attitude: &Quaternion, omega: &Vec3, j: &Inertia) -> TrajectorySample {
    let rotation = attitude.to_dcm();
    TrajectorySample {
        t,
        q: attitude.v,
        qdot: attitude.derivative(*omega).v,
        omega: *omega,
        rotation,
        energy: kinetic_energy(j, omega),
        h_inertial: rotation.transpose() * (*j.matrix() * *omega),
    }
}

/// Rotation angle of `Raᵀ R_b`.
///
/// Evaluated as `atan2(sin, cos)` with `cos = (tr − 1)/2` and `sin` from the
/// antisymmetric part, which equals `arccos((tr − 1)/2)` clamped to `[−1, 1]`
/// but keeps full precision for small angles.
pub fn geodesic_angle(ra: &Mat3, rb: &Mat3) -> f64 {
    let m = ra.transpose() * *rb;
    let cos = ((m.trace() - 1.0) * 0.5).clamp(-1.0, 1.0);
    let axis = Vec3::new(
        m[(2, 1)] - m[(1, 2)],
        m[(0, 2)] - m[(2, 0)],
        m[(1, 0)] - m[(0, 1)],
    );
    (0.5 * axis.norm()).atan2(cos)
}

pub fn compare_trajectories(
    a: &[TrajectorySample],
    b: &[TrajectorySample],
) -> Result<TrajectoryComparison> {
    if a.len() != b.len() {
        return Err(Error::GridMismatch(format!(
            "{} samples vs {} samples",
            a.len(),
            b.len()
        )));
    }
    let mut out = TrajectoryComparison {
        max_rotation_angle_rad: 0.0,
        max_omega_diff: 0.0,
        angle_at_time: a.first().map_or(0.0, |s| s.t),
        omega_at_time: a.first().map_or(0.0, |s| s.t),
    };
    for (sa, sb) in a.iter().zip(b) {
        if (sa.t - sb.t).abs() > 1e-9 * (1.0 + sa.t.abs()) {
            return Err(Error::GridMismatch(format!("t = {} vs t = {}", sa.t, sb.t)));
        }
        let angle = geodesic_angle(&sa.rotation, &sb.rotation);
        if angle > out.max_rotation_angle_rad {
            out.max_rotation_angle_rad = angle;
            out.angle_at_time = sa.t;
        }
        let dw = (sa.omega - sb.omega).norm();
        if dw > out.max_omega_diff {
            out.max_omega_diff = dw;
            out.omega_at_time = sa.t;
        }
    }
    Ok(out)
}
