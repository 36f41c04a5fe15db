//! Numerical checks of the kinematic identities that make the
//! generalized-coordinate equation of motion collapse to Euler's equation.
//!
//! For `ω = S(q) q̇` with columns `S₁, S₂, S₃`, the following are equivalent:
//!
//! * (a) `Ṡ + (S q̇)ˣ S = [∂₁S q̇  ∂₂S q̇  ∂₃S q̇]`
//! * (b) `Σᵢ q̇ᵢ ∂ᵢS + [S₂×S₃  S₃×S₁  S₁×S₂] q̇ˣ = [∂₁S q̇  ∂₂S q̇  ∂₃S q̇]`
//! * (c) `∂ⱼSᵢ − ∂ᵢSⱼ = Sᵢ × Sⱼ` for `(i, j) ∈ {(1,2), (1,3), (2,3)}`
//!
//! and, for nonsingular `S`, to
//! `Sᵀ [∂₃S₂−∂₂S₃  ∂₁S₃−∂₃S₁  ∂₂S₁−∂₁S₂] = det(S) I`.
//!
//! Every residual here is zero in exact arithmetic. Residual size is the
//! largest absolute entry; sweeps divide it by an operand-norm scale so one
//! tolerance works across charts.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::charts::{Chart, GenCoords, KinematicsEval, GIMBAL_TOL};
use crate::dynamics::Inertia;
use crate::error::{Error, Result};
use crate::lin3::{cofactor_columns, Mat3, Vec3};
use crate::sampling;

/// Step used by [`finite_diff_partials`] when checking analytic partials.
pub const FD_STEP: f64 = 1e-6;

/// Default per-unit-operand tolerance for the identity sweep.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Coordinate rates in sweeps are drawn from `[-QDOT_RANGE, QDOT_RANGE]³`.
pub const QDOT_RANGE: f64 = 2.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IdentityId {
    Prop1a,
    Prop1b,
    Prop1c,
    IdentShort,
    Coriolis,
    QuatMs,
}

impl IdentityId {
    pub fn name(&self) -> &'static str {
        match self {
            IdentityId::Prop1a => "prop1a",
            IdentityId::Prop1b => "prop1b",
            IdentityId::Prop1c => "prop1c",
            IdentityId::IdentShort => "ident_short",
            IdentityId::Coriolis => "coriolis",
            IdentityId::QuatMs => "quat_ms",
        }
    }

    /// Families evaluated for `chart`, in report order.
    pub fn for_chart(chart: Chart) -> &'static [IdentityId] {
        use IdentityId::*;
        match chart {
            Chart::QuatReduced => &[Prop1a, Prop1b, Prop1c, IdentShort, Coriolis, QuatMs],
            _ => &[Prop1a, Prop1b, Prop1c, IdentShort, Coriolis],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdentityReport {
    pub identity: IdentityId,
    pub chart: Chart,
    pub samples: usize,
    /// Largest scaled residual over the sweep.
    pub max_residual: f64,
    pub tolerance: f64,
    pub passed: bool,
    pub worst_case_q: Vec3,
    pub worst_case_qdot: Option<Vec3>,
}

/// Property (a) residual from an evaluated kinematic bundle.
pub fn prop1a(k: &KinematicsEval, qdot: &Vec3) -> Mat3 {
    k.s_dot(qdot) + (k.s * *qdot).skew() * k.s - k.partials_times(qdot)
}

/// Property (b) residual from an evaluated kinematic bundle.
pub fn prop1b(k: &KinematicsEval, qdot: &Vec3) -> Mat3 {
    k.s_dot(qdot) + cofactor_columns(&k.s) * qdot.skew() - k.partials_times(qdot)
}

/// Property (c) residuals, one vector per column pair (1,2), (1,3), (2,3).
pub fn prop1c(k: &KinematicsEval) -> [Vec3; 3] {
    let col = |m: &Mat3, j: usize| m.col(j);
    let s = |j: usize| k.s.col(j);
    let d = |i: usize, j: usize| col(&k.ds[i], j); // ∂ᵢ Sⱼ
    [
        d(1, 0) - d(0, 1) - s(0).cross(&s(1)),
        d(2, 0) - d(0, 2) - s(0).cross(&s(2)),
        d(2, 1) - d(1, 2) - s(1).cross(&s(2)),
    ]
}

/// `[∂₃S₂−∂₂S₃  ∂₁S₃−∂₃S₁  ∂₂S₁−∂₁S₂]`.
pub fn curl_columns(k: &KinematicsEval) -> Mat3 {
    let d = |i: usize, j: usize| k.ds[i].col(j);
    Mat3::from_cols(d(2, 1) - d(1, 2), d(0, 2) - d(2, 0), d(1, 0) - d(0, 1))
}

pub fn ident_short(k: &KinematicsEval) -> Mat3 {
    k.s.transpose() * curl_columns(k) - Mat3::IDENTITY * k.det
}

/// `S⁻ᵀ(ṠᵀJSq̇ − [q̇ᵀ(∂ᵢS)ᵀJSq̇]ᵢ) − ω × Jω` with `ω = S q̇`.
pub fn coriolis(k: &KinematicsEval, qdot: &Vec3, j: &Mat3) -> Result<Vec3> {
    let omega = k.s * *qdot;
    let h = *j * omega;
    let lhs = k.s_dot(qdot).transpose() * h - k.partials_times(qdot).transpose() * h;
    Ok(k.s.transpose().solve(&lhs)? - omega.cross(&h))
}

/// `∞`-norm over the three vectors returned by [`prop1c`].
pub fn prop1c_max(r: &[Vec3; 3]) -> f64 {
    r.iter().map(Vec3::max_abs).fold(0.0, f64::max)
}

pub fn prop1_scale(k: &KinematicsEval, qdot: &Vec3) -> f64 {
    let s = k.s.max_abs();
    1.0 + (k.ds_max_abs() + s * s) * qdot.norm()
}

pub fn prop1c_scale(k: &KinematicsEval) -> f64 {
    let s = k.s.max_abs();
    1.0 + k.ds_max_abs() + s * s
}

pub fn ident_short_scale(k: &KinematicsEval) -> f64 {
    let s = k.s.max_abs();
    1.0 + s * (k.ds_max_abs() + s * s)
}

pub fn coriolis_scale(qdot: &Vec3) -> f64 {
    1.0 + qdot.norm_squared()
}

pub fn residual_prop1a(c: &GenCoords, qdot: &Vec3) -> Mat3 {
    prop1a(&c.kinematics(), qdot)
}

pub fn residual_prop1b(c: &GenCoords, qdot: &Vec3) -> Mat3 {
    prop1b(&c.kinematics(), qdot)
}

pub fn residual_prop1c(c: &GenCoords) -> [Vec3; 3] {
    prop1c(&c.kinematics())
}

pub fn residual_identshort(c: &GenCoords) -> Mat3 {
    ident_short(&c.kinematics())
}

pub fn residual_coriolis(c: &GenCoords, qdot: &Vec3, j: &Inertia) -> Result<Vec3> {
    let k = c.kinematics();
    if !(k.det.abs() > GIMBAL_TOL) {
        return Err(Error::GimbalLock {
            chart: c.chart(),
            det: k.det,
        });
    }
    coriolis(&k, qdot, j.matrix())
}

/// `M(q) = (4/q₁) [[q₁, q₄, −q₃], [−q₄, q₁, q₂], [q₃, −q₂, q₁]]` for the reduced
/// quaternion chart, satisfying `Mᵀ S = (8/q₁) I`.
#[rustfmt::skip]
pub fn quat_m_matrix(c: &GenCoords) -> Result<Mat3> {
    let [q1, q2, q3, q4] = c.quat_lift()?;
    Ok(Mat3([
        [q1,  q4, -q3],
        [-q4, q1,  q2],
        [q3, -q2,  q1],
    ]) * (4.0 / q1))
}

/// `M(q)ᵀ S(q) − (8/q₁) I`.
pub fn quat_ms_residual(c: &GenCoords) -> Result<Mat3> {
    let m = quat_m_matrix(c)?;
    let q1 = c.quat_lift()?[0];
    Ok(m.transpose() * c.s_matrix() - Mat3::IDENTITY * (8.0 / q1))
}

/// Central differences `(S(q + h eᵢ) − S(q − h eᵢ)) / 2h`.
pub fn finite_diff_partials(c: &GenCoords, h: f64) -> Result<[Mat3; 3]> {
    if !(h > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "step h = {h} must be positive"
        )));
    }
    let mut out = [Mat3::ZERO; 3];
    for (i, d) in out.iter_mut().enumerate() {
        let step = Vec3::unit(i) * h;
        let plus = GenCoords::new(c.chart(), c.q() + step)?;
        let minus = GenCoords::new(c.chart(), c.q() - step)?;
        *d = (plus.s_matrix() - minus.s_matrix()) * (0.5 / h);
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy)]
struct Worst {
    residual: f64,
    q: Vec3,
    qdot: Option<Vec3>,
}

impl Worst {
    fn new() -> Self {
        Worst {
            residual: f64::NEG_INFINITY,
            q: Vec3::ZERO,
            qdot: None,
        }
    }

    fn offer(&mut self, residual: f64, q: Vec3, qdot: Option<Vec3>) {
        let residual = if residual.is_nan() {
            f64::INFINITY
        } else {
            residual
        };
        if residual > self.residual {
            *self = Worst { residual, q, qdot };
        }
    }
}

fn chart_seed(seed: u64, chart: Chart) -> u64 {
    let salt = match chart {
        Chart::Euler321 => 0x321,
        Chart::Euler313 => 0x313,
        Chart::QuatReduced => 0x4,
    };
    seed ^ (salt << 32)
}

/// Sweeps every identity family over `samples` random in-domain points per
/// chart. Euler-chart points keep `|det S| >= 0.05`; quaternion points keep
/// `q₁ >= 0.1`. Each sample also draws `q̇ ∈ [−2, 2]³` and a random SPD inertia.
pub fn run_identity_suite(
    charts: &[Chart],
    samples: usize,
    seed: u64,
    tol: f64,
) -> Result<Vec<IdentityReport>> {
    if samples == 0 {
        return Err(Error::InvalidArgument("samples must be at least 1".into()));
    }
    let mut reports = Vec::new();
    for &chart in charts {
        let mut rng = ChaCha8Rng::seed_from_u64(chart_seed(seed, chart));
        let families = IdentityId::for_chart(chart);
        let mut worst = vec![Worst::new(); families.len()];
        for _ in 0..samples {
            let c = sampling::coords(&mut rng, chart);
            let qdot = sampling::uniform_vec3(&mut rng, -QDOT_RANGE, QDOT_RANGE);
            let j = sampling::spd_inertia(&mut rng);
            let k = c.kinematics();
            for (family, w) in families.iter().zip(worst.iter_mut()) {
                let (r, with_rate) = match family {
                    IdentityId::Prop1a => {
                        (prop1a(&k, &qdot).max_abs() / prop1_scale(&k, &qdot), true)
                    }
                    IdentityId::Prop1b => {
                        (prop1b(&k, &qdot).max_abs() / prop1_scale(&k, &qdot), true)
                    }
                    IdentityId::Prop1c => (prop1c_max(&prop1c(&k)) / prop1c_scale(&k), false),
                    IdentityId::IdentShort => {
                        (ident_short(&k).max_abs() / ident_short_scale(&k), false)
                    }
                    IdentityId::Coriolis => {
                        let r = residual_coriolis(&c, &qdot, &j)
                            .map(|v| v.max_abs())
                            .unwrap_or(f64::INFINITY);
                        (r / coriolis_scale(&qdot), true)
                    }
                    IdentityId::QuatMs => {
                        let r = quat_ms_residual(&c).map(|m| m.max_abs())?;
                        (r, false)
                    }
                };
                w.offer(r, c.q(), with_rate.then_some(qdot));
            }
        }
        for (family, w) in families.iter().zip(worst) {
            reports.push(IdentityReport {
                identity: *family,
                chart,
                samples,
                max_residual: w.residual,
                tolerance: tol,
                passed: w.residual <= tol,
                worst_case_q: w.q,
                worst_case_qdot: w.qdot,
            });
        }
    }
    Ok(reports)
}
