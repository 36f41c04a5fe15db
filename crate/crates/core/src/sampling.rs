//! Random in-domain configurations for sweeps and tests.

use rand::Rng;

use crate::charts::{Chart, GenCoords};
use crate::dynamics::Inertia;
use crate::lin3::{Mat3, Vec3};
use crate::quaternion::Quaternion;

/// Euler-chart samples keep `|det S|` at least this large.
pub const EULER_MIN_DET: f64 = 0.05;

/// Reduced-quaternion samples keep the scalar part at least this large.
pub const QUAT_MIN_SCALAR: f64 = 0.1;

pub fn uniform_vec3<R: Rng + ?Sized>(rng: &mut R, lo: f64, hi: f64) -> Vec3 {
    Vec3([
        rng.gen_range(lo..hi),
        rng.gen_range(lo..hi),
        rng.gen_range(lo..hi),
    ])
}

pub fn uniform_mat3<R: Rng + ?Sized>(rng: &mut R, lo: f64, hi: f64) -> Mat3 {
    Mat3::from_rows(
        uniform_vec3(rng, lo, hi),
        uniform_vec3(rng, lo, hi),
        uniform_vec3(rng, lo, hi),
    )
}

/// Uniformly distributed unit quaternion (rejection from the 4-ball).
pub fn unit_quaternion<R: Rng + ?Sized>(rng: &mut R) -> Quaternion {
    loop {
        let q = Quaternion::new(
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
        );
        let n = q.norm();
        if n > 1e-3 && n <= 1.0 {
            return q.normalized();
        }
    }
}

pub fn rotation<R: Rng + ?Sized>(rng: &mut R) -> Mat3 {
    unit_quaternion(rng).to_dcm()
}

/// Coordinates in `chart` drawn from its principal ranges, rejecting points
/// near the chart's singular set.
pub fn coords<R: Rng + ?Sized>(rng: &mut R, chart: Chart) -> GenCoords {
    use std::f64::consts::{FRAC_PI_2, PI};
    loop {
        let c = match chart {
            Chart::Euler321 => Vec3::new(
                rng.gen_range(-PI..PI),
                rng.gen_range(-FRAC_PI_2..FRAC_PI_2),
                rng.gen_range(-PI..PI),
            ),
            Chart::Euler313 => Vec3::new(
                rng.gen_range(-PI..PI),
                rng.gen_range(0.0..PI),
                rng.gen_range(-PI..PI),
            ),
            Chart::QuatReduced => {
                let q = unit_quaternion(rng);
                if q.w.abs() < QUAT_MIN_SCALAR {
                    continue;
                }
                if q.w < 0.0 {
                    -q.v
                } else {
                    q.v
                }
            }
        };
        let c = GenCoords::new(chart, c).expect("sampled coordinates are in domain");
        if chart == Chart::QuatReduced || c.s_det().abs() >= EULER_MIN_DET {
            return c;
        }
    }
}

/// Diagonal inertia with moments in `[0.5, 5]`.
pub fn diagonal_inertia<R: Rng + ?Sized>(rng: &mut R) -> Inertia {
    Inertia::principal(uniform_vec3(rng, 0.5, 5.0)).expect("positive moments")
}

/// `Rᵀ diag(d) R` with `d ∈ [0.5, 5]³` and a random rotation `R`.
pub fn spd_inertia<R: Rng + ?Sized>(rng: &mut R) -> Inertia {
    let d = Mat3::from_diagonal(uniform_vec3(rng, 0.5, 5.0));
    let r = rotation(rng);
    let j = r.transpose() * d * r;
    // exact symmetry
    let j = (j + j.transpose()) * 0.5;
    Inertia::new(j).expect("rotated positive diagonal is SPD")
}
