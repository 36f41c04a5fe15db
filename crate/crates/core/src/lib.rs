//! Rigid-body attitude dynamics in generalized coordinates.
//!
//! The crate evaluates Euler's equation `J ω̇ + ω × J ω = τ` two ways: directly
//! in body rates, and through Lagrangian dynamics in one of three attitude
//! charts (3-2-1 Euler angles, 3-1-3 Euler angles, reduced Euler parameters)
//! with `ω = S(q) q̇`. The [`identities`] module checks, numerically, the
//! kinematic identities that make the two agree; [`integrate`] propagates both
//! and compares the resulting trajectories.
//!
//! Modules:
//! - [`lin3`]: 3-vectors, 3×3 matrices and cross-product-matrix identities.
//! - [`charts`]: `S(q)`, its partials, determinants and attitude matrices.
//! - [`identities`]: residuals of the kinematic identities and a sampling sweep.
//! - [`dynamics`]: inertia, torque profiles and both equations of motion.
//! - [`integrate`]: fixed-step RK4 simulation and trajectory comparison.

pub mod charts;
pub mod dynamics;
pub mod error;
pub mod identities;
pub mod integrate;
pub mod lin3;
pub mod quaternion;
pub mod sampling;

pub use charts::{Chart, GenCoords, KinematicsEval, GIMBAL_TOL};
pub use dynamics::{Inertia, RigidBodyParams, TorqueProfile};
pub use error::{Error, Result};
pub use integrate::{BodyState, SimAbort, SimState, TrajectorySample};
pub use lin3::{Mat3, Vec3};
pub use quaternion::Quaternion;
