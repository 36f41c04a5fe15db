//! JSON simulation config.
//!
//! ```json
//! {
//!   "chart": "euler321",
//!   "inertia": { "principal": [1.0, 1.0, 2.0] },
//!   "initial": { "q": [0.0, 0.0, 0.0] },
//!   "initial_rate": { "omega": [1.0, 0.0, 2.0] },
//!   "torque": { "kind": "zero" },
//!   "dt": 0.001,
//!   "t_final": 5.0
//! }
//! ```
//!
//! `chart` is one of `euler321`, `euler313`, `quat` or `body` (unit
//! quaternion and body rates, no chart). `initial` holds either chart
//! coordinates `q` or a scalar-first `attitude_quat`; `initial_rate` holds
//! either `qdot` (in the config's chart) or body rates `omega`.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use log::warn;
use rigidsim_core::charts::{coords_from_dcm, Chart, GenCoords};
use rigidsim_core::dynamics::{Inertia, RigidBodyParams, TorqueProfile};
use rigidsim_core::integrate::{BodyState, SimState};
use rigidsim_core::lin3::{Mat3, Vec3};
use rigidsim_core::quaternion::Quaternion;
use serde::{Deserialize, Serialize};

use crate::CliError;

/// What a run integrates: one chart's generalized coordinates, or the
/// quaternion/body-rate reference.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum Formulation {
    Body,
    Chart(Chart),
}

impl fmt::Display for Formulation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formulation::Body => f.write_str("body"),
            Formulation::Chart(c) => write!(f, "{c}"),
        }
    }
}

impl FromStr for Formulation {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.eq_ignore_ascii_case("body") {
            return Ok(Formulation::Body);
        }
        s.parse::<Chart>()
            .map(Formulation::Chart)
            .map_err(|_| format!("unknown chart {s:?} (expected euler321, euler313, quat or body)"))
    }
}

impl TryFrom<String> for Formulation {
    type Error = String;
    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

impl From<Formulation> for String {
    fn from(f: Formulation) -> String {
        f.to_string()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum InertiaSpec {
    Principal([f64; 3]),
    /// Row-major.
    Matrix([f64; 9]),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum InitialAttitude {
    Q([f64; 3]),
    /// Scalar first, body-from-inertial.
    AttitudeQuat([f64; 4]),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum InitialRate {
    Qdot([f64; 3]),
    Omega([f64; 3]),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Knot {
    pub t: f64,
    pub torque: [f64; 3],
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum TorqueSpec {
    #[default]
    Zero,
    Constant {
        torque: [f64; 3],
    },
    PiecewiseLinear {
        knots: Vec<Knot>,
    },
    SpinUp {
        axis: [f64; 3],
        magnitude: f64,
        t_on: f64,
        t_off: f64,
    },
}

impl From<&TorqueSpec> for TorqueProfile {
    fn from(spec: &TorqueSpec) -> Self {
        match spec {
            TorqueSpec::Zero => TorqueProfile::Zero,
            TorqueSpec::Constant { torque } => TorqueProfile::Constant(Vec3(*torque)),
            TorqueSpec::PiecewiseLinear { knots } => TorqueProfile::PiecewiseLinear(
                knots.iter().map(|k| (k.t, Vec3(k.torque))).collect(),
            ),
            TorqueSpec::SpinUp {
                axis,
                magnitude,
                t_on,
                t_off,
            } => TorqueProfile::SpinUp {
                axis: Vec3(*axis),
                magnitude: *magnitude,
                t_on: *t_on,
                t_off: *t_off,
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimConfig {
    pub chart: Formulation,
    pub inertia: InertiaSpec,
    pub initial: InitialAttitude,
    pub initial_rate: InitialRate,
    #[serde(default)]
    pub torque: TorqueSpec,
    pub dt: f64,
    pub t_final: f64,
    /// Recorded for provenance; the integrators are deterministic.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

/// Physical initial condition shared by every formulation.
#[derive(Debug, Clone, Copy)]
pub struct Initial {
    /// Body-from-inertial attitude.
    pub rotation: Mat3,
    pub attitude: Quaternion,
    pub omega: Vec3,
    /// Coordinates and rates as given, when the config used chart coordinates.
    given: Option<(GenCoords, Option<Vec3>)>,
}

/// A config that passed validation.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub config: SimConfig,
    pub params: RigidBodyParams,
    pub initial: Initial,
}

pub fn load(path: &Path) -> Result<Scenario, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_owned(),
        source,
    })?;
    let config: SimConfig = serde_json::from_str(&text)
        .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
    Scenario::new(config)
}

impl Scenario {
    pub fn new(config: SimConfig) -> Result<Self, CliError> {
        let bad = |msg: String| CliError::Config(msg);
        if !(config.dt > 0.0) || !config.dt.is_finite() {
            return Err(bad(format!("dt = {} must be positive", config.dt)));
        }
        if !config.t_final.is_finite() || config.t_final < config.dt {
            return Err(bad(format!(
                "t_final = {} must be at least dt",
                config.t_final
            )));
        }
        let inertia = match &config.inertia {
            InertiaSpec::Principal(m) => Inertia::principal(Vec3(*m)),
            InertiaSpec::Matrix(m) => Inertia::new(Mat3::from_row_slice(m)),
        }
        .map_err(|e| bad(e.to_string()))?;
        let params = RigidBodyParams::new(inertia, TorqueProfile::from(&config.torque))
            .map_err(|e| bad(e.to_string()))?;

        let (rotation, attitude, given_q) = match (&config.initial, config.chart) {
            (InitialAttitude::Q(_), Formulation::Body) => {
                return Err(bad("chart \"body\" needs initial.attitude_quat".into()))
            }
            (InitialAttitude::Q(q), Formulation::Chart(chart)) => {
                let c = GenCoords::new(chart, Vec3(*q)).map_err(|e| bad(e.to_string()))?;
                let r = c.rotation_matrix();
                let attitude = match c.quat_lift() {
                    Ok(lift) => Quaternion::from_array(lift),
                    Err(_) => Quaternion::from_dcm(&r),
                };
                (r, attitude, Some(c))
            }
            (InitialAttitude::AttitudeQuat(a), _) => {
                let q = Quaternion::from_array(*a);
                let n = q.norm();
                if !n.is_finite() || n < 1e-12 {
                    return Err(bad(
                        "attitude_quat must be a nonzero finite quaternion".into()
                    ));
                }
                if (n - 1.0).abs() > 1e-9 {
                    warn!("attitude_quat has norm {n}; normalizing");
                }
                let q = q.normalized();
                (q.to_dcm(), q, None)
            }
        };

        let (omega, given_qdot) = match (&config.initial_rate, given_q) {
            (InitialRate::Omega(w), _) => (Vec3(*w), None),
            (InitialRate::Qdot(qd), Some(c)) => (c.omega_from(&Vec3(*qd)), Some(Vec3(*qd))),
            (InitialRate::Qdot(_), None) => {
                return Err(bad(
                    "initial_rate.qdot needs chart coordinates in initial.q".into(),
                ))
            }
        };
        if !omega.is_finite() {
            return Err(bad("initial rate is not finite".into()));
        }

        Ok(Scenario {
            config,
            params,
            initial: Initial {
                rotation,
                attitude,
                omega,
                given: given_q.map(|c| (c, given_qdot)),
            },
        })
    }

    pub fn body_state(&self) -> BodyState {
        BodyState {
            t: 0.0,
            attitude: self.initial.attitude,
            omega: self.initial.omega,
        }
    }

    /// The initial condition in `chart`. Coordinates given in the same chart
    /// are used verbatim; anything else goes through the attitude matrix.
    pub fn chart_state(&self, chart: Chart) -> Result<SimState, CliError> {
        let coords = match self.initial.given {
            Some((c, _)) if c.chart() == chart => c,
            _ => coords_from_dcm(&self.initial.rotation, chart).map_err(|e| {
                CliError::Inexpressible {
                    chart,
                    reason: e.to_string(),
                }
            })?,
        };
        let qdot = match self.initial.given {
            Some((c, Some(qdot))) if c.chart() == chart => qdot,
            _ => coords
                .qdot_from_omega(&self.initial.omega)
                .map_err(|e| CliError::Stopped {
                    time: 0.0,
                    message: e.to_string(),
                })?,
        };
        Ok(SimState {
            t: 0.0,
            coords,
            qdot,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(json: &str) -> Result<Scenario, CliError> {
        let config: SimConfig =
            serde_json::from_str(json).map_err(|e| CliError::Config(e.to_string()))?;
        Scenario::new(config)
    }

    const BASE: &str = r#"{"chart":"euler321","inertia":{"principal":[1,1,2]},
        "initial":{"q":[0.1,0.2,0.3]},"initial_rate":{"omega":[1,0,2]},"dt":0.001,"t_final":1}"#;

    #[test]
    fn parses_minimal_config() {
        let s = parse(BASE).unwrap();
        assert_eq!(s.config.chart, Formulation::Chart(Chart::Euler321));
        assert_eq!(s.config.torque, TorqueSpec::Zero);
        let st = s.chart_state(Chart::Euler321).unwrap();
        assert_eq!(st.coords.q(), Vec3::new(0.1, 0.2, 0.3));
        assert!((st.coords.omega_from(&st.qdot) - Vec3::new(1.0, 0.0, 2.0)).max_abs() < 1e-14);
    }

    #[test]
    fn rejects_invalid_configs() {
        let cases = [
            BASE.replace("\"dt\":0.001", "\"dt\":0"),
            BASE.replace("\"t_final\":1", "\"t_final\":0.0001"),
            BASE.replace("[1,1,2]", "[1,-1,2]"),
            BASE.replace("\"euler321\"", "\"euler123\""),
            BASE.replace(
                "{\"q\":[0.1,0.2,0.3]}",
                "{\"q\":[0.1,0.2,0.3],\"attitude_quat\":[1,0,0,0]}",
            ),
            BASE.replace("\"euler321\"", "\"body\""),
            BASE.replace("\"dt\"", "\"step\""),
        ];
        for json in cases {
            assert!(matches!(parse(&json), Err(CliError::Config(_))), "{json}");
        }
    }

    #[test]
    fn torque_specs() {
        let json = BASE.replace(
            "\"dt\"",
            r#""torque":{"kind":"piecewise_linear","knots":[{"t":0,"torque":[0,0,0]},{"t":1,"torque":[0,0,2]}]},"dt""#,
        );
        let s = parse(&json).unwrap();
        assert_eq!(s.params.torque.at(0.5), Vec3::new(0.0, 0.0, 1.0));
        let bad = json.replace("\"t\":1", "\"t\":0");
        assert!(parse(&bad).is_err());
        let spin = BASE.replace(
            "\"dt\"",
            r#""torque":{"kind":"spin_up","axis":[0,0,2],"magnitude":0.5,"t_on":0.1,"t_off":0.2},"dt""#,
        );
        assert_eq!(
            parse(&spin).unwrap().params.torque.at(0.15),
            Vec3::new(0.0, 0.0, 0.5)
        );
    }

    #[test]
    fn half_turn_is_inexpressible_in_quat() {
        let json = BASE
            .replace("\"euler321\"", "\"body\"")
            .replace("{\"q\":[0.1,0.2,0.3]}", "{\"attitude_quat\":[0,1,0,0]}");
        let s = parse(&json).unwrap();
        assert!(matches!(
            s.chart_state(Chart::QuatReduced),
            Err(CliError::Inexpressible { .. })
        ));
        assert!(s.chart_state(Chart::Euler321).is_ok());
    }
}
