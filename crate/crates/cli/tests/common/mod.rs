#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::{json, Value};

pub fn rigidsim(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rigidsim"))
        .args(args)
        .env("RUST_LOG", "error")
        .output()
        .expect("rigidsim runs")
}

pub fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

pub fn write_config(dir: &Path, name: &str, config: &Value) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, serde_json::to_string_pretty(config).unwrap()).unwrap();
    path
}

/// J = diag(1,1,2), ω₀ = (1,0,2), angular momentum along inertial z.
pub fn axisymmetric(chart: &str, t_final: f64) -> Value {
    let initial = if chart == "body" {
        json!({ "attitude_quat": spinning_top_quat() })
    } else {
        json!({ "q": spinning_top_coords(chart) })
    };
    json!({
        "chart": chart,
        "inertia": { "principal": [1.0, 1.0, 2.0] },
        "initial": initial,
        "initial_rate": { "omega": [1.0, 0.0, 2.0] },
        "torque": { "kind": "zero" },
        "dt": 1e-3,
        "t_final": t_final,
    })
}

use rigidsim_core::charts::{coords_from_dcm, frame_rotation, Chart};
use rigidsim_core::lin3::Mat3;
use rigidsim_core::quaternion::Quaternion;

/// Closed-form attitude of the axisymmetric motion: 3-1-3 angles
/// (π/2 − 2t, atan(1/4), √17·t).
pub fn spinning_top_rotation(t: f64) -> Mat3 {
    frame_rotation(2, std::f64::consts::FRAC_PI_2 - 2.0 * t)
        * frame_rotation(0, 0.25f64.atan())
        * frame_rotation(2, 17f64.sqrt() * t)
}

pub fn spinning_top_coords(chart: &str) -> [f64; 3] {
    let chart: Chart = chart.parse().unwrap();
    coords_from_dcm(&spinning_top_rotation(0.0), chart)
        .unwrap()
        .q()
        .0
}

pub fn spinning_top_quat() -> [f64; 4] {
    Quaternion::from_dcm(&spinning_top_rotation(0.0)).to_array()
}

pub struct Csv {
    pub header: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Csv {
    pub fn read(path: &Path) -> Csv {
        let text = std::fs::read_to_string(path).unwrap();
        let mut lines = text.lines();
        let header = lines
            .next()
            .unwrap()
            .split(',')
            .map(str::to_owned)
            .collect();
        let rows = lines
            .map(|l| l.split(',').map(|f| f.parse().unwrap()).collect())
            .collect();
        Csv { header, rows }
    }

    pub fn column(&self, name: &str) -> Vec<f64> {
        let i = self.header.iter().position(|h| h == name).unwrap();
        self.rows.iter().map(|r| r[i]).collect()
    }
}
