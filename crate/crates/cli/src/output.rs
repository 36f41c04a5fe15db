//! Trajectory and report writers.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use rigidsim_core::integrate::TrajectorySample;
use serde::Serialize;

use crate::CliError;

pub const CSV_HEADER: &str =
    "t,q1,q2,q3,qd1,qd2,qd3,w1,w2,w3,R11,R12,R13,R21,R22,R23,R31,R32,R33,energy,hx,hy,hz";

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Jsonl,
}

#[derive(Serialize)]
struct JsonSample {
    t: f64,
    q: [f64; 3],
    qdot: [f64; 3],
    omega: [f64; 3],
    rotation: [[f64; 3]; 3],
    energy: f64,
    h_inertial: [f64; 3],
}

impl From<&TrajectorySample> for JsonSample {
    fn from(s: &TrajectorySample) -> Self {
        JsonSample {
            t: s.t,
            q: s.q.0,
            qdot: s.qdot.0,
            omega: s.omega.0,
            rotation: s.rotation.0,
            energy: s.energy,
            h_inertial: s.h_inertial.0,
        }
    }
}

/// Shortest representation that parses back to the same `f64`.
fn push_float(line: &mut String, x: f64) {
    let mut buf = ryu::Buffer::new();
    line.push_str(buf.format(x));
}

pub fn csv_row(s: &TrajectorySample) -> String {
    let mut values = Vec::with_capacity(23);
    values.push(s.t);
    values.extend(s.q.0);
    values.extend(s.qdot.0);
    values.extend(s.omega.0);
    for row in s.rotation.0 {
        values.extend(row);
    }
    values.push(s.energy);
    values.extend(s.h_inertial.0);

    let mut line = String::with_capacity(23 * 24);
    for (i, x) in values.into_iter().enumerate() {
        if i > 0 {
            line.push(',');
        }
        push_float(&mut line, x);
    }
    line
}

fn io_err(path: &Path) -> impl Fn(std::io::Error) -> CliError + '_ {
    move |source| CliError::Io {
        path: path.to_owned(),
        source,
    }
}

pub fn write_trajectory(
    path: &Path,
    format: Format,
    samples: &[TrajectorySample],
) -> Result<(), CliError> {
    let err = io_err(path);
    let mut w = BufWriter::new(File::create(path).map_err(&err)?);
    match format {
        Format::Csv => {
            writeln!(w, "{CSV_HEADER}").map_err(&err)?;
            for s in samples {
                writeln!(w, "{}", csv_row(s)).map_err(&err)?;
            }
        }
        Format::Jsonl => {
            for s in samples {
                let line = serde_json::to_string(&JsonSample::from(s)).expect("samples serialize");
                writeln!(w, "{line}").map_err(&err)?;
            }
        }
    }
    w.flush().map_err(&err)
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), CliError> {
    let err = io_err(path);
    let mut text = serde_json::to_string_pretty(value).expect("reports serialize");
    text.push('\n');
    std::fs::write(path, text).map_err(err)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rigidsim_core::lin3::{Mat3, Vec3};

    #[test]
    fn csv_row_roundtrips() {
        let s = TrajectorySample {
            t: 0.1,
            q: Vec3::new(1.0 / 3.0, -2.5e-17, 0.0),
            qdot: Vec3::new(1e300, 0.1 + 0.2, -0.0),
            omega: Vec3::new(1.0, 2.0, 3.0),
            rotation: Mat3::IDENTITY,
            energy: std::f64::consts::PI,
            h_inertial: Vec3::new(4.0, 5.0, 6.0),
        };
        let row = csv_row(&s);
        let fields: Vec<f64> = row.split(',').map(|f| f.parse().unwrap()).collect();
        assert_eq!(fields.len(), CSV_HEADER.split(',').count());
        assert_eq!(fields[1], 1.0 / 3.0);
        assert_eq!(fields[5], 0.1 + 0.2);
        assert_eq!(fields[19], std::f64::consts::PI);
        for field in row.split(',') {
            let mantissa = field.split(['e', 'E']).next().unwrap();
            let digits: String = mantissa.chars().filter(char::is_ascii_digit).collect();
            assert!(digits.trim_start_matches('0').len() <= 17, "{field}");
        }
    }
}
