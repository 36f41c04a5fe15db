use rigidsim_core::charts::Chart;
use rigidsim_core::integrate::{compare_trajectories, TrajectorySample};
use serde::Serialize;

use crate::config::{self, Formulation};
use crate::simulate::trajectory;
use crate::{output, CliError, CompareArgs};

/// Pairwise attitude agreement required for exit code 0.
pub const ANGLE_TOL: f64 = 1e-6;

#[derive(Debug, Serialize)]
pub struct PairReport {
    pub a: Formulation,
    pub b: Formulation,
    pub max_rotation_angle_rad: f64,
    pub max_omega_diff: f64,
    pub angle_at_time: f64,
    pub omega_at_time: f64,
}

#[derive(Debug, Serialize)]
pub struct CompareReportFile {
    pub tool_version: &'static str,
    pub dt: f64,
    pub t_final: f64,
    pub formulations: Vec<Formulation>,
    pub angle_tolerance: f64,
    pub pairs: Vec<PairReport>,
    pub all_within_tolerance: bool,
}

pub fn run(args: &CompareArgs) -> Result<(), CliError> {
    let scenario = config::load(&args.config)?;
    let mut charts: Vec<Chart> = Vec::new();
    for c in &args.charts {
        if !charts.contains(c) {
            charts.push(*c);
        }
    }
    if charts.is_empty() {
        return Err(CliError::Usage(
            "--charts must name at least one chart".into(),
        ));
    }
    // Fail on inexpressible attitudes before spending time integrating.
    for &chart in &charts {
        scenario.chart_state(chart)?;
    }

    let mut formulations = vec![Formulation::Body];
    formulations.extend(charts.iter().map(|&c| Formulation::Chart(c)));

    let runs: Vec<_> = std::thread::scope(|scope| {
        let handles: Vec<_> = formulations
            .iter()
            .map(|&f| {
                scope.spawn({
                    let scenario = &scenario;
                    move || trajectory(scenario, f)
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("simulation thread panicked"))
            .collect()
    });

    let mut trajectories: Vec<Vec<TrajectorySample>> = Vec::new();
    for (f, run) in formulations.iter().zip(runs) {
        match run? {
            Ok(samples) => trajectories.push(samples),
            Err((abort, _)) => {
                return Err(CliError::Stopped {
                    time: abort.time,
                    message: format!("{f}: {}", abort.error),
                })
            }
        }
    }

    let mut pairs = Vec::new();
    for i in 0..formulations.len() {
        for j in i + 1..formulations.len() {
            let cmp = compare_trajectories(&trajectories[i], &trajectories[j])
                .map_err(|e| CliError::Failed(e.to_string()))?;
            pairs.push(PairReport {
                a: formulations[i],
                b: formulations[j],
                max_rotation_angle_rad: cmp.max_rotation_angle_rad,
                max_omega_diff: cmp.max_omega_diff,
                angle_at_time: cmp.angle_at_time,
                omega_at_time: cmp.omega_at_time,
            });
        }
    }
    let all_within_tolerance = pairs.iter().all(|p| p.max_rotation_angle_rad <= ANGLE_TOL);
    for p in &pairs {
        println!(
            "{:<9} vs {:<9} max angle {:.3e} rad (t = {}), max |dω| {:.3e}",
            p.a.to_string(),
            p.b.to_string(),
            p.max_rotation_angle_rad,
            p.angle_at_time,
            p.max_omega_diff
        );
    }
    let report = CompareReportFile {
        tool_version: env!("CARGO_PKG_VERSION"),
        dt: scenario.config.dt,
        t_final: scenario.config.t_final,
        formulations,
        angle_tolerance: ANGLE_TOL,
        pairs,
        all_within_tolerance,
    };
    output::write_json(&args.out, &report)?;
    if all_within_tolerance {
        Ok(())
    } else {
        Err(CliError::Failed(format!(
            "formulations disagree by more than {ANGLE_TOL:e} rad"
        )))
    }
}
