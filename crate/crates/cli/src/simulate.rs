use log::info;
use rigidsim_core::integrate::{
    sample_generalized, simulate_body, simulate_generalized, SimAbort, TrajectorySample,
};

use crate::config::{self, Formulation, Scenario};
use crate::{output, CliError, SimulateArgs};

/// A finished run, or the abort together with the samples worth writing.
pub type RunOutcome = Result<Vec<TrajectorySample>, (SimAbort, Vec<TrajectorySample>)>;

/// Runs one formulation. On an abort the localized stopping state, when
/// there is one, is appended to the partial trajectory.
pub fn trajectory(scenario: &Scenario, formulation: Formulation) -> Result<RunOutcome, CliError> {
    let (dt, t_final) = (scenario.config.dt, scenario.config.t_final);
    let params = &scenario.params;
    let run = match formulation {
        Formulation::Body => simulate_body(&scenario.body_state(), params, dt, t_final),
        Formulation::Chart(chart) => {
            let init = scenario.chart_state(chart)?;
            simulate_generalized(&init, params, dt, t_final)
        }
    };
    Ok(run.map_err(|abort| {
        let mut partial = abort.partial.clone();
        if let Some(state) = abort.state {
            if partial.last().is_none_or(|s| s.t < state.t) {
                partial.push(sample_generalized(
                    state.t,
                    &state.coords,
                    &state.qdot,
                    &params.inertia,
                ));
            }
        }
        (abort, partial)
    }))
}

pub fn run(args: &SimulateArgs) -> Result<(), CliError> {
    let scenario = config::load(&args.config)?;
    match trajectory(&scenario, scenario.config.chart)? {
        Ok(samples) => {
            info!("{} samples", samples.len());
            output::write_trajectory(&args.out, args.format, &samples)
        }
        Err((abort, partial)) => {
            output::write_trajectory(&args.out, args.format, &partial)?;
            Err(CliError::Stopped {
                time: abort.time,
                message: abort.error.to_string(),
            })
        }
    }
}
