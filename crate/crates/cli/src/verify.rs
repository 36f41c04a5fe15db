use rigidsim_core::charts::Chart;
use rigidsim_core::identities::{run_identity_suite, IdentityReport};
use serde::Serialize;

use crate::{output, CliError, VerifyArgs};

#[derive(Debug, Serialize)]
pub struct VerifyReportFile {
    pub tool_version: &'static str,
    pub seed: u64,
    pub tolerance: f64,
    pub samples: u64,
    pub charts: Vec<Chart>,
    pub reports: Vec<IdentityReport>,
    pub all_passed: bool,
}

pub fn summary_table(reports: &[IdentityReport]) -> String {
    let mut out = format!(
        "{:<12} {:<10} {:>8} {:>14} {:>10}  {}\n",
        "identity", "chart", "samples", "max_residual", "tolerance", "result"
    );
    for r in reports {
        out.push_str(&format!(
            "{:<12} {:<10} {:>8} {:>14.3e} {:>10.1e}  {}\n",
            r.identity.name(),
            r.chart.name(),
            r.samples,
            r.max_residual,
            r.tolerance,
            if r.passed { "pass" } else { "FAIL" }
        ));
    }
    out
}

pub fn run(args: &VerifyArgs) -> Result<(), CliError> {
    let samples = usize::try_from(args.samples)
        .map_err(|_| CliError::Usage("--samples is too large".into()))?;
    let reports = run_identity_suite(&args.chart.0, samples, args.seed, args.tol)
        .map_err(|e| CliError::Usage(e.to_string()))?;
    let all_passed = reports.iter().all(|r| r.passed);
    print!("{}", summary_table(&reports));

    if let Some(path) = &args.out {
        let file = VerifyReportFile {
            tool_version: env!("CARGO_PKG_VERSION"),
            seed: args.seed,
            tolerance: args.tol,
            samples: args.samples,
            charts: args.chart.0.clone(),
            reports,
            all_passed,
        };
        output::write_json(path, &file)?;
    }
    if all_passed {
        println!("all identities pass");
        Ok(())
    } else {
        Err(CliError::Failed(
            "identity residuals exceed the tolerance".into(),
        ))
    }
}
