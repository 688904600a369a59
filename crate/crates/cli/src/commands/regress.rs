//! `kv regress` — golden-file and dual-path regression suites.

use clap::Args;
use std::path::PathBuf;
use std::process::ExitCode;

use kv_core::harness::{
    load_golden, run_dual_path_regression, run_golden_regression, DualPathSource,
    RegressionReport,
};

use crate::error::{CliError, STATUS_FAILURES};
use crate::output::{cdf_mode, CdfChoice, Format, PiChoice};

#[derive(Args)]
pub struct RegressArgs {
    /// Golden-case CSV to check the kernel against.
    #[arg(long, conflicts_with = "dual")]
    golden: Option<PathBuf>,
    /// Compare the polynomial path against the reference path instead.
    #[arg(long)]
    dual: bool,
    /// Dual mode: number of seeded random inputs.
    #[arg(long, default_value_t = 10_000)]
    n: usize,
    /// Dual mode: RNG seed (recorded in the report).
    #[arg(long, default_value_t = 7)]
    seed: u64,
    /// Dual mode: price-difference tolerance in currency units.
    #[arg(long, default_value_t = 5e-3)]
    tol: f64,
    /// Golden mode: CDF evaluation path.
    #[arg(long, value_enum, default_value_t = CdfChoice::Reference)]
    cdf: CdfChoice,
    /// Pi constant for the polynomial path.
    #[arg(long, value_enum, default_value_t = PiChoice::Full)]
    pi: PiChoice,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    format: Format,
}

pub fn run(args: RegressArgs) -> Result<ExitCode, CliError> {
    let report = if let Some(path) = &args.golden {
        let cases = load_golden(path)?;
        run_golden_regression(&cases, cdf_mode(args.cdf, args.pi))?
    } else if args.dual {
        run_dual_path_regression(
            DualPathSource::Random {
                count: args.n,
                seed: args.seed,
            },
            args.tol,
        )?
    } else {
        return Err(CliError::usage(
            "choose a suite: --golden FILE or --dual",
        ));
    };
    emit(&report, args.format);
    if report.all_passed() {
        Ok(ExitCode::SUCCESS)
    } else {
        Ok(ExitCode::from(STATUS_FAILURES))
    }
}

fn emit(report: &RegressionReport, format: Format) {
    match format {
        Format::Table => print!("{}", report.render_table()),
        Format::Records => print!("{}", report.render_records()),
    }
}
