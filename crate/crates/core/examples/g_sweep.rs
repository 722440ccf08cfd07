//! Coupling sweep with exact columns, written as CSV to stdout.

use std::io;

use aqrm::sweep::{run_sweep, write_report, Axis, SweepSpec};
use aqrm::ModelParams;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let spec = SweepSpec {
        fixed: ModelParams::new(1.0, 1.0, 0.0, 0.5)?,
        axis: Axis::G,
        start: 0.0,
        stop: 2.0,
        steps: 21,
        include_gamma: false,
        with_exact: true,
        with_fixed_weight: false,
    };
    let rows = run_sweep(&spec, 0)?;
    write_report(&mut io::stdout().lock(), &rows, false, true)?;

    let worst = rows
        .iter()
        .filter_map(|r| r.deviation().map(|d| (d, r.model.g)))
        .fold((f64::NEG_INFINITY, 0.0), |a, b| if b.0 > a.0 { b } else { a });
    eprintln!("largest deviation {:.3e} at g = {}", worst.0, worst.1);
    Ok(())
}
