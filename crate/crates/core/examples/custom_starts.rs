//! Explicit start points and a warm start instead of the default grid.

use std::f64::consts::PI;

use aqrm::optimize::{minimize_energy, stationarity_residual, OptimizerConfig, StartSet};
use aqrm::{ModelParams, VariationalParams};

fn main() -> aqrm::Result<()> {
    let m = ModelParams::new(1.0, 1.0, 1.2, 0.3)?;

    let single = OptimizerConfig {
        start_set: StartSet::Explicit(vec![VariationalParams::new(1.0, PI / 2.0, 0.9)?]),
        ..OptimizerConfig::default()
    };
    let a = minimize_energy(&m, &single)?;
    println!("one start:    E = {:.12}  evals = {}", a.e_var, a.evaluations);

    let grid = minimize_energy(&m, &OptimizerConfig::default())?;
    println!("default grid: E = {:.12}  evals = {}", grid.e_var, grid.evaluations);

    let warm = OptimizerConfig { warm_start: Some(grid.v_opt), start_set: StartSet::Explicit(vec![]), ..OptimizerConfig::default() };
    let w = minimize_energy(&m, &warm)?;
    let s = stationarity_residual(&m, &w.v_opt);
    println!("warm only:    E = {:.12}  evals = {}  gradient = {:.1e}", w.e_var, w.evaluations, s.residual);
    Ok(())
}
