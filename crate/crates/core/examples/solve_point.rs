//! Variational ground state of a single model.
//!
//! ```text
//! cargo run --example solve_point
//! ```

use aqrm::optimize::{minimize_energy, OptimizerConfig};
use aqrm::{ansatz, ModelParams};

fn main() -> aqrm::Result<()> {
    let m = ModelParams::new(1.0, 1.0, 0.8, 0.5)?;
    let r = minimize_energy(&m, &OptimizerConfig::default())?;
    let v = r.v_opt;
    println!("alpha = {:.6}  theta = {:.6}  p = {:.6}", v.alpha, v.theta, v.p);
    println!("e_var = {:.10}  ({} starts, {} evaluations, {})", r.e_var, r.starts_used, r.evaluations, r.status.as_str());
    println!("gradient norm = {:.2e}", r.stationarity);

    let o = ansatz::observables(&m, &v)?;
    println!("<a+a> = {:.6}  <sz> = {:.6}  <sx> = {:.6}  <sx(a+a+)> = {:.6}", o.photon_number, o.sz, o.sx, o.correlation);
    Ok(())
}
