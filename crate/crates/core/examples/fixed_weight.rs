// Free branch weight against p pinned to 1/√2. Without bias the two agree;
// with bias the pinned weight cannot follow.

use aqrm::optimize::{fixed_weight_solve, minimize_energy, OptimizerConfig};
use aqrm::oracle::converged_ground_state;
use aqrm::ModelParams;

fn main() -> aqrm::Result<()> {
    let cfg = OptimizerConfig::default();
    println!("{:>5} {:>14} {:>14} {:>14}", "eps", "free", "fixed", "exact");
    for epsilon in [0.0, 0.5, 1.0, 2.0] {
        let m = ModelParams::new(1.0, 1.0, 0.5, epsilon)?;
        let free = minimize_energy(&m, &cfg)?;
        let fixed = fixed_weight_solve(&m, &cfg)?;
        let exact = converged_ground_state(&m, 1e-10)?.energy;
        println!("{epsilon:5.2} {:14.8} {:14.8} {:14.8}   p_free = {:.4}", free.e_var, fixed.e_var, exact, free.v_opt.p);
    }
    Ok(())
}
