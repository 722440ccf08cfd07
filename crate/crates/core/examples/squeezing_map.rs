//! Optimal squeezing on a coarse (Δ, ε) grid at g = √(Δω)/2.

use aqrm::sweep::{gamma_map, GammaMapSpec};

fn main() -> aqrm::Result<()> {
    let spec = GammaMapSpec { grid: (6, 3), ..GammaMapSpec::default() };
    println!("{:>6} {:>6} {:>8} {:>12}", "delta", "eps", "|gamma|", "gain");
    for r in gamma_map(&spec, 0)? {
        println!("{:6.2} {:6.2} {:8.4} {:12.3e}", r.delta, r.epsilon, r.gamma_opt.abs(), r.improvement());
    }
    Ok(())
}
