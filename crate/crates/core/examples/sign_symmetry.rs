//! Negative couplings are solved in canonical form and mapped back.

use aqrm::sweep::{solve_point, PointOptions};
use aqrm::symmetry::canonicalize;
use aqrm::ModelParams;

fn main() -> aqrm::Result<()> {
    for (g, epsilon) in [(0.6, 0.4), (-0.6, 0.4), (0.6, -0.4), (-0.6, -0.4)] {
        let m = ModelParams::new(1.0, 1.0, g, epsilon)?;
        let (_, flags) = canonicalize(&m);
        let row = solve_point(&m, PointOptions::default());
        let o = row.var.expect("solved");
        println!(
            "g={g:+} eps={epsilon:+}  E={:.10}  <sx>={:+.6}  <sx(a+a+)>={:+.6}  flips={:?}",
            o.energy, o.sx, o.correlation, flags
        );
    }
    Ok(())
}
