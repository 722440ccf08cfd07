//! Truncated Fock-space diagonalization with automatic basis growth.

use aqrm::oracle::{converged_ground_state, exact_observables, parity_expectation, DEFAULT_TOLERANCE};
use aqrm::ModelParams;

fn main() -> aqrm::Result<()> {
    for (g, epsilon) in [(0.5, 0.0), (1.0, 0.0), (1.0, 0.5), (2.0, 1.0)] {
        let m = ModelParams::new(1.0, 1.0, g, epsilon)?;
        let s = converged_ground_state(&m, DEFAULT_TOLERANCE)?;
        let o = exact_observables(&s)?;
        println!(
            "g={g:<4} eps={epsilon:<4} E0={:+.10}  n_max={:<4} gap={:.3e}  <a+a>={:.4}  parity={:+.6}{}",
            s.energy,
            s.n_max,
            s.gap,
            o.observables.photon_number,
            parity_expectation(&s),
            if o.near_degenerate { "  (near-degenerate)" } else { "" },
        );
    }
    Ok(())
}
