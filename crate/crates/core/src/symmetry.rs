//! Sign reflections that leave the spectrum unchanged.
//!
//! `g → −g` is undone by the field reflection `(−1)^{a†a}` and `ε → −ε` by
//! the parity `σz (−1)^{a†a}`. Solving is always done on the reflected model
//! with `g ≥ 0` and `ε ≥ 0`; [`SignFlags::restore`] maps observables back.

use crate::model::{ModelParams, ObservableSet};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SignFlags {
    pub g_flipped: bool,
    pub epsilon_flipped: bool,
}

impl SignFlags {
    pub fn is_identity(&self) -> bool {
        !self.g_flipped && !self.epsilon_flipped
    }

    /// Observables of the original model's ground state, given those of the
    /// canonical model's.
    pub fn restore(&self, o: &ObservableSet) -> ObservableSet {
        let mut out = *o;
        // (−1)^{a†a} flips (a† + a); the parity flips σx.
        if self.g_flipped {
            out.correlation = -out.correlation;
        }
        if self.epsilon_flipped {
            out.sx = -out.sx;
        }
        out
    }
}

/// Reflects `m` into the sector `g ≥ 0`, `ε ≥ 0`.
pub fn canonicalize(m: &ModelParams) -> (ModelParams, SignFlags) {
    let flags = SignFlags {
        g_flipped: m.g < 0.0,
        epsilon_flipped: m.epsilon < 0.0,
    };
    let canonical = ModelParams {
        g: m.g.abs(),
        epsilon: m.epsilon.abs(),
        ..*m
    };
    (canonical, flags)
}
