//! Fock-basis expansion of the trial state.

use nalgebra::DVector;

use super::{basis_index, FockTruncation, MINUS_Z, PLUS_Z};
use crate::model::VariationalParams;
use crate::{Error, Result};

/// Probability allowed to leak past `n_max`.
pub const TAIL_TOLERANCE: f64 = 1e-10;

/// Unnormalized trial state in the `(n, s)` basis.
///
/// The coherent amplitudes are built in a padded working basis, squeezed
/// there when `gamma != 0`, and cut back to `t.n_max`. The cut is rejected if
/// more than [`TAIL_TOLERANCE`] of a branch's probability lies beyond it.
pub fn ansatz_state_vector(v: &VariationalParams, t: FockTruncation) -> Result<DVector<f64>> {
    v.validate()?;
    let work = t.n_max * 2 + 40;
    let mut field = coherent_amplitudes(v.alpha, work);
    if v.gamma != 0.0 {
        field = apply_squeeze(v.gamma, &field);
    }
    let total: f64 = field.iter().map(|x| x * x).sum();
    let tail: f64 = field[t.n_max + 1..].iter().map(|x| x * x).sum::<f64>() / total;
    if tail > TAIL_TOLERANCE {
        return Err(Error::TruncationTooSmall { n_max: t.n_max, tail });
    }

    let (p, q) = (v.p, v.q());
    let (s, c) = (0.5 * v.theta).sin_cos();
    let mut psi = DVector::zeros(t.dim());
    for n in 0..=t.n_max {
        let pos = field[n];
        // The squeeze preserves photon-number parity, so S|−α⟩ = (−1)^n S|α⟩.
        let neg = if n % 2 == 0 { pos } else { -pos };
        psi[basis_index(n, PLUS_Z)] = c * (p * pos - q * neg);
        psi[basis_index(n, MINUS_Z)] = -s * (p * pos + q * neg);
    }
    Ok(psi)
}

/// `e^{−α²/2} αⁿ / √(n!)` for `n = 0..=n_max`.
pub fn coherent_amplitudes(alpha: f64, n_max: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(n_max + 1);
    let mut c = (-0.5 * alpha * alpha).exp();
    out.push(c);
    for n in 1..=n_max {
        c *= alpha / (n as f64).sqrt();
        out.push(c);
    }
    out
}

/// `exp(K) f` with `K = −(γ/2)(a†² − a²)` restricted to the basis of `f`.
///
/// `K` is real antisymmetric, so the truncated exponential is orthogonal.
/// The step is scaled until `‖K/s‖ ≤ 1/2` and each of the `s` factors is
/// summed as a Taylor series to machine precision.
pub fn apply_squeeze(gamma: f64, f: &[f64]) -> Vec<f64> {
    let dim = f.len();
    let norm_bound = gamma.abs() * dim as f64;
    let steps = (2.0 * norm_bound).ceil().max(1.0) as usize;
    let h = gamma / steps as f64;

    let apply_generator = |x: &[f64], out: &mut [f64]| {
        for n in 0..dim {
            let mut acc = 0.0;
            if n >= 2 {
                acc -= ((n * (n - 1)) as f64).sqrt() * x[n - 2];
            }
            if n + 2 < dim {
                acc += (((n + 1) * (n + 2)) as f64).sqrt() * x[n + 2];
            }
            out[n] = 0.5 * h * acc;
        }
    };

    let mut state = f.to_vec();
    let mut term = vec![0.0; dim];
    let mut next = vec![0.0; dim];
    for _ in 0..steps {
        term.copy_from_slice(&state);
        let scale = state.iter().map(|x| x * x).sum::<f64>().sqrt();
        for k in 1..64 {
            apply_generator(&term, &mut next);
            let inv_k = 1.0 / k as f64;
            let mut size = 0.0;
            for (t, nx) in term.iter_mut().zip(&next) {
                *t = nx * inv_k;
                size += *t * *t;
            }
            for (s, t) in state.iter_mut().zip(&term) {
                *s += t;
            }
            if size.sqrt() <= 1e-18 * scale {
                break;
            }
        }
    }
    state
}
