//! Closed-form expectation values of the non-orthogonal-qubit trial state.
//!
//! With `q = √(1−p²)` the two branches overlap through `⟨α|−α⟩ = e^{−2α²}`
//! (unchanged by the common squeeze) and `⟨φ−|φ+⟩ = cos θ`, so the squared
//! norm is `N = 1 − 2pq e^{−2α²} cos θ`. All observables below are divided by
//! that norm.

use crate::model::{ModelParams, ObservableSet, VariationalParams};
use crate::{Error, Result};

/// Norms at or below this value are treated as the zero vector.
pub const DEGENERATE_NORM: f64 = 1e-12;

/// Squared norm `⟨ψ|ψ⟩` of the unnormalized trial state.
pub fn normalization(v: &VariationalParams) -> Result<f64> {
    let norm = raw_normalization(v);
    if norm <= DEGENERATE_NORM {
        return Err(Error::DegenerateState { norm });
    }
    Ok(norm)
}

#[inline]
fn raw_normalization(v: &VariationalParams) -> f64 {
    1.0 - 2.0 * v.p * v.q() * branch_overlap(v.alpha) * v.theta.cos()
}

#[inline]
fn branch_overlap(alpha: f64) -> f64 {
    (-2.0 * alpha * alpha).exp()
}

/// Normalized expectation values of the trial state, before they are
/// combined with a particular set of couplings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnsatzTerms {
    pub norm: f64,
    pub sz: f64,
    pub photon_number: f64,
    pub correlation: f64,
    pub sx: f64,
}

impl AnsatzTerms {
    pub fn energy(&self, m: &ModelParams) -> f64 {
        ObservableSet::energy_from_parts(m, self.photon_number, self.sz, self.sx, self.correlation)
    }

    pub fn observables(&self, m: &ModelParams) -> ObservableSet {
        ObservableSet {
            energy: self.energy(m),
            photon_number: self.photon_number,
            sz: self.sz,
            sx: self.sx,
            correlation: self.correlation,
        }
    }
}

/// All closed-form terms for `v`.
pub fn terms(v: &VariationalParams) -> Result<AnsatzTerms> {
    Ok(terms_with_norm(v, normalization(v)?))
}

/// Evaluates the observable formulas with a caller-supplied norm. Only
/// [`terms`] guarantees the norm is the true one; this entry point exists so
/// the verification suite can feed in a deliberately wrong value.
pub fn terms_with_norm(v: &VariationalParams, norm: f64) -> AnsatzTerms {
    let overlap = branch_overlap(v.alpha);
    let pq = v.p * v.q();
    let (sin_t, cos_t) = v.theta.sin_cos();
    let a2 = v.alpha * v.alpha;
    let g = v.gamma;

    let sz = (cos_t - 2.0 * pq * overlap) / norm;
    let photon_number = if g == 0.0 {
        a2 * (2.0 / norm - 1.0)
    } else {
        let sh = g.sinh();
        a2 * (2.0 / norm * (2.0 * g).cosh() - (2.0 * g).exp()) + sh * sh
    };
    let correlation = -2.0 * v.alpha * sin_t / norm * (-g).exp();
    let sx = (1.0 - 2.0 * v.p * v.p) * sin_t / norm;

    AnsatzTerms { norm, sz, photon_number, correlation, sx }
}

/// ⟨σz⟩ in the regularized form `(cos θ − 2pq e^{−2α²}) / N`, finite at
/// `cos θ = 0`.
pub fn atomic_population(v: &VariationalParams) -> Result<f64> {
    let norm = normalization(v)?;
    Ok((v.theta.cos() - 2.0 * v.p * v.q() * branch_overlap(v.alpha)) / norm)
}

/// ⟨σz⟩ written as `(N − sin²θ) / (N cos θ)`. Algebraically identical to
/// [`atomic_population`] but singular at `cos θ = 0`; kept for cross-checks.
pub fn atomic_population_unregularized(v: &VariationalParams) -> Result<f64> {
    let norm = normalization(v)?;
    let (s, c) = v.theta.sin_cos();
    Ok((norm - s * s) / (norm * c))
}

/// ⟨a†a⟩, including the squeezed form when `gamma != 0`.
pub fn photon_number(v: &VariationalParams) -> Result<f64> {
    Ok(terms(v)?.photon_number)
}

/// ⟨σx (a† + a)⟩ = −2α sin θ e^{−γ} / N.
pub fn correlation(v: &VariationalParams) -> Result<f64> {
    let norm = normalization(v)?;
    Ok(-2.0 * v.alpha * v.theta.sin() / norm * (-v.gamma).exp())
}

/// ⟨σx⟩ = (1 − 2p²) sin θ / N.
pub fn qubit_orientation(v: &VariationalParams) -> Result<f64> {
    let norm = normalization(v)?;
    Ok((1.0 - 2.0 * v.p * v.p) * v.theta.sin() / norm)
}

/// Energy expectation of the trial state. This is a Rayleigh quotient, so it
/// bounds the exact ground energy from above.
pub fn energy(m: &ModelParams, v: &VariationalParams) -> Result<f64> {
    Ok(terms(v)?.energy(m))
}

pub fn observables(m: &ModelParams, v: &VariationalParams) -> Result<ObservableSet> {
    Ok(terms(v)?.observables(m))
}

/// Exact ground energy at g = 0: the field is in vacuum and the qubit part
/// `(Δ/2)σz + (ε/2)σx` is diagonalized directly.
pub fn limit_energy_zero_coupling(m: &ModelParams) -> f64 {
    -0.5 * m.delta.hypot(m.epsilon)
}

/// Exact ground energy at Δ = 0: two oscillators displaced by ±g/ω and
/// shifted by ∓ε/2.
pub fn limit_energy_zero_delta(m: &ModelParams) -> f64 {
    -m.g * m.g / m.omega - 0.5 * m.epsilon.abs()
}

/// Amplitudes of the trial state in the σz basis, each attached to a
/// coherent state `|α⟩` or `|−α⟩`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolaronCoefficients {
    /// `|+z⟩ ⊗ |α⟩`
    pub plus_z_pos: f64,
    /// `|+z⟩ ⊗ |−α⟩`
    pub plus_z_neg: f64,
    /// `|−z⟩ ⊗ |α⟩`
    pub minus_z_pos: f64,
    /// `|−z⟩ ⊗ |−α⟩`
    pub minus_z_neg: f64,
}

impl PolaronCoefficients {
    /// `⟨ψ|ψ⟩` rebuilt from the four amplitudes and the coherent overlap.
    pub fn self_overlap(&self, alpha: f64) -> f64 {
        let s = branch_overlap(alpha);
        let up = self.plus_z_pos.powi(2) + self.plus_z_neg.powi(2)
            + 2.0 * s * self.plus_z_pos * self.plus_z_neg;
        let down = self.minus_z_pos.powi(2) + self.minus_z_neg.powi(2)
            + 2.0 * s * self.minus_z_pos * self.minus_z_neg;
        up + down
    }
}

pub fn polaron_coefficients(v: &VariationalParams) -> PolaronCoefficients {
    let (s, c) = (0.5 * v.theta).sin_cos();
    let q = v.q();
    PolaronCoefficients {
        plus_z_pos: v.p * c,
        plus_z_neg: -q * c,
        minus_z_pos: -v.p * s,
        minus_z_neg: -q * s,
    }
}
