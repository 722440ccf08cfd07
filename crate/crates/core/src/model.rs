//! Parameter and observable types.

use std::f64::consts::PI;

use crate::{Error, Result};

/// Couplings of the Hamiltonian. Energies are in whatever unit the caller
/// uses for `omega`; nothing is normalised implicitly.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    /// Qubit level splitting Δ.
    pub delta: f64,
    /// Field frequency ω, strictly positive.
    pub omega: f64,
    /// Qubit-field coupling g.
    pub g: f64,
    /// Bias ε on σx.
    pub epsilon: f64,
}

impl ModelParams {
    pub fn new(delta: f64, omega: f64, g: f64, epsilon: f64) -> Result<Self> {
        let m = Self { delta, omega, g, epsilon };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<()> {
        let all_finite = [self.delta, self.omega, self.g, self.epsilon]
            .iter()
            .all(|x| x.is_finite());
        if !all_finite {
            return Err(Error::InvalidParams(format!("non-finite model parameter in {self:?}")));
        }
        if self.omega <= 0.0 {
            return Err(Error::InvalidParams(format!("omega must be positive, got {}", self.omega)));
        }
        Ok(())
    }

    /// Reduced coupling g/ω.
    pub fn coupling_ratio(&self) -> f64 {
        self.g / self.omega
    }
}

/// Parameters of the trial state: displacement `alpha`, qubit rotation
/// `theta`, branch weight `p` and squeezing `gamma`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VariationalParams {
    pub alpha: f64,
    pub theta: f64,
    pub p: f64,
    pub gamma: f64,
}

impl VariationalParams {
    /// Unsqueezed trial state (γ = 0).
    pub fn new(alpha: f64, theta: f64, p: f64) -> Result<Self> {
        Self::with_gamma(alpha, theta, p, 0.0)
    }

    pub fn with_gamma(alpha: f64, theta: f64, p: f64, gamma: f64) -> Result<Self> {
        let v = Self { alpha, theta, p, gamma };
        v.validate()?;
        Ok(v)
    }

    pub fn validate(&self) -> Result<()> {
        if ![self.alpha, self.theta, self.p, self.gamma].iter().all(|x| x.is_finite()) {
            return Err(Error::InvalidParams(format!("non-finite variational parameter in {self:?}")));
        }
        if self.alpha < 0.0 {
            return Err(Error::InvalidParams(format!("alpha must be >= 0, got {}", self.alpha)));
        }
        if !(0.0..=PI).contains(&self.theta) {
            return Err(Error::InvalidParams(format!("theta must lie in [0, pi], got {}", self.theta)));
        }
        if !(0.0..=1.0).contains(&self.p) {
            return Err(Error::InvalidParams(format!("p must lie in [0, 1], got {}", self.p)));
        }
        Ok(())
    }

    /// Weight of the second branch, √(1−p²).
    #[inline]
    pub fn q(&self) -> f64 {
        (1.0 - self.p * self.p).max(0.0).sqrt()
    }
}

/// Ground-state energy together with the four expectation values it is
/// assembled from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ObservableSet {
    pub energy: f64,
    /// ⟨a†a⟩
    pub photon_number: f64,
    /// ⟨σz⟩
    pub sz: f64,
    /// ⟨σx⟩
    pub sx: f64,
    /// ⟨σx (a† + a)⟩
    pub correlation: f64,
}

impl ObservableSet {
    /// Reassembles the energy from the four expectation values.
    pub fn energy_from_parts(m: &ModelParams, photon_number: f64, sz: f64, sx: f64, correlation: f64) -> f64 {
        0.5 * m.delta * sz + m.omega * photon_number + m.g * correlation + 0.5 * m.epsilon * sx
    }
}
