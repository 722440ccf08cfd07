//! Independent reference solver: dense diagonalization of the Hamiltonian in
//! a truncated Fock ⊗ qubit basis.
//!
//! Nothing here uses the closed forms of [`crate::ansatz`]; the two paths are
//! compared against each other in the tests and in [`crate::verify`].

mod expand;
mod hamiltonian;

use nalgebra::{DVector, SymmetricEigen};

pub use expand::{ansatz_state_vector, apply_squeeze, coherent_amplitudes, TAIL_TOLERANCE};
pub use hamiltonian::{build_hamiltonian, build_hamiltonian_capped, DEFAULT_DIM_CAP};

use crate::model::{ModelParams, ObservableSet, VariationalParams};
use crate::{Error, Result};

pub(crate) const PLUS_Z: usize = 0;
pub(crate) const MINUS_Z: usize = 1;

/// Position of `|n⟩ ⊗ |s⟩` in the basis; `s = 0` is `+z`, `s = 1` is `−z`.
#[inline]
pub fn basis_index(n: usize, s: usize) -> usize {
    2 * n + s
}

/// Gaps below this fraction of ω mark the ground state as non-unique.
pub const NEAR_DEGENERATE_GAP: f64 = 1e-6;

/// Default convergence tolerance on E₀, in units of ω.
pub const DEFAULT_TOLERANCE: f64 = 1e-10;

/// Fock states `|0⟩ … |n_max⟩`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FockTruncation {
    pub n_max: usize,
}

impl FockTruncation {
    pub fn new(n_max: usize) -> Result<Self> {
        if n_max < 1 {
            return Err(Error::InvalidParams("n_max must be at least 1".into()));
        }
        Ok(Self { n_max })
    }

    pub fn dim(&self) -> usize {
        2 * (self.n_max + 1)
    }

    /// Starting truncation for the doubling loop of [`converged_ground_state`].
    pub fn initial_for(m: &ModelParams) -> Self {
        let r = m.coupling_ratio().abs();
        let n = (4.0 * r * r + 10.0 * r + 10.0).ceil() as usize;
        Self { n_max: n.max(16) }
    }

    /// Smallest truncation that comfortably holds the trial state `v`.
    pub fn footprint_for(v: &VariationalParams) -> Self {
        let n = (8.0 + 4.0 * v.alpha * v.alpha + 16.0 * v.gamma.abs()).ceil() as usize;
        Self { n_max: n.max(1) }
    }
}

/// Lowest eigenpair of the truncated Hamiltonian.
#[derive(Debug, Clone, PartialEq)]
pub struct ExactGroundState {
    pub model: ModelParams,
    pub energy: f64,
    /// Unit vector in the [`basis_index`] layout; its largest-magnitude
    /// component is positive.
    pub amplitudes: DVector<f64>,
    pub n_max: usize,
    /// E₁ − E₀ of the truncated problem.
    pub gap: f64,
    pub converged: bool,
}

pub fn ground_state(m: &ModelParams, t: FockTruncation) -> Result<ExactGroundState> {
    ground_state_capped(m, t, DEFAULT_DIM_CAP)
}

pub fn ground_state_capped(m: &ModelParams, t: FockTruncation, dim_cap: usize) -> Result<ExactGroundState> {
    let h = build_hamiltonian_capped(m, t, dim_cap)?;
    let dim = h.nrows();
    let eig = SymmetricEigen::try_new(h, f64::EPSILON, 100 * dim).ok_or(Error::EigenFailure { dim })?;

    let mut order: Vec<usize> = (0..dim).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let lowest = order[0];
    let energy = eig.eigenvalues[lowest];
    let gap = (eig.eigenvalues[order[1]] - energy).max(0.0);

    let mut amplitudes: DVector<f64> = eig.eigenvectors.column(lowest).into_owned();
    amplitudes /= amplitudes.norm();
    let pivot = amplitudes.iamax();
    if amplitudes[pivot] < 0.0 {
        amplitudes.neg_mut();
    }

    Ok(ExactGroundState { model: *m, energy, amplitudes, n_max: t.n_max, gap, converged: false })
}

/// Doubles `n_max` from [`FockTruncation::initial_for`] until two successive
/// ground energies agree within `tol·ω`, and returns the larger solve.
pub fn converged_ground_state(m: &ModelParams, tol: f64) -> Result<ExactGroundState> {
    converged_ground_state_capped(m, tol, DEFAULT_DIM_CAP)
}

pub fn converged_ground_state_capped(m: &ModelParams, tol: f64, dim_cap: usize) -> Result<ExactGroundState> {
    if !(tol > 0.0) {
        return Err(Error::InvalidParams(format!("tolerance must be positive, got {tol}")));
    }
    let mut t = FockTruncation::initial_for(m);
    let mut last_change = f64::INFINITY;
    let mut previous = match ground_state_capped(m, t, dim_cap) {
        Ok(s) => s,
        Err(Error::DimensionOverflow { .. }) => return Err(Error::NoConvergence { n_max: t.n_max, last_change }),
        Err(e) => return Err(e),
    };
    loop {
        let larger = FockTruncation { n_max: 2 * t.n_max };
        let next = match ground_state_capped(m, larger, dim_cap) {
            Ok(s) => s,
            Err(Error::DimensionOverflow { .. }) => {
                return Err(Error::NoConvergence { n_max: t.n_max, last_change });
            }
            Err(e) => return Err(e),
        };
        last_change = (next.energy - previous.energy).abs();
        if last_change < tol * m.omega {
            return Ok(ExactGroundState { converged: true, ..next });
        }
        t = larger;
        previous = next;
    }
}

/// Raw contractions of a (not necessarily normalized) state vector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VectorMoments {
    pub norm: f64,
    pub photon_number: f64,
    pub sz: f64,
    pub sx: f64,
    pub correlation: f64,
}

/// Expectation values of `psi` divided by `⟨psi|psi⟩`.
pub fn vector_moments(psi: &DVector<f64>) -> VectorMoments {
    assert!(psi.len() % 2 == 0 && psi.len() >= 4, "state vector has the wrong layout");
    let n_max = psi.len() / 2 - 1;
    let (mut norm, mut photons, mut sz, mut sx, mut corr) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for n in 0..=n_max {
        let up = psi[basis_index(n, PLUS_Z)];
        let down = psi[basis_index(n, MINUS_Z)];
        let w = up * up + down * down;
        norm += w;
        photons += n as f64 * w;
        sz += up * up - down * down;
        sx += 2.0 * up * down;
        if n < n_max {
            let up1 = psi[basis_index(n + 1, PLUS_Z)];
            let down1 = psi[basis_index(n + 1, MINUS_Z)];
            corr += 2.0 * ((n + 1) as f64).sqrt() * (up * down1 + down * up1);
        }
    }
    VectorMoments {
        norm,
        photon_number: photons / norm,
        sz: sz / norm,
        sx: sx / norm,
        correlation: corr / norm,
    }
}

/// `⟨psi|H|psi⟩ / ⟨psi|psi⟩` in the truncation matching `psi`.
pub fn rayleigh_quotient(m: &ModelParams, psi: &DVector<f64>) -> Result<f64> {
    let t = FockTruncation::new(psi.len() / 2 - 1)?;
    let h = build_hamiltonian(m, t)?;
    Ok(psi.dot(&(&h * psi)) / psi.dot(psi))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExactObservables {
    pub observables: ObservableSet,
    /// Set when the gap is below [`NEAR_DEGENERATE_GAP`]·ω; the eigenvector
    /// is then one representative of a (near) degenerate pair.
    pub near_degenerate: bool,
}

/// Ground-state expectation values. The energy reassembled from the four
/// pieces must reproduce the eigenvalue within 1e-9·ω.
pub fn exact_observables(s: &ExactGroundState) -> Result<ExactObservables> {
    let mo = vector_moments(&s.amplitudes);
    let m = &s.model;
    let reassembled = ObservableSet::energy_from_parts(m, mo.photon_number, mo.sz, mo.sx, mo.correlation);
    if (reassembled - s.energy).abs() > 1e-9 * m.omega {
        return Err(Error::SelfCheck { eigenvalue: s.energy, reassembled });
    }
    Ok(ExactObservables {
        observables: ObservableSet {
            energy: s.energy,
            photon_number: mo.photon_number,
            sz: mo.sz,
            sx: mo.sx,
            correlation: mo.correlation,
        },
        near_degenerate: s.gap < NEAR_DEGENERATE_GAP * m.omega,
    })
}

/// ⟨σz (−1)^{a†a}⟩.
pub fn parity_expectation(s: &ExactGroundState) -> f64 {
    let psi = &s.amplitudes;
    let mut acc = 0.0;
    for n in 0..=s.n_max {
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        acc += sign * (psi[basis_index(n, PLUS_Z)].powi(2) - psi[basis_index(n, MINUS_Z)].powi(2));
    }
    acc / psi.norm_squared()
}

/// `|⟨exact|trial⟩|² / ⟨trial|trial⟩`, with the trial state expanded in the
/// truncation of `s`.
pub fn fidelity(v: &VariationalParams, s: &ExactGroundState) -> Result<f64> {
    let trial = ansatz_state_vector(v, FockTruncation { n_max: s.n_max })?;
    let overlap = s.amplitudes.dot(&trial);
    Ok((overlap * overlap / (trial.norm_squared() * s.amplitudes.norm_squared())).clamp(0.0, 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn zero_coupling_ground_state() {
        let m = ModelParams::new(1.0, 1.0, 0.0, 0.0).unwrap();
        let s = ground_state(&m, FockTruncation::new(8).unwrap()).unwrap();
        assert!((s.energy + 0.5).abs() < 1e-14);
        assert!((s.amplitudes[basis_index(0, MINUS_Z)] - 1.0).abs() < 1e-14);
        assert!((s.gap - 1.0).abs() < 1e-14);
        assert!((parity_expectation(&s) + 1.0).abs() < 1e-14);
        let o = exact_observables(&s).unwrap().observables;
        assert!(o.photon_number.abs() < 1e-14);
        assert!((o.sz + 1.0).abs() < 1e-14);
        assert!(o.sx.abs() < 1e-14);
    }

    #[test]
    fn zero_delta_energy() {
        let m = ModelParams::new(0.0, 1.0, 1.0, 0.4).unwrap();
        let s = converged_ground_state(&m, DEFAULT_TOLERANCE).unwrap();
        assert!(s.converged);
        assert!((s.energy + 1.2).abs() < 1e-10);
        let o = exact_observables(&s).unwrap().observables;
        assert!((o.sx + 1.0).abs() < 1e-9);
        assert!((o.photon_number - 1.0).abs() < 1e-9);
    }

    #[test]
    fn zero_coupling_with_bias_converges_on_first_doubling() {
        let m = ModelParams::new(1.0, 1.0, 0.0, 0.7).unwrap();
        let s = converged_ground_state(&m, DEFAULT_TOLERANCE).unwrap();
        assert_eq!(s.n_max, 32);
        assert!((s.energy + 0.5 * 1.0f64.hypot(0.7)).abs() < 1e-14);
        let o = exact_observables(&s).unwrap().observables;
        // Qubit mixing angle: sz = −Δ/√(Δ²+ε²), sx = −ε/√(Δ²+ε²).
        assert!((o.sz + 1.0 / 1.0f64.hypot(0.7)).abs() < 1e-12);
        assert!((o.sx + 0.7 / 1.0f64.hypot(0.7)).abs() < 1e-12);
    }

    #[test]
    fn converged_coupled_point_needs_large_basis() {
        let m = ModelParams::new(1.0, 1.0, 2.0, 1.0).unwrap();
        let s = converged_ground_state(&m, 1e-10).unwrap();
        assert!(s.converged && s.n_max >= 46);
    }

    #[test]
    fn strong_coupling_below_bounds() {
        let m = ModelParams::new(1.0, 1.0, 1.0, 0.0).unwrap();
        let s = converged_ground_state(&m, DEFAULT_TOLERANCE).unwrap();
        assert!(s.energy < -1.0 && s.energy < -0.5);
    }

    #[test]
    fn cap_turns_into_no_convergence() {
        let m = ModelParams::new(1.0, 1.0, 20.0, 0.0).unwrap();
        match converged_ground_state_capped(&m, DEFAULT_TOLERANCE, 2048) {
            Err(Error::NoConvergence { .. }) => {}
            other => panic!("expected NoConvergence, got {other:?}"),
        }
    }

    #[test]
    fn sign_convention_is_deterministic() {
        let m = ModelParams::new(0.7, 1.0, 0.9, 0.3).unwrap();
        let a = ground_state(&m, FockTruncation::new(30).unwrap()).unwrap();
        let b = ground_state(&m, FockTruncation::new(30).unwrap()).unwrap();
        assert_eq!(a.amplitudes, b.amplitudes);
        let pivot = a.amplitudes.iamax();
        assert!(a.amplitudes[pivot] > 0.0);
    }

    #[test]
    fn fidelity_in_exact_limits() {
        let m = ModelParams::new(1.0, 1.0, 0.0, 0.0).unwrap();
        let s = converged_ground_state(&m, DEFAULT_TOLERANCE).unwrap();
        let v = VariationalParams::new(0.0, PI, 1.0).unwrap();
        assert!((fidelity(&v, &s).unwrap() - 1.0).abs() < 1e-10);

        let m = ModelParams::new(0.0, 1.0, 0.8, 0.5).unwrap();
        let s = converged_ground_state(&m, DEFAULT_TOLERANCE).unwrap();
        let v = VariationalParams::new(0.8, PI / 2.0, 1.0).unwrap();
        assert!((fidelity(&v, &s).unwrap() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn broken_parity_with_bias() {
        let m = ModelParams::new(1.0, 1.0, 0.6, 1.0).unwrap();
        let s = converged_ground_state(&m, DEFAULT_TOLERANCE).unwrap();
        let p = parity_expectation(&s);
        assert!(p > -1.0 + 1e-6 && p < 1.0 - 1e-6, "parity {p}");
    }

    #[test]
    fn near_degenerate_flag() {
        let m = ModelParams::new(0.0, 1.0, 1.0, 0.0).unwrap();
        let s = converged_ground_state(&m, DEFAULT_TOLERANCE).unwrap();
        assert!(exact_observables(&s).unwrap().near_degenerate);
    }
}
