use nalgebra::DMatrix;

use super::{basis_index, FockTruncation, MINUS_Z, PLUS_Z};
use crate::model::ModelParams;
use crate::{Error, Result};

/// Largest basis dimension the dense oracle will assemble by default.
pub const DEFAULT_DIM_CAP: usize = 16384;

/// Hamiltonian matrix in the `(n, s)` basis, with `s = +z` at even and
/// `s = −z` at odd indices.
pub fn build_hamiltonian(m: &ModelParams, t: FockTruncation) -> Result<DMatrix<f64>> {
    build_hamiltonian_capped(m, t, DEFAULT_DIM_CAP)
}

pub fn build_hamiltonian_capped(m: &ModelParams, t: FockTruncation, dim_cap: usize) -> Result<DMatrix<f64>> {
    m.validate()?;
    let dim = t.dim();
    if dim > dim_cap {
        return Err(Error::DimensionOverflow { dim, cap: dim_cap });
    }
    let mut h = DMatrix::zeros(dim, dim);
    let mut set = |i: usize, j: usize, x: f64| {
        h[(i, j)] = x;
        h[(j, i)] = x;
    };
    for n in 0..=t.n_max {
        let (up, down) = (basis_index(n, PLUS_Z), basis_index(n, MINUS_Z));
        let field = m.omega * n as f64;
        set(up, up, field + 0.5 * m.delta);
        set(down, down, field - 0.5 * m.delta);
        set(up, down, 0.5 * m.epsilon);
        if n < t.n_max {
            // σx flips the qubit while (a† + a) moves one photon.
            let hop = m.g * ((n + 1) as f64).sqrt();
            set(up, basis_index(n + 1, MINUS_Z), hop);
            set(down, basis_index(n + 1, PLUS_Z), hop);
        }
    }
    Ok(h)
}
