//! Ground states of the asymmetric quantum Rabi model
//!
//! ```text
//! H = (Δ/2) σz + ω a†a + g (a† + a) σx + (ε/2) σx
//! ```
//!
//! The crate is built around a three-parameter variational trial state: a
//! weighted superposition of two displaced (optionally squeezed) field states
//! entangled with two non-orthogonal qubit states,
//!
//! ```text
//! ψ = p |α,γ⟩ ⊗ |φ−⟩ − √(1−p²) |−α,γ⟩ ⊗ |φ+⟩,
//! |φ±⟩ = cos(θ/2) |+z⟩ ± sin(θ/2) |−z⟩.
//! ```
//!
//! Every expectation value of that state has a closed form ([`ansatz`]). The
//! energy functional is minimised by a bounded multi-start simplex search
//! ([`optimize`]) and every result can be checked against an independent
//! dense diagonalization in a truncated Fock ⊗ qubit basis ([`oracle`]).
//! [`sweep`] and [`config`] drive parameter sweeps and CSV reports, and
//! [`verify`] runs the invariant suite used by the `aqrm verify` command.
//!
//! ```
//! use aqrm::{ModelParams, optimize::{minimize_energy, OptimizerConfig}};
//!
//! let model = ModelParams::new(1.0, 1.0, 0.0, 1.0).unwrap();
//! let result = minimize_energy(&model, &OptimizerConfig::default()).unwrap();
//! assert!((result.e_var + 0.5_f64.sqrt()).abs() < 1e-8);
//! ```
//!
//! Runnable examples live in `examples/`:
//!
//! ```text
//! cargo run --example solve_point
//! cargo run --example exact_ground_state
//! cargo run --example g_sweep > sweep.csv
//! cargo run --example squeezing_map
//! cargo run --example fixed_weight
//! cargo run --example polaron_form
//! cargo run --example trial_state_expansion
//! cargo run --example sign_symmetry
//! cargo run --example custom_starts
//! cargo run --example run_recipe
//! cargo run --example verify_suite
//! ```

pub mod ansatz;
pub mod config;
mod error;
pub mod model;
pub mod optimize;
pub mod oracle;
pub mod sweep;
pub mod symmetry;
pub mod verify;

pub use error::{Error, Result};
pub use model::{ModelParams, ObservableSet, VariationalParams};
