//! Minimization of the variational energy over `(α, θ, p)` and optionally
//! the squeezing `γ`.
//!
//! Each solve runs a bounded Nelder–Mead search from every point of a fixed
//! start grid (plus an optional warm start) and keeps the lowest local
//! optimum. There is no randomness anywhere, so identical inputs give
//! bit-identical results.

pub mod nelder_mead;

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, PI};

use crate::ansatz;
use crate::model::{ModelParams, VariationalParams};
use crate::{Error, Result};

use nelder_mead::NelderMeadOptions;

/// Central-difference step of the stationarity check.
pub const FD_STEP: f64 = 1e-6;

/// Largest gradient ∞-norm, in units of ω, accepted at an interior optimum.
pub const STATIONARITY_LIMIT: f64 = 1e-5;

/// Extra room above `α = g/ω` in the search box.
pub const ALPHA_MARGIN: f64 = 3.0;

pub const GAMMA_BOUND: f64 = 1.0;

#[derive(Debug, Clone, PartialEq)]
pub enum StartSet {
    /// α ∈ {0, g/2ω, g/ω}, θ ∈ {π/4, π/2, 3π/4, π − 0.05},
    /// p ∈ {0.25, 1/√2, 0.97}, and γ ∈ {−0.2, 0, 0.2} when squeezing is on.
    DefaultGrid,
    Explicit(Vec<VariationalParams>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct OptimizerConfig {
    pub include_gamma: bool,
    pub energy_tol: f64,
    pub param_tol: f64,
    /// Evaluation budget per start.
    pub max_evals: usize,
    pub start_set: StartSet,
    /// Tried before the start set.
    pub warm_start: Option<VariationalParams>,
    pub stationarity_check: bool,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self {
            include_gamma: false,
            energy_tol: 1e-12,
            param_tol: 1e-10,
            max_evals: 20_000,
            start_set: StartSet::DefaultGrid,
            warm_start: None,
            stationarity_check: true,
        }
    }
}

impl OptimizerConfig {
    pub fn with_gamma(mut self, include_gamma: bool) -> Self {
        self.include_gamma = include_gamma;
        self
    }

    fn validate(&self) -> Result<()> {
        if !(self.energy_tol > 0.0 && self.param_tol > 0.0) {
            return Err(Error::InvalidParams("optimizer tolerances must be positive".into()));
        }
        if self.max_evals == 0 {
            return Err(Error::InvalidParams("max_evals must be positive".into()));
        }
        if let StartSet::Explicit(s) = &self.start_set {
            if s.is_empty() && self.warm_start.is_none() {
                return Err(Error::InvalidParams("start set is empty and there is no warm start".into()));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveStatus {
    Converged,
    MaxEvals,
    Degenerate,
}

impl SolveStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            SolveStatus::Converged => "converged",
            SolveStatus::MaxEvals => "max_evals",
            SolveStatus::Degenerate => "degenerate",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveResult {
    pub v_opt: VariationalParams,
    pub e_var: f64,
    pub e_exact: Option<f64>,
    /// `e_var − e_exact` once an exact energy is attached.
    pub deviation: Option<f64>,
    /// Gradient ∞-norm over the coordinates that are not on a bound; zero
    /// when the check is disabled.
    pub stationarity: f64,
    /// Coordinates left out of `stationarity` because they sit on a bound.
    pub at_bounds: Vec<Coordinate>,
    pub starts_used: usize,
    pub evaluations: usize,
    pub status: SolveStatus,
}

impl SolveResult {
    pub fn with_exact(mut self, e_exact: f64) -> Self {
        self.e_exact = Some(e_exact);
        self.deviation = Some(self.e_var - e_exact);
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Coordinate {
    Alpha,
    Theta,
    /// The branch weight, searched as the mixing angle `χ` with
    /// `p = cos χ`, `q = sin χ`.
    P,
    Gamma,
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Weight {
    Free,
    Fixed(f64),
}

/// The search space for one model: which coordinates are free and their box.
#[derive(Debug, Clone)]
struct Problem {
    model: ModelParams,
    weight: Weight,
    include_gamma: bool,
    coords: Vec<Coordinate>,
    lower: Vec<f64>,
    upper: Vec<f64>,
}

impl Problem {
    fn new(model: &ModelParams, weight: Weight, include_gamma: bool) -> Self {
        let mut coords = vec![Coordinate::Alpha, Coordinate::Theta];
        if weight == Weight::Free {
            coords.push(Coordinate::P);
        }
        if include_gamma {
            coords.push(Coordinate::Gamma);
        }
        let (lower, upper) = coords
            .iter()
            .map(|c| match c {
                Coordinate::Alpha => (0.0, model.coupling_ratio().abs() + ALPHA_MARGIN),
                Coordinate::Theta => (0.0, PI),
                Coordinate::P => (0.0, FRAC_PI_2),
                Coordinate::Gamma => (-GAMMA_BOUND, GAMMA_BOUND),
            })
            .unzip();
        Self { model: *model, weight, include_gamma, coords, lower, upper }
    }

    fn encode(&self, v: &VariationalParams) -> Vec<f64> {
        let mut x: Vec<f64> = self
            .coords
            .iter()
            .map(|c| match c {
                Coordinate::Alpha => v.alpha,
                Coordinate::Theta => v.theta,
                Coordinate::P => v.p.clamp(0.0, 1.0).acos(),
                Coordinate::Gamma => v.gamma,
            })
            .collect();
        for ((xi, lo), hi) in x.iter_mut().zip(&self.lower).zip(&self.upper) {
            *xi = xi.clamp(*lo, *hi);
        }
        x
    }

    fn decode(&self, x: &[f64]) -> VariationalParams {
        let mut v = VariationalParams {
            alpha: 0.0,
            theta: 0.0,
            p: match self.weight {
                Weight::Free => 0.0,
                Weight::Fixed(p) => p,
            },
            gamma: 0.0,
        };
        for (c, &xi) in self.coords.iter().zip(x) {
            match c {
                Coordinate::Alpha => v.alpha = xi,
                Coordinate::Theta => v.theta = xi,
                Coordinate::P => v.p = xi.cos(),
                Coordinate::Gamma => v.gamma = xi,
            }
        }
        v
    }

    fn objective(&self, x: &[f64]) -> f64 {
        ansatz::energy(&self.model, &self.decode(x)).unwrap_or(f64::INFINITY)
    }

    fn default_starts(&self) -> Vec<VariationalParams> {
        let r = self.model.coupling_ratio().abs();
        let alphas = [0.0, 0.5 * r, r];
        let thetas = [PI / 4.0, PI / 2.0, 3.0 * PI / 4.0, PI - 0.05];
        let weights: &[f64] = match self.weight {
            Weight::Free => &[0.25, FRAC_1_SQRT_2, 0.97],
            Weight::Fixed(p) => &[p][..],
        };
        let gammas: &[f64] = if self.include_gamma { &[-0.2, 0.0, 0.2] } else { &[0.0] };
        let mut out = Vec::new();
        for &alpha in &alphas {
            for &theta in &thetas {
                for &p in weights {
                    for &gamma in gammas {
                        out.push(VariationalParams { alpha, theta, p, gamma });
                    }
                }
            }
        }
        out
    }

    fn stationarity(&self, v: &VariationalParams) -> (f64, Vec<Coordinate>) {
        let x = self.encode(v);
        let mut worst: f64 = 0.0;
        let mut skipped = Vec::new();
        let mut probe = x.clone();
        for (i, c) in self.coords.iter().enumerate() {
            if x[i] - self.lower[i] <= FD_STEP || self.upper[i] - x[i] <= FD_STEP {
                skipped.push(*c);
                continue;
            }
            probe[i] = x[i] + FD_STEP;
            let up = self.objective(&probe);
            probe[i] = x[i] - FD_STEP;
            let down = self.objective(&probe);
            probe[i] = x[i];
            worst = worst.max(((up - down) / (2.0 * FD_STEP)).abs());
        }
        (worst, skipped)
    }
}

#[derive(Debug, Clone)]
struct Candidate {
    v: VariationalParams,
    e: f64,
    converged: bool,
}

fn search(problem: &Problem, cfg: &OptimizerConfig, seeds: &[VariationalParams]) -> Result<SolveResult> {
    cfg.validate()?;
    let mut starts: Vec<VariationalParams> = Vec::new();
    if let Some(w) = cfg.warm_start {
        starts.push(w);
    }
    starts.extend_from_slice(seeds);
    match &cfg.start_set {
        StartSet::DefaultGrid => starts.extend(problem.default_starts()),
        StartSet::Explicit(list) => starts.extend(list.iter().copied()),
    }

    let step: Vec<f64> = problem
        .lower
        .iter()
        .zip(&problem.upper)
        .map(|(lo, hi)| 0.1 * (hi - lo))
        .collect();
    let opts = NelderMeadOptions {
        f_tol: cfg.energy_tol,
        x_tol: cfg.param_tol,
        max_evals: cfg.max_evals,
        initial_step: step,
        max_restarts: 3,
    };

    let mut seen: Vec<Vec<f64>> = Vec::new();
    let mut best: Option<Candidate> = None;
    let mut evaluations = 0;
    for start in &starts {
        let x0 = problem.encode(start);
        if seen.contains(&x0) {
            continue;
        }
        seen.push(x0.clone());
        let out = nelder_mead::minimize(|x| problem.objective(x), &x0, &problem.lower, &problem.upper, &opts);
        evaluations += out.evals;
        if !out.f.is_finite() {
            continue;
        }
        let cand = Candidate { v: problem.decode(&out.x), e: out.f, converged: out.converged };
        best = Some(match best {
            None => cand,
            Some(b) => prefer(b, cand, cfg.energy_tol),
        });
    }

    let best = best.ok_or(Error::AllStartsDegenerate)?;
    let (stationarity, at_bounds) = if cfg.stationarity_check {
        problem.stationarity(&best.v)
    } else {
        (0.0, Vec::new())
    };
    Ok(SolveResult {
        v_opt: best.v,
        e_var: best.e,
        e_exact: None,
        deviation: None,
        stationarity,
        at_bounds,
        starts_used: seen.len(),
        evaluations,
        status: if best.converged { SolveStatus::Converged } else { SolveStatus::MaxEvals },
    })
}

/// Lower energy wins; within `tol` the smaller weight `p` is reported.
fn prefer(a: Candidate, b: Candidate, tol: f64) -> Candidate {
    if (a.e - b.e).abs() <= tol {
        if b.v.p < a.v.p { b } else { a }
    } else if b.e < a.e {
        b
    } else {
        a
    }
}

fn require_canonical(m: &ModelParams) -> Result<()> {
    m.validate()?;
    if m.g < 0.0 || m.epsilon < 0.0 {
        return Err(Error::InvalidParams(format!(
            "model must be canonicalized (g >= 0, epsilon >= 0), got g = {}, epsilon = {}",
            m.g, m.epsilon
        )));
    }
    Ok(())
}

/// Best variational state for `m`, which must already satisfy `g ≥ 0` and
/// `ε ≥ 0` (see [`crate::symmetry::canonicalize`]).
///
/// With `include_gamma` the unsqueezed optimum is computed first and seeds
/// the four-parameter search, so turning squeezing on never raises the
/// energy.
pub fn minimize_energy(m: &ModelParams, cfg: &OptimizerConfig) -> Result<SolveResult> {
    require_canonical(m)?;
    if !cfg.include_gamma {
        return search(&Problem::new(m, Weight::Free, false), cfg, &[]);
    }
    let base_cfg = OptimizerConfig { include_gamma: false, ..cfg.clone() };
    let base = search(&Problem::new(m, Weight::Free, false), &base_cfg, &[])?;
    let mut full = minimize_squeezed_from(m, cfg, &base)?;
    full.evaluations += base.evaluations;
    full.starts_used += base.starts_used;
    Ok(full)
}

/// Four-parameter search seeded with an already computed unsqueezed optimum
/// `base`. The result is never above `base.e_var`.
pub fn minimize_squeezed_from(m: &ModelParams, cfg: &OptimizerConfig, base: &SolveResult) -> Result<SolveResult> {
    require_canonical(m)?;
    let cfg = OptimizerConfig { include_gamma: true, ..cfg.clone() };
    search(&Problem::new(m, Weight::Free, true), &cfg, &[base.v_opt])
}

/// Same search with the weight pinned to `p = 1/√2`.
pub fn fixed_weight_solve(m: &ModelParams, cfg: &OptimizerConfig) -> Result<SolveResult> {
    require_canonical(m)?;
    let pinned = |c: &OptimizerConfig| OptimizerConfig {
        warm_start: c.warm_start.map(|w| VariationalParams { p: FRAC_1_SQRT_2, ..w }),
        start_set: match &c.start_set {
            StartSet::DefaultGrid => StartSet::DefaultGrid,
            StartSet::Explicit(list) => {
                StartSet::Explicit(list.iter().map(|w| VariationalParams { p: FRAC_1_SQRT_2, ..*w }).collect())
            }
        },
        ..c.clone()
    };
    let cfg = pinned(cfg);
    if !cfg.include_gamma {
        return search(&Problem::new(m, Weight::Fixed(FRAC_1_SQRT_2), false), &cfg, &[]);
    }
    let base_cfg = OptimizerConfig { include_gamma: false, ..cfg.clone() };
    let base = search(&Problem::new(m, Weight::Fixed(FRAC_1_SQRT_2), false), &base_cfg, &[])?;
    let mut full = search(&Problem::new(m, Weight::Fixed(FRAC_1_SQRT_2), true), &cfg, &[base.v_opt])?;
    full.evaluations += base.evaluations;
    full.starts_used += base.starts_used;
    Ok(full)
}

/// Finite-difference gradient of the energy at `v`.
#[derive(Debug, Clone, PartialEq)]
pub struct Stationarity {
    /// ∞-norm over the interior coordinates.
    pub residual: f64,
    /// Coordinates within [`FD_STEP`] of a bound, left out of the norm.
    pub skipped: Vec<Coordinate>,
}

/// Central-difference gradient ∞-norm of `energy(m, ·)` over `(α, θ, χ)`
/// with `p = cos χ`, and over `γ` too when `v.gamma != 0`. The box is the
/// optimizer's. The angle keeps the weight derivative finite at `p → 1`,
/// where `∂E/∂p` grows like `1/q`.
pub fn stationarity_residual(m: &ModelParams, v: &VariationalParams) -> Stationarity {
    let problem = Problem::new(m, Weight::Free, v.gamma != 0.0);
    let (residual, skipped) = problem.stationarity(v);
    Stationarity { residual, skipped }
}

/// Solves `points` in order, warm-starting each from the previous optimum.
/// The full start set is still used at every point.
pub fn continuation_sweep(points: &[ModelParams], cfg: &OptimizerConfig) -> Result<Vec<Result<SolveResult>>> {
    if let Some(first) = points.first() {
        if points.iter().any(|p| p.omega != first.omega) {
            return Err(Error::InvalidParams("continuation points must share omega".into()));
        }
    }
    let mut out = Vec::with_capacity(points.len());
    let mut previous: Option<VariationalParams> = None;
    for m in points {
        let local = OptimizerConfig { warm_start: previous.or(cfg.warm_start), ..cfg.clone() };
        let result = minimize_energy(m, &local);
        if let Ok(r) = &result {
            previous = Some(r.v_opt);
        }
        out.push(result);
    }
    Ok(out)
}
