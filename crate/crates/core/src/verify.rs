//! Invariant checks over the closed forms, the oracle and the optimizer.
//!
//! Each property runs a fixed, deterministic set of cases and reports how many
//! failed and the worst error as a fraction of its tolerance (so a property
//! passes when `worst ≤ 1`).

use std::f64::consts::PI;
use std::io::{self, Write};

use crate::ansatz::{self, AnsatzTerms};
use crate::model::{ModelParams, VariationalParams};
use crate::optimize::{minimize_energy, minimize_squeezed_from, OptimizerConfig};
use crate::oracle::{
    ansatz_state_vector, converged_ground_state, ground_state, parity_expectation, rayleigh_quotient, vector_moments,
    FockTruncation,
};
use crate::sweep::{format_number, solve_point, PointOptions, ORACLE_TOL};
use crate::symmetry::canonicalize;
use crate::{Error, Result};

pub use crate::config::VerifyLevel;

/// Closed-form evaluator under test. [`ansatz::terms`] in normal runs.
pub type TermsEvaluator = fn(&VariationalParams) -> Result<AnsatzTerms>;

#[derive(Debug, Clone, PartialEq)]
pub struct PropertyOutcome {
    pub property: &'static str,
    pub cases: usize,
    pub failures: usize,
    /// Largest error divided by `tolerance`.
    pub worst: f64,
    pub tolerance: f64,
    /// Description of the first failing case.
    pub first_failure: Option<String>,
}

impl PropertyOutcome {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyReport {
    pub level: VerifyLevel,
    pub properties: Vec<PropertyOutcome>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.properties.iter().all(PropertyOutcome::passed)
    }

    pub fn total_cases(&self) -> usize {
        self.properties.iter().map(|p| p.cases).sum()
    }

    pub fn failed(&self) -> impl Iterator<Item = &PropertyOutcome> {
        self.properties.iter().filter(|p| !p.passed())
    }

    pub fn get(&self, property: &str) -> Option<&PropertyOutcome> {
        self.properties.iter().find(|p| p.property == property)
    }

    /// CSV summary, one line per property.
    pub fn write_csv<W: Write>(&self, out: &mut W) -> io::Result<()> {
        writeln!(out, "property,cases,failures,worst,tolerance,status")?;
        for p in &self.properties {
            writeln!(
                out,
                "{},{},{},{},{},{}",
                p.property,
                p.cases,
                p.failures,
                format_number(p.worst),
                format_number(p.tolerance),
                if p.passed() { "pass" } else { "fail" }
            )?;
        }
        Ok(())
    }
}

struct Tally {
    outcome: PropertyOutcome,
}

impl Tally {
    fn new(property: &'static str, tolerance: f64) -> Self {
        Tally {
            outcome: PropertyOutcome { property, cases: 0, failures: 0, worst: 0.0, tolerance, first_failure: None },
        }
    }

    /// Records one case whose error is `err` against the bound `tol`.
    fn check(&mut self, err: f64, tol: f64, label: impl FnOnce() -> String) {
        let ratio = if err.is_nan() {
            f64::INFINITY
        } else if tol > 0.0 {
            err / tol
        } else if err <= 0.0 {
            0.0
        } else {
            f64::INFINITY
        };
        self.outcome.cases += 1;
        self.outcome.worst = self.outcome.worst.max(ratio);
        if ratio > 1.0 {
            self.fail(label());
        }
    }

    fn record(&mut self, err: f64, label: impl FnOnce() -> String) {
        let tol = self.outcome.tolerance;
        self.check(err, tol, label);
    }

    fn error(&mut self, label: String, e: &Error) {
        self.outcome.cases += 1;
        self.outcome.worst = f64::INFINITY;
        self.fail(format!("{label}: {e}"));
    }

    fn fail(&mut self, label: String) {
        self.outcome.failures += 1;
        self.outcome.first_failure.get_or_insert(label);
    }

    fn finish(self) -> PropertyOutcome {
        self.outcome
    }
}

/// `count` points of a low-discrepancy sequence filling
/// `α ∈ [0, alpha_max]`, `θ ∈ [0, π]`, `p ∈ [0, 1]`, `γ ∈ [−gamma_max, gamma_max]`.
pub fn parameter_samples(count: usize, alpha_max: f64, gamma_max: f64) -> Vec<VariationalParams> {
    // Kronecker sequence on the generalized golden ratio for four dimensions.
    const PHI4: f64 = 1.167_303_978_261_418_7;
    let steps: [f64; 4] = std::array::from_fn(|i| PHI4.powi(-(i as i32 + 1)));
    (1..=count)
        .map(|k| {
            let u: [f64; 4] = std::array::from_fn(|i| (0.5 + k as f64 * steps[i]).fract());
            VariationalParams {
                alpha: alpha_max * u[0],
                theta: PI * u[1],
                p: u[2],
                gamma: gamma_max * (2.0 * u[3] - 1.0),
            }
        })
        .collect()
}

/// The 5 × 10 × 10 grid over Δ/ω ∈ [0.1, 2], g/ω ∈ [0, 2], ε/ω ∈ [0, 3]
/// (ω = 1) used for the upper-bound check.
pub fn upper_bound_grid() -> Vec<ModelParams> {
    let lin = |a: f64, b: f64, n: usize, i: usize| a + (b - a) * i as f64 / (n - 1) as f64;
    let mut grid = Vec::with_capacity(500);
    for i in 0..5 {
        for j in 0..10 {
            for k in 0..10 {
                grid.push(ModelParams { delta: lin(0.1, 2.0, 5, i), omega: 1.0, g: lin(0.0, 2.0, 10, j), epsilon: lin(0.0, 3.0, 10, k) });
            }
        }
    }
    grid
}

/// Expands `v` starting at `n_max = 64`, doubling while the tail is too heavy.
pub fn expand_with_growth(v: &VariationalParams) -> Result<nalgebra::DVector<f64>> {
    let mut n_max = 64;
    loop {
        match ansatz_state_vector(v, FockTruncation::new(n_max)?) {
            Err(Error::TruncationTooSmall { .. }) if n_max < 1024 => n_max *= 2,
            other => return other,
        }
    }
}

fn model(delta: f64, g: f64, epsilon: f64) -> ModelParams {
    ModelParams { delta, omega: 1.0, g, epsilon }
}

fn describe(v: &VariationalParams) -> String {
    format!("alpha={} theta={} p={} gamma={}", v.alpha, v.theta, v.p, v.gamma)
}

fn describe_model(m: &ModelParams) -> String {
    format!("delta={} omega={} g={} epsilon={}", m.delta, m.omega, m.g, m.epsilon)
}

/// Runs every property for `level` against the real closed forms.
pub fn verify(level: VerifyLevel) -> VerifyReport {
    verify_with(level, ansatz::terms)
}

/// Runs every property with `evaluate` standing in for the closed forms.
pub fn verify_with(level: VerifyLevel, evaluate: TermsEvaluator) -> VerifyReport {
    let full = level == VerifyLevel::Full;
    let mut properties = vec![
        formula_equivalence(evaluate, if full { 2000 } else { 400 }),
        oracle_equivalence(evaluate, if full { 1000 } else { 200 }),
        range_checks(evaluate, if full { 5000 } else { 1000 }),
        gamma_zero_reduction(evaluate, 200),
        weight_symmetry(evaluate, 200),
        rayleigh_bound(evaluate),
        limits(),
        parity(),
        spectral_symmetry(),
        convergence_monotonicity(if full { 256 } else { 64 }),
    ];
    if full {
        properties.push(upper_bound());
        properties.push(squeezing_enrichment());
    }
    VerifyReport { level, properties }
}

/// Regularized ⟨σz⟩ against the literal `(N − sin²θ)/(N cos θ)`. The literal
/// form cancels when `cos θ` is small, so the bound adds its rounding error.
fn formula_equivalence(evaluate: TermsEvaluator, count: usize) -> PropertyOutcome {
    let mut t = Tally::new("formula_equivalence", 1e-12);
    for v in parameter_samples(count, 3.0, 0.0) {
        let (s, c) = v.theta.sin_cos();
        if c.abs() <= 1e-6 {
            continue;
        }
        let terms = match evaluate(&v) {
            Ok(terms) => terms,
            Err(Error::DegenerateState { .. }) => continue,
            Err(e) => {
                t.error(describe(&v), &e);
                continue;
            }
        };
        let n = terms.norm;
        let literal = (n - s * s) / (n * c);
        let tol = 1e-12 * terms.sz.abs() + 4.0 * f64::EPSILON * (n.abs() + s * s) / (n * c).abs();
        t.check((terms.sz - literal).abs(), tol, || describe(&v));
    }
    t.finish()
}

/// Closed forms against contractions of the expanded Fock-space vector, and
/// the closed-form energy against its Rayleigh quotient.
fn oracle_equivalence(evaluate: TermsEvaluator, count: usize) -> PropertyOutcome {
    let mut t = Tally::new("oracle_equivalence", 1e-8);
    for (k, v) in parameter_samples(count, 3.0, 0.5).into_iter().enumerate() {
        if ansatz::normalization(&v).is_err() {
            continue;
        }
        let m = model(0.5 + (k % 4) as f64 * 0.5, 0.25 * (k % 9) as f64, 0.5 * (k % 5) as f64);
        let terms = match evaluate(&v) {
            Ok(x) => x,
            Err(e) => {
                t.error(describe(&v), &e);
                continue;
            }
        };
        let psi = match expand_with_growth(&v) {
            Ok(psi) => psi,
            Err(e) => {
                t.error(describe(&v), &e);
                continue;
            }
        };
        let mo = vector_moments(&psi);
        let rq = match rayleigh_quotient(&m, &psi) {
            Ok(x) => x,
            Err(e) => {
                t.error(describe(&v), &e);
                continue;
            }
        };
        let err = [
            terms.norm - mo.norm,
            terms.photon_number - mo.photon_number,
            terms.sz - mo.sz,
            terms.sx - mo.sx,
            terms.correlation - mo.correlation,
            terms.energy(&m) - rq,
        ]
        .iter()
        .fold(0.0_f64, |acc, d| acc.max(d.abs()));
        t.record(err, || format!("{} ({})", describe(&v), describe_model(&m)));
    }
    t.finish()
}

fn range_checks(evaluate: TermsEvaluator, count: usize) -> PropertyOutcome {
    let slack = 1e-12;
    let mut t = Tally::new("range_checks", slack);
    for v in parameter_samples(count, 4.0, 1.0) {
        let terms = match evaluate(&v) {
            Ok(x) => x,
            Err(Error::DegenerateState { .. }) => continue,
            Err(e) => {
                t.error(describe(&v), &e);
                continue;
            }
        };
        let violation = [
            -terms.photon_number,
            terms.sz.abs() - 1.0,
            terms.sx.abs() - 1.0,
            terms.correlation,
            -terms.norm,
            terms.norm - 2.0,
        ]
        .into_iter()
        .fold(0.0_f64, f64::max);
        t.record(violation, || describe(&v));
    }
    t.finish()
}

/// The squeezed photon-number and correlation forms, evaluated at γ = 0,
/// must reproduce the unsqueezed ones bit for bit.
fn gamma_zero_reduction(evaluate: TermsEvaluator, count: usize) -> PropertyOutcome {
    let mut t = Tally::new("gamma_zero_reduction", 0.0);
    for v in parameter_samples(count, 3.0, 0.0) {
        let terms = match evaluate(&v) {
            Ok(x) => x,
            Err(Error::DegenerateState { .. }) => continue,
            Err(e) => {
                t.error(describe(&v), &e);
                continue;
            }
        };
        let (n, g, a2) = (terms.norm, 0.0_f64, v.alpha * v.alpha);
        let photons_squeezed = a2 * (2.0 / n * (2.0 * g).cosh() - (2.0 * g).exp()) + g.sinh().powi(2);
        let (sin_t, _) = v.theta.sin_cos();
        let corr_squeezed = -2.0 * v.alpha * sin_t / n * (-g).exp();
        let err = (photons_squeezed - terms.photon_number).abs().max((corr_squeezed - terms.correlation).abs());
        t.record(err, || describe(&v));
    }
    t.finish()
}

/// At ε = 0 the energy is unchanged by swapping the two branch weights.
fn weight_symmetry(evaluate: TermsEvaluator, count: usize) -> PropertyOutcome {
    let mut t = Tally::new("weight_symmetry", 1e-12);
    for (k, v) in parameter_samples(count, 3.0, 0.5).into_iter().enumerate() {
        let m = model(0.25 + 0.5 * (k % 5) as f64, 0.2 * (k % 11) as f64, 0.0);
        let swapped = VariationalParams { p: v.q(), ..v };
        match (evaluate(&v), evaluate(&swapped)) {
            (Ok(a), Ok(b)) => {
                let (ea, eb) = (a.energy(&m), b.energy(&m));
                t.record((ea - eb).abs() / (1.0 + ea.abs()), || describe(&v));
            }
            (Err(Error::DegenerateState { .. }), _) | (_, Err(Error::DegenerateState { .. })) => {}
            (Err(e), _) | (_, Err(e)) => t.error(describe(&v), &e),
        }
    }
    t.finish()
}

fn rayleigh_grid() -> Vec<ModelParams> {
    let mut grid = Vec::new();
    for delta in [0.5, 1.0, 2.0] {
        for g in [0.5, 1.0, 1.5] {
            for epsilon in [0.0, 1.0] {
                grid.push(model(delta, g, epsilon));
            }
        }
    }
    grid
}

/// Trial energies, including the optimum, never fall below the converged
/// oracle ground energy.
fn rayleigh_bound(evaluate: TermsEvaluator) -> PropertyOutcome {
    let mut t = Tally::new("rayleigh_bound", 1e-9);
    let samples = parameter_samples(8, 3.0, 0.5);
    for m in rayleigh_grid() {
        let exact = match converged_ground_state(&m, ORACLE_TOL) {
            Ok(s) => s.energy,
            Err(e) => {
                t.error(describe_model(&m), &e);
                continue;
            }
        };
        for v in &samples {
            if let Ok(terms) = evaluate(v) {
                t.record(exact - terms.energy(&m), || format!("{} at {}", describe(v), describe_model(&m)));
            }
        }
        match minimize_energy(&m, &OptimizerConfig::default()) {
            Ok(r) => t.record(exact - r.e_var, || format!("optimum at {}", describe_model(&m))),
            Err(e) => t.error(describe_model(&m), &e),
        }
    }
    t.finish()
}

/// Optimized energies at g = 0 and at Δ = 0 against the exact closed forms.
fn limits() -> PropertyOutcome {
    let mut t = Tally::new("limits", 1e-6);
    let mut cases = Vec::new();
    for delta in [0.0, 0.5, 1.0, 2.0, 3.0] {
        for epsilon in [0.0, -1.0, 3.0] {
            cases.push((model(delta, 0.0, epsilon), ansatz::limit_energy_zero_coupling(&model(delta, 0.0, epsilon))));
        }
    }
    for g in [0.3, -0.7, 1.5] {
        for epsilon in [0.0, 0.4, 2.0] {
            cases.push((model(0.0, g, epsilon), ansatz::limit_energy_zero_delta(&model(0.0, g, epsilon))));
        }
    }
    for (m, expected) in cases {
        let (canonical, _) = canonicalize(&m);
        match minimize_energy(&canonical, &OptimizerConfig::default()) {
            Ok(r) => t.record((r.e_var - expected).abs() / m.omega, || describe_model(&m)),
            Err(e) => t.error(describe_model(&m), &e),
        }
    }
    t.finish()
}

/// Unbiased ground states have ⟨σz (−1)^{a†a}⟩ = −1.
fn parity() -> PropertyOutcome {
    let mut t = Tally::new("parity", 1e-8);
    for delta in [0.2, 1.0, 2.5, 5.0] {
        for g in [0.0, 0.5, 1.0, 1.5, 2.0] {
            let m = model(delta, g, 0.0);
            match converged_ground_state(&m, ORACLE_TOL) {
                Ok(s) => t.record((parity_expectation(&s) + 1.0).abs(), || describe_model(&m)),
                Err(e) => t.error(describe_model(&m), &e),
            }
        }
    }
    t.finish()
}

/// E₀(g, ε) = E₀(−g, ε) = E₀(g, −ε).
fn spectral_symmetry() -> PropertyOutcome {
    let mut t = Tally::new("spectral_symmetry", 1e-10);
    for delta in [0.3, 1.0, 2.0] {
        for g in [0.4, 1.0, 1.7] {
            for epsilon in [0.5, 2.0] {
                let m = model(delta, g, epsilon);
                let energies: Result<Vec<f64>> = [m, model(delta, -g, epsilon), model(delta, g, -epsilon)]
                    .iter()
                    .map(|x| converged_ground_state(x, ORACLE_TOL).map(|s| s.energy))
                    .collect();
                match energies {
                    Ok(e) => t.record((e[0] - e[1]).abs().max((e[0] - e[2]).abs()), || describe_model(&m)),
                    Err(e) => t.error(describe_model(&m), &e),
                }
            }
        }
    }
    t.finish()
}

/// E₀ never rises as the truncation grows.
fn convergence_monotonicity(n_limit: usize) -> PropertyOutcome {
    let mut t = Tally::new("convergence_monotonicity", 1e-12);
    for m in [model(1.0, 0.5, 0.0), model(1.0, 1.0, 0.5), model(0.5, 2.0, 1.0), model(3.0, 1.5, 2.0)] {
        let mut previous: Option<f64> = None;
        let mut n_max = 4;
        while n_max <= n_limit {
            match FockTruncation::new(n_max).and_then(|tr| ground_state(&m, tr)) {
                Ok(s) => {
                    if let Some(prev) = previous {
                        t.record(s.energy - prev, || format!("n_max={n_max} at {}", describe_model(&m)));
                    }
                    previous = Some(s.energy);
                }
                Err(e) => t.error(format!("n_max={n_max} at {}", describe_model(&m)), &e),
            }
            n_max *= 2;
        }
    }
    t.finish()
}

/// e_var − e_exact ≥ −1e-9·ω over [`upper_bound_grid`].
fn upper_bound() -> PropertyOutcome {
    let mut t = Tally::new("upper_bound", 1e-9);
    let opts = PointOptions { include_gamma: false, with_exact: true, with_fixed_weight: false };
    for m in upper_bound_grid() {
        let row = solve_point(&m, opts);
        match row.deviation() {
            Some(d) => t.record(-d / m.omega, || describe_model(&m)),
            None => t.fail(format!("{}: {}", describe_model(&m), row.status.as_str())),
        }
    }
    t.finish()
}

/// Freeing γ never raises the optimum.
fn squeezing_enrichment() -> PropertyOutcome {
    let mut t = Tally::new("squeezing_enrichment", 1e-10);
    for delta in [0.5, 1.0, 3.0, 5.0] {
        for epsilon in [0.0, 0.5] {
            let m = model(delta, (delta).sqrt() / 2.0, epsilon);
            let cfg = OptimizerConfig::default();
            let outcome = minimize_energy(&m, &cfg)
                .and_then(|plain| minimize_squeezed_from(&m, &cfg.clone().with_gamma(true), &plain).map(|sq| (plain, sq)));
            match outcome {
                Ok((plain, sq)) => t.record(sq.e_var - plain.e_var, || describe_model(&m)),
                Err(e) => t.error(describe_model(&m), &e),
            }
        }
    }
    t.finish()
}

/// Closed forms with the sign of the overlap term in the norm flipped. Used
/// to confirm that the equivalence checks catch a broken formula.
pub fn flipped_norm_terms(v: &VariationalParams) -> Result<AnsatzTerms> {
    let norm = 1.0 + 2.0 * v.p * v.q() * (-2.0 * v.alpha * v.alpha).exp() * v.theta.cos();
    Ok(ansatz::terms_with_norm(v, norm))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn samples_are_deterministic_and_in_the_box() {
        let a = parameter_samples(300, 3.0, 0.5);
        assert_eq!(a, parameter_samples(300, 3.0, 0.5));
        for v in &a {
            assert!(v.validate().is_ok(), "{v:?}");
            assert!(v.alpha <= 3.0 && v.gamma.abs() <= 0.5);
        }
    }

    #[test]
    fn grid_has_five_hundred_points() {
        let g = upper_bound_grid();
        assert_eq!(g.len(), 500);
        assert_eq!(g[0], model(0.1, 0.0, 0.0));
        assert_eq!(g[499], model(2.0, 2.0, 3.0));
    }

    #[test]
    fn closed_form_properties_pass() {
        for p in [
            formula_equivalence(ansatz::terms, 200),
            oracle_equivalence(ansatz::terms, 40),
            range_checks(ansatz::terms, 300),
            gamma_zero_reduction(ansatz::terms, 50),
            weight_symmetry(ansatz::terms, 50),
        ] {
            assert!(p.passed(), "{p:?}");
            assert!(p.cases > 0);
        }
    }

    #[test]
    fn flipped_norm_is_caught() {
        assert!(!formula_equivalence(flipped_norm_terms, 200).passed());
        assert!(!oracle_equivalence(flipped_norm_terms, 40).passed());
    }

    #[test]
    fn tally_ratio() {
        let mut t = Tally::new("x", 0.0);
        t.record(0.0, String::new);
        assert_eq!(t.outcome.failures, 0);
        t.record(1e-300, || "tiny".into());
        assert_eq!(t.outcome.failures, 1);
        assert_eq!(t.outcome.first_failure.as_deref(), Some("tiny"));
    }
}
