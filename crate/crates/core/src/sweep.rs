//! Point solves, parameter sweeps and the squeezing map, with their CSV
//! reports.
//!
//! Every solve happens on the canonical model (`g ≥ 0`, `ε ≥ 0`); rows report
//! the caller's couplings and observables mapped back through the sign
//! flags. Variational parameters are always those of the canonical model.

use std::fmt::Write as _;
use std::io::{self, Write};

use rayon::prelude::*;

use crate::ansatz;
use crate::model::{ModelParams, ObservableSet};
use crate::optimize::{
    continuation_sweep, fixed_weight_solve, minimize_energy, minimize_squeezed_from, OptimizerConfig,
    SolveResult, SolveStatus, STATIONARITY_LIMIT,
};
use crate::oracle::{self, exact_observables, ExactGroundState};
use crate::symmetry::{canonicalize, SignFlags};
use crate::{Error, Result};

/// Tolerance handed to the converged oracle, in units of ω.
pub const ORACLE_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    G,
    Epsilon,
    Delta,
}

impl Axis {
    pub fn name(&self) -> &'static str {
        match self {
            Axis::G => "g",
            Axis::Epsilon => "epsilon",
            Axis::Delta => "delta",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "g" => Some(Axis::G),
            "epsilon" | "eps" => Some(Axis::Epsilon),
            "delta" => Some(Axis::Delta),
            _ => None,
        }
    }

    fn set(&self, m: &mut ModelParams, x: f64) {
        match self {
            Axis::G => m.g = x,
            Axis::Epsilon => m.epsilon = x,
            Axis::Delta => m.delta = x,
        }
    }
}

/// A one-dimensional sweep: `fixed` with one field replaced by an evenly
/// spaced grid from `start` to `stop`.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub fixed: ModelParams,
    pub axis: Axis,
    pub start: f64,
    pub stop: f64,
    pub steps: usize,
    pub include_gamma: bool,
    pub with_exact: bool,
    pub with_fixed_weight: bool,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        self.fixed.validate()?;
        if !(self.start.is_finite() && self.stop.is_finite()) || self.start > self.stop {
            return Err(Error::InvalidParams(format!(
                "sweep range must satisfy start <= stop, got {} .. {}",
                self.start, self.stop
            )));
        }
        if self.steps < 2 {
            return Err(Error::InvalidParams(format!("steps must be at least 2, got {}", self.steps)));
        }
        Ok(())
    }

    pub fn points(&self) -> Vec<ModelParams> {
        linspace(self.start, self.stop, self.steps)
            .map(|x| {
                let mut m = self.fixed;
                self.axis.set(&mut m, x);
                m
            })
            .collect()
    }
}

fn linspace(start: f64, stop: f64, steps: usize) -> impl Iterator<Item = f64> {
    let last = (steps - 1).max(1) as f64;
    (0..steps).map(move |i| if i + 1 == steps { stop } else { start + (stop - start) * i as f64 / last })
}

/// Grid over (Δ, ε) with the coupling tied to `g = √(Δω)/2`.
#[derive(Debug, Clone, PartialEq)]
pub struct GammaMapSpec {
    pub omega: f64,
    pub delta_range: (f64, f64),
    pub epsilon_range: (f64, f64),
    /// Points along Δ and along ε.
    pub grid: (usize, usize),
}

impl Default for GammaMapSpec {
    fn default() -> Self {
        Self { omega: 1.0, delta_range: (0.2, 6.0), epsilon_range: (0.0, 3.0), grid: (60, 60) }
    }
}

impl GammaMapSpec {
    pub fn validate(&self) -> Result<()> {
        let ok_range = |(lo, hi): (f64, f64)| lo.is_finite() && hi.is_finite() && lo >= 0.0 && lo <= hi;
        if !(self.omega.is_finite() && self.omega > 0.0) {
            return Err(Error::InvalidParams(format!("omega must be positive, got {}", self.omega)));
        }
        if !ok_range(self.delta_range) || !ok_range(self.epsilon_range) {
            return Err(Error::InvalidParams("gamma-map ranges must be non-negative and ordered".into()));
        }
        if self.grid.0 < 2 || self.grid.1 < 2 {
            return Err(Error::InvalidParams("gamma-map grid must be at least 2 x 2".into()));
        }
        Ok(())
    }

    pub fn critical_coupling(&self, delta: f64) -> f64 {
        0.5 * (delta * self.omega).sqrt()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RowStatus {
    Converged,
    MaxEvals,
    Degenerate,
    /// Optimizer converged but the gradient check failed.
    NotStationary,
    OracleFailed,
    Failed,
}

impl RowStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            RowStatus::Converged => "converged",
            RowStatus::MaxEvals => "max_evals",
            RowStatus::Degenerate => "degenerate",
            RowStatus::NotStationary => "not_stationary",
            RowStatus::OracleFailed => "oracle_failed",
            RowStatus::Failed => "failed",
        }
    }

    pub fn is_ok(&self) -> bool {
        *self == RowStatus::Converged
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FixedWeightColumns {
    pub e_var: f64,
    pub alpha: f64,
    pub theta: f64,
    pub deviation: Option<f64>,
}

/// One line of a sweep report.
#[derive(Debug, Clone, PartialEq)]
pub struct ReportRow {
    pub model: ModelParams,
    pub result: Option<SolveResult>,
    pub var: Option<ObservableSet>,
    pub exact: Option<ObservableSet>,
    pub fidelity: Option<f64>,
    pub fixed: Option<FixedWeightColumns>,
    pub status: RowStatus,
}

impl ReportRow {
    pub fn e_var(&self) -> Option<f64> {
        self.result.as_ref().map(|r| r.e_var)
    }

    pub fn deviation(&self) -> Option<f64> {
        self.result.as_ref().and_then(|r| r.deviation)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PointOptions {
    pub include_gamma: bool,
    pub with_exact: bool,
    pub with_fixed_weight: bool,
}

impl From<&SweepSpec> for PointOptions {
    fn from(s: &SweepSpec) -> Self {
        Self { include_gamma: s.include_gamma, with_exact: s.with_exact, with_fixed_weight: s.with_fixed_weight }
    }
}

fn status_of(err: &Error) -> RowStatus {
    match err {
        Error::AllStartsDegenerate | Error::DegenerateState { .. } => RowStatus::Degenerate,
        _ => RowStatus::Failed,
    }
}

/// Solves a single model and fills every requested column.
pub fn solve_point(m: &ModelParams, opts: PointOptions) -> ReportRow {
    let (canonical, _) = canonicalize(m);
    let cfg = OptimizerConfig::default().with_gamma(opts.include_gamma);
    let result = minimize_energy(&canonical, &cfg);
    complete_row(m, result, opts)
}

/// Adds observables, oracle columns and the fixed-weight solve to an
/// optimizer result for `m` (the caller's, possibly non-canonical, model).
fn complete_row(m: &ModelParams, result: Result<SolveResult>, opts: PointOptions) -> ReportRow {
    let (canonical, flags) = canonicalize(m);
    let mut row = ReportRow {
        model: *m,
        result: None,
        var: None,
        exact: None,
        fidelity: None,
        fixed: None,
        status: RowStatus::Converged,
    };
    let mut result = match result {
        Ok(r) => r,
        Err(e) => {
            row.status = status_of(&e);
            return row;
        }
    };
    row.status = match result.status {
        SolveStatus::Converged if result.stationarity > STATIONARITY_LIMIT * m.omega => RowStatus::NotStationary,
        SolveStatus::Converged => RowStatus::Converged,
        SolveStatus::MaxEvals => RowStatus::MaxEvals,
        SolveStatus::Degenerate => RowStatus::Degenerate,
    };
    row.var = ansatz::observables(&canonical, &result.v_opt).ok().map(|o| flags.restore(&o));

    let mut exact_state: Option<ExactGroundState> = None;
    if opts.with_exact {
        match exact_columns(&canonical, flags) {
            Ok((state, obs)) => {
                result = result.with_exact(state.energy);
                row.fidelity = oracle::fidelity(&result.v_opt, &state).ok();
                row.exact = Some(obs);
                exact_state = Some(state);
            }
            Err(_) => row.status = RowStatus::OracleFailed,
        }
    }

    if opts.with_fixed_weight {
        let cfg = OptimizerConfig::default().with_gamma(opts.include_gamma);
        match fixed_weight_solve(&canonical, &cfg) {
            Ok(f) => {
                row.fixed = Some(FixedWeightColumns {
                    e_var: f.e_var,
                    alpha: f.v_opt.alpha,
                    theta: f.v_opt.theta,
                    deviation: exact_state.as_ref().map(|s| f.e_var - s.energy),
                })
            }
            Err(e) => row.status = status_of(&e),
        }
    }
    row.result = Some(result);
    row
}

fn exact_columns(canonical: &ModelParams, flags: SignFlags) -> Result<(ExactGroundState, ObservableSet)> {
    let state = oracle::converged_ground_state(canonical, ORACLE_TOL)?;
    let obs = exact_observables(&state)?.observables;
    Ok((state, flags.restore(&obs)))
}

fn with_threads<T: Send>(threads: usize, f: impl FnOnce() -> T + Send) -> T {
    if threads == 0 {
        return f();
    }
    match rayon::ThreadPoolBuilder::new().num_threads(threads).build() {
        Ok(pool) => pool.install(f),
        Err(_) => f(),
    }
}

/// Runs the sweep with continuation along the axis. The optimizer chain is
/// sequential; oracle and fixed-weight columns are filled in parallel on
/// `threads` workers (0 = rayon's default). Row order and contents do not
/// depend on the thread count.
pub fn run_sweep(spec: &SweepSpec, threads: usize) -> Result<Vec<ReportRow>> {
    spec.validate()?;
    let points = spec.points();
    let canonical: Vec<ModelParams> = points.iter().map(|m| canonicalize(m).0).collect();
    let cfg = OptimizerConfig::default().with_gamma(spec.include_gamma);
    let results = continuation_sweep(&canonical, &cfg)?;
    let opts = PointOptions::from(spec);
    Ok(with_threads(threads, || {
        points
            .par_iter()
            .zip(results.into_par_iter())
            .map(|(m, r)| complete_row(m, r, opts))
            .collect()
    }))
}

/// One cell of the squeezing map.
#[derive(Debug, Clone, PartialEq)]
pub struct GammaRow {
    pub delta: f64,
    pub omega: f64,
    pub epsilon: f64,
    pub g: f64,
    pub gamma_opt: f64,
    pub e_var_gamma: f64,
    pub e_var_plain: f64,
    pub status: RowStatus,
}

impl GammaRow {
    pub fn improvement(&self) -> f64 {
        self.e_var_plain - self.e_var_gamma
    }
}

/// Optimal squeezing over the (Δ, ε) grid at `g = √(Δω)/2`. Rows are ordered
/// by ε, then Δ; each ε line is a continuation chain in Δ and lines run in
/// parallel.
pub fn gamma_map(spec: &GammaMapSpec, threads: usize) -> Result<Vec<GammaRow>> {
    spec.validate()?;
    let deltas: Vec<f64> = linspace(spec.delta_range.0, spec.delta_range.1, spec.grid.0).collect();
    let epsilons: Vec<f64> = linspace(spec.epsilon_range.0, spec.epsilon_range.1, spec.grid.1).collect();
    let chains: Vec<Vec<GammaRow>> = with_threads(threads, || {
        epsilons
            .par_iter()
            .map(|&epsilon| gamma_chain(spec, &deltas, epsilon))
            .collect()
    });
    Ok(chains.into_iter().flatten().collect())
}

fn gamma_chain(spec: &GammaMapSpec, deltas: &[f64], epsilon: f64) -> Vec<GammaRow> {
    let mut plain_cfg = OptimizerConfig::default();
    let mut squeezed_cfg = OptimizerConfig::default().with_gamma(true);
    let mut rows = Vec::with_capacity(deltas.len());
    for &delta in deltas {
        let g = spec.critical_coupling(delta);
        let m = ModelParams { delta, omega: spec.omega, g, epsilon };
        let mut row = GammaRow {
            delta,
            omega: spec.omega,
            epsilon,
            g,
            gamma_opt: f64::NAN,
            e_var_gamma: f64::NAN,
            e_var_plain: f64::NAN,
            status: RowStatus::Converged,
        };
        let solved = minimize_energy(&m, &plain_cfg)
            .and_then(|plain| minimize_squeezed_from(&m, &squeezed_cfg, &plain).map(|sq| (plain, sq)));
        match solved {
            Ok((plain, squeezed)) => {
                row.gamma_opt = squeezed.v_opt.gamma;
                row.e_var_gamma = squeezed.e_var;
                row.e_var_plain = plain.e_var;
                if plain.status != SolveStatus::Converged || squeezed.status != SolveStatus::Converged {
                    row.status = RowStatus::MaxEvals;
                }
                plain_cfg.warm_start = Some(plain.v_opt);
                squeezed_cfg.warm_start = Some(squeezed.v_opt);
            }
            Err(e) => row.status = status_of(&e),
        }
        rows.push(row);
    }
    rows
}

/// `%.11e`-style scientific notation (12 significant digits, signed
/// two-digit exponent). Negative zero prints as zero.
pub fn format_number(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let x = if x == 0.0 { 0.0 } else { x };
    let s = format!("{x:.11e}");
    let (mantissa, exp) = s.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    let sign = if exp < 0 { '-' } else { '+' };
    format!("{mantissa}e{sign}{:02}", exp.abs())
}

fn opt(x: Option<f64>) -> String {
    x.map(format_number).unwrap_or_default()
}

pub const REPORT_COLUMNS: [&str; 22] = [
    "delta", "omega", "g", "epsilon", "alpha", "theta", "p", "gamma", "e_var", "e_exact", "deviation",
    "photon_var", "photon_exact", "sz_var", "sz_exact", "sx_var", "sx_exact", "corr_var", "corr_exact",
    "fidelity", "stationarity", "status",
];

pub const FIXED_WEIGHT_COLUMNS: [&str; 4] = ["e_var_fixed", "alpha_fixed", "theta_fixed", "deviation_fixed"];

pub fn report_header(with_fixed_weight: bool) -> String {
    let mut cols: Vec<&str> = REPORT_COLUMNS.to_vec();
    if with_fixed_weight {
        cols.extend(FIXED_WEIGHT_COLUMNS);
    }
    cols.join(",")
}

pub fn report_line(row: &ReportRow, with_fixed_weight: bool) -> String {
    let m = &row.model;
    let r = row.result.as_ref();
    let v = r.map(|r| r.v_opt);
    let var = row.var.as_ref();
    let ex = row.exact.as_ref();
    let mut fields = vec![
        format_number(m.delta),
        format_number(m.omega),
        format_number(m.g),
        format_number(m.epsilon),
        opt(v.map(|v| v.alpha)),
        opt(v.map(|v| v.theta)),
        opt(v.map(|v| v.p)),
        opt(v.map(|v| v.gamma)),
        opt(r.map(|r| r.e_var)),
        opt(r.and_then(|r| r.e_exact)),
        opt(r.and_then(|r| r.deviation)),
        opt(var.map(|o| o.photon_number)),
        opt(ex.map(|o| o.photon_number)),
        opt(var.map(|o| o.sz)),
        opt(ex.map(|o| o.sz)),
        opt(var.map(|o| o.sx)),
        opt(ex.map(|o| o.sx)),
        opt(var.map(|o| o.correlation)),
        opt(ex.map(|o| o.correlation)),
        opt(row.fidelity),
        opt(r.map(|r| r.stationarity)),
        row.status.as_str().to_string(),
    ];
    if with_fixed_weight {
        let f = row.fixed.as_ref();
        fields.push(opt(f.map(|f| f.e_var)));
        fields.push(opt(f.map(|f| f.alpha)));
        fields.push(opt(f.map(|f| f.theta)));
        fields.push(opt(f.and_then(|f| f.deviation)));
    }
    fields.join(",")
}

pub fn write_report<W: Write>(out: &mut W, rows: &[ReportRow], with_fixed_weight: bool, header: bool) -> io::Result<()> {
    let mut buf = String::new();
    if header {
        buf.push_str(&report_header(with_fixed_weight));
        buf.push('\n');
    }
    for row in rows {
        buf.push_str(&report_line(row, with_fixed_weight));
        buf.push('\n');
    }
    out.write_all(buf.as_bytes())
}

pub const GAMMA_COLUMNS: [&str; 10] = [
    "delta", "omega", "epsilon", "g", "gamma_opt", "abs_gamma", "e_var_gamma", "e_var_plain", "improvement", "status",
];

pub fn write_gamma_map<W: Write>(out: &mut W, rows: &[GammaRow], header: bool) -> io::Result<()> {
    let mut buf = String::new();
    if header {
        buf.push_str(&GAMMA_COLUMNS.join(","));
        buf.push('\n');
    }
    for r in rows {
        let _ = writeln!(
            buf,
            "{},{},{},{},{},{},{},{},{},{}",
            format_number(r.delta),
            format_number(r.omega),
            format_number(r.epsilon),
            format_number(r.g),
            format_number(r.gamma_opt),
            format_number(r.gamma_opt.abs()),
            format_number(r.e_var_gamma),
            format_number(r.e_var_plain),
            format_number(r.improvement()),
            r.status.as_str(),
        );
    }
    out.write_all(buf.as_bytes())
}

/// Closed-form limit for rows sitting exactly at `g = 0` or `Δ = 0`.
pub fn limit_energy(m: &ModelParams) -> Option<f64> {
    if m.g == 0.0 {
        Some(ansatz::limit_energy_zero_coupling(m))
    } else if m.delta == 0.0 {
        Some(ansatz::limit_energy_zero_delta(m))
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn number_format() {
        assert_eq!(format_number(-0.5f64.sqrt()), "-7.07106781187e-01");
        assert_eq!(format_number(0.0), "0.00000000000e+00");
        assert_eq!(format_number(-0.0), "0.00000000000e+00");
        assert_eq!(format_number(1234.5), "1.23450000000e+03");
        assert_eq!(format_number(2.5e-120), "2.50000000000e-120");
    }

    #[test]
    fn sweep_points_hit_endpoints() {
        let spec = SweepSpec {
            fixed: ModelParams::new(1.0, 1.0, 0.0, 0.5).unwrap(),
            axis: Axis::G,
            start: 0.0,
            stop: 2.0,
            steps: 81,
            include_gamma: false,
            with_exact: false,
            with_fixed_weight: false,
        };
        let pts = spec.points();
        assert_eq!(pts.len(), 81);
        assert_eq!(pts[0].g, 0.0);
        assert_eq!(pts[80].g, 2.0);
        assert!((pts[40].g - 1.0).abs() < 1e-15);
        assert!(pts.iter().all(|p| p.epsilon == 0.5 && p.delta == 1.0));
    }

    #[test]
    fn sweep_validation() {
        let mut spec = SweepSpec {
            fixed: ModelParams::new(1.0, 1.0, 0.0, 0.0).unwrap(),
            axis: Axis::Epsilon,
            start: 0.0,
            stop: 1.0,
            steps: 1,
            include_gamma: false,
            with_exact: false,
            with_fixed_weight: false,
        };
        assert!(spec.validate().is_err());
        spec.steps = 2;
        assert!(spec.validate().is_ok());
        spec.start = 2.0;
        assert!(spec.validate().is_err());
    }

    #[test]
    fn negative_couplings_report_original_signs() {
        let m = ModelParams::new(1.0, 1.0, -0.6, -0.4).unwrap();
        let row = solve_point(&m, PointOptions { with_exact: true, ..Default::default() });
        assert_eq!(row.status, RowStatus::Converged);
        let var = row.var.unwrap();
        let ex = row.exact.unwrap();
        // Reflections keep the energy; the restored σx follows the bias sign.
        assert!(var.sx > 0.0 && ex.sx > 0.0);
        assert!(var.correlation > 0.0 && ex.correlation > 0.0);
        let e = ObservableSet::energy_from_parts(&m, var.photon_number, var.sz, var.sx, var.correlation);
        assert!((e - row.e_var().unwrap()).abs() < 1e-12);
        assert!(row.deviation().unwrap() >= -1e-9);
    }

    #[test]
    fn gamma_map_spec_validation() {
        assert!(GammaMapSpec::default().validate().is_ok());
        let bad = GammaMapSpec { grid: (1, 5), ..Default::default() };
        assert!(bad.validate().is_err());
        let bad = GammaMapSpec { delta_range: (2.0, 1.0), ..Default::default() };
        assert!(bad.validate().is_err());
    }
}
