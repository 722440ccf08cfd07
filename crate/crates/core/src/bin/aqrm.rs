use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use aqrm::config::{Mode, RunConfig, VerifyLevel};
use aqrm::sweep::{self, PointOptions};
use aqrm::verify;

const EXIT_VERIFY_FAILED: u8 = 1;
const EXIT_NOT_CONVERGED: u8 = 2;
const EXIT_USAGE: u8 = 64;

/// Variational ground states of the asymmetric quantum Rabi model.
#[derive(Parser)]
#[command(name = "aqrm", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve one point and print a report row.
    Solve(Flags),
    /// Solve along one axis with continuation.
    Sweep(Flags),
    /// Map the optimal squeezing over (Δ, ε) with g = √(Δω)/2.
    GammaMap(Flags),
    /// Run the invariant suite.
    Verify(Flags),
}

#[derive(Args, Default)]
struct Flags {
    /// Read `key = value` settings from a file; flags override them.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, allow_hyphen_values = true)]
    delta: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    omega: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    g: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    epsilon: Option<f64>,
    /// Swept parameter: g, epsilon or delta.
    #[arg(long)]
    axis: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    start: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    stop: Option<f64>,
    #[arg(long)]
    steps: Option<usize>,
    /// Add exact-diagonalization columns.
    #[arg(long)]
    exact: bool,
    /// Add columns for the solve with both branch weights pinned to 1/√2.
    #[arg(long)]
    fixed_weight: bool,
    /// Optimize the squeezing parameter as well.
    #[arg(long)]
    gamma: bool,
    /// Write CSV here instead of stdout (always with a header).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads; 0 uses every core.
    #[arg(long)]
    threads: Option<usize>,
    /// Print the CSV header on stdout.
    #[arg(long)]
    header: bool,
    /// Verification depth: quick or full.
    #[arg(long)]
    level: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    delta_min: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    delta_max: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    epsilon_min: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    epsilon_max: Option<f64>,
    #[arg(long)]
    delta_steps: Option<usize>,
    #[arg(long)]
    epsilon_steps: Option<usize>,
}

impl Flags {
    fn to_config(&self) -> Result<RunConfig, String> {
        let mut cfg = RunConfig {
            delta: self.delta,
            omega: self.omega,
            g: self.g,
            epsilon: self.epsilon,
            start: self.start,
            stop: self.stop,
            steps: self.steps,
            exact: self.exact.then_some(true),
            fixed_weight: self.fixed_weight.then_some(true),
            gamma: self.gamma.then_some(true),
            out: self.out.clone(),
            threads: self.threads,
            header: self.header.then_some(true),
            delta_min: self.delta_min,
            delta_max: self.delta_max,
            epsilon_min: self.epsilon_min,
            epsilon_max: self.epsilon_max,
            delta_steps: self.delta_steps,
            epsilon_steps: self.epsilon_steps,
            ..RunConfig::default()
        };
        if let Some(axis) = &self.axis {
            cfg.set("axis", axis).map_err(|e| format!("--axis: {e}"))?;
        }
        if let Some(level) = &self.level {
            cfg.set("level", level).map_err(|e| format!("--level: {e}"))?;
        }
        Ok(cfg)
    }

    /// File settings overlaid with the command-line flags.
    fn resolve(&self) -> Result<RunConfig, String> {
        let flags = self.to_config()?;
        let base = match &self.config {
            Some(path) => RunConfig::load(path).map_err(|e| e.to_string())?,
            None => RunConfig::default(),
        };
        Ok(base.overlay(&flags))
    }
}

enum Failure {
    Usage(String),
    Exit(u8),
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Usage(format!("cannot write output: {e}"))
    }
}

/// Output sink: a file (header forced on) or stdout.
fn open_output(cfg: &RunConfig) -> Result<(Box<dyn Write>, bool), Failure> {
    match &cfg.out {
        Some(path) => {
            let file = File::create(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
            Ok((Box::new(BufWriter::new(file)), true))
        }
        None => Ok((Box::new(BufWriter::new(io::stdout().lock())), cfg.header.unwrap_or(false))),
    }
}

fn run_solve(cfg: &RunConfig) -> Result<(), Failure> {
    let m = cfg.model().map_err(|e| Failure::Usage(e.to_string()))?;
    let opts = PointOptions {
        include_gamma: cfg.gamma.unwrap_or(false),
        with_exact: cfg.exact.unwrap_or(false),
        with_fixed_weight: cfg.fixed_weight.unwrap_or(false),
    };
    let row = sweep::solve_point(&m, opts);
    let (mut out, header) = open_output(cfg)?;
    sweep::write_report(&mut out, std::slice::from_ref(&row), opts.with_fixed_weight, header)?;
    out.flush()?;
    if row.status.is_ok() {
        Ok(())
    } else {
        eprintln!("solver status: {}", row.status.as_str());
        Err(Failure::Exit(EXIT_NOT_CONVERGED))
    }
}

fn run_sweep(cfg: &RunConfig) -> Result<(), Failure> {
    let spec = cfg.sweep_spec().map_err(|e| Failure::Usage(e.to_string()))?;
    let rows = sweep::run_sweep(&spec, cfg.threads.unwrap_or(0)).map_err(|e| Failure::Usage(e.to_string()))?;
    let (mut out, header) = open_output(cfg)?;
    sweep::write_report(&mut out, &rows, spec.with_fixed_weight, header)?;
    out.flush()?;
    let bad = rows.iter().filter(|r| !r.status.is_ok()).count();
    if bad == 0 {
        Ok(())
    } else {
        eprintln!("{bad} of {} rows did not converge", rows.len());
        Err(Failure::Exit(EXIT_NOT_CONVERGED))
    }
}

fn run_gamma_map(cfg: &RunConfig) -> Result<(), Failure> {
    let spec = cfg.gamma_map_spec().map_err(|e| Failure::Usage(e.to_string()))?;
    let rows = sweep::gamma_map(&spec, cfg.threads.unwrap_or(0)).map_err(|e| Failure::Usage(e.to_string()))?;
    let (mut out, header) = open_output(cfg)?;
    sweep::write_gamma_map(&mut out, &rows, header)?;
    out.flush()?;
    let bad = rows.iter().filter(|r| !r.status.is_ok()).count();
    if bad == 0 {
        Ok(())
    } else {
        eprintln!("{bad} of {} rows did not converge", rows.len());
        Err(Failure::Exit(EXIT_NOT_CONVERGED))
    }
}

fn run_verify(cfg: &RunConfig) -> Result<(), Failure> {
    let level = cfg.level.unwrap_or(VerifyLevel::Quick);
    let report = verify::verify(level);
    let mut out: Box<dyn Write> = match &cfg.out {
        Some(path) => Box::new(BufWriter::new(
            File::create(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    };
    report.write_csv(&mut out)?;
    out.flush()?;
    if report.passed() {
        return Ok(());
    }
    for p in report.failed() {
        eprintln!(
            "FAILED {}: {} of {} cases; first: {}",
            p.property,
            p.failures,
            p.cases,
            p.first_failure.as_deref().unwrap_or("-")
        );
    }
    Err(Failure::Exit(EXIT_VERIFY_FAILED))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(EXIT_USAGE) } else { ExitCode::SUCCESS };
        }
    };
    let (flags, mode, run): (&Flags, Mode, fn(&RunConfig) -> Result<(), Failure>) = match &cli.command {
        Command::Solve(f) => (f, Mode::Solve, run_solve),
        Command::Sweep(f) => (f, Mode::Sweep, run_sweep),
        Command::GammaMap(f) => (f, Mode::GammaMap, run_gamma_map),
        Command::Verify(f) => (f, Mode::Verify, run_verify),
    };
    let outcome = flags.resolve().map_err(Failure::Usage).and_then(|cfg| match cfg.mode {
        Some(m) if m != mode => Err(Failure::Usage(format!(
            "the configuration is for `{}`, not `{}`",
            m.name(),
            mode.name()
        ))),
        _ => run(&cfg),
    });
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Exit(code)) => ExitCode::from(code),
    }
}
