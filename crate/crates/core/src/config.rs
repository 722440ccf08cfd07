//! Plain-text run configuration: one `key = value` per line, `#` starts a
//! comment. Every command-line flag has a key of the same name (with `_` in
//! place of `-`), and flags override file values via [`RunConfig::overlay`].

use std::fmt;
use std::path::{Path, PathBuf};

use crate::model::ModelParams;
use crate::sweep::{Axis, GammaMapSpec, SweepSpec};

#[derive(Debug, Clone, PartialEq)]
pub enum ConfigError {
    Io { path: PathBuf, message: String },
    Parse { line: usize, message: String },
    UnknownKey { line: usize, key: String, suggestions: Vec<String> },
    Invalid(String),
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConfigError::Io { path, message } => write!(f, "{}: {message}", path.display()),
            ConfigError::Parse { line, message } => write!(f, "line {line}: {message}"),
            ConfigError::UnknownKey { line, key, suggestions } => {
                write!(f, "line {line}: unknown key `{key}`")?;
                if !suggestions.is_empty() {
                    write!(f, "; did you mean {}?", quoted(suggestions))?;
                }
                write!(f, " (valid keys: {})", KEYS.join(", "))
            }
            ConfigError::Invalid(msg) => write!(f, "invalid configuration: {msg}"),
        }
    }
}

impl std::error::Error for ConfigError {}

fn quoted(items: &[String]) -> String {
    items.iter().map(|s| format!("`{s}`")).collect::<Vec<_>>().join(" or ")
}

pub const KEYS: [&str; 22] = [
    "mode",
    "delta",
    "omega",
    "g",
    "epsilon",
    "axis",
    "start",
    "stop",
    "steps",
    "exact",
    "fixed_weight",
    "gamma",
    "out",
    "threads",
    "header",
    "level",
    "delta_min",
    "delta_max",
    "epsilon_min",
    "epsilon_max",
    "delta_steps",
    "epsilon_steps",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Solve,
    Sweep,
    GammaMap,
    Verify,
}

impl Mode {
    pub fn name(&self) -> &'static str {
        match self {
            Mode::Solve => "solve",
            Mode::Sweep => "sweep",
            Mode::GammaMap => "gamma-map",
            Mode::Verify => "verify",
        }
    }

    fn parse(s: &str) -> Option<Self> {
        match s {
            "solve" => Some(Mode::Solve),
            "sweep" => Some(Mode::Sweep),
            "gamma-map" | "gamma_map" => Some(Mode::GammaMap),
            "verify" => Some(Mode::Verify),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VerifyLevel {
    Quick,
    Full,
}

impl VerifyLevel {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "quick" => Some(VerifyLevel::Quick),
            "full" => Some(VerifyLevel::Full),
            _ => None,
        }
    }
}

/// Every setting that can come from a file or a flag. `None` means "not
/// given"; defaults are applied when a spec is built.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RunConfig {
    pub mode: Option<Mode>,
    pub delta: Option<f64>,
    pub omega: Option<f64>,
    pub g: Option<f64>,
    pub epsilon: Option<f64>,
    pub axis: Option<Axis>,
    pub start: Option<f64>,
    pub stop: Option<f64>,
    pub steps: Option<usize>,
    pub exact: Option<bool>,
    pub fixed_weight: Option<bool>,
    pub gamma: Option<bool>,
    pub out: Option<PathBuf>,
    pub threads: Option<usize>,
    pub header: Option<bool>,
    pub level: Option<VerifyLevel>,
    pub delta_min: Option<f64>,
    pub delta_max: Option<f64>,
    pub epsilon_min: Option<f64>,
    pub epsilon_max: Option<f64>,
    pub delta_steps: Option<usize>,
    pub epsilon_steps: Option<usize>,
}

fn parse_f64(value: &str) -> Result<f64, String> {
    value
        .parse::<f64>()
        .ok()
        .filter(|x| x.is_finite())
        .ok_or_else(|| format!("expected a finite number, got `{value}`"))
}

fn parse_usize(value: &str) -> Result<usize, String> {
    value.parse::<usize>().map_err(|_| format!("expected a non-negative integer, got `{value}`"))
}

fn parse_bool(value: &str) -> Result<bool, String> {
    match value.to_ascii_lowercase().as_str() {
        "true" | "yes" | "on" | "1" => Ok(true),
        "false" | "no" | "off" | "0" => Ok(false),
        _ => Err(format!("expected true or false, got `{value}`")),
    }
}

/// Valid keys within edit distance 2 of `key`, closest first.
fn suggestions(key: &str) -> Vec<String> {
    let mut near: Vec<(usize, &str)> = KEYS
        .iter()
        .map(|k| (strsim::levenshtein(key, k), *k))
        .filter(|(d, _)| *d <= 2)
        .collect();
    near.sort();
    near.into_iter().map(|(_, k)| k.to_string()).collect()
}

impl RunConfig {
    pub fn parse_str(text: &str) -> Result<Self, ConfigError> {
        let mut cfg = RunConfig::default();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let Some((key, value)) = content.split_once('=') else {
                return Err(ConfigError::Parse { line, message: format!("expected `key = value`, got `{content}`") });
            };
            let key = key.trim().replace('-', "_");
            let value = value.trim();
            if !KEYS.contains(&key.as_str()) {
                return Err(ConfigError::UnknownKey { line, suggestions: suggestions(&key), key });
            }
            cfg.set(&key, value).map_err(|message| ConfigError::Parse { line, message: format!("{key}: {message}") })?;
        }
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ConfigError::Io { path: path.to_path_buf(), message: e.to_string() })?;
        Self::parse_str(&text)
    }

    /// Sets one key from its textual value.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), String> {
        match key {
            "mode" => self.mode = Some(Mode::parse(value).ok_or_else(|| format!("unknown mode `{value}`"))?),
            "delta" => self.delta = Some(parse_f64(value)?),
            "omega" => self.omega = Some(parse_f64(value)?),
            "g" => self.g = Some(parse_f64(value)?),
            "epsilon" => self.epsilon = Some(parse_f64(value)?),
            "axis" => {
                self.axis = Some(Axis::parse(value).ok_or_else(|| format!("axis must be g, epsilon or delta, got `{value}`"))?)
            }
            "start" => self.start = Some(parse_f64(value)?),
            "stop" => self.stop = Some(parse_f64(value)?),
            "steps" => self.steps = Some(parse_usize(value)?),
            "exact" => self.exact = Some(parse_bool(value)?),
            "fixed_weight" => self.fixed_weight = Some(parse_bool(value)?),
            "gamma" => self.gamma = Some(parse_bool(value)?),
            "out" => self.out = Some(PathBuf::from(value)),
            "threads" => self.threads = Some(parse_usize(value)?),
            "header" => self.header = Some(parse_bool(value)?),
            "level" => self.level = Some(VerifyLevel::parse(value).ok_or_else(|| format!("level must be quick or full, got `{value}`"))?),
            "delta_min" => self.delta_min = Some(parse_f64(value)?),
            "delta_max" => self.delta_max = Some(parse_f64(value)?),
            "epsilon_min" => self.epsilon_min = Some(parse_f64(value)?),
            "epsilon_max" => self.epsilon_max = Some(parse_f64(value)?),
            "delta_steps" => self.delta_steps = Some(parse_usize(value)?),
            "epsilon_steps" => self.epsilon_steps = Some(parse_usize(value)?),
            _ => return Err(format!("unknown key `{key}`")),
        }
        Ok(())
    }

    /// `self` with every value present in `top` replaced by `top`'s.
    pub fn overlay(self, top: &RunConfig) -> RunConfig {
        macro_rules! pick {
            ($($f:ident),*) => { RunConfig { $($f: top.$f.clone().or(self.$f),)* } };
        }
        pick!(
            mode, delta, omega, g, epsilon, axis, start, stop, steps, exact, fixed_weight, gamma, out, threads, header,
            level, delta_min, delta_max, epsilon_min, epsilon_max, delta_steps, epsilon_steps
        )
    }

    /// Model couplings; unset fields default to Δ = ω = 1, g = ε = 0.
    pub fn model(&self) -> Result<ModelParams, ConfigError> {
        ModelParams::new(
            self.delta.unwrap_or(1.0),
            self.omega.unwrap_or(1.0),
            self.g.unwrap_or(0.0),
            self.epsilon.unwrap_or(0.0),
        )
        .map_err(|e| ConfigError::Invalid(e.to_string()))
    }

    pub fn sweep_spec(&self) -> Result<SweepSpec, ConfigError> {
        let missing = |k: &str| ConfigError::Invalid(format!("sweep needs `{k}`"));
        let spec = SweepSpec {
            fixed: self.model()?,
            axis: self.axis.ok_or_else(|| missing("axis"))?,
            start: self.start.ok_or_else(|| missing("start"))?,
            stop: self.stop.ok_or_else(|| missing("stop"))?,
            steps: self.steps.ok_or_else(|| missing("steps"))?,
            include_gamma: self.gamma.unwrap_or(false),
            with_exact: self.exact.unwrap_or(false),
            with_fixed_weight: self.fixed_weight.unwrap_or(false),
        };
        spec.validate().map_err(|e| ConfigError::Invalid(e.to_string()))?;
        Ok(spec)
    }

    pub fn gamma_map_spec(&self) -> Result<GammaMapSpec, ConfigError> {
        let d = GammaMapSpec::default();
        let spec = GammaMapSpec {
            omega: self.omega.unwrap_or(d.omega),
            delta_range: (self.delta_min.unwrap_or(d.delta_range.0), self.delta_max.unwrap_or(d.delta_range.1)),
            epsilon_range: (self.epsilon_min.unwrap_or(d.epsilon_range.0), self.epsilon_max.unwrap_or(d.epsilon_range.1)),
            grid: (self.delta_steps.unwrap_or(d.grid.0), self.epsilon_steps.unwrap_or(d.grid.1)),
        };
        spec.validate().map_err(|e| ConfigError::Invalid(e.to_string()))?;
        Ok(spec)
    }

    fn has_gamma_map_keys(&self) -> bool {
        self.delta_min.is_some()
            || self.delta_max.is_some()
            || self.epsilon_min.is_some()
            || self.epsilon_max.is_some()
            || self.delta_steps.is_some()
            || self.epsilon_steps.is_some()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ParsedConfig {
    Sweep(SweepSpec),
    GammaMap(GammaMapSpec),
}

/// Reads a sweep or γ-map recipe. The kind comes from `mode` when present,
/// otherwise from which keys appear.
pub fn parse_config(path: &Path) -> Result<ParsedConfig, ConfigError> {
    let cfg = RunConfig::load(path)?;
    resolve(&cfg)
}

pub fn resolve(cfg: &RunConfig) -> Result<ParsedConfig, ConfigError> {
    match cfg.mode {
        Some(Mode::GammaMap) => Ok(ParsedConfig::GammaMap(cfg.gamma_map_spec()?)),
        Some(Mode::Sweep) => Ok(ParsedConfig::Sweep(cfg.sweep_spec()?)),
        Some(other) => Err(ConfigError::Invalid(format!("`{}` is not a sweep or gamma-map recipe", other.name()))),
        None if cfg.has_gamma_map_keys() && cfg.axis.is_none() => Ok(ParsedConfig::GammaMap(cfg.gamma_map_spec()?)),
        None => Ok(ParsedConfig::Sweep(cfg.sweep_spec()?)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_sweep() {
        let cfg = RunConfig::parse_str("axis = g\nstart = 0\nstop = 2\nsteps = 81\n").unwrap();
        match resolve(&cfg).unwrap() {
            ParsedConfig::Sweep(s) => {
                assert_eq!(s.axis, Axis::G);
                assert_eq!((s.start, s.stop, s.steps), (0.0, 2.0, 81));
                assert_eq!(s.fixed, ModelParams::new(1.0, 1.0, 0.0, 0.0).unwrap());
                assert!(!s.with_exact && !s.include_gamma && !s.with_fixed_weight);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn single_step_is_rejected() {
        let cfg = RunConfig::parse_str("axis = g\nstart = 0\nstop = 2\nsteps = 1\n").unwrap();
        assert!(matches!(resolve(&cfg), Err(ConfigError::Invalid(_))));
    }

    #[test]
    fn unknown_key_suggests_neighbours() {
        let err = RunConfig::parse_str("# recipe\naxis = g\ngama = 0.1\n").unwrap_err();
        match &err {
            ConfigError::UnknownKey { line, key, suggestions } => {
                assert_eq!(*line, 3);
                assert_eq!(key, "gama");
                assert_eq!(suggestions.first().map(String::as_str), Some("gamma"));
            }
            other => panic!("{other:?}"),
        }
        let text = err.to_string();
        assert!(text.contains("`gamma`") && text.contains("valid keys"));
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let err = RunConfig::parse_str("delta = 1\n\nsteps = many\n").unwrap_err();
        assert!(matches!(err, ConfigError::Parse { line: 3, .. }), "{err:?}");
        let err = RunConfig::parse_str("delta 1\n").unwrap_err();
        assert!(matches!(err, ConfigError::Parse { line: 1, .. }), "{err:?}");
    }

    #[test]
    fn comments_hyphens_and_overlay() {
        let file = RunConfig::parse_str("fixed-weight = yes # trailing\nexact = false\ng = 0.5\n").unwrap();
        assert_eq!(file.fixed_weight, Some(true));
        let flags = RunConfig { exact: Some(true), g: Some(0.7), ..Default::default() };
        let merged = file.overlay(&flags);
        assert_eq!(merged.exact, Some(true));
        assert_eq!(merged.g, Some(0.7));
        assert_eq!(merged.fixed_weight, Some(true));
    }

    #[test]
    fn gamma_map_inferred_from_keys() {
        let cfg = RunConfig::parse_str("delta_min = 0.5\ndelta_max = 5\ndelta_steps = 4\nepsilon_steps = 3\n").unwrap();
        match resolve(&cfg).unwrap() {
            ParsedConfig::GammaMap(s) => {
                assert_eq!(s.delta_range, (0.5, 5.0));
                assert_eq!(s.epsilon_range, (0.0, 3.0));
                assert_eq!(s.grid, (4, 3));
            }
            other => panic!("{other:?}"),
        }
    }
}
