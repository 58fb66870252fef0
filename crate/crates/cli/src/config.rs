//! Flat key-value experiment configs.
//!
//! The format is one `key = value` pair per line with dotted section names
//! (`circuit.I_c_uA = 2.0`), `#` comments, and blank lines. Every key has a
//! default; parsing materializes all of them, so the normalized echo of two
//! configs differing only in comments is identical. Unknown keys are
//! rejected with the nearest valid key, never silently dropped.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("line {line}: expected `key = value`, got `{text}`")]
    Syntax { line: usize, text: String },
    #[error("line {line}: unknown key `{key}`, nearest valid key is `{nearest}`")]
    UnknownKey {
        line: usize,
        key: String,
        nearest: &'static str,
    },
    #[error("line {line}: key `{key}` is set twice")]
    DuplicateKey { line: usize, key: String },
    #[error("line {line}: `{key}` expects {expected}, got `{value}`")]
    BadValue {
        line: usize,
        key: &'static str,
        expected: String,
        value: String,
    },
    #[error("config does not set `command`")]
    MissingCommand,
    #[error("`{key}` = {value}: {reason}")]
    BadDomain {
        key: &'static str,
        value: String,
        reason: String,
    },
    #[error("command `sweep` needs a non-empty `{0}`")]
    SweepIncomplete(&'static str),
    #[error("`sweep.command` cannot itself be `sweep`")]
    NestedSweep,
    #[error("`sweep.key` `{0}` is not a numeric config key")]
    BadSweepKey(String),
}

pub const COMMANDS: &[&str] = &[
    "lattice",
    "kink",
    "curvature",
    "coords",
    "spectrum",
    "fig2",
    "sweep",
];
const POLARITIES: &[&str] = &["kink", "antikink"];
const FORMATS: &[&str] = &["csv", "json"];

#[derive(Clone, Copy, PartialEq)]
enum Kind {
    Float,
    Count,
    Word(&'static [&'static str]),
    Text,
}

impl Kind {
    fn expected(&self) -> String {
        match self {
            Kind::Float => "a number".into(),
            Kind::Count => "a non-negative integer".into(),
            Kind::Word(options) => format!("one of {}", options.join(" | ")),
            Kind::Text => "text".into(),
        }
    }
}

/// Every key the parser accepts, with its value kind and default.
const SCHEMA: &[(&str, Kind, &str)] = &[
    ("command", Kind::Word(COMMANDS), ""),
    ("circuit.I_c_uA", Kind::Float, "2"),
    ("circuit.C_J_fF", Kind::Float, "1.2"),
    ("circuit.C_0_fF", Kind::Float, "0.8"),
    ("circuit.L_0_nH", Kind::Float, "0.01"),
    ("circuit.a_um", Kind::Float, "6"),
    ("circuit.flux_ratio", Kind::Float, "0"),
    ("circuit.cells", Kind::Count, "256"),
    ("soliton.beta_s", Kind::Float, "0.5"),
    ("soliton.beta_lab", Kind::Float, "0.3"),
    ("soliton.polarity", Kind::Word(POLARITIES), "kink"),
    ("soliton.offset", Kind::Float, "0"),
    ("grid.points", Kind::Count, "1024"),
    ("grid.xi_min", Kind::Float, "-10"),
    ("grid.xi_max", Kind::Float, "30"),
    ("curvature.xi_lo", Kind::Float, "0.6"),
    ("curvature.xi_hi", Kind::Float, "3.4"),
    ("curvature.tau_extent", Kind::Float, "0.4"),
    ("curvature.spacing", Kind::Float, "0.01"),
    ("coords.rho_lo", Kind::Float, "1.8"),
    ("coords.rho_hi", Kind::Float, "3.3"),
    ("coords.points", Kind::Count, "201"),
    ("spectrum.omega_min", Kind::Float, "0.02"),
    ("spectrum.omega_max", Kind::Float, "0.32"),
    ("spectrum.points", Kind::Count, "16"),
    ("spectrum.quadrature_tol", Kind::Float, "0.001"),
    ("fig2.beta_points", Kind::Count, "99"),
    ("numerics.cfl", Kind::Float, "0.5"),
    ("numerics.dt_safety", Kind::Float, "0.8"),
    ("numerics.steps", Kind::Count, "500"),
    ("numerics.stride", Kind::Count, "100"),
    ("numerics.tolerance", Kind::Float, "1e-8"),
    ("numerics.max_iterations", Kind::Count, "50000"),
    ("numerics.seed", Kind::Count, "2024"),
    ("checks.energy_drift", Kind::Float, "0.001"),
    ("checks.shape_error", Kind::Float, "0.01"),
    ("checks.curvature_residual", Kind::Float, "0.0001"),
    ("checks.min_symmetry_slope", Kind::Float, "1.9"),
    ("checks.min_phase_ratio", Kind::Float, "10"),
    ("checks.chart_error", Kind::Float, "1e-6"),
    ("checks.pullback_error", Kind::Float, "1e-8"),
    ("checks.spectrum_deviation", Kind::Float, "0.01"),
    ("checks.peak_offset", Kind::Float, "0.001"),
    ("checks.fit_error", Kind::Float, "0.005"),
    ("sweep.command", Kind::Text, ""),
    ("sweep.key", Kind::Text, ""),
    ("sweep.values", Kind::Text, ""),
    ("output.dir", Kind::Text, ""),
    ("output.format", Kind::Word(FORMATS), "csv"),
];

fn lookup(key: &str) -> Option<(&'static str, Kind)> {
    SCHEMA
        .iter()
        .find(|(name, _, _)| *name == key)
        .map(|(name, kind, _)| (*name, *kind))
}

/// Closest schema key by edit distance, comparing against both the full
/// dotted name and its final segment so `betas` lands on `soliton.beta_s`.
fn nearest_key(key: &str) -> &'static str {
    let mut best = SCHEMA[0].0;
    let mut best_distance = usize::MAX;
    for (name, _, _) in SCHEMA {
        let tail = name.rsplit('.').next().unwrap_or(name);
        let d = strsim::levenshtein(key, name).min(strsim::levenshtein(key, tail));
        if d < best_distance {
            best_distance = d;
            best = name;
        }
    }
    best
}

fn canonicalize(
    key: &'static str,
    kind: Kind,
    raw: &str,
    line: usize,
) -> Result<String, ConfigError> {
    let bad = || ConfigError::BadValue {
        line,
        key,
        expected: kind.expected(),
        value: raw.to_string(),
    };
    match kind {
        Kind::Float => {
            let v: f64 = raw.parse().map_err(|_| bad())?;
            if !v.is_finite() {
                return Err(bad());
            }
            Ok(format!("{v}"))
        }
        Kind::Count => {
            let v: usize = raw.parse().map_err(|_| bad())?;
            Ok(format!("{v}"))
        }
        Kind::Word(options) => {
            if options.contains(&raw) {
                Ok(raw.to_string())
            } else {
                Err(bad())
            }
        }
        Kind::Text => Ok(raw.to_string()),
    }
}

/// A fully normalized config: every schema key present, values canonical.
#[derive(Debug, Clone)]
pub struct Config {
    values: BTreeMap<&'static str, String>,
}

impl Config {
    pub fn from_path(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::from_str(&text)
    }

    pub fn from_str(text: &str) -> Result<Self, ConfigError> {
        let mut values: BTreeMap<&'static str, String> = SCHEMA
            .iter()
            .map(|(name, _, default)| (*name, default.to_string()))
            .collect();
        let mut seen: Vec<&'static str> = Vec::new();
        for (index, raw_line) in text.lines().enumerate() {
            let line = index + 1;
            let stripped = match raw_line.find('#') {
                Some(pos) => &raw_line[..pos],
                None => raw_line,
            }
            .trim();
            if stripped.is_empty() {
                continue;
            }
            let (key_part, value_part) = stripped.split_once('=').ok_or(ConfigError::Syntax {
                line,
                text: stripped.to_string(),
            })?;
            let key = key_part.trim();
            let value = value_part.trim();
            let (name, kind) = lookup(key).ok_or_else(|| ConfigError::UnknownKey {
                line,
                key: key.to_string(),
                nearest: nearest_key(key),
            })?;
            if seen.contains(&name) {
                return Err(ConfigError::DuplicateKey {
                    line,
                    key: key.to_string(),
                });
            }
            seen.push(name);
            values.insert(name, canonicalize(name, kind, value, line)?);
        }
        if values["command"].is_empty() {
            return Err(ConfigError::MissingCommand);
        }
        let config = Self { values };
        config.validate()?;
        Ok(config)
    }

    /// Semantic checks beyond per-value syntax; all of these are config
    /// mistakes, not runtime failures, so they surface before any file is
    /// written.
    fn validate(&self) -> Result<(), ConfigError> {
        let domain = |key: &'static str, reason: String| ConfigError::BadDomain {
            key,
            value: self.values[key].clone(),
            reason,
        };
        let positive: &[&str] = &[
            "circuit.I_c_uA",
            "circuit.C_J_fF",
            "circuit.C_0_fF",
            "circuit.L_0_nH",
            "circuit.a_um",
            "curvature.spacing",
            "curvature.tau_extent",
            "spectrum.omega_min",
            "spectrum.quadrature_tol",
            "numerics.tolerance",
            "checks.energy_drift",
            "checks.shape_error",
            "checks.curvature_residual",
            "checks.chart_error",
            "checks.pullback_error",
            "checks.spectrum_deviation",
            "checks.peak_offset",
            "checks.fit_error",
        ];
        for key in positive {
            let (name, _) = lookup(key).expect("schema key");
            if self.float(name) <= 0.0 {
                return Err(domain(name, "must be positive".into()));
            }
        }
        if !(0.0..0.5).contains(&self.float("circuit.flux_ratio")) {
            return Err(domain(
                "circuit.flux_ratio",
                "frustration must lie in [0, 0.5)".into(),
            ));
        }
        if self.count("circuit.cells") < 3 {
            return Err(domain("circuit.cells", "need at least 3 nodes".into()));
        }
        let beta_s = self.float("soliton.beta_s");
        if !(beta_s > 0.0 && beta_s < 1.0) {
            return Err(domain("soliton.beta_s", "must lie in (0, 1)".into()));
        }
        if self.float("soliton.beta_lab").abs() >= 1.0 {
            return Err(domain(
                "soliton.beta_lab",
                "lab velocity must stay below the propagation speed".into(),
            ));
        }
        if self.count("grid.points") < 8 {
            return Err(domain("grid.points", "need at least 8 points".into()));
        }
        if self.float("grid.xi_max") <= self.float("grid.xi_min") {
            return Err(domain("grid.xi_max", "must exceed grid.xi_min".into()));
        }
        if self.float("curvature.xi_hi") <= self.float("curvature.xi_lo") {
            return Err(domain(
                "curvature.xi_hi",
                "must exceed curvature.xi_lo".into(),
            ));
        }
        if self.float("coords.rho_hi") <= self.float("coords.rho_lo") {
            return Err(domain("coords.rho_hi", "must exceed coords.rho_lo".into()));
        }
        if self.count("coords.points") < 9 {
            return Err(domain("coords.points", "need at least 9 points".into()));
        }
        if self.float("spectrum.omega_max") <= self.float("spectrum.omega_min") {
            return Err(domain(
                "spectrum.omega_max",
                "must exceed spectrum.omega_min".into(),
            ));
        }
        if self.count("spectrum.points") < 2 {
            return Err(domain("spectrum.points", "need at least 2 points".into()));
        }
        if self.count("fig2.beta_points") < 3 {
            return Err(domain("fig2.beta_points", "need at least 3 points".into()));
        }
        let cfl = self.float("numerics.cfl");
        if !(cfl > 0.0 && cfl <= 0.9) {
            return Err(domain("numerics.cfl", "must lie in (0, 0.9]".into()));
        }
        let safety = self.float("numerics.dt_safety");
        if !(safety > 0.0 && safety < 1.0) {
            return Err(domain("numerics.dt_safety", "must lie in (0, 1)".into()));
        }
        if self.count("numerics.steps") == 0 {
            return Err(domain("numerics.steps", "need at least one step".into()));
        }
        if self.count("numerics.stride") == 0 {
            return Err(domain("numerics.stride", "must be positive".into()));
        }
        if self.float("checks.min_symmetry_slope") < 0.0 {
            return Err(domain(
                "checks.min_symmetry_slope",
                "must be non-negative".into(),
            ));
        }
        if self.command() == "sweep" {
            for key in ["sweep.command", "sweep.key", "sweep.values"] {
                let (name, _) = lookup(key).expect("schema key");
                if self.values[name].is_empty() {
                    return Err(ConfigError::SweepIncomplete(name));
                }
            }
            let inner = self.text("sweep.command");
            if inner == "sweep" {
                return Err(ConfigError::NestedSweep);
            }
            if !COMMANDS.contains(&inner) {
                return Err(ConfigError::BadDomain {
                    key: "sweep.command",
                    value: inner.to_string(),
                    reason: format!("must be one of {}", COMMANDS.join(" | ")),
                });
            }
            let key = self.text("sweep.key").to_string();
            match lookup(&key) {
                Some((_, Kind::Float)) | Some((_, Kind::Count)) => {}
                _ => return Err(ConfigError::BadSweepKey(key)),
            }
            let values = self.sweep_values();
            if values.is_empty() {
                return Err(ConfigError::SweepIncomplete("sweep.values"));
            }
            for value in values {
                let (name, kind) = lookup(self.text("sweep.key")).expect("validated");
                canonicalize(name, kind, &value, 0).map_err(|_| ConfigError::BadDomain {
                    key: "sweep.values",
                    value: value.clone(),
                    reason: format!("`{value}` does not parse for `{name}`"),
                })?;
            }
        }
        Ok(())
    }

    pub fn command(&self) -> &str {
        &self.values["command"]
    }

    pub fn float(&self, key: &str) -> f64 {
        self.values[key].parse().expect("canonical float")
    }

    pub fn count(&self, key: &str) -> usize {
        self.values[key].parse().expect("canonical count")
    }

    pub fn text(&self, key: &str) -> &str {
        &self.values[key]
    }

    /// Comma-separated `sweep.values`, trimmed, empty entries dropped.
    pub fn sweep_values(&self) -> Vec<String> {
        self.text("sweep.values")
            .split(',')
            .map(str::trim)
            .filter(|v| !v.is_empty())
            .map(str::to_string)
            .collect()
    }

    /// Derive the per-run config of one sweep entry.
    pub fn sweep_child(&self, value: &str) -> Self {
        let mut child = self.clone();
        let inner = child.values["sweep.command"].clone();
        child.values.insert("command", inner);
        let (name, kind) = lookup(self.text("sweep.key")).expect("validated");
        let canonical = canonicalize(name, kind, value, 0).expect("validated");
        child.values.insert(name, canonical);
        for key in ["sweep.command", "sweep.key", "sweep.values", "output.dir"] {
            let (name, _) = lookup(key).expect("schema key");
            child.values.insert(name, String::new());
        }
        child
    }

    /// Normalized `key = value` lines, sorted, defaults included.
    pub fn echo(&self) -> String {
        let mut out = String::new();
        for (key, value) in &self.values {
            let _ = writeln!(out, "{key} = {value}");
        }
        out
    }
}
