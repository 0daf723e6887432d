//! Flat `key = value` run configuration.
//!
//! Blank lines and `#` comments are ignored. Every key is optional, unknown or
//! repeated keys are errors. Keys:
//!
//! | key          | value                                   | default               |
//! |--------------|-----------------------------------------|-----------------------|
//! | `gamma`      | slope angle in radians                  | π/6                   |
//! | `case`       | `C1` … `C5`                             | `C1`                  |
//! | `beta`       | regime exponent                         | 3                     |
//! | `nu0`        | viscosity constant                      | 1                     |
//! | `kappa0`     | diffusivity constant                    | 1                     |
//! | `eps`        | comma list, strictly decreasing, in (0, 0.5) | 8 points 1e-2 … 1e-3 |
//! | `census_eps` | comma list for the root census          | 8 points 1e-1 … 1e-2  |
//! | `k0`         | carrier wavenumber along the slope (only 1) | 1                 |
//! | `envelope`   | `bump`                                  | `bump`                |
//! | `nodes`      | Gauss–Legendre nodes per lobe axis      | 48                    |
//! | `k_nodes`    | `k` nodes per ε in `roots` (1: centre)  | 1                     |
//! | `x_span`     | half-width of the x grid in units of ε⁻² | 4                    |
//! | `nx`, `ny`   | grid points in x and y                  | 41, 24                |
//! | `t`          | time                                    | 0                     |
//! | `out`        | output directory                        | `.`                   |
//! | `threads`    | worker threads, 0 for all cores         | 0                     |
//! | `matrix`     | `C1:3,5; C2:7,9` (for `verify`)         | default matrix        |

use std::collections::HashSet;
use std::fmt;
use std::path::PathBuf;

use critrefl_core::diagnostics::{asymptotic_sweep, census_sweep, default_matrix, StudyConfig};
use critrefl_core::packets::{Envelope, DEFAULT_NODES};
use critrefl_core::setup::{DEFAULT_GAMMA, DEFAULT_K0, EPS_MAX};
use critrefl_core::{RegimeCase, RegimeParams};

#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError {
    pub line: Option<usize>,
    pub msg: String,
}

impl ConfigError {
    fn at(line: usize, msg: impl Into<String>) -> Self {
        Self { line: Some(line), msg: msg.into() }
    }

    fn global(msg: impl Into<String>) -> Self {
        Self { line: None, msg: msg.into() }
    }
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(l) => write!(f, "line {l}: {}", self.msg),
            None => f.write_str(&self.msg),
        }
    }
}

impl std::error::Error for ConfigError {}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub gamma: f64,
    pub case: RegimeCase,
    pub beta: f64,
    pub nu0: f64,
    pub kappa0: f64,
    pub eps: Vec<f64>,
    pub census_eps: Vec<f64>,
    pub k0: f64,
    pub envelope: Envelope,
    pub nodes: usize,
    pub k_nodes: usize,
    pub x_span: f64,
    pub nx: usize,
    pub ny: usize,
    pub t: f64,
    pub out: PathBuf,
    pub threads: usize,
    pub matrix: Vec<(RegimeCase, f64)>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            gamma: DEFAULT_GAMMA,
            case: RegimeCase::Case1,
            beta: 3.0,
            nu0: 1.0,
            kappa0: 1.0,
            eps: asymptotic_sweep(),
            census_eps: census_sweep(),
            k0: DEFAULT_K0,
            envelope: Envelope::Bump,
            nodes: DEFAULT_NODES,
            k_nodes: 1,
            x_span: 4.0,
            nx: 41,
            ny: 24,
            t: 0.0,
            out: PathBuf::from("."),
            threads: 0,
            matrix: default_matrix(),
        }
    }
}

fn number<T: std::str::FromStr>(line: usize, key: &str, v: &str) -> Result<T, ConfigError> {
    v.parse().map_err(|_| ConfigError::at(line, format!("`{key}`: cannot parse `{v}`")))
}

/// Comma-separated floats.
pub fn parse_list(v: &str) -> Result<Vec<f64>, String> {
    v.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse::<f64>().map_err(|_| format!("cannot parse `{s}`")))
        .collect()
}

fn parse_matrix(v: &str) -> Result<Vec<(RegimeCase, f64)>, String> {
    let mut out = Vec::new();
    for group in v.split(';').map(str::trim).filter(|s| !s.is_empty()) {
        let (case, betas) = group.split_once(':').ok_or_else(|| format!("`{group}` is not `case:β,β…`"))?;
        let case: RegimeCase = case.parse().map_err(|e| format!("{e}"))?;
        for beta in parse_list(betas)? {
            out.push((case, beta));
        }
    }
    if out.is_empty() {
        return Err("empty matrix".into());
    }
    Ok(out)
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut cfg = RunConfig::default();
        let mut seen = HashSet::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let body = raw.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            let (key, value) = body
                .split_once('=')
                .ok_or_else(|| ConfigError::at(line, format!("expected `key = value`, got `{body}`")))?;
            let (key, v) = (key.trim(), value.trim());
            if !seen.insert(key.to_string()) {
                return Err(ConfigError::at(line, format!("`{key}` given twice")));
            }
            let list = |v: &str| parse_list(v).map_err(|e| ConfigError::at(line, format!("`{key}`: {e}")));
            match key {
                "gamma" => cfg.gamma = number(line, key, v)?,
                "case" => cfg.case = v.parse().map_err(|e| ConfigError::at(line, format!("`case`: {e}")))?,
                "beta" => cfg.beta = number(line, key, v)?,
                "nu0" => cfg.nu0 = number(line, key, v)?,
                "kappa0" => cfg.kappa0 = number(line, key, v)?,
                "eps" => cfg.eps = list(v)?,
                "census_eps" => cfg.census_eps = list(v)?,
                "k0" => cfg.k0 = number(line, key, v)?,
                "envelope" => {
                    cfg.envelope = v.parse().map_err(|e| ConfigError::at(line, format!("`envelope`: {e}")))?
                }
                "nodes" => cfg.nodes = number(line, key, v)?,
                "k_nodes" => cfg.k_nodes = number(line, key, v)?,
                "x_span" => cfg.x_span = number(line, key, v)?,
                "nx" => cfg.nx = number(line, key, v)?,
                "ny" => cfg.ny = number(line, key, v)?,
                "t" => cfg.t = number(line, key, v)?,
                "out" => cfg.out = PathBuf::from(v),
                "threads" => cfg.threads = number(line, key, v)?,
                "matrix" => {
                    cfg.matrix = parse_matrix(v).map_err(|e| ConfigError::at(line, format!("`matrix`: {e}")))?
                }
                other => return Err(ConfigError::at(line, format!("unknown key `{other}`"))),
            }
        }
        Ok(cfg)
    }

    /// Checks the fields against each other. Run after command-line overrides.
    pub fn validate(&self) -> Result<(), ConfigError> {
        check_eps("eps", &self.eps)?;
        check_eps("census_eps", &self.census_eps)?;
        self.params().map_err(|e| ConfigError::global(e.to_string()))?;
        for &(case, beta) in &self.matrix {
            RegimeParams::new(self.gamma, case, beta, self.nu0, self.kappa0)
                .map_err(|e| ConfigError::global(format!("matrix entry {case}:{beta}: {e}")))?;
        }
        if self.k0 != DEFAULT_K0 {
            return Err(ConfigError::global(format!(
                "k0 = {} unsupported, the packet is centred at k0 = {DEFAULT_K0}",
                self.k0
            )));
        }
        if self.nodes == 0 || self.k_nodes == 0 {
            return Err(ConfigError::global("nodes and k_nodes must be positive"));
        }
        if self.nx < 2 || self.ny < 2 {
            return Err(ConfigError::global(format!("grid {}×{} needs at least 2 points per axis", self.nx, self.ny)));
        }
        if !(self.x_span > 0.0 && self.x_span.is_finite()) {
            return Err(ConfigError::global(format!("x_span = {} must be positive", self.x_span)));
        }
        if !(self.t >= 0.0 && self.t.is_finite()) {
            return Err(ConfigError::global(format!("t = {} must be non-negative", self.t)));
        }
        Ok(())
    }

    pub fn params(&self) -> critrefl_core::Result<RegimeParams> {
        RegimeParams::new(self.gamma, self.case, self.beta, self.nu0, self.kappa0)
    }

    pub fn study(&self) -> StudyConfig {
        StudyConfig {
            eps: self.eps.clone(),
            census_eps: self.census_eps.clone(),
            nodes: self.nodes,
            t: self.t,
            x_span: self.x_span,
            nx: self.nx,
            ny: self.ny,
        }
    }
}

fn check_eps(key: &str, eps: &[f64]) -> Result<(), ConfigError> {
    if eps.is_empty() {
        return Err(ConfigError::global(format!("`{key}` is empty")));
    }
    if let Some(e) = eps.iter().find(|&&e| !(e > 0.0 && e < EPS_MAX)) {
        return Err(ConfigError::global(format!("`{key}`: {e} outside (0, {EPS_MAX})")));
    }
    if eps.windows(2).any(|w| w[1] >= w[0]) {
        return Err(ConfigError::global(format!("`{key}` must be strictly decreasing")));
    }
    Ok(())
}
