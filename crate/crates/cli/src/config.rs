//! Flat `key = value` run configuration.
//!
//! One assignment per line, `#` starts a comment, blank lines are ignored.
//! Keys are case-sensitive; every key may appear at most once.

use std::collections::BTreeMap;
use std::path::Path;

use num_complex::Complex64;
use oscdamp::{InitialState, ModeState, ModelParams};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("line {line}: expected `key = value`, found `{text}`")]
    Syntax { line: usize, text: String },

    #[error("line {line}: unknown key `{key}`")]
    UnknownKey { line: usize, key: String },

    #[error("line {line}: key `{key}` already set on line {first}")]
    DuplicateKey { line: usize, key: String, first: usize },

    #[error("line {line}: invalid value `{value}` for `{key}`: {reason}")]
    InvalidValue {
        line: usize,
        key: String,
        value: String,
        reason: String,
    },

    #[error("missing required key `{0}`")]
    Missing(&'static str),

    #[error("inconsistent configuration: {0}")]
    Invariant(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelChoice {
    Local,
    Nonlocal,
    Both,
}

impl ModelChoice {
    pub fn models(self) -> &'static [oscdamp::DampingModel] {
        use oscdamp::DampingModel::*;
        match self {
            ModelChoice::Local => &[Local],
            ModelChoice::Nonlocal => &[Nonlocal],
            ModelChoice::Both => &[Local, Nonlocal],
        }
    }
}

/// Quantities an evolve run can write, in column order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Output {
    NA,
    NB,
    LogNeg,
    Covariance,
    FidelityA,
    FidelityB,
}

impl Output {
    pub fn name(self) -> &'static str {
        match self {
            Output::NA => "n_a",
            Output::NB => "n_b",
            Output::LogNeg => "logneg",
            Output::Covariance => "covariance",
            Output::FidelityA => "fidelity_a",
            Output::FidelityB => "fidelity_b",
        }
    }

    fn parse(s: &str) -> Option<Self> {
        [
            Output::NA,
            Output::NB,
            Output::LogNeg,
            Output::Covariance,
            Output::FidelityA,
            Output::FidelityB,
        ]
        .into_iter()
        .find(|o| o.name() == s)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub params: ModelParams,
    pub initial: InitialState,
    pub model: ModelChoice,
    pub t_max: Option<f64>,
    pub dt_out: Option<f64>,
    /// Sorted, without duplicates.
    pub outputs: Vec<Output>,
    pub nbar_grid: Option<Vec<f64>>,
    /// Fock cutoff used by the hidden oracle path.
    pub oracle_cutoff: usize,
}

const KEYS: &[&str] = &[
    "omega",
    "kappa",
    "lambda",
    "gamma",
    "gamma_a",
    "gamma_b",
    "nbar",
    "nbar_a",
    "nbar_b",
    "model",
    "t_max",
    "dt_out",
    "outputs",
    "nbar_grid",
    "oracle_cutoff",
    "a.thermal",
    "a.squeeze_r",
    "a.squeeze_phase",
    "a.alpha_re",
    "a.alpha_im",
    "b.thermal",
    "b.squeeze_r",
    "b.squeeze_phase",
    "b.alpha_re",
    "b.alpha_im",
];

struct Entries {
    map: BTreeMap<String, (usize, String)>,
}

impl Entries {
    fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut map: BTreeMap<String, (usize, String)> = BTreeMap::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let Some((key, value)) = content.split_once('=') else {
                return Err(ConfigError::Syntax {
                    line,
                    text: content.to_string(),
                });
            };
            let (key, value) = (key.trim(), value.trim());
            if key.is_empty() || value.is_empty() {
                return Err(ConfigError::Syntax {
                    line,
                    text: content.to_string(),
                });
            }
            if !KEYS.contains(&key) {
                return Err(ConfigError::UnknownKey {
                    line,
                    key: key.to_string(),
                });
            }
            if let Some(&(first, _)) = map.get(key) {
                return Err(ConfigError::DuplicateKey {
                    line,
                    key: key.to_string(),
                    first,
                });
            }
            map.insert(key.to_string(), (line, value.to_string()));
        }
        Ok(Self { map })
    }

    fn invalid(&self, key: &str, reason: impl Into<String>) -> ConfigError {
        let (line, value) = self.map[key].clone();
        ConfigError::InvalidValue {
            line,
            key: key.to_string(),
            value,
            reason: reason.into(),
        }
    }

    fn float(&self, key: &str) -> Result<Option<f64>, ConfigError> {
        let Some((_, value)) = self.map.get(key) else {
            return Ok(None);
        };
        match value.parse::<f64>() {
            Ok(x) if x.is_finite() => Ok(Some(x)),
            Ok(_) => Err(self.invalid(key, "must be finite")),
            Err(e) => Err(self.invalid(key, e.to_string())),
        }
    }

    /// `key` if present, else `shared`, else `default`.
    fn float_or_shared(&self, key: &str, shared: &str, default: f64) -> Result<f64, ConfigError> {
        if self.map.contains_key(key) && self.map.contains_key(shared) {
            let (line, _) = self.map[key];
            return Err(ConfigError::Invariant(format!(
                "`{key}` (line {line}) conflicts with `{shared}` (line {})",
                self.map[shared].0
            )));
        }
        Ok(self.float(key)?.or(self.float(shared)?).unwrap_or(default))
    }

    fn mode(&self, prefix: &str) -> Result<ModeState, ConfigError> {
        let get = |field: &str| self.float(&format!("{prefix}.{field}")).map(|x| x.unwrap_or(0.0));
        Ok(ModeState {
            thermal: get("thermal")?,
            squeeze_r: get("squeeze_r")?,
            squeeze_phase: get("squeeze_phase")?,
            displacement: Complex64::new(get("alpha_re")?, get("alpha_im")?),
        })
    }

    fn grid(&self) -> Result<Option<Vec<f64>>, ConfigError> {
        let Some((_, value)) = self.map.get("nbar_grid") else {
            return Ok(None);
        };
        let number = |s: &str| {
            s.trim()
                .parse::<f64>()
                .ok()
                .filter(|x| x.is_finite())
                .ok_or_else(|| self.invalid("nbar_grid", format!("`{}` is not a finite number", s.trim())))
        };
        let grid = if value.contains(':') {
            // start:step:stop, inclusive of stop up to rounding.
            let parts: Vec<&str> = value.split(':').collect();
            let [start, step, stop] = parts[..] else {
                return Err(self.invalid("nbar_grid", "range form is start:step:stop"));
            };
            let (start, step, stop) = (number(start)?, number(step)?, number(stop)?);
            if !(step > 0.0) || stop < start {
                return Err(self.invalid("nbar_grid", "range needs step > 0 and stop >= start"));
            }
            let n = ((stop - start) / step + 1e-9).floor() as usize;
            (0..=n).map(|k| start + k as f64 * step).collect()
        } else {
            value.split(',').map(number).collect::<Result<Vec<_>, _>>()?
        };
        if grid.is_empty() {
            return Err(self.invalid("nbar_grid", "grid is empty"));
        }
        if grid.iter().any(|&x| x < 0.0) {
            return Err(self.invalid("nbar_grid", "occupancies must be >= 0"));
        }
        if grid.windows(2).any(|w| w[1] < w[0]) {
            return Err(self.invalid("nbar_grid", "grid must be nondecreasing"));
        }
        Ok(Some(grid))
    }
}

impl RunConfig {
    pub fn from_path(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.display().to_string(),
            source,
        })?;
        text.parse()
    }
}

impl std::str::FromStr for RunConfig {
    type Err = ConfigError;

    fn from_str(text: &str) -> Result<Self, ConfigError> {
        let e = Entries::parse(text)?;
        let params = ModelParams {
            omega: e.float("omega")?.unwrap_or(1.0),
            kappa: e.float("kappa")?.unwrap_or(0.0),
            lambda: e.float("lambda")?.unwrap_or(0.0),
            gamma_a: e.float_or_shared("gamma_a", "gamma", 0.0)?,
            gamma_b: e.float_or_shared("gamma_b", "gamma", 0.0)?,
            nbar_a: e.float_or_shared("nbar_a", "nbar", 0.0)?,
            nbar_b: e.float_or_shared("nbar_b", "nbar", 0.0)?,
        };

        let model = match e.map.get("model").map(|(_, v)| v.as_str()) {
            None | Some("both") => ModelChoice::Both,
            Some("local") => ModelChoice::Local,
            Some("nonlocal") => ModelChoice::Nonlocal,
            Some(_) => return Err(e.invalid("model", "expected local, nonlocal or both")),
        };

        let mut outputs = match e.map.get("outputs") {
            None => vec![Output::NA, Output::NB, Output::LogNeg],
            Some((_, v)) => v
                .split(',')
                .map(|s| {
                    Output::parse(s.trim())
                        .ok_or_else(|| e.invalid("outputs", format!("unknown output `{}`", s.trim())))
                })
                .collect::<Result<Vec<_>, _>>()?,
        };
        outputs.sort();
        outputs.dedup();

        let positive = |key: &str| -> Result<Option<f64>, ConfigError> {
            match e.float(key)? {
                Some(x) if !(x > 0.0) => Err(e.invalid(key, "must be > 0")),
                other => Ok(other),
            }
        };
        let t_max = positive("t_max")?;
        let dt_out = positive("dt_out")?;

        let oracle_cutoff = match e.map.get("oracle_cutoff") {
            None => oscdamp::fock_oracle::DEFAULT_CUTOFF,
            Some((_, v)) => v
                .parse::<usize>()
                .ok()
                .filter(|&c| c >= 2)
                .ok_or_else(|| e.invalid("oracle_cutoff", "must be an integer >= 2"))?,
        };

        let initial = InitialState {
            a: e.mode("a")?,
            b: e.mode("b")?,
        };
        let cfg = RunConfig {
            params,
            initial,
            model,
            t_max,
            dt_out,
            outputs,
            nbar_grid: e.grid()?,
            oracle_cutoff,
        };
        cfg.check_invariants()?;
        Ok(cfg)
    }
}

impl RunConfig {
    fn check_invariants(&self) -> Result<(), ConfigError> {
        let wants_fidelity = self
            .outputs
            .iter()
            .any(|o| matches!(o, Output::FidelityA | Output::FidelityB));
        if wants_fidelity && self.model != ModelChoice::Both {
            return Err(ConfigError::Invariant(
                "fidelity outputs compare the two models and need model = both".into(),
            ));
        }
        if wants_fidelity && self.initial.has_displacement() {
            return Err(ConfigError::Invariant(
                "fidelity outputs need zero-mean initial states (alpha = 0)".into(),
            ));
        }
        Ok(())
    }

    /// Output time grid bounds, required by `evolve`.
    pub fn time_grid(&self) -> Result<(f64, f64), ConfigError> {
        Ok((
            self.t_max.ok_or(ConfigError::Missing("t_max"))?,
            self.dt_out.ok_or(ConfigError::Missing("dt_out"))?,
        ))
    }
}
