//! Run configuration: JSON file values overlaid by command-line flags.

use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use convfem::{uniform_mesh, Forcing, Mesh, OscillatorProblem};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum SchemeChoice {
    Fem,
    Onestep,
    Both,
}

impl SchemeChoice {
    pub fn fem(self) -> bool {
        matches!(self, SchemeChoice::Fem | SchemeChoice::Both)
    }

    pub fn onestep(self) -> bool {
        matches!(self, SchemeChoice::Onestep | SchemeChoice::Both)
    }
}

/// `none` or `sin:F0,OMEGA`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum ForcingSpec {
    None,
    Sin { amplitude: f64, frequency: f64 },
}

impl FromStr for ForcingSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("none") {
            return Ok(ForcingSpec::None);
        }
        let body = s
            .strip_prefix("sin:")
            .ok_or_else(|| format!("forcing must be `none` or `sin:F0,OMEGA`, got `{s}`"))?;
        let (a, w) = body
            .split_once(',')
            .ok_or_else(|| format!("forcing `{s}` needs two numbers, `sin:F0,OMEGA`"))?;
        let parse = |x: &str| {
            x.trim()
                .parse::<f64>()
                .map_err(|_| format!("`{x}` is not a number in forcing `{s}`"))
        };
        let (amplitude, frequency) = (parse(a)?, parse(w)?);
        if !amplitude.is_finite() || !(frequency > 0.0 && frequency.is_finite()) {
            return Err(format!(
                "forcing `{s}` needs a finite amplitude and a positive frequency"
            ));
        }
        Ok(ForcingSpec::Sin {
            amplitude,
            frequency,
        })
    }
}

impl TryFrom<String> for ForcingSpec {
    type Error = String;

    fn try_from(s: String) -> Result<Self, String> {
        s.parse()
    }
}

impl From<ForcingSpec> for String {
    fn from(f: ForcingSpec) -> String {
        match f {
            ForcingSpec::None => "none".into(),
            ForcingSpec::Sin {
                amplitude,
                frequency,
            } => format!("sin:{amplitude},{frequency}"),
        }
    }
}

/// Every field optional; used both for the JSON file and for the flags.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PartialConfig {
    pub m: Option<f64>,
    pub k: Option<f64>,
    pub u0: Option<f64>,
    pub v0: Option<f64>,
    #[serde(alias = "t_end")]
    pub horizon: Option<f64>,
    pub tau: Option<f64>,
    pub n: Option<usize>,
    pub forcing: Option<ForcingSpec>,
    pub scheme: Option<SchemeChoice>,
    pub output: Option<PathBuf>,
    pub emit_exact: Option<bool>,
}

impl PartialConfig {
    pub fn from_json_file(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path).map_err(|source| CliError::ConfigRead {
            path: path.to_owned(),
            source,
        })?;
        serde_json::from_str(&text).map_err(|source| CliError::ConfigParse {
            path: path.to_owned(),
            source,
        })
    }

    /// Fields set in `self` win over those in `base`.
    ///
    /// `tau` and `n` are treated as one setting: if the flags name either,
    /// the file's choice of the other is dropped.
    pub fn over(self, base: PartialConfig) -> PartialConfig {
        let step_from_self = self.tau.is_some() || self.n.is_some();
        PartialConfig {
            m: self.m.or(base.m),
            k: self.k.or(base.k),
            u0: self.u0.or(base.u0),
            v0: self.v0.or(base.v0),
            horizon: self.horizon.or(base.horizon),
            tau: if step_from_self { self.tau } else { base.tau },
            n: if step_from_self { self.n } else { base.n },
            forcing: self.forcing.or(base.forcing),
            scheme: self.scheme.or(base.scheme),
            output: self.output.or(base.output),
            emit_exact: self.emit_exact.or(base.emit_exact),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Step {
    Tau(f64),
    Count(usize),
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub m: f64,
    pub k: f64,
    pub u0: f64,
    pub v0: f64,
    pub horizon: f64,
    pub step: Step,
    pub forcing: ForcingSpec,
    pub scheme: SchemeChoice,
    pub output: Option<PathBuf>,
    pub emit_exact: bool,
}

impl TryFrom<PartialConfig> for RunConfig {
    type Error = CliError;

    fn try_from(p: PartialConfig) -> Result<Self, CliError> {
        let need = |v: Option<f64>, name: &str| {
            v.ok_or_else(|| CliError::Config(format!("missing required value `{name}`")))
        };
        let step = match (p.tau, p.n) {
            (Some(tau), None) if tau > 0.0 && tau.is_finite() => Step::Tau(tau),
            (Some(tau), None) => {
                return Err(CliError::Config(format!("tau must be positive, got {tau}")))
            }
            (None, Some(n)) if n >= 1 => Step::Count(n),
            (None, Some(_)) => return Err(CliError::Config("n must be at least 1".into())),
            (Some(_), Some(_)) => {
                return Err(CliError::Config("give either tau or n, not both".into()))
            }
            (None, None) => return Err(CliError::Config("one of tau or n is required".into())),
        };
        let cfg = RunConfig {
            m: need(p.m, "m")?,
            k: need(p.k, "k")?,
            u0: p.u0.unwrap_or(0.0),
            v0: p.v0.unwrap_or(0.0),
            horizon: need(p.horizon, "t-end")?,
            step,
            forcing: p.forcing.unwrap_or(ForcingSpec::None),
            scheme: p.scheme.unwrap_or(SchemeChoice::Both),
            output: p.output,
            emit_exact: p.emit_exact.unwrap_or(false),
        };
        cfg.problem()?;
        cfg.element_count()?;
        Ok(cfg)
    }
}

impl RunConfig {
    pub fn problem(&self) -> Result<OscillatorProblem, CliError> {
        let p = OscillatorProblem::free(self.m, self.k, self.u0, self.v0, self.horizon)
            .map_err(|e| CliError::Config(e.to_string()))?;
        Ok(match self.forcing {
            ForcingSpec::None => p,
            ForcingSpec::Sin {
                amplitude,
                frequency,
            } => p.with_forcing(
                Forcing::sinusoid(amplitude, frequency)
                    .map_err(|e| CliError::Config(e.to_string()))?,
            ),
        })
    }

    /// Number of elements; a `tau` that does not divide the horizon is
    /// rejected.
    pub fn element_count(&self) -> Result<usize, CliError> {
        match self.step {
            Step::Count(n) => Ok(n),
            Step::Tau(tau) => {
                let ratio = self.horizon / tau;
                let n = ratio.round();
                if n < 1.0 || (ratio - n).abs() > 1e-9 * ratio.max(1.0) {
                    return Err(CliError::Config(format!(
                        "tau {tau} does not divide t-end {} into whole steps",
                        self.horizon
                    )));
                }
                Ok(n as usize)
            }
        }
    }

    pub fn mesh(&self) -> Result<Mesh, CliError> {
        Ok(uniform_mesh(self.horizon, self.element_count()?)?)
    }
}
