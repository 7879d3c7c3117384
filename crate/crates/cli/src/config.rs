// SPDX-License-Identifier: Apache-2.0

//! Experiment configuration files.

use crate::error::{CliError, CliResult};
use serde::{Deserialize, Serialize};
use slenderflow_core::sbt::LocalTerm;
use slenderflow_core::{Builtin, Forcing};
use std::path::{Path, PathBuf};

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Discretization {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ns: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ntheta: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub qn: Option<Vec<usize>>,
}

impl Discretization {
    /// The configured list, or `default` when the key is absent. An explicit
    /// empty list stays empty.
    pub fn list(values: &Option<Vec<usize>>, default: &[usize]) -> Vec<usize> {
        values.clone().unwrap_or_else(|| default.to_vec())
    }
}

/// Near-intersection family: either radius = ratio · gap for every H, or a
/// fixed centerline (one H) with the `epsilon` list.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HairtieFamily {
    pub h: Vec<f64>,
    #[serde(default)]
    pub ratio: Option<f64>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CompareMode {
    /// Solver centerline velocity against the slender-body profile.
    #[default]
    Solver,
    /// Slender-body profile against itself.
    SelfCheck,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Comparison {
    #[serde(default)]
    pub mode: CompareMode,
    #[serde(default)]
    pub local_term: LocalTerm,
    #[serde(default = "default_grid")]
    pub grid: usize,
    /// Accepted range for every fitted rate; a rate outside it fails the run.
    #[serde(default)]
    pub expected_slope: Option<[f64; 2]>,
}

fn default_grid() -> usize {
    500
}

impl Default for Comparison {
    fn default() -> Self {
        Self {
            mode: CompareMode::Solver,
            local_term: LocalTerm::default(),
            grid: default_grid(),
            expected_slope: None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SourcePoint {
    pub s: f64,
    pub theta: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    /// Stem of every output file.
    pub experiment: String,
    #[serde(default)]
    pub curve: Option<String>,
    /// Rescale to unit length and constant speed before solving.
    #[serde(default)]
    pub reparameterize: Option<bool>,
    #[serde(default)]
    pub epsilon: Vec<f64>,
    #[serde(default)]
    pub inverse_epsilon: Vec<f64>,
    #[serde(default)]
    pub discretization: Discretization,
    #[serde(default)]
    pub forcing: Option<Forcing>,
    #[serde(default)]
    pub hairtie: Option<HairtieFamily>,
    #[serde(default)]
    pub comparison: Comparison,
    #[serde(default)]
    pub source: Option<SourcePoint>,
    #[serde(default)]
    pub svg: bool,
    #[serde(default)]
    pub output_dir: Option<PathBuf>,
    /// Reserved; every command is deterministic.
    #[serde(default)]
    pub seed: Option<u64>,
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> CliResult<Self> {
        let cfg: Self = serde_json::from_str(text).map_err(|e| {
            CliError::Config(format!("line {}, column {}: {e}", e.line(), e.column()))
        })?;
        cfg.validate_common()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text).map_err(|e| match e {
            CliError::Config(msg) => CliError::Config(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    fn validate_common(&self) -> CliResult<()> {
        let stem_ok = !self.experiment.is_empty()
            && self
                .experiment
                .chars()
                .all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-' || c == '.');
        if !stem_ok {
            return Err(field("experiment", "must be a non-empty file stem of [A-Za-z0-9_.-]"));
        }
        if let Some(curve) = &self.curve {
            curve
                .parse::<Builtin>()
                .map_err(|e| field("curve", &e.to_string()))?;
        }
        for (i, &e) in self.epsilon.iter().enumerate() {
            if !(e > 0.0 && e.is_finite()) {
                return Err(field(&format!("epsilon[{i}]"), &format!("must be positive, got {e}")));
            }
        }
        for (i, &e) in self.inverse_epsilon.iter().enumerate() {
            if !(e > 0.0 && e.is_finite()) {
                return Err(field(&format!("inverse_epsilon[{i}]"), &format!("must be positive, got {e}")));
            }
        }
        let d = &self.discretization;
        for (name, list) in [("ns", &d.ns), ("ntheta", &d.ntheta)] {
            for (i, &n) in list.iter().flatten().enumerate() {
                if n < 3 || n % 2 == 0 {
                    return Err(field(
                        &format!("discretization.{name}[{i}]"),
                        &format!("must be odd and at least 3, got {n}"),
                    ));
                }
            }
        }
        for (i, &q) in d.qn.iter().flatten().enumerate() {
            if q < 2 {
                return Err(field(&format!("discretization.qn[{i}]"), &format!("must be at least 2, got {q}")));
            }
        }
        if let Some(f) = &self.forcing {
            f.validate().map_err(|e| field("forcing", &e.to_string()))?;
        }
        if let Some(h) = &self.hairtie {
            for (i, &v) in h.h.iter().enumerate() {
                Builtin::Hairtie { h: v }
                    .validate()
                    .map_err(|e| field(&format!("hairtie.h[{i}]"), &e.to_string()))?;
            }
            if let Some(r) = h.ratio {
                if !(r > 0.0 && r.is_finite()) {
                    return Err(field("hairtie.ratio", &format!("must be positive, got {r}")));
                }
            }
        }
        if self.comparison.grid < 2 {
            return Err(field("comparison.grid", "must be at least 2"));
        }
        if let Some([lo, hi]) = self.comparison.expected_slope {
            if !(lo <= hi) {
                return Err(field("comparison.expected_slope", "lower bound exceeds upper bound"));
            }
        }
        Ok(())
    }

    pub fn builtin(&self) -> CliResult<Option<Builtin>> {
        self.curve
            .as_deref()
            .map(|c| c.parse::<Builtin>().map_err(|e| field("curve", &e.to_string())))
            .transpose()
    }

    /// The single value of a discretization list, or `default` if absent.
    pub fn single(&self, name: &str, list: &Option<Vec<usize>>, default: usize) -> CliResult<usize> {
        match list.as_deref() {
            None => Ok(default),
            Some([n]) => Ok(*n),
            Some(_) => Err(field(&format!("discretization.{name}"), "this command takes exactly one value")),
        }
    }

    /// Replaces every q_n with `qn`.
    pub fn override_qn(&mut self, qn: usize) -> CliResult<()> {
        if qn < 2 {
            return Err(CliError::Config(format!("--qn must be at least 2, got {qn}")));
        }
        self.discretization.qn = Some(vec![qn]);
        Ok(())
    }
}

pub(crate) fn field(path: &str, msg: &str) -> CliError {
    CliError::Config(format!("field `{path}`: {msg}"))
}
