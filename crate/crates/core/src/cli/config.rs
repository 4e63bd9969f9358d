use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::CliError;
use crate::graph::Time;
use crate::measures::SegmentPolicy;
use crate::sim::ModelParams;

/// Everything a command needs, loaded from a TOML file and then patched by
/// command-line flags. Unknown keys are rejected.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    /// Overrides `model.seed`.
    pub seed: Option<u64>,
    pub out_dir: Option<PathBuf>,
    /// Worker threads for analysis; simulation is always sequential.
    pub threads: Option<usize>,
    pub model: ModelParams,
    pub analysis: AnalysisConfig,
    pub input: InputConfig,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct AnalysisConfig {
    /// Measurement specs such as `pa:kf:kf`, `growth:ks` or `nn`.
    pub measures: Vec<String>,
    /// Window starts for attachment measurements; empty means evenly spaced
    /// over the second half of the log.
    pub t0: Vec<Time>,
    pub dt: Time,
    /// Number of window starts when `t0` is empty.
    pub windows: usize,
    /// Growth interval; defaults to the last tenth of the log.
    pub growth_t0: Option<Time>,
    pub growth_t1: Option<Time>,
    pub segment_policy: SegmentPolicy,
    /// Longest silence between consecutive event times inside one segment.
    pub max_gap: Time,
}

impl Default for AnalysisConfig {
    fn default() -> Self {
        AnalysisConfig {
            measures: Vec::new(),
            t0: Vec::new(),
            dt: 100,
            windows: 20,
            growth_t0: None,
            growth_t1: None,
            segment_policy: SegmentPolicy::Separate,
            max_gap: 30,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct InputConfig {
    /// Canonical log to analyze.
    pub log: Option<PathBuf>,
    /// Empirical social edge list (`src,dst,day`).
    pub social: Option<PathBuf>,
    /// Empirical favorite edge list (`user,item,day`).
    pub cross: Option<PathBuf>,
    pub directed: bool,
    pub shuffle_seed: Option<u64>,
}

impl Default for InputConfig {
    fn default() -> Self {
        InputConfig {
            log: None,
            social: None,
            cross: None,
            directed: true,
            shuffle_seed: None,
        }
    }
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| CliError::Invalid(format!("config: {e}")))
    }

    pub fn out_dir(&self) -> PathBuf {
        self.out_dir.clone().unwrap_or_else(|| PathBuf::from("."))
    }

    pub fn threads(&self) -> usize {
        self.threads.unwrap_or(1).max(1)
    }

    /// Model parameters with the top-level seed applied.
    pub fn model_params(&self) -> ModelParams {
        let mut p = self.model.clone();
        if let Some(seed) = self.seed {
            p.seed = seed;
        }
        p
    }

    pub fn validate(&self) -> Result<(), CliError> {
        self.model_params()
            .validate()
            .map_err(|e| CliError::Invalid(e.to_string()))?;
        let a = &self.analysis;
        if a.dt < 1 {
            return Err(CliError::Invalid("analysis.dt must be at least 1".into()));
        }
        if a.max_gap < 1 {
            return Err(CliError::Invalid(
                "analysis.max_gap must be at least 1".into(),
            ));
        }
        if let (Some(t0), Some(t1)) = (a.growth_t0, a.growth_t1) {
            if t0 >= t1 {
                return Err(CliError::Invalid("growth_t0 must precede growth_t1".into()));
            }
        }
        for m in &a.measures {
            m.parse::<super::analyze::Measure>()
                .map_err(CliError::Invalid)?;
        }
        Ok(())
    }
}
