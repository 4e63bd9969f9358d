use serde::{Deserialize, Serialize};

use super::SimError;

/// Which users have their state function cleared at the next tick.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ResetPolicy {
    /// Activated users and users that created an item or started a link.
    #[default]
    Initiators,
    /// As `Initiators`, plus users on the receiving end of a new social link.
    IncludeRecipients,
}

/// Parameters of the coevolving growth model.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ModelParams {
    /// Items created per tick.
    pub m: usize,
    /// Link attempts per tick.
    pub n: usize,
    /// Coupling to the neighbors' degree changes.
    pub mu: f64,
    /// Per-tick increment of every state function.
    pub phi0: f64,
    pub theta_min: f64,
    pub theta_max: f64,
    /// Initial users.
    pub n0: usize,
    /// Initial items.
    pub m0: usize,
    /// The run stops once this many users exist.
    pub n_final: usize,
    pub seed: u64,
    /// Independent walks tried before a link attempt is given up.
    pub walk_retries: usize,
    pub reset_policy: ResetPolicy,
}

impl Default for ModelParams {
    fn default() -> Self {
        ModelParams {
            m: 10,
            n: 100,
            mu: 0.5,
            phi0: 1.0,
            theta_min: 40.0,
            theta_max: 4000.0,
            n0: 10,
            m0: 10,
            n_final: 100_000,
            seed: 1,
            walk_retries: 10,
            reset_policy: ResetPolicy::Initiators,
        }
    }
}

impl ModelParams {
    pub fn validate(&self) -> Result<(), SimError> {
        let bad = |what: &str| Err(SimError::InvalidParams(what.to_owned()));
        if !(self.mu >= 0.0 && self.mu.is_finite()) {
            return bad("mu must be finite and >= 0");
        }
        if !(self.phi0 >= 0.0 && self.phi0.is_finite()) {
            return bad("phi0 must be finite and >= 0");
        }
        if !(self.theta_min.is_finite() && self.theta_max.is_finite()) {
            return bad("theta range must be finite");
        }
        if self.theta_min > self.theta_max {
            return bad("theta_min must not exceed theta_max");
        }
        if self.n0 < 2 {
            return bad("n0 must be at least 2");
        }
        if self.m0 < 1 {
            return bad("m0 must be at least 1");
        }
        if self.n_final <= self.n0 {
            return bad("n_final must exceed n0");
        }
        if self.n_final > u32::MAX as usize {
            return bad("n_final exceeds the id space");
        }
        Ok(())
    }

    /// Same parameters with every threshold fixed to the midpoint of the range.
    pub fn with_constant_theta(&self) -> Self {
        let mid = 0.5 * (self.theta_min + self.theta_max);
        ModelParams {
            theta_min: mid,
            theta_max: mid,
            ..self.clone()
        }
    }
}
