//! The coevolving growth model. Every tick one user arrives, activated
//! users create items and close triads through two-step random walks, and
//! each user's state function integrates the degree changes of its friends.

mod engine;
mod params;
mod walk;

pub use engine::{run, SimOutput, Simulator, TickReport, UserState};
pub use params::{ModelParams, ResetPolicy};
pub use walk::{is_admissible, two_step_walk, walk_once};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SimError {
    #[error("invalid model parameters: {0}")]
    InvalidParams(String),
    #[error("run complete: {users} users reached")]
    RunComplete { users: usize },
}
