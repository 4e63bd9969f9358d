//! File formats. Every format starts with a `#v1` token so readers can
//! reject files written by incompatible versions.
//!
//! The canonical log is one event per line, `t,kind,arg1,arg2`:
//!
//! | kind | arg1 | arg2 |
//! |------|------|------|
//! | `U`  | seed friend or `-1` | seed item or `-1` |
//! | `I`  | item | owner |
//! | `S`  | source user | target user |
//! | `C`  | user | item |
//!
//! A `U` line creates the next user id; `I` lines name their item id, which
//! must also be the next one.

mod canonical;
mod empirical;
mod export;

pub use canonical::{load_log, parse_log, read_log, save_log, serialize_log, write_log};
pub use empirical::{ingest_empirical, ingest_empirical_from, IdMap, IngestOptions};
pub use export::{write_curve_csv, write_snapshot_csv, write_summary_json, write_tick_csv};

use serde::Serialize;
use thiserror::Error;

use crate::graph::{GraphError, Time};

/// Version token opening every file this module writes.
pub const FORMAT_VERSION: &str = "#v1";

#[derive(Debug, Error)]
pub enum IoError {
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("line {line}: {reason}")]
    MalformedLine { line: usize, reason: String },
    #[error("line {line}: time {got} precedes {previous}")]
    NonMonotoneTime {
        line: usize,
        previous: Time,
        got: Time,
    },
    #[error("missing or unsupported header, expected a line starting with `{FORMAT_VERSION}`")]
    BadHeader,
    #[error("no events left after filtering")]
    EmptyAfterFilter,
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl IoError {
    pub(crate) fn malformed(line: usize, reason: impl Into<String>) -> Self {
        IoError::MalformedLine {
            line,
            reason: reason.into(),
        }
    }
}

/// What a reader did with its input lines.
///
/// Every counted input line is either accepted or dropped:
/// `accepted + dropped() == total_lines`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct IngestReport {
    /// Non-blank, non-comment data lines read.
    pub total_lines: usize,
    pub accepted: usize,
    /// Lines repeating a link or node that already exists.
    pub duplicates: usize,
    /// Social lines linking a user to itself.
    pub self_loops: usize,
    /// Lines removed because an endpoint failed the user filter.
    pub filtered: usize,
    pub filtered_users: usize,
    /// Accepted lines that referenced a node never created before them.
    pub dangling: usize,
    pub synthesized_users: usize,
    pub synthesized_items: usize,
    pub first_time: Option<Time>,
    pub last_time: Option<Time>,
}

impl IngestReport {
    pub fn dropped(&self) -> usize {
        self.duplicates + self.self_loops + self.filtered
    }

    pub(crate) fn saw_time(&mut self, t: Time) {
        self.first_time = Some(self.first_time.map_or(t, |f| f.min(t)));
        self.last_time = Some(self.last_time.map_or(t, |l| l.max(t)));
    }
}
