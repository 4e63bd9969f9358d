//! Dual-component temporal graph: users, items, social links between users
//! and cross links from users to the items they favorite.

mod dual;
mod event;
mod log;
mod random;
mod triadic;

pub use dual::{DegreeKind, DualGraph, UserDegrees};
pub use event::{
    Event, EventKind, ItemId, Link, LinkClass, LinkOrigin, NodeRef, Step, Time, UserId,
};
pub use log::{EventLog, Replay};
pub use random::{random_log, RandomLogSpec};
pub use triadic::{Triadicity, WalkType};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("unknown user {0}")]
    UnknownUser(UserId),
    #[error("unknown item {0}")]
    UnknownItem(ItemId),
    #[error("duplicate link {0:?}")]
    DuplicateLink(Link),
    #[error("link already present: {0:?}")]
    LinkAlreadyPresent(Link),
    #[error("self-loop on {0}")]
    SelfLoop(UserId),
    #[error("user id {got} created out of order, expected {expected}")]
    UserIdOutOfOrder { got: UserId, expected: UserId },
    #[error("item id {got} created out of order, expected {expected}")]
    ItemIdOutOfOrder { got: ItemId, expected: ItemId },
    #[error("event time {got} precedes {previous}")]
    NonMonotoneTime { previous: Time, got: Time },
    #[error("time {t} outside log range {first:?}..={last:?}")]
    TimeOutOfRange {
        t: Time,
        first: Option<Time>,
        last: Option<Time>,
    },
}

#[cfg(test)]
pub(crate) mod fixtures;
