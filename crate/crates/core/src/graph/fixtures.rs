use super::{Event, EventKind, EventLog, ItemId, UserId};

/// User label `U<k>` (1-based) to id.
pub(crate) fn u(k: u32) -> UserId {
    UserId(k - 1)
}

/// Item label `I<k>` (1-based) to id.
pub(crate) fn i(k: u32) -> ItemId {
    ItemId(k - 1)
}

/// Ten users and five items arranged so that U2 -> U3 is friend-of-friend,
/// U8 -> I4 favorite-of-friend and U7 -> U5 fan-of-favorite; U4 has social
/// degree 5 and favorite degree 2, I4 has three fans.
pub(crate) fn growth_step_fixture() -> EventLog {
    let mut events = Vec::new();
    for k in 1..=10 {
        events.push(EventKind::NewUser {
            user: u(k),
            seed_friend: None,
            seed_item: None,
        });
    }
    for (item, owner) in [(1, 1), (2, 10), (3, 5), (4, 6), (5, 9)] {
        events.push(EventKind::NewItem {
            item: i(item),
            owner: u(owner),
        });
    }
    for (a, b) in [
        (1, 2),
        (2, 4),
        (4, 3),
        (4, 6),
        (4, 7),
        (4, 9),
        (6, 8),
        (5, 10),
        (3, 10),
    ] {
        events.push(EventKind::SocialLink {
            src: u(a),
            dst: u(b),
        });
    }
    for (user, item) in [(4, 1), (4, 4), (10, 4), (7, 3)] {
        events.push(EventKind::CrossLink {
            user: u(user),
            item: i(item),
        });
    }
    EventLog::from_events(false, events.into_iter().map(|k| Event::new(0, k))).unwrap()
}
