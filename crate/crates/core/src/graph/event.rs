use std::fmt;

/// Tick index (model) or day number (empirical data).
pub type Time = i64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct UserId(pub u32);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ItemId(pub u32);

impl UserId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl ItemId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for UserId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "U{}", self.0)
    }
}

impl fmt::Display for ItemId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "I{}", self.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum NodeRef {
    User(UserId),
    Item(ItemId),
}

/// A single link between existing nodes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Link {
    /// `src -> dst`; direction only matters in directed mode.
    Social {
        src: UserId,
        dst: UserId,
    },
    Cross {
        user: UserId,
        item: ItemId,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum LinkClass {
    Social,
    Cross,
}

impl Link {
    pub fn class(&self) -> LinkClass {
        match self {
            Link::Social { .. } => LinkClass::Social,
            Link::Cross { .. } => LinkClass::Cross,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum EventKind {
    /// Creates `user`; when seeds are present the user immediately links to
    /// `seed_friend` and favorites `seed_item`.
    NewUser {
        user: UserId,
        seed_friend: Option<UserId>,
        seed_item: Option<ItemId>,
    },
    /// Creates `item`, which its owner favorites at once.
    NewItem {
        item: ItemId,
        owner: UserId,
    },
    SocialLink {
        src: UserId,
        dst: UserId,
    },
    CrossLink {
        user: UserId,
        item: ItemId,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Event {
    pub time: Time,
    pub kind: EventKind,
}

/// Why a link exists: created together with a node, or on its own.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum LinkOrigin {
    /// Seed links of a newly arrived user.
    Arrival,
    /// The owner's favorite-mark on a newly created item.
    Ownership,
    /// A standalone `SocialLink` / `CrossLink` event.
    Explicit,
}

/// Elementary graph mutation. Every event decomposes into one to three steps.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Step {
    AddUser(UserId),
    AddItem(ItemId),
    AddLink(Link, LinkOrigin),
}

impl Event {
    pub fn new(time: Time, kind: EventKind) -> Self {
        Event { time, kind }
    }

    /// Decomposes the event into steps, in application order.
    pub fn steps(&self) -> [Option<Step>; 3] {
        match self.kind {
            EventKind::NewUser {
                user,
                seed_friend,
                seed_item,
            } => [
                Some(Step::AddUser(user)),
                seed_friend.map(|f| {
                    Step::AddLink(Link::Social { src: user, dst: f }, LinkOrigin::Arrival)
                }),
                seed_item
                    .map(|i| Step::AddLink(Link::Cross { user, item: i }, LinkOrigin::Arrival)),
            ],
            EventKind::NewItem { item, owner } => [
                Some(Step::AddItem(item)),
                Some(Step::AddLink(
                    Link::Cross { user: owner, item },
                    LinkOrigin::Ownership,
                )),
                None,
            ],
            EventKind::SocialLink { src, dst } => [
                Some(Step::AddLink(
                    Link::Social { src, dst },
                    LinkOrigin::Explicit,
                )),
                None,
                None,
            ],
            EventKind::CrossLink { user, item } => [
                Some(Step::AddLink(
                    Link::Cross { user, item },
                    LinkOrigin::Explicit,
                )),
                None,
                None,
            ],
        }
    }
}
