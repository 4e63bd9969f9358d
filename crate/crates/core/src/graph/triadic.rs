use std::collections::BTreeSet;

use super::dual::DualGraph;
use super::event::{ItemId, Link, NodeRef, UserId};
use super::GraphError;

/// The three two-step paths that end at a second neighbor.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum WalkType {
    /// user -> friend -> friend's friend
    FriendOfFriend,
    /// user -> friend -> friend's favorite item
    FavoriteOfFriend,
    /// user -> favorite item -> another fan of that item
    FanOfFavorite,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Triadicity {
    Triadic,
    NonTriadic,
}

impl Triadicity {
    pub fn is_triadic(self) -> bool {
        self == Triadicity::Triadic
    }
}

/// True when the two ascending lists share an element.
pub(crate) fn sorted_intersects(a: &[u32], b: &[u32]) -> bool {
    let (short, long) = if a.len() <= b.len() { (a, b) } else { (b, a) };
    if short.is_empty() {
        return false;
    }
    if short.len() * 8 < long.len() {
        return short.iter().any(|x| long.binary_search(x).is_ok());
    }
    let (mut i, mut j) = (0, 0);
    while i < short.len() && j < long.len() {
        match short[i].cmp(&long[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => return true,
        }
    }
    false
}

impl DualGraph {
    /// Every node two steps away from `user` that `user` is not already
    /// linked to, tagged with the path that reaches it. Direction of social
    /// links is ignored.
    pub fn second_neighbors(
        &self,
        user: UserId,
    ) -> Result<BTreeSet<(NodeRef, WalkType)>, GraphError> {
        self.check_user(user)?;
        let mut out = BTreeSet::new();
        let friends = self.social_neighbors(user);
        let favorites = self.favorites(user);
        for &f in friends {
            let f = UserId(f);
            for &w in self.social_neighbors(f) {
                if w != user.0 && friends.binary_search(&w).is_err() {
                    out.insert((NodeRef::User(UserId(w)), WalkType::FriendOfFriend));
                }
            }
            for &item in self.favorites(f) {
                if favorites.binary_search(&item).is_err() {
                    out.insert((NodeRef::Item(ItemId(item)), WalkType::FavoriteOfFriend));
                }
            }
        }
        for &item in favorites {
            for &w in self.fans(ItemId(item)) {
                if w != user.0 && friends.binary_search(&w).is_err() {
                    out.insert((NodeRef::User(UserId(w)), WalkType::FanOfFavorite));
                }
            }
        }
        Ok(out)
    }

    /// Classifies a link that is not yet in the graph.
    pub fn classify_link(&self, link: &Link) -> Result<Triadicity, GraphError> {
        self.validate_link(link).map_err(|e| match e {
            GraphError::DuplicateLink(l) => GraphError::LinkAlreadyPresent(l),
            other => other,
        })?;
        Ok(if self.closes_triangle(link) {
            Triadicity::Triadic
        } else {
            Triadicity::NonTriadic
        })
    }

    /// Whether inserting `link` would close a triangle in the union graph.
    /// Endpoints must exist. A directed social link whose reverse is already
    /// present adds no union edge and closes nothing.
    pub fn closes_triangle(&self, link: &Link) -> bool {
        match *link {
            Link::Social { src, dst } => {
                !self.are_friends(src, dst)
                    && (sorted_intersects(self.social_neighbors(src), self.social_neighbors(dst))
                        || sorted_intersects(self.favorites(src), self.favorites(dst)))
            }
            Link::Cross { user, item } => {
                sorted_intersects(self.social_neighbors(user), self.fans(item))
            }
        }
    }
}
