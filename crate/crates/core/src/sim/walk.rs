use rand::Rng;

use crate::graph::{DualGraph, GraphError, ItemId, NodeRef, UserId, WalkType};

/// One two-step walk from `user`, admissible or not.
///
/// The first step picks uniformly among the walker's friends and favorite
/// items; from a friend the second step picks uniformly among that friend's
/// friends and favorites, from an item uniformly among its fans. Returns
/// `None` when the walker has no links at all.
pub fn walk_once<R: Rng + ?Sized>(
    graph: &DualGraph,
    user: UserId,
    rng: &mut R,
) -> Option<(NodeRef, WalkType)> {
    let friends = graph.social_neighbors(user);
    let favorites = graph.favorites(user);
    let first = friends.len() + favorites.len();
    if first == 0 {
        return None;
    }
    let r = rng.random_range(0..first);
    if r < friends.len() {
        let mid = UserId(friends[r]);
        let mid_friends = graph.social_neighbors(mid);
        let mid_favorites = graph.favorites(mid);
        let s = rng.random_range(0..mid_friends.len() + mid_favorites.len());
        if s < mid_friends.len() {
            Some((
                NodeRef::User(UserId(mid_friends[s])),
                WalkType::FriendOfFriend,
            ))
        } else {
            Some((
                NodeRef::Item(ItemId(mid_favorites[s - mid_friends.len()])),
                WalkType::FavoriteOfFriend,
            ))
        }
    } else {
        let item = ItemId(favorites[r - friends.len()]);
        let fans = graph.fans(item);
        let s = rng.random_range(0..fans.len());
        Some((NodeRef::User(UserId(fans[s])), WalkType::FanOfFavorite))
    }
}

/// Whether `user` may link to `target`: not itself and not already linked
/// by the matching link type.
pub fn is_admissible(graph: &DualGraph, user: UserId, target: NodeRef) -> bool {
    match target {
        NodeRef::User(v) => v != user && !graph.are_friends(user, v),
        NodeRef::Item(i) => !graph.is_fan(user, i),
    }
}

/// Up to `retries` independent walks; the first admissible landing node wins.
pub fn two_step_walk<R: Rng + ?Sized>(
    graph: &DualGraph,
    user: UserId,
    retries: usize,
    rng: &mut R,
) -> Result<Option<(NodeRef, WalkType)>, GraphError> {
    if !graph.has_user(user) {
        return Err(GraphError::UnknownUser(user));
    }
    for _ in 0..retries {
        match walk_once(graph, user, rng) {
            None => return Ok(None),
            Some((target, walk)) if is_admissible(graph, user, target) => {
                return Ok(Some((target, walk)))
            }
            Some(_) => {}
        }
    }
    Ok(None)
}
