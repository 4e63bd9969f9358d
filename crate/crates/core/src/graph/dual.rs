use super::event::{Event, ItemId, Link, Step, UserId};
use super::GraphError;

/// Degree counters of one user. In undirected mode `k_in == k_out == k_s`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct UserDegrees {
    pub k_s: u32,
    pub k_in: u32,
    pub k_out: u32,
    pub k_f: u32,
}

impl UserDegrees {
    /// Total degree `k_s + k_f`.
    #[inline]
    pub fn k_a(&self) -> u32 {
        self.k_s + self.k_f
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum DegreeKind {
    Social,
    In,
    Out,
    Favorite,
    Popular,
    Total,
}

impl serde::Serialize for DegreeKind {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.label())
    }
}

impl DegreeKind {
    pub fn is_user_degree(self) -> bool {
        !matches!(self, DegreeKind::Popular)
    }

    pub fn label(self) -> &'static str {
        match self {
            DegreeKind::Social => "ks",
            DegreeKind::In => "kin",
            DegreeKind::Out => "kout",
            DegreeKind::Favorite => "kf",
            DegreeKind::Popular => "kp",
            DegreeKind::Total => "ka",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "ks" | "k_s" => DegreeKind::Social,
            "kin" | "k_in" => DegreeKind::In,
            "kout" | "k_out" => DegreeKind::Out,
            "kf" | "k_f" => DegreeKind::Favorite,
            "kp" | "k_p" => DegreeKind::Popular,
            "ka" | "k_a" => DegreeKind::Total,
            _ => return None,
        })
    }
}

/// Users, items, social links and cross links, stored as sorted id lists.
///
/// `social` always holds the undirected union of a user's social
/// neighbors. In directed mode `out_links` / `in_links` additionally keep
/// the declared direction.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DualGraph {
    directed: bool,
    social: Vec<Vec<u32>>,
    out_links: Vec<Vec<u32>>,
    in_links: Vec<Vec<u32>>,
    favorites: Vec<Vec<u32>>,
    fans: Vec<Vec<u32>>,
    user_degrees: Vec<UserDegrees>,
    popularity: Vec<u32>,
    social_link_count: usize,
    cross_link_count: usize,
}

#[inline]
fn sorted_insert(list: &mut Vec<u32>, id: u32) -> bool {
    match list.binary_search(&id) {
        Ok(_) => false,
        Err(pos) => {
            list.insert(pos, id);
            true
        }
    }
}

impl DualGraph {
    pub fn new(directed: bool) -> Self {
        DualGraph {
            directed,
            ..Default::default()
        }
    }

    pub fn is_directed(&self) -> bool {
        self.directed
    }

    pub fn user_count(&self) -> usize {
        self.social.len()
    }

    pub fn item_count(&self) -> usize {
        self.fans.len()
    }

    pub fn social_link_count(&self) -> usize {
        self.social_link_count
    }

    pub fn cross_link_count(&self) -> usize {
        self.cross_link_count
    }

    pub fn has_user(&self, u: UserId) -> bool {
        u.index() < self.user_count()
    }

    pub fn has_item(&self, i: ItemId) -> bool {
        i.index() < self.item_count()
    }

    pub(crate) fn check_user(&self, u: UserId) -> Result<(), GraphError> {
        if self.has_user(u) {
            Ok(())
        } else {
            Err(GraphError::UnknownUser(u))
        }
    }

    pub(crate) fn check_item(&self, i: ItemId) -> Result<(), GraphError> {
        if self.has_item(i) {
            Ok(())
        } else {
            Err(GraphError::UnknownItem(i))
        }
    }

    /// Undirected social neighbors, ascending.
    #[inline]
    pub fn social_neighbors(&self, u: UserId) -> &[u32] {
        &self.social[u.index()]
    }

    /// Users `u` declared as friends. Same as `social_neighbors` when undirected.
    pub fn out_neighbors(&self, u: UserId) -> &[u32] {
        if self.directed {
            &self.out_links[u.index()]
        } else {
            &self.social[u.index()]
        }
    }

    pub fn in_neighbors(&self, u: UserId) -> &[u32] {
        if self.directed {
            &self.in_links[u.index()]
        } else {
            &self.social[u.index()]
        }
    }

    #[inline]
    pub fn favorites(&self, u: UserId) -> &[u32] {
        &self.favorites[u.index()]
    }

    #[inline]
    pub fn fans(&self, i: ItemId) -> &[u32] {
        &self.fans[i.index()]
    }

    #[inline]
    pub fn degrees(&self, u: UserId) -> UserDegrees {
        self.user_degrees[u.index()]
    }

    #[inline]
    pub fn popularity(&self, i: ItemId) -> u32 {
        self.popularity[i.index()]
    }

    pub fn user_degrees(&self) -> &[UserDegrees] {
        &self.user_degrees
    }

    pub fn popularities(&self) -> &[u32] {
        &self.popularity
    }

    /// Degree of node `index` of the class `kind` refers to.
    #[inline]
    pub fn degree_of(&self, kind: DegreeKind, index: usize) -> u32 {
        if kind == DegreeKind::Popular {
            return self.popularity[index];
        }
        let d = &self.user_degrees[index];
        match kind {
            DegreeKind::Social => d.k_s,
            DegreeKind::In => d.k_in,
            DegreeKind::Out => d.k_out,
            DegreeKind::Favorite => d.k_f,
            DegreeKind::Total => d.k_a(),
            DegreeKind::Popular => unreachable!(),
        }
    }

    /// Degree column for every node of the class `kind` refers to.
    pub fn degree_vector(&self, kind: DegreeKind) -> Vec<u32> {
        let n = if kind.is_user_degree() {
            self.user_count()
        } else {
            self.item_count()
        };
        (0..n).map(|i| self.degree_of(kind, i)).collect()
    }

    #[inline]
    pub fn are_friends(&self, a: UserId, b: UserId) -> bool {
        // probe the shorter list
        let (x, y) = if self.social[a.index()].len() <= self.social[b.index()].len() {
            (a, b)
        } else {
            (b, a)
        };
        self.social[x.index()].binary_search(&y.0).is_ok()
    }

    #[inline]
    pub fn is_fan(&self, u: UserId, i: ItemId) -> bool {
        let favs = &self.favorites[u.index()];
        let fans = &self.fans[i.index()];
        if favs.len() <= fans.len() {
            favs.binary_search(&i.0).is_ok()
        } else {
            fans.binary_search(&u.0).is_ok()
        }
    }

    /// Whether the link already exists. Directed mode compares the declared
    /// direction.
    pub fn contains_link(&self, link: &Link) -> bool {
        match *link {
            Link::Social { src, dst } => {
                if self.directed {
                    self.out_links[src.index()].binary_search(&dst.0).is_ok()
                } else {
                    self.are_friends(src, dst)
                }
            }
            Link::Cross { user, item } => self.is_fan(user, item),
        }
    }

    pub(crate) fn validate_link(&self, link: &Link) -> Result<(), GraphError> {
        match *link {
            Link::Social { src, dst } => {
                self.check_user(src)?;
                self.check_user(dst)?;
                if src == dst {
                    return Err(GraphError::SelfLoop(src));
                }
            }
            Link::Cross { user, item } => {
                self.check_user(user)?;
                self.check_item(item)?;
            }
        }
        if self.contains_link(link) {
            return Err(GraphError::DuplicateLink(*link));
        }
        Ok(())
    }

    pub fn add_user(&mut self) -> UserId {
        let id = UserId(self.social.len() as u32);
        self.social.push(Vec::new());
        if self.directed {
            self.out_links.push(Vec::new());
            self.in_links.push(Vec::new());
        }
        self.favorites.push(Vec::new());
        self.user_degrees.push(UserDegrees::default());
        id
    }

    pub fn add_item(&mut self) -> ItemId {
        let id = ItemId(self.fans.len() as u32);
        self.fans.push(Vec::new());
        self.popularity.push(0);
        id
    }

    /// Adds a link after validating it; the graph is untouched on error.
    pub fn add_link(&mut self, link: Link) -> Result<(), GraphError> {
        self.validate_link(&link)?;
        self.insert_link_unchecked(link);
        Ok(())
    }

    /// Inserts a link that is known to be valid and absent.
    pub(crate) fn insert_link_unchecked(&mut self, link: Link) {
        match link {
            Link::Social { src, dst } => {
                let (s, d) = (src.index(), dst.index());
                if self.directed {
                    sorted_insert(&mut self.out_links[s], dst.0);
                    sorted_insert(&mut self.in_links[d], src.0);
                    self.user_degrees[s].k_out += 1;
                    self.user_degrees[d].k_in += 1;
                    if sorted_insert(&mut self.social[s], dst.0) {
                        sorted_insert(&mut self.social[d], src.0);
                        self.user_degrees[s].k_s += 1;
                        self.user_degrees[d].k_s += 1;
                    }
                } else {
                    sorted_insert(&mut self.social[s], dst.0);
                    sorted_insert(&mut self.social[d], src.0);
                    for idx in [s, d] {
                        let deg = &mut self.user_degrees[idx];
                        deg.k_s += 1;
                        deg.k_in += 1;
                        deg.k_out += 1;
                    }
                }
                self.social_link_count += 1;
            }
            Link::Cross { user, item } => {
                sorted_insert(&mut self.favorites[user.index()], item.0);
                sorted_insert(&mut self.fans[item.index()], user.0);
                self.user_degrees[user.index()].k_f += 1;
                self.popularity[item.index()] += 1;
                self.cross_link_count += 1;
            }
        }
    }

    /// Validates a step against the current graph without applying it.
    pub(crate) fn validate_step(&self, step: &Step) -> Result<(), GraphError> {
        match *step {
            Step::AddUser(u) => {
                if u.index() != self.user_count() {
                    return Err(GraphError::UserIdOutOfOrder {
                        got: u,
                        expected: UserId(self.user_count() as u32),
                    });
                }
            }
            Step::AddItem(i) => {
                if i.index() != self.item_count() {
                    return Err(GraphError::ItemIdOutOfOrder {
                        got: i,
                        expected: ItemId(self.item_count() as u32),
                    });
                }
            }
            Step::AddLink(link, _) => self.validate_link(&link)?,
        }
        Ok(())
    }

    pub(crate) fn apply_step_unchecked(&mut self, step: &Step) {
        match *step {
            Step::AddUser(_) => {
                self.add_user();
            }
            Step::AddItem(_) => {
                self.add_item();
            }
            Step::AddLink(link, _) => self.insert_link_unchecked(link),
        }
    }

    /// Applies one event atomically: on error nothing changes.
    pub fn apply_event(&mut self, event: &Event) -> Result<(), GraphError> {
        let steps = event.steps();
        // Creation steps come first; seed links may reference the node being
        // created, so validate against a graph that already holds it.
        let mut created_user = false;
        let mut created_item = false;
        for step in steps.iter().flatten() {
            match step {
                Step::AddUser(_) => {
                    self.validate_step(step)?;
                    created_user = true;
                }
                Step::AddItem(_) => {
                    self.validate_step(step)?;
                    created_item = true;
                }
                Step::AddLink(link, _) => {
                    // The new node has no links, so only existence of the
                    // other endpoint and self-loops need checking.
                    self.validate_link_with_pending(link, created_user, created_item)?;
                }
            }
        }
        for step in steps.iter().flatten() {
            self.apply_step_unchecked(step);
        }
        Ok(())
    }

    fn validate_link_with_pending(
        &self,
        link: &Link,
        pending_user: bool,
        pending_item: bool,
    ) -> Result<(), GraphError> {
        let user_ok = |u: UserId| {
            if self.has_user(u) || (pending_user && u.index() == self.user_count()) {
                Ok(())
            } else {
                Err(GraphError::UnknownUser(u))
            }
        };
        let is_pending_user = |u: UserId| pending_user && u.index() == self.user_count();
        match *link {
            Link::Social { src, dst } => {
                user_ok(src)?;
                user_ok(dst)?;
                if src == dst {
                    return Err(GraphError::SelfLoop(src));
                }
                if is_pending_user(src) || is_pending_user(dst) {
                    return Ok(());
                }
            }
            Link::Cross { user, item } => {
                user_ok(user)?;
                let item_pending = pending_item && item.index() == self.item_count();
                if !item_pending {
                    self.check_item(item)?;
                }
                if is_pending_user(user) || item_pending {
                    return Ok(());
                }
            }
        }
        if self.contains_link(link) {
            return Err(GraphError::DuplicateLink(*link));
        }
        Ok(())
    }

    /// Recomputes every degree from the adjacency lists and checks the
    /// structural invariants. Returns a description of the first violation.
    pub fn check_consistency(&self) -> Result<(), String> {
        let mut kf_sum = 0u64;
        let mut kp_sum = 0u64;
        for (u, deg) in self.user_degrees.iter().enumerate() {
            let social = &self.social[u];
            if !social.windows(2).all(|w| w[0] < w[1]) {
                return Err(format!("social list of U{u} not strictly sorted"));
            }
            if social.binary_search(&(u as u32)).is_ok() {
                return Err(format!("self-loop at U{u}"));
            }
            for &v in social {
                if self.social[v as usize].binary_search(&(u as u32)).is_err() {
                    return Err(format!("social union not symmetric: U{u} - U{v}"));
                }
            }
            let (k_in, k_out) = if self.directed {
                (self.in_links[u].len(), self.out_links[u].len())
            } else {
                (social.len(), social.len())
            };
            let expect = UserDegrees {
                k_s: social.len() as u32,
                k_in: k_in as u32,
                k_out: k_out as u32,
                k_f: self.favorites[u].len() as u32,
            };
            if expect != *deg {
                return Err(format!("degree cache of U{u}: {deg:?} != {expect:?}"));
            }
            for &i in &self.favorites[u] {
                if self.fans[i as usize].binary_search(&(u as u32)).is_err() {
                    return Err(format!("cross link U{u}-I{i} missing from fan list"));
                }
            }
            kf_sum += deg.k_f as u64;
        }
        for (i, fans) in self.fans.iter().enumerate() {
            if fans.len() as u32 != self.popularity[i] {
                return Err(format!("popular degree cache of I{i}"));
            }
            if !fans.windows(2).all(|w| w[0] < w[1]) {
                return Err(format!("fan list of I{i} not strictly sorted"));
            }
            kp_sum += fans.len() as u64;
        }
        if kf_sum != kp_sum || kf_sum != self.cross_link_count as u64 {
            return Err(format!(
                "transpose mismatch: sum k_f = {kf_sum}, sum k_p = {kp_sum}"
            ));
        }
        let links: usize = if self.directed {
            self.out_links.iter().map(Vec::len).sum()
        } else {
            self.social.iter().map(Vec::len).sum::<usize>() / 2
        };
        if links != self.social_link_count {
            return Err(format!(
                "social link count {} != {links}",
                self.social_link_count
            ));
        }
        Ok(())
    }
}
