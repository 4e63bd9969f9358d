//! Brute-force reference implementations used to check the streaming
//! estimators. Everything here recomputes from scratch with dense matrices
//! and makes no use of the library's adjacency lists or replay machinery.

#![allow(dead_code)]

use std::collections::BTreeMap;

use triadic_net::graph::{DegreeKind, Event, EventKind, EventLog, Time};

pub mod checks;

/// One elementary link insertion, flattened from the events.
#[derive(Clone, Copy, Debug)]
pub struct FlatLink {
    pub time: Time,
    /// Social `(src, dst)` or cross `(user, item)`.
    pub social: bool,
    pub a: usize,
    pub b: usize,
    /// Standalone link event rather than one implied by node creation.
    pub explicit: bool,
    /// Position in the flattened step sequence.
    pub seq: usize,
}

/// Dense graph: `s[i][j]` for declared social links `i -> j` and `c[i][l]`
/// for cross links.
#[derive(Clone, Debug, Default)]
pub struct Dense {
    pub directed: bool,
    pub users: usize,
    pub items: usize,
    pub s: Vec<Vec<bool>>,
    pub c: Vec<Vec<bool>>,
}

impl Dense {
    pub fn new(directed: bool) -> Self {
        Dense {
            directed,
            ..Default::default()
        }
    }

    pub fn add_user(&mut self) {
        self.users += 1;
        for row in &mut self.s {
            row.push(false);
        }
        self.s.push(vec![false; self.users]);
        self.c.push(vec![false; self.items]);
    }

    pub fn add_item(&mut self) {
        self.items += 1;
        for row in &mut self.c {
            row.push(false);
        }
    }

    pub fn friends(&self, i: usize, j: usize) -> bool {
        self.s[i][j] || self.s[j][i]
    }

    pub fn link(&mut self, l: &FlatLink) {
        if l.social {
            self.s[l.a][l.b] = true;
            if !self.directed {
                self.s[l.b][l.a] = true;
            }
        } else {
            self.c[l.a][l.b] = true;
        }
    }

    /// Triangles in the union graph (users and items as nodes, both link
    /// types as undirected edges).
    pub fn triangles(&self) -> usize {
        let n = self.users + self.items;
        let adj = |x, y| self.union_adj(x, y);
        let mut count = 0;
        for x in 0..n {
            for y in x + 1..n {
                if !adj(x, y) {
                    continue;
                }
                for z in y + 1..n {
                    if adj(x, z) && adj(y, z) {
                        count += 1;
                    }
                }
            }
        }
        count
    }

    /// Union-graph adjacency over users `0..users` and items after them.
    pub fn union_adj(&self, x: usize, y: usize) -> bool {
        match (x < self.users, y < self.users) {
            (true, true) => x != y && self.friends(x, y),
            (true, false) => self.c[x][y - self.users],
            (false, true) => self.c[y][x - self.users],
            (false, false) => false,
        }
    }

    /// Whether inserting `l` raises the union triangle count: the edge must
    /// be new to the union graph, and the triangles it adds are exactly the
    /// common union neighbors of its endpoints.
    pub fn closes_triangle(&self, l: &FlatLink) -> bool {
        let (x, y) = if l.social {
            (l.a, l.b)
        } else {
            (l.a, self.users + l.b)
        };
        if self.union_adj(x, y) {
            return false;
        }
        (0..self.users + self.items).any(|z| self.union_adj(x, z) && self.union_adj(y, z))
    }

    /// [`Dense::closes_triangle`] by counting every triangle before and
    /// after the insertion.
    pub fn closes_triangle_by_count(&self, l: &FlatLink) -> bool {
        let mut g = self.clone();
        g.link(l);
        g.triangles() > self.triangles()
    }

    pub fn degree(&self, kind: DegreeKind, idx: usize) -> u32 {
        let count = |it: &mut dyn Iterator<Item = bool>| it.filter(|&b| b).count() as u32;
        match kind {
            DegreeKind::Social => count(&mut (0..self.users).map(|j| self.friends(idx, j))),
            DegreeKind::Out => count(&mut self.s[idx].iter().copied()),
            DegreeKind::In => count(&mut (0..self.users).map(|j| self.s[j][idx])),
            DegreeKind::Favorite => count(&mut self.c[idx].iter().copied()),
            DegreeKind::Popular => count(&mut (0..self.users).map(|j| self.c[j][idx])),
            DegreeKind::Total => {
                self.degree(DegreeKind::Social, idx) + self.degree(DegreeKind::Favorite, idx)
            }
        }
    }

    pub fn node_count(&self, kind: DegreeKind) -> usize {
        if kind == DegreeKind::Popular {
            self.items
        } else {
            self.users
        }
    }
}

/// Node creations and links in application order.
#[derive(Clone, Copy, Debug)]
pub enum Flat {
    User(Time),
    Item(Time),
    Link(FlatLink),
}

impl Flat {
    pub fn time(&self) -> Time {
        match *self {
            Flat::User(t) | Flat::Item(t) => t,
            Flat::Link(l) => l.time,
        }
    }
}

pub fn flatten(events: &[Event]) -> Vec<Flat> {
    let mut out = Vec::new();
    let mut seq = 0;
    let mut push_link = |out: &mut Vec<Flat>, time, social, a: u32, b: u32, explicit| {
        out.push(Flat::Link(FlatLink {
            time,
            social,
            a: a as usize,
            b: b as usize,
            explicit,
            seq,
        }));
        seq += 1;
    };
    for e in events {
        match e.kind {
            EventKind::NewUser {
                user,
                seed_friend,
                seed_item,
            } => {
                out.push(Flat::User(e.time));
                if let Some(f) = seed_friend {
                    push_link(&mut out, e.time, true, user.0, f.0, false);
                }
                if let Some(i) = seed_item {
                    push_link(&mut out, e.time, false, user.0, i.0, false);
                }
            }
            EventKind::NewItem { item, owner } => {
                out.push(Flat::Item(e.time));
                push_link(&mut out, e.time, false, owner.0, item.0, false);
            }
            EventKind::SocialLink { src, dst } => {
                push_link(&mut out, e.time, true, src.0, dst.0, true)
            }
            EventKind::CrossLink { user, item } => {
                push_link(&mut out, e.time, false, user.0, item.0, true)
            }
        }
    }
    out
}

/// Replays the flattened log, calling `visit(graph_before, link)` for each
/// link.
pub fn replay(
    log: &EventLog,
    until: Option<Time>,
    mut visit: impl FnMut(&Dense, &FlatLink),
) -> Dense {
    let mut g = Dense::new(log.is_directed());
    for f in flatten(log.events()) {
        if until.is_some_and(|t| f.time() > t) {
            break;
        }
        match f {
            Flat::User(_) => g.add_user(),
            Flat::Item(_) => g.add_item(),
            Flat::Link(l) => {
                visit(&g, &l);
                g.link(&l);
            }
        }
    }
    g
}

pub fn snapshot(log: &EventLog, t: Time) -> Dense {
    replay(log, Some(t), |_, _| {})
}

/// Nodes whose `y` degree grows when `l` is added to `g`.
pub fn gainers(g: &Dense, l: &FlatLink, y: DegreeKind) -> Vec<usize> {
    let mut after = g.clone();
    after.link(l);
    (0..g.node_count(y))
        .filter(|&i| after.degree(y, i) > g.degree(y, i))
        .collect()
}

pub struct PaOracle {
    pub a_t: Vec<u64>,
    pub a_n: Vec<u64>,
    pub c: Vec<u64>,
    pub pi_t: Vec<f64>,
    pub pi_n: Vec<f64>,
    pub kappa: Vec<f64>,
    pub used: Vec<Time>,
}

/// Attachment histograms straight from the definition, one window at a time.
pub fn pa_oracle(log: &EventLog, x: DegreeKind, y: DegreeKind, t0s: &[Time], dt: Time) -> PaOracle {
    let mut t0s = t0s.to_vec();
    t0s.sort();
    t0s.dedup();
    let mut per_window = Vec::new();
    let mut width = 0;
    for &t0 in &t0s {
        let snap = snapshot(log, t0);
        let x0: Vec<u32> = (0..snap.node_count(x)).map(|i| snap.degree(x, i)).collect();
        width = width.max(x0.iter().map(|&d| d as usize + 1).max().unwrap_or(0));
        let mut a_t: BTreeMap<u32, u64> = BTreeMap::new();
        let mut a_n: BTreeMap<u32, u64> = BTreeMap::new();
        replay(log, Some(t0 + dt), |g, l| {
            if l.time <= t0 {
                return;
            }
            let tri = g.closes_triangle(l);
            for node in gainers(g, l, y) {
                if node < x0.len() {
                    *(if tri { &mut a_t } else { &mut a_n })
                        .entry(x0[node])
                        .or_default() += 1;
                }
            }
        });
        per_window.push((t0, x0, a_t, a_n));
    }
    let mut out = PaOracle {
        a_t: vec![0; width],
        a_n: vec![0; width],
        c: vec![0; width],
        pi_t: vec![0.0; width],
        pi_n: vec![0.0; width],
        kappa: vec![0.0; width],
        used: Vec::new(),
    };
    for (t0, x0, a_t, a_n) in per_window {
        let mut c = vec![0u64; width];
        for &d in &x0 {
            c[d as usize] += 1;
        }
        let at = |d: usize| a_t.get(&(d as u32)).copied().unwrap_or(0);
        let an = |d: usize| a_n.get(&(d as u32)).copied().unwrap_or(0);
        let mut norm = 0.0;
        for d in 0..width {
            if c[d] > 0 {
                norm += (at(d) + an(d)) as f64 / c[d] as f64;
            }
        }
        if norm == 0.0 {
            continue;
        }
        out.used.push(t0);
        for d in 0..width {
            out.c[d] += c[d];
            out.a_t[d] += at(d);
            out.a_n[d] += an(d);
            if c[d] > 0 {
                out.pi_t[d] += at(d) as f64 / c[d] as f64 / norm;
                out.pi_n[d] += an(d) as f64 / c[d] as f64 / norm;
            }
        }
    }
    let k = out.used.len().max(1) as f64;
    let mut acc = 0.0;
    for d in 0..width {
        out.pi_t[d] /= k;
        out.pi_n[d] /= k;
        acc += out.pi_t[d] + out.pi_n[d];
        out.kappa[d] = acc;
    }
    out
}

/// Per-node growth samples `(k0, ln(k1 / k0))` for `k0 >= 1`.
pub fn growth_samples(log: &EventLog, kind: DegreeKind, t0: Time, t1: Time) -> Vec<(u64, f64)> {
    let g0 = snapshot(log, t0);
    let g1 = snapshot(log, t1);
    (0..g0.node_count(kind))
        .filter_map(|i| {
            let k0 = g0.degree(kind, i);
            (k0 >= 1).then(|| (k0 as u64, (g1.degree(kind, i) as f64 / k0 as f64).ln()))
        })
        .collect()
}

/// `(bin index, count, mean k0, mean r, population σ of r)` over base-2 bins.
pub fn growth_bins(samples: &[(u64, f64)]) -> Vec<(u32, usize, f64, f64, f64)> {
    let mut groups: BTreeMap<u32, Vec<(u64, f64)>> = BTreeMap::new();
    for &(k, r) in samples {
        let mut j = 0;
        while (2u64 << j) <= k {
            j += 1;
        }
        groups.entry(j).or_default().push((k, r));
    }
    groups
        .into_iter()
        .map(|(j, g)| {
            let n = g.len() as f64;
            let mk = g.iter().map(|p| p.0 as f64).sum::<f64>() / n;
            let mr = g.iter().map(|p| p.1).sum::<f64>() / n;
            let var = g.iter().map(|p| (p.1 - mr).powi(2)).sum::<f64>() / n;
            (j, g.len(), mk, mr, var.sqrt())
        })
        .collect()
}

/// Exposure histograms from per-pair histories.
///
/// For every (user, item) pair, walks the link sequence and counts the
/// favorites of the item by current friends of the user made while the
/// user was not yet a fan.
pub fn exposure_oracle(log: &EventLog) -> (Vec<u64>, Vec<u64>) {
    let mut states: Vec<(Dense, FlatLink)> = Vec::new();
    let fin = replay(log, None, |g, l| states.push((g.clone(), *l)));
    let mut a = vec![0u64; 1];
    let mut c = vec![0u64; 1];
    let bump = |h: &mut Vec<u64>, k: usize| {
        if h.len() <= k {
            h.resize(k + 1, 0);
        }
        h[k] += 1;
    };
    for i in 0..fin.users {
        for item in 0..fin.items {
            let mut level = 0usize;
            for (g, l) in &states {
                if l.social || l.b != item || i >= g.users {
                    continue;
                }
                if l.a == i {
                    if level > 0 {
                        bump(&mut a, level);
                    }
                    break;
                }
                if g.friends(i, l.a) && !g.c[i][item] {
                    level += 1;
                    bump(&mut c, level);
                }
            }
        }
    }
    (a, c)
}

/// Shared-favorite histograms from per-pair histories of common items.
pub fn shared_oracle(log: &EventLog) -> (Vec<u64>, Vec<u64>) {
    let mut states: Vec<(Dense, FlatLink, Dense)> = Vec::new();
    let fin = replay(log, None, |g, l| {
        let mut after = g.clone();
        after.link(l);
        states.push((g.clone(), *l, after));
    });
    let end = log.last_time().unwrap_or(0);
    let mut a = vec![0u64; 1];
    let mut c = vec![0u64; 1];
    let add = |h: &mut Vec<u64>, k: usize, by: u64| {
        if h.len() <= k {
            h.resize(k + 1, 0);
        }
        h[k] += by;
    };
    for i in 0..fin.users {
        for j in i + 1..fin.users {
            // (level, time entered)
            let mut cur: Option<(usize, Time)> = None;
            let mut closed = false;
            for (g, l, after) in &states {
                if closed || i >= g.users || j >= g.users {
                    continue;
                }
                if l.social && !g.friends(i, j) && after.friends(i, j) {
                    if let Some((z, since)) = cur {
                        add(&mut c, z, (l.time - since + 1) as u64);
                        add(&mut a, z, 1);
                    }
                    closed = true;
                    continue;
                }
                if g.friends(i, j) {
                    continue;
                }
                let shared = |h: &Dense| (0..h.items).filter(|&m| h.c[i][m] && h.c[j][m]).count();
                let (before, now) = (shared(g), shared(after));
                if now > before {
                    if let Some((z, since)) = cur {
                        add(&mut c, z, (l.time - since + 1) as u64);
                    }
                    cur = Some((now, l.time));
                }
            }
            if !closed {
                if let Some((z, since)) = cur {
                    add(&mut c, z, (end - since + 1) as u64);
                }
            }
        }
    }
    (a, c)
}

/// `(k_p^nn per user, k_f^nn per item)` by direct summation over the
/// cross-link matrix.
pub fn nn_oracle(g: &Dense) -> (Vec<Option<f64>>, Vec<Option<f64>>) {
    let users = (0..g.users)
        .map(|i| {
            let num: usize = (0..g.items)
                .filter(|&l| g.c[i][l])
                .map(|l| (0..g.users).filter(|&j| g.c[j][l]).count())
                .sum();
            let den = (0..g.items).filter(|&l| g.c[i][l]).count();
            (den > 0).then(|| num as f64 / den as f64)
        })
        .collect();
    let items = (0..g.items)
        .map(|l| {
            let num: usize = (0..g.users)
                .filter(|&i| g.c[i][l])
                .map(|i| (0..g.items).filter(|&r| g.c[i][r]).count())
                .sum();
            let den = (0..g.users).filter(|&i| g.c[i][l]).count();
            (den > 0).then(|| num as f64 / den as f64)
        })
        .collect();
    (users, items)
}

/// `(social triadic, social total, cross triadic, cross total)` over
/// explicit links after the first timestamp; reciprocations of an existing
/// friendship are skipped.
pub fn triadic_oracle(log: &EventLog) -> (u64, u64, u64, u64) {
    let first = log.first_time().unwrap_or(0);
    let mut out = (0, 0, 0, 0);
    replay(log, None, |g, l| {
        if !l.explicit || l.time == first {
            return;
        }
        let tri = g.closes_triangle(l) as u64;
        if l.social {
            if !g.friends(l.a, l.b) {
                out.0 += tri;
                out.1 += 1;
            }
        } else {
            out.2 += tri;
            out.3 += 1;
        }
    });
    out
}

/// Landing distribution of one two-step walk from `walker`, keyed by
/// `(is_user, index)`.
pub fn walk_enumeration(g: &Dense, walker: usize) -> BTreeMap<(bool, usize), f64> {
    let friends = |i: usize| (0..g.users).filter(move |&j| j != i && g.friends(i, j));
    let favorites = |i: usize| (0..g.items).filter(move |&l| g.c[i][l]);
    let fans = |l: usize| (0..g.users).filter(move |&j| g.c[j][l]);
    let mut p = BTreeMap::new();
    let first = (friends(walker).count() + favorites(walker).count()) as f64;
    for f in friends(walker) {
        let second = (friends(f).count() + favorites(f).count()) as f64;
        for x in friends(f) {
            *p.entry((true, x)).or_insert(0.0) += 1.0 / first / second;
        }
        for x in favorites(f) {
            *p.entry((false, x)).or_insert(0.0) += 1.0 / first / second;
        }
    }
    for l in favorites(walker) {
        let n = fans(l).count() as f64;
        for x in fans(l) {
            *p.entry((true, x)).or_insert(0.0) += 1.0 / first / n;
        }
    }
    p
}
