use rand::seq::{index, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::params::{ModelParams, ResetPolicy};
use super::walk::two_step_walk;
use super::SimError;
use crate::graph::{DualGraph, Event, EventKind, EventLog, ItemId, Link, NodeRef, Time, UserId};

/// Dynamical state of one user.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct UserState {
    /// Willingness to act; accumulates until it reaches `theta`.
    pub phi: f64,
    pub theta: f64,
    /// Cleared to zero at the start of the next tick.
    pub pending_reset: bool,
}

/// What happened during one tick.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct TickReport {
    pub tick: Time,
    pub activated: usize,
    pub new_users: usize,
    pub new_items: usize,
    pub social_links: usize,
    pub cross_links: usize,
    /// Link attempts that found no admissible target.
    pub failed_walks: usize,
    /// Links formed this tick that closed a triangle when created.
    pub triadic_links: usize,
}

impl TickReport {
    /// Share of this tick's walk links that were triadic, if any formed.
    pub fn triadic_fraction(&self) -> Option<f64> {
        let links = self.social_links + self.cross_links;
        (links > 0).then(|| self.triadic_links as f64 / links as f64)
    }
}

/// Result of a complete run.
#[derive(Clone, Debug)]
pub struct SimOutput {
    pub log: EventLog,
    pub reports: Vec<TickReport>,
}

/// The coevolving network together with every user's state function.
pub struct Simulator {
    params: ModelParams,
    graph: DualGraph,
    states: Vec<UserState>,
    rng: ChaCha8Rng,
    tick: Time,
    log: EventLog,
    pending: Vec<u32>,
    activated: Vec<u32>,
    // per-tick degree changes
    delta: Vec<u32>,
    touched: Vec<u32>,
    // scratch flags, always left all-false
    mark: Vec<bool>,
}

impl Simulator {
    /// Builds the seed network at time 0.
    ///
    /// Each initial item gets a uniformly random owner. Each initial user
    /// draws one random partner (a repeated pair is skipped), then
    /// components are joined by random links until the social graph is
    /// connected.
    pub fn new(params: ModelParams) -> Result<Self, SimError> {
        params.validate()?;
        let mut sim = Simulator {
            rng: ChaCha8Rng::seed_from_u64(params.seed),
            graph: DualGraph::new(false),
            states: Vec::with_capacity(params.n_final),
            tick: 0,
            log: EventLog::new(false),
            pending: Vec::new(),
            activated: Vec::new(),
            delta: Vec::with_capacity(params.n_final),
            touched: Vec::new(),
            mark: Vec::with_capacity(params.n_final),
            params,
        };
        for k in 0..sim.params.n0 {
            sim.emit(EventKind::NewUser {
                user: UserId(k as u32),
                seed_friend: None,
                seed_item: None,
            });
        }
        for k in 0..sim.params.m0 {
            let owner = UserId(sim.rng.random_range(0..sim.params.n0 as u32));
            sim.emit(EventKind::NewItem {
                item: ItemId(k as u32),
                owner,
            });
        }
        let n0 = sim.params.n0 as u32;
        for a in 0..n0 {
            let b = loop {
                let b = sim.rng.random_range(0..n0);
                if b != a {
                    break b;
                }
            };
            if !sim.graph.are_friends(UserId(a), UserId(b)) {
                sim.emit(EventKind::SocialLink {
                    src: UserId(a),
                    dst: UserId(b),
                });
            }
        }
        sim.connect_seed_components();
        sim.delta.iter_mut().for_each(|d| *d = 0);
        sim.touched.clear();
        Ok(sim)
    }

    fn connect_seed_components(&mut self) {
        let n0 = self.params.n0;
        let mut component = vec![usize::MAX; n0];
        let mut members: Vec<Vec<u32>> = Vec::new();
        for start in 0..n0 {
            if component[start] != usize::MAX {
                continue;
            }
            let id = members.len();
            let mut stack = vec![start as u32];
            component[start] = id;
            let mut list = Vec::new();
            while let Some(v) = stack.pop() {
                list.push(v);
                for &w in self.graph.social_neighbors(UserId(v)) {
                    if component[w as usize] == usize::MAX {
                        component[w as usize] = id;
                        stack.push(w);
                    }
                }
            }
            list.sort_unstable();
            members.push(list);
        }
        let mut connected = members[0].clone();
        for comp in members.iter().skip(1) {
            let a = comp[self.rng.random_range(0..comp.len())];
            let b = connected[self.rng.random_range(0..connected.len())];
            self.emit(EventKind::SocialLink {
                src: UserId(a),
                dst: UserId(b),
            });
            connected.extend_from_slice(comp);
        }
    }

    pub fn params(&self) -> &ModelParams {
        &self.params
    }

    pub fn graph(&self) -> &DualGraph {
        &self.graph
    }

    pub fn log(&self) -> &EventLog {
        &self.log
    }

    pub fn into_log(self) -> EventLog {
        self.log
    }

    pub fn states(&self) -> &[UserState] {
        &self.states
    }

    pub fn tick(&self) -> Time {
        self.tick
    }

    /// Users that were activated during the last tick, ascending.
    pub fn last_activated(&self) -> &[u32] {
        &self.activated
    }

    pub fn is_complete(&self) -> bool {
        self.graph.user_count() >= self.params.n_final
    }

    fn bump(&mut self, user: u32) {
        let d = &mut self.delta[user as usize];
        if *d == 0 {
            self.touched.push(user);
        }
        *d += 1;
    }

    /// Applies an event the engine built itself, logs it and records the
    /// resulting degree changes.
    fn emit(&mut self, kind: EventKind) {
        let event = Event::new(self.tick, kind);
        self.graph
            .apply_event(&event)
            .expect("engine produced an invalid event");
        self.log.push(event).expect("engine time is monotone");
        match kind {
            EventKind::NewUser {
                user,
                seed_friend,
                seed_item,
            } => {
                let theta = self.draw_theta();
                self.states.push(UserState {
                    phi: 0.0,
                    theta,
                    pending_reset: false,
                });
                self.delta.push(0);
                self.mark.push(false);
                if let Some(f) = seed_friend {
                    self.bump(user.0);
                    self.bump(f.0);
                }
                if seed_item.is_some() {
                    self.bump(user.0);
                }
            }
            EventKind::NewItem { owner, .. } => self.bump(owner.0),
            EventKind::SocialLink { src, dst } => {
                self.bump(src.0);
                self.bump(dst.0);
            }
            EventKind::CrossLink { user, .. } => self.bump(user.0),
        }
    }

    fn draw_theta(&mut self) -> f64 {
        let (lo, hi) = (self.params.theta_min, self.params.theta_max);
        if lo == hi {
            lo
        } else {
            self.rng.random_range(lo..=hi)
        }
    }

    /// Picks `count` distinct users from the activated set, topping up with
    /// uniformly random users among the first `pool` ids when it is short.
    fn select(&mut self, count: usize, pool: usize) -> Vec<u32> {
        let count = count.min(pool);
        let chosen: Vec<u32> = if self.activated.len() >= count {
            index::sample(&mut self.rng, self.activated.len(), count)
                .into_iter()
                .map(|k| self.activated[k])
                .collect()
        } else {
            let mut chosen = self.activated.clone();
            for &a in &chosen {
                self.mark[a as usize] = true;
            }
            while chosen.len() < count {
                let v = self.rng.random_range(0..pool as u32);
                if !self.mark[v as usize] {
                    self.mark[v as usize] = true;
                    chosen.push(v);
                }
            }
            for &c in &chosen {
                self.mark[c as usize] = false;
            }
            chosen.shuffle(&mut self.rng);
            chosen
        };
        chosen
    }

    /// Advances the model by one tick.
    pub fn step(&mut self) -> Result<TickReport, SimError> {
        if self.is_complete() {
            return Err(SimError::RunComplete {
                users: self.graph.user_count(),
            });
        }
        self.tick += 1;
        let mut report = TickReport {
            tick: self.tick,
            ..Default::default()
        };

        // (a) resets flagged during the previous tick
        for &u in &self.pending {
            let s = &mut self.states[u as usize];
            s.phi = 0.0;
            s.pending_reset = false;
        }
        self.pending.clear();

        // (b) activation, before the newcomer arrives
        self.activated.clear();
        self.activated.extend(
            self.states
                .iter()
                .enumerate()
                .filter(|(_, s)| s.phi >= s.theta)
                .map(|(i, _)| i as u32),
        );
        report.activated = self.activated.len();

        // (c) one new user, linked to a random user and one of its favorites
        let existing = self.graph.user_count();
        let friend = UserId(self.rng.random_range(0..existing as u32));
        let favs = self.graph.favorites(friend);
        let seed_item = if favs.is_empty() {
            None
        } else {
            Some(ItemId(favs[self.rng.random_range(0..favs.len())]))
        };
        self.emit(EventKind::NewUser {
            user: UserId(existing as u32),
            seed_friend: Some(friend),
            seed_item,
        });
        report.new_users = 1;

        // (d) item creation
        let creators = self.select(self.params.m, existing);
        for &c in &creators {
            let item = ItemId(self.graph.item_count() as u32);
            self.emit(EventKind::NewItem {
                item,
                owner: UserId(c),
            });
        }
        report.new_items = creators.len();

        // (e) triadic closure through two-step walks
        let linkers = self.select(self.params.n, existing);
        let mut recipients = Vec::new();
        for &l in &linkers {
            let user = UserId(l);
            let found = two_step_walk(&self.graph, user, self.params.walk_retries, &mut self.rng)
                .expect("linker exists");
            let Some((target, _)) = found else {
                report.failed_walks += 1;
                continue;
            };
            let (link, kind) = match target {
                NodeRef::User(v) => (
                    Link::Social { src: user, dst: v },
                    EventKind::SocialLink { src: user, dst: v },
                ),
                NodeRef::Item(i) => (
                    Link::Cross { user, item: i },
                    EventKind::CrossLink { user, item: i },
                ),
            };
            if self.graph.closes_triangle(&link) {
                report.triadic_links += 1;
            }
            self.emit(kind);
            match target {
                NodeRef::User(v) => {
                    report.social_links += 1;
                    recipients.push(v.0);
                }
                NodeRef::Item(_) => report.cross_links += 1,
            }
        }

        // (f) state functions: neighbor stimulus plus own initiative
        let mu = self.params.mu;
        if mu != 0.0 {
            for &j in &self.touched {
                let push = mu * self.delta[j as usize] as f64;
                for &i in self.graph.social_neighbors(UserId(j)) {
                    self.states[i as usize].phi += push;
                }
            }
        }
        for &j in &self.touched {
            self.delta[j as usize] = 0;
        }
        self.touched.clear();
        let phi0 = self.params.phi0;
        for s in &mut self.states {
            s.phi += phi0;
        }

        // (g) flag next tick's resets
        let recipients = match self.params.reset_policy {
            ResetPolicy::Initiators => Vec::new(),
            ResetPolicy::IncludeRecipients => recipients,
        };
        let flagged = self
            .activated
            .iter()
            .chain(&creators)
            .chain(&linkers)
            .chain(&recipients);
        for &u in flagged {
            let s = &mut self.states[u as usize];
            if !s.pending_reset {
                s.pending_reset = true;
                self.pending.push(u);
            }
        }
        Ok(report)
    }

    /// Steps until `n_final` users exist.
    pub fn run_to_end(&mut self) -> Vec<TickReport> {
        let mut reports = Vec::with_capacity(self.params.n_final - self.graph.user_count());
        while !self.is_complete() {
            reports.push(self.step().expect("run not complete"));
        }
        reports
    }
}

/// Runs the model from its seed network to `n_final` users.
pub fn run(params: ModelParams) -> Result<SimOutput, SimError> {
    let mut sim = Simulator::new(params)?;
    let reports = sim.run_to_end();
    Ok(SimOutput {
        log: sim.into_log(),
        reports,
    })
}
