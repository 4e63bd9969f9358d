use rand::Rng;

use super::{DualGraph, Event, EventKind, EventLog, ItemId, Link, UserId};

/// Shape of a random but valid event log.
#[derive(Clone, Copy, Debug)]
pub struct RandomLogSpec {
    pub events: usize,
    pub directed: bool,
    /// Probability that an event advances the clock by one.
    pub tick_probability: f64,
    /// Relative weights of new-user, new-item, social and cross events.
    pub weights: [u32; 4],
}

impl Default for RandomLogSpec {
    fn default() -> Self {
        RandomLogSpec {
            events: 200,
            directed: false,
            tick_probability: 0.3,
            weights: [2, 2, 3, 3],
        }
    }
}

/// Draws a valid log: every event applies cleanly to the graph built by its
/// predecessors. Users arrive with or without seed links at random.
pub fn random_log<R: Rng>(rng: &mut R, spec: &RandomLogSpec) -> EventLog {
    let mut log = EventLog::new(spec.directed);
    let mut graph = DualGraph::new(spec.directed);
    let mut time = 0;
    let total: u32 = spec.weights.iter().sum();
    let mut attempts = 0;
    while log.len() < spec.events && attempts < spec.events * 50 {
        attempts += 1;
        if !log.is_empty() && rng.random_bool(spec.tick_probability) {
            time += 1;
        }
        let n = graph.user_count() as u32;
        let m = graph.item_count() as u32;
        let mut pick = rng.random_range(0..total);
        let mut which = 0;
        while pick >= spec.weights[which] {
            pick -= spec.weights[which];
            which += 1;
        }
        if n == 0 {
            which = 0;
        }
        let kind = match which {
            0 => {
                let user = UserId(n);
                let seed_friend =
                    (n > 0 && rng.random_bool(0.5)).then(|| UserId(rng.random_range(0..n)));
                let seed_item =
                    (m > 0 && rng.random_bool(0.5)).then(|| ItemId(rng.random_range(0..m)));
                EventKind::NewUser {
                    user,
                    seed_friend,
                    seed_item,
                }
            }
            1 => EventKind::NewItem {
                item: ItemId(m),
                owner: UserId(rng.random_range(0..n)),
            },
            2 => {
                if n < 2 {
                    continue;
                }
                let src = UserId(rng.random_range(0..n));
                let dst = UserId(rng.random_range(0..n));
                let link = Link::Social { src, dst };
                if src == dst || graph.contains_link(&link) {
                    continue;
                }
                EventKind::SocialLink { src, dst }
            }
            _ => {
                if m == 0 {
                    continue;
                }
                let user = UserId(rng.random_range(0..n));
                let item = ItemId(rng.random_range(0..m));
                if graph.is_fan(user, item) {
                    continue;
                }
                EventKind::CrossLink { user, item }
            }
        };
        let event = Event::new(time, kind);
        graph
            .apply_event(&event)
            .expect("generator produced an invalid event");
        log.push(event).expect("times are non-decreasing");
    }
    log
}
