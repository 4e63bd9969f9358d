use std::collections::{HashMap, HashSet};
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{IngestReport, IoError, FORMAT_VERSION};
use crate::graph::{DualGraph, Event, EventKind, EventLog, ItemId, Time, UserId};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IngestOptions {
    /// Keep social links directed.
    pub directed: bool,
    /// Shuffle same-day events within each class instead of keeping file order.
    pub shuffle_seed: Option<u64>,
}

impl Default for IngestOptions {
    fn default() -> Self {
        IngestOptions {
            directed: true,
            shuffle_seed: None,
        }
    }
}

/// Raw identifiers of the dense ids used in the log, indexed by dense id.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct IdMap {
    pub users: Vec<String>,
    pub items: Vec<String>,
}

impl IdMap {
    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "{FORMAT_VERSION} kind,id,raw")?;
        for (k, raw) in self.users.iter().enumerate() {
            writeln!(out, "user,{k},{raw}")?;
        }
        for (k, raw) in self.items.iter().enumerate() {
            writeln!(out, "item,{k},{raw}")?;
        }
        out.flush()
    }

    pub fn save(&self, path: &Path) -> Result<(), IoError> {
        self.write_csv(BufWriter::new(File::create(path)?))?;
        Ok(())
    }
}

struct Record {
    a: String,
    b: String,
    day: Time,
}

/// Reads `a b day` triples separated by commas or whitespace; blank lines
/// and lines starting with `#` are skipped.
fn read_triples<R: BufRead>(input: R) -> Result<Vec<Record>, IoError> {
    let mut out = Vec::new();
    for (k, line) in input.lines().enumerate() {
        let line = line?;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let f: Vec<&str> = line
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|s| !s.is_empty())
            .collect();
        if f.len() != 3 {
            return Err(IoError::malformed(k + 1, "expected `a,b,day`"));
        }
        let day = f[2]
            .parse()
            .map_err(|_| IoError::malformed(k + 1, "bad day"))?;
        out.push(Record {
            a: f[0].to_owned(),
            b: f[1].to_owned(),
            day,
        });
    }
    Ok(out)
}

// Same-day order: creations first, then social links, then favorites.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Class {
    NewUser,
    NewItem,
    Social,
    Cross,
}

struct Pending<'a> {
    day: Time,
    class: Class,
    a: &'a str,
    b: &'a str,
}

/// Turns timestamped social (`src,dst,day`) and favorite (`user,item,day`)
/// edge lists into a canonical log.
///
/// Only users with at least one social link and one favorite are kept. The
/// first favorite of an item marks its upload: it becomes the item's
/// creation event, owned by that user. Each user is created on the day it
/// first appears.
pub fn ingest_empirical(
    social: &Path,
    cross: &Path,
    options: &IngestOptions,
) -> Result<(EventLog, IngestReport, IdMap), IoError> {
    ingest_empirical_from(
        BufReader::new(File::open(social)?),
        BufReader::new(File::open(cross)?),
        options,
    )
}

pub fn ingest_empirical_from<R: BufRead, S: BufRead>(
    social: R,
    cross: S,
    options: &IngestOptions,
) -> Result<(EventLog, IngestReport, IdMap), IoError> {
    let social = read_triples(social)?;
    let cross = read_triples(cross)?;
    let mut report = IngestReport {
        total_lines: social.len() + cross.len(),
        ..IngestReport::default()
    };

    let mut has_friend: HashSet<&str> = HashSet::new();
    for r in social.iter().filter(|r| r.a != r.b) {
        has_friend.insert(&r.a);
        has_friend.insert(&r.b);
    }
    let has_favorite: HashSet<&str> = cross.iter().map(|r| r.a.as_str()).collect();
    let keep = |u: &str| has_friend.contains(u) && has_favorite.contains(u);
    let mut dropped_users: HashSet<&str> = HashSet::new();
    for u in has_friend.iter().chain(&has_favorite) {
        if !keep(u) {
            dropped_users.insert(u);
        }
    }
    for r in &social {
        if r.a == r.b {
            report.self_loops += 1;
        } else if !keep(&r.a) || !keep(&r.b) {
            report.filtered += 1;
        }
    }
    report.filtered += cross.iter().filter(|r| !keep(&r.a)).count();
    report.filtered_users = dropped_users.len();

    // Stable by day, so file order survives within a day.
    let mut social: Vec<&Record> = social
        .iter()
        .filter(|r| r.a != r.b && keep(&r.a) && keep(&r.b))
        .collect();
    social.sort_by_key(|r| r.day);
    let mut cross: Vec<&Record> = cross.iter().filter(|r| keep(&r.a)).collect();
    cross.sort_by_key(|r| r.day);

    let mut pending: Vec<Pending> = Vec::new();
    let mut seen_pairs: HashSet<(&str, &str)> = HashSet::new();
    for r in &social {
        let key = if options.directed || r.a < r.b {
            (r.a.as_str(), r.b.as_str())
        } else {
            (r.b.as_str(), r.a.as_str())
        };
        if !seen_pairs.insert(key) {
            report.duplicates += 1;
            continue;
        }
        pending.push(Pending {
            day: r.day,
            class: Class::Social,
            a: &r.a,
            b: &r.b,
        });
    }
    let mut seen_favs: HashSet<(&str, &str)> = HashSet::new();
    let mut items_seen: HashSet<&str> = HashSet::new();
    for r in &cross {
        if !seen_favs.insert((&r.a, &r.b)) {
            report.duplicates += 1;
            continue;
        }
        let class = if items_seen.insert(&r.b) {
            Class::NewItem
        } else {
            Class::Cross
        };
        pending.push(Pending {
            day: r.day,
            class,
            a: &r.a,
            b: &r.b,
        });
    }
    report.accepted = pending.len();

    let mut first_seen: HashMap<&str, Time> = HashMap::new();
    let mut user_order: Vec<&str> = Vec::new();
    let mut by_time: Vec<&Pending> = pending.iter().collect();
    by_time.sort_by_key(|p| (p.day, p.class != Class::Social));
    for p in &by_time {
        let ends: &[&str] = if p.class == Class::Social {
            &[p.a, p.b]
        } else {
            &[p.a]
        };
        for &u in ends {
            if let std::collections::hash_map::Entry::Vacant(v) = first_seen.entry(u) {
                v.insert(p.day);
                user_order.push(u);
            }
        }
    }
    for u in user_order {
        pending.push(Pending {
            day: first_seen[u],
            class: Class::NewUser,
            a: u,
            b: "",
        });
    }
    if pending.is_empty() {
        return Err(IoError::EmptyAfterFilter);
    }
    // Stable: within (day, class) the construction order above is kept.
    pending.sort_by_key(|p| (p.day, p.class));
    if let Some(seed) = options.shuffle_seed {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut start = 0;
        while start < pending.len() {
            let key = (pending[start].day, pending[start].class);
            let end = start
                + pending[start..]
                    .iter()
                    .take_while(|p| (p.day, p.class) == key)
                    .count();
            pending[start..end].shuffle(&mut rng);
            start = end;
        }
    }

    let mut graph = DualGraph::new(options.directed);
    let mut log = EventLog::new(options.directed);
    let mut ids = IdMap::default();
    let mut user_id: HashMap<&str, UserId> = HashMap::new();
    let mut item_id: HashMap<&str, ItemId> = HashMap::new();
    for p in &pending {
        let kind = match p.class {
            Class::NewUser => {
                let user = UserId(ids.users.len() as u32);
                ids.users.push(p.a.to_owned());
                user_id.insert(p.a, user);
                report.synthesized_users += 1;
                EventKind::NewUser {
                    user,
                    seed_friend: None,
                    seed_item: None,
                }
            }
            Class::NewItem => {
                let item = ItemId(ids.items.len() as u32);
                ids.items.push(p.b.to_owned());
                item_id.insert(p.b, item);
                report.synthesized_items += 1;
                EventKind::NewItem {
                    item,
                    owner: user_id[p.a],
                }
            }
            Class::Social => EventKind::SocialLink {
                src: user_id[p.a],
                dst: user_id[p.b],
            },
            Class::Cross => EventKind::CrossLink {
                user: user_id[p.a],
                item: item_id[p.b],
            },
        };
        let event = Event::new(p.day, kind);
        graph.apply_event(&event)?;
        log.push(event)?;
        report.saw_time(p.day);
    }
    Ok((log, report, ids))
}
