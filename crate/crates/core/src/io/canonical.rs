use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use super::{IngestReport, IoError, FORMAT_VERSION};
use crate::graph::{DualGraph, Event, EventKind, EventLog, GraphError, ItemId, Time, UserId};

const COLUMNS: &str = "t,kind,arg1,arg2";

fn header(directed: bool) -> String {
    format!("{FORMAT_VERSION} {COLUMNS} directed={}", u8::from(directed))
}

fn opt(x: Option<u32>) -> i64 {
    x.map_or(-1, i64::from)
}

pub fn write_log<W: Write>(log: &EventLog, mut out: W) -> std::io::Result<()> {
    writeln!(out, "{}", header(log.is_directed()))?;
    for e in log.events() {
        let t = e.time;
        match e.kind {
            EventKind::NewUser {
                seed_friend,
                seed_item,
                ..
            } => writeln!(
                out,
                "{t},U,{},{}",
                opt(seed_friend.map(|u| u.0)),
                opt(seed_item.map(|i| i.0))
            )?,
            EventKind::NewItem { item, owner } => writeln!(out, "{t},I,{},{}", item.0, owner.0)?,
            EventKind::SocialLink { src, dst } => writeln!(out, "{t},S,{},{}", src.0, dst.0)?,
            EventKind::CrossLink { user, item } => writeln!(out, "{t},C,{},{}", user.0, item.0)?,
        }
    }
    out.flush()
}

pub fn serialize_log(log: &EventLog) -> String {
    let mut buf = Vec::with_capacity(log.len() * 16 + 64);
    write_log(log, &mut buf).expect("writing to memory");
    String::from_utf8(buf).expect("ascii output")
}

pub fn save_log(log: &EventLog, path: &Path) -> Result<(), IoError> {
    write_log(log, BufWriter::new(File::create(path)?))?;
    Ok(())
}

fn parse_header(line: &str) -> Result<bool, IoError> {
    let mut parts = line.split_whitespace();
    if parts.next() != Some(FORMAT_VERSION) || parts.next() != Some(COLUMNS) {
        return Err(IoError::BadHeader);
    }
    let mut directed = false;
    for p in parts {
        match p {
            "directed=0" => directed = false,
            "directed=1" => directed = true,
            _ => return Err(IoError::BadHeader),
        }
    }
    Ok(directed)
}

/// Builds a log line by line, creating missing nodes on demand.
struct Builder {
    graph: DualGraph,
    log: EventLog,
    report: IngestReport,
}

impl Builder {
    fn emit(&mut self, event: Event) -> Result<(), GraphError> {
        self.graph.apply_event(&event)?;
        self.log.push(event)
    }

    /// Creates users up to and including `user`; returns whether any were missing.
    fn ensure_user(&mut self, t: Time, user: UserId) -> Result<bool, GraphError> {
        let missing = self.graph.user_count() <= user.index();
        while self.graph.user_count() <= user.index() {
            let next = UserId(self.graph.user_count() as u32);
            self.emit(Event::new(
                t,
                EventKind::NewUser {
                    user: next,
                    seed_friend: None,
                    seed_item: None,
                },
            ))?;
            self.report.synthesized_users += 1;
        }
        Ok(missing)
    }

    /// Creates items up to and including `item`, each owned by `owner`.
    fn ensure_item(&mut self, t: Time, item: ItemId, owner: UserId) -> Result<bool, GraphError> {
        let missing = self.graph.item_count() <= item.index();
        while self.graph.item_count() <= item.index() {
            let next = ItemId(self.graph.item_count() as u32);
            self.emit(Event::new(t, EventKind::NewItem { item: next, owner }))?;
            self.report.synthesized_items += 1;
        }
        Ok(missing)
    }

    fn line(&mut self, line_no: usize, line: &str) -> Result<(), IoError> {
        let bad = |reason: &str| IoError::malformed(line_no, reason);
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 4 {
            return Err(bad("expected 4 comma-separated fields"));
        }
        let t: Time = fields[0].parse().map_err(|_| bad("bad time"))?;
        let num = |s: &str| s.parse::<i64>().map_err(|_| bad("bad integer"));
        let (a1, a2) = (num(fields[2])?, num(fields[3])?);
        let id = |x: i64| u32::try_from(x).map_err(|_| bad("id out of range"));
        if let Some(previous) = self.log.last_time() {
            if t < previous {
                return Err(IoError::NonMonotoneTime {
                    line: line_no,
                    previous,
                    got: t,
                });
            }
        }
        self.report.total_lines += 1;
        self.report.saw_time(t);

        let mut dangling = false;
        let kind = match fields[1] {
            "U" => {
                let seed = |x: i64| if x == -1 { Ok(None) } else { id(x).map(Some) };
                let friend = seed(a1)?.map(UserId);
                let item = seed(a2)?.map(ItemId);
                if let Some(f) = friend {
                    dangling |= self.ensure_user(t, f)?;
                }
                if let Some(i) = item.filter(|i| i.index() >= self.graph.item_count()) {
                    let owner = friend
                        .ok_or_else(|| bad("unknown seed item needs a seed friend as owner"))?;
                    dangling |= self.ensure_item(t, i, owner)?;
                }
                EventKind::NewUser {
                    user: UserId(self.graph.user_count() as u32),
                    seed_friend: friend,
                    seed_item: item,
                }
            }
            "I" => {
                let (item, owner) = (ItemId(id(a1)?), UserId(id(a2)?));
                dangling |= self.ensure_user(t, owner)?;
                if item.index() < self.graph.item_count() {
                    self.report.duplicates += 1;
                    return Ok(());
                }
                if item.index() > self.graph.item_count() {
                    dangling = true;
                    self.ensure_item(t, ItemId(item.0 - 1), owner)?;
                }
                EventKind::NewItem { item, owner }
            }
            "S" => {
                let (src, dst) = (UserId(id(a1)?), UserId(id(a2)?));
                dangling |= self.ensure_user(t, src)?;
                dangling |= self.ensure_user(t, dst)?;
                EventKind::SocialLink { src, dst }
            }
            "C" => {
                let (user, item) = (UserId(id(a1)?), ItemId(id(a2)?));
                dangling |= self.ensure_user(t, user)?;
                if self.ensure_item(t, item, user)? {
                    // the synthesized owner link is this very favorite
                    self.report.dangling += 1;
                    self.report.accepted += 1;
                    return Ok(());
                }
                EventKind::CrossLink { user, item }
            }
            _ => return Err(bad("kind must be one of U, I, S, C")),
        };
        match self.emit(Event::new(t, kind)) {
            Ok(()) => {
                self.report.accepted += 1;
                if dangling {
                    self.report.dangling += 1;
                }
                Ok(())
            }
            Err(GraphError::DuplicateLink(_) | GraphError::LinkAlreadyPresent(_)) => {
                self.report.duplicates += 1;
                Ok(())
            }
            Err(e) => Err(IoError::malformed(line_no, e.to_string())),
        }
    }
}

/// Reads a canonical log. Duplicate lines are dropped; links to nodes that
/// were never created get a synthesized creation event at the same time.
pub fn read_log<R: BufRead>(input: R) -> Result<(EventLog, IngestReport), IoError> {
    let mut lines = input.lines();
    let first = lines.next().ok_or(IoError::BadHeader)??;
    let directed = parse_header(first.trim_end_matches('\r'))?;
    let mut b = Builder {
        graph: DualGraph::new(directed),
        log: EventLog::new(directed),
        report: IngestReport::default(),
    };
    for (k, line) in lines.enumerate() {
        let line = line?;
        let line = line.trim_end_matches('\r');
        if line.is_empty() {
            continue;
        }
        b.line(k + 2, line)?;
    }
    Ok((b.log, b.report))
}

pub fn parse_log(text: &str) -> Result<(EventLog, IngestReport), IoError> {
    read_log(text.as_bytes())
}

pub fn load_log(path: &Path) -> Result<(EventLog, IngestReport), IoError> {
    read_log(BufReader::new(File::open(path)?))
}
