use super::dual::DualGraph;
use super::event::{Event, Step, Time};
use super::GraphError;

/// Append-only, time-ordered event sequence.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct EventLog {
    directed: bool,
    events: Vec<Event>,
    /// `(time, first position)` for every distinct time, ascending.
    time_index: Vec<(Time, usize)>,
}

impl EventLog {
    pub fn new(directed: bool) -> Self {
        EventLog {
            directed,
            events: Vec::new(),
            time_index: Vec::new(),
        }
    }

    pub fn from_events(
        directed: bool,
        events: impl IntoIterator<Item = Event>,
    ) -> Result<Self, GraphError> {
        let mut log = EventLog::new(directed);
        for e in events {
            log.push(e)?;
        }
        Ok(log)
    }

    pub fn is_directed(&self) -> bool {
        self.directed
    }

    /// Appends an event. Times must be non-decreasing.
    pub fn push(&mut self, event: Event) -> Result<(), GraphError> {
        match self.time_index.last() {
            Some(&(last, _)) if event.time < last => {
                return Err(GraphError::NonMonotoneTime {
                    previous: last,
                    got: event.time,
                });
            }
            Some(&(last, _)) if event.time == last => {}
            _ => self.time_index.push((event.time, self.events.len())),
        }
        self.events.push(event);
        Ok(())
    }

    pub fn events(&self) -> &[Event] {
        &self.events
    }

    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    pub fn first_time(&self) -> Option<Time> {
        self.time_index.first().map(|&(t, _)| t)
    }

    pub fn last_time(&self) -> Option<Time> {
        self.time_index.last().map(|&(t, _)| t)
    }

    /// Distinct event times, ascending.
    pub fn times(&self) -> impl Iterator<Item = Time> + '_ {
        self.time_index.iter().map(|&(t, _)| t)
    }

    /// Number of events with `time <= t`.
    pub fn prefix_len(&self, t: Time) -> usize {
        let k = self.time_index.partition_point(|&(time, _)| time <= t);
        match self.time_index.get(k) {
            Some(&(_, pos)) => pos,
            None => self.events.len(),
        }
    }

    pub fn check_time(&self, t: Time) -> Result<(), GraphError> {
        match (self.first_time(), self.last_time()) {
            (Some(lo), Some(hi)) if t >= lo && t <= hi => Ok(()),
            (lo, hi) => Err(GraphError::TimeOutOfRange {
                t,
                first: lo,
                last: hi,
            }),
        }
    }

    /// Graph after replaying every event with `time <= t`.
    pub fn snapshot_at(&self, t: Time) -> Result<DualGraph, GraphError> {
        self.check_time(t)?;
        let mut replay = Replay::new(self);
        replay.advance_through(t, |_, _, _| {})?;
        Ok(replay.into_graph())
    }

    /// Graph after the full log.
    pub fn final_graph(&self) -> Result<DualGraph, GraphError> {
        let mut g = DualGraph::new(self.directed);
        for e in &self.events {
            g.apply_event(e)?;
        }
        Ok(g)
    }
}

/// Step-by-step replay of a log that lets the caller inspect the graph
/// right before each step lands.
pub struct Replay<'a> {
    log: &'a EventLog,
    graph: DualGraph,
    pos: usize,
    pending: [Option<Step>; 3],
    slot: usize,
}

impl<'a> Replay<'a> {
    pub fn new(log: &'a EventLog) -> Self {
        Replay {
            log,
            graph: DualGraph::new(log.is_directed()),
            pos: 0,
            pending: [None; 3],
            slot: 3,
        }
    }

    pub fn graph(&self) -> &DualGraph {
        &self.graph
    }

    pub fn into_graph(self) -> DualGraph {
        self.graph
    }

    /// Time of the next unapplied step.
    pub fn peek_time(&self) -> Option<Time> {
        if self.slot < 3 && self.pending[self.slot..].iter().any(Option::is_some) {
            return Some(self.log.events[self.pos - 1].time);
        }
        self.log.events.get(self.pos).map(|e| e.time)
    }

    /// Calls `visit(graph_before, time, step)` and then applies the step.
    /// Returns `None` once the log is exhausted.
    pub fn advance<F>(&mut self, mut visit: F) -> Option<Result<(Time, Step), GraphError>>
    where
        F: FnMut(&DualGraph, Time, &Step),
    {
        loop {
            while self.slot < 3 {
                let s = self.pending[self.slot].take();
                self.slot += 1;
                if let Some(step) = s {
                    let time = self.log.events[self.pos - 1].time;
                    if let Err(e) = self.graph.validate_step(&step) {
                        return Some(Err(e));
                    }
                    visit(&self.graph, time, &step);
                    self.graph.apply_step_unchecked(&step);
                    return Some(Ok((time, step)));
                }
            }
            let event = self.log.events.get(self.pos)?;
            self.pending = event.steps();
            self.slot = 0;
            self.pos += 1;
        }
    }

    /// Applies every step with `time <= t`.
    pub fn advance_through<F>(&mut self, t: Time, mut visit: F) -> Result<(), GraphError>
    where
        F: FnMut(&DualGraph, Time, &Step),
    {
        while matches!(self.peek_time(), Some(time) if time <= t) {
            match self.advance(&mut visit) {
                Some(Ok(_)) => {}
                Some(Err(e)) => return Err(e),
                None => break,
            }
        }
        Ok(())
    }
}
