use super::DistractionState;
use crate::game::Player;
use crate::{Priority, Vertex};

/// Hooks invoked by the solver as it updates its state. Every method has an
/// empty default, and calls happen in a fixed order that does not depend on
/// the worker count.
///
/// Methods that receive the state see it as it was *before* the reported
/// update is applied.
pub trait Observer {
    fn level_started(&mut self, _priority: Priority, _state: &DistractionState) {}

    /// `v` was evaluated with the one-step estimate.
    fn evaluated(
        &mut self,
        _v: Vertex,
        _winner: Player,
        _choice: Option<Vertex>,
        _state: &DistractionState,
    ) {
    }

    fn distraction_added(&mut self, _v: Vertex, _priority: Priority) {}

    /// `v` is about to be frozen at `level`.
    fn frozen(&mut self, _v: Vertex, _level: Priority, _state: &DistractionState) {}

    /// The distraction flag of `v` is about to be cleared by a restart at `level`.
    fn reset(&mut self, _v: Vertex, _level: Priority) {}

    fn thawed(&mut self, _v: Vertex, _level: Priority, _state: &DistractionState) {}

    fn level_finished(&mut self, _priority: Priority, _changed: bool) {}
}

/// Observer that ignores everything.
#[derive(Debug, Default, Clone, Copy)]
pub struct Silent;

impl Observer for Silent {}

/// One recorded state update.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TraceEvent {
    Added(Vertex),
    Frozen(Vertex, Priority),
    Reset(Vertex),
    Thawed(Vertex),
    LevelDone(Priority, bool),
}

/// Records the sequence of distraction and freeze updates.
#[derive(Debug, Default, Clone)]
pub struct Trace {
    pub events: Vec<TraceEvent>,
}

impl Observer for Trace {
    fn distraction_added(&mut self, v: Vertex, _priority: Priority) {
        self.events.push(TraceEvent::Added(v));
    }

    fn frozen(&mut self, v: Vertex, level: Priority, _state: &DistractionState) {
        self.events.push(TraceEvent::Frozen(v, level));
    }

    fn reset(&mut self, v: Vertex, _level: Priority) {
        self.events.push(TraceEvent::Reset(v));
    }

    fn thawed(&mut self, v: Vertex, _level: Priority, _state: &DistractionState) {
        self.events.push(TraceEvent::Thawed(v));
    }

    fn level_finished(&mut self, priority: Priority, changed: bool) {
        self.events.push(TraceEvent::LevelDone(priority, changed));
    }
}
