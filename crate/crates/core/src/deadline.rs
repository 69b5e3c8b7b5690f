use std::time::{Duration, Instant};

/// A point in time after which a cooperative solver gives up.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Deadline(Option<Instant>);

/// Returned when a solver notices its deadline has passed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
#[error("deadline exceeded")]
pub struct TimedOut;

impl Deadline {
    pub const NEVER: Deadline = Deadline(None);

    pub fn after(limit: Duration) -> Deadline {
        Deadline(Instant::now().checked_add(limit))
    }

    pub fn at(instant: Instant) -> Deadline {
        Deadline(Some(instant))
    }

    #[inline]
    pub fn check(&self) -> Result<(), TimedOut> {
        match self.0 {
            Some(at) if Instant::now() >= at => Err(TimedOut),
            _ => Ok(()),
        }
    }
}

impl Default for Deadline {
    fn default() -> Self {
        Deadline::NEVER
    }
}
