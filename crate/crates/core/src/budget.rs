use std::time::{Duration, Instant};

use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("wall-clock budget exhausted")]
pub struct Interrupted;

/// Cooperative wall-clock deadline, checked at iteration boundaries.
#[derive(Debug, Clone, Copy, Default)]
pub struct Deadline(Option<Instant>);

impl Deadline {
    pub const fn none() -> Self {
        Deadline(None)
    }

    pub fn after(budget: Duration) -> Self {
        Deadline(Some(Instant::now() + budget))
    }

    pub fn at(instant: Instant) -> Self {
        Deadline(Some(instant))
    }

    pub fn expired(&self) -> bool {
        matches!(self.0, Some(t) if Instant::now() >= t)
    }

    pub fn check(&self) -> Result<(), Interrupted> {
        if self.expired() {
            Err(Interrupted)
        } else {
            Ok(())
        }
    }
}
