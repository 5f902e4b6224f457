use std::time::{Duration, Instant};

use crate::error::{Error, Result};

/// Wall-clock allowance for long-running searches. Cloning shares the deadline.
#[derive(Clone, Copy, Debug, Default)]
pub struct Budget {
    deadline: Option<Instant>,
}

impl Budget {
    pub fn unlimited() -> Self {
        Self { deadline: None }
    }

    pub fn seconds(secs: f64) -> Self {
        Self {
            deadline: Some(Instant::now() + Duration::from_secs_f64(secs.max(0.0))),
        }
    }

    pub fn is_limited(&self) -> bool {
        self.deadline.is_some()
    }

    pub fn check(&self, stage: &str) -> Result<()> {
        match self.deadline {
            Some(d) if Instant::now() >= d => Err(Error::BudgetExhausted {
                stage: stage.to_string(),
            }),
            _ => Ok(()),
        }
    }
}
