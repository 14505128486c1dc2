use std::cell::Cell;

use crate::error::{Error, Result};

/// Default number of search nodes granted to a single budget.
pub const DEFAULT_BUDGET: u64 = 10_000_000;

/// Counter shared by every search performed on behalf of one request.
///
/// Each backtracking node, refinement round or enumerated candidate consumes
/// one unit. Once the limit is passed every further charge fails with
/// [`Error::BudgetExceeded`].
#[derive(Debug)]
pub struct Budget {
    limit: u64,
    used: Cell<u64>,
}

impl Budget {
    pub fn new(limit: u64) -> Self {
        Budget {
            limit,
            used: Cell::new(0),
        }
    }

    pub fn unlimited() -> Self {
        Budget::new(u64::MAX)
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn used(&self) -> u64 {
        self.used.get()
    }

    pub fn charge(&self, units: u64) -> Result<()> {
        let used = self.used.get().saturating_add(units);
        self.used.set(used);
        if used > self.limit {
            Err(Error::BudgetExceeded(self.limit))
        } else {
            Ok(())
        }
    }

    pub fn tick(&self) -> Result<()> {
        self.charge(1)
    }
}

impl Default for Budget {
    fn default() -> Self {
        Budget::new(DEFAULT_BUDGET)
    }
}
