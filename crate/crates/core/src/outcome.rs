/// Result of a capped search or construction.
#[derive(Debug, Clone, PartialEq)]
pub enum SearchOutcome<W> {
    Found(W),
    NotExists,
    /// Nothing was found within the cap; `partial` holds whatever was
    /// collected on the way, if anything.
    NotUpToCap { cap: usize, partial: Option<W> },
}

impl<W> SearchOutcome<W> {
    pub fn is_found(&self) -> bool {
        matches!(self, SearchOutcome::Found(_))
    }

    pub fn witness(&self) -> Option<&W> {
        match self {
            SearchOutcome::Found(w) => Some(w),
            _ => None,
        }
    }

    pub fn map<V>(self, f: impl FnOnce(W) -> V) -> SearchOutcome<V> {
        match self {
            SearchOutcome::Found(w) => SearchOutcome::Found(f(w)),
            SearchOutcome::NotExists => SearchOutcome::NotExists,
            SearchOutcome::NotUpToCap { cap, partial } => SearchOutcome::NotUpToCap {
                cap,
                partial: partial.map(f),
            },
        }
    }
}
