use std::path::Path;

use exfit_core::DEFAULT_BUDGET;
use serde::Deserialize;

pub const DEFAULT_CAP: usize = 8;

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct File {
    cap: Option<usize>,
    budget: Option<u64>,
}

/// Caps and budgets in effect for one invocation.
#[derive(Debug, Clone, Copy)]
pub struct Settings {
    pub cap: usize,
    pub budget: u64,
}

impl Settings {
    /// Flags override the config file, which overrides the built-in defaults.
    pub fn load(path: Option<&Path>, cap: Option<usize>, budget: Option<u64>) -> Result<Settings, String> {
        let file = match path {
            None => File::default(),
            Some(p) => {
                let text = std::fs::read_to_string(p).map_err(|e| format!("{}: {e}", p.display()))?;
                toml::from_str(&text).map_err(|e| format!("{}: {e}", p.display()))?
            }
        };
        Ok(Settings {
            cap: cap.or(file.cap).unwrap_or(DEFAULT_CAP),
            budget: budget.or(file.budget).unwrap_or(DEFAULT_BUDGET),
        })
    }
}
