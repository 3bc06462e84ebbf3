//! Run configuration: a JSON file named by `TRAILCOUNT_CONFIG`, then flags.

use std::path::Path;

use serde::{Deserialize, Serialize};
use trailcount::chain::{DEFAULT_BUDGET, DEFAULT_LAYER_CONSTANT};
use trailcount::signature::region::{DEFAULT_PRECISION, DEFAULT_TOLERANCE};
use trailcount::signature::synth::DEFAULT_SIZE_CAP;

pub const CONFIG_ENV: &str = "TRAILCOUNT_CONFIG";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    /// Worker threads; 0 means one per logical core.
    pub threads: usize,
    pub precision: usize,
    pub tolerance: f64,
    pub seed: u64,
    /// Half-edge budget `d T` for brute-force shuffle checks.
    pub budget: usize,
    /// Vertex cap for synthesized gadgets.
    pub size_cap: usize,
    /// Layer constant `C`.
    pub constant: f64,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            threads: 0,
            precision: DEFAULT_PRECISION,
            tolerance: DEFAULT_TOLERANCE,
            seed: 0,
            budget: DEFAULT_BUDGET,
            size_cap: DEFAULT_SIZE_CAP,
            constant: DEFAULT_LAYER_CONSTANT,
        }
    }
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
        serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))
    }

    /// The file from the environment, or defaults.
    pub fn from_env() -> Result<Self, String> {
        match std::env::var_os(CONFIG_ENV) {
            Some(p) if !p.is_empty() => Self::load(Path::new(&p)),
            _ => Ok(Self::default()),
        }
    }

    pub fn validate(&self) -> Result<(), String> {
        let ok = self.precision > 0
            && self.tolerance > 0.0
            && self.budget > 0
            && self.size_cap > 0
            && self.constant > 0.0;
        if ok {
            Ok(())
        } else {
            Err(format!("configuration values must be positive: {self:?}"))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partial_file_keeps_defaults() {
        let c: RunConfig = serde_json::from_str(r#"{"seed": 9}"#).unwrap();
        assert_eq!(c.seed, 9);
        assert_eq!(c.precision, 128);
        assert!(serde_json::from_str::<RunConfig>(r#"{"sed": 9}"#).is_err());
        c.validate().unwrap();
    }
}
