//! Caps and seeds for suite runs. Every field has a default, so an empty file
//! is a valid config.

use serde::{Deserialize, Serialize};

use crate::CliError;

/// The shipped defaults, kept in sync with [`Config::default`] by a test.
pub const DEFAULT_CONFIG: &str = include_str!("../data/default.toml");

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    /// Base seed; each entry mixes in its own name.
    pub seed: u64,
    pub caps: Caps,
    pub metric: MetricConfig,
    pub oracle: OracleConfig,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Caps {
    /// Breadth-first closure cap for matrix groups.
    pub matrix_elements: usize,
    /// Largest permutation degree built from a matrix group.
    pub max_degree: usize,
    /// Perfect core is cross-checked on the subgroup lattice up to this order.
    pub lattice: usize,
    /// Stabilizer chain orders are compared with naive enumeration up to this order.
    pub enumeration: usize,
    /// Deepest tree level.
    pub max_level: usize,
    /// Order cap for wreath products.
    pub wreath_order: u64,
    /// Highest nilpotency class for layer ranks.
    pub max_class: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MetricConfig {
    /// Random words per tower; the check covers `n^3` triples.
    pub sample_size: usize,
    pub max_word_length: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OracleConfig {
    pub smith_samples: usize,
    pub smith_max_dim: usize,
    pub smith_entry_bound: i64,
    pub magnus_pairs: usize,
    pub magnus_cutoff: usize,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            seed: 20240917,
            caps: Caps::default(),
            metric: MetricConfig::default(),
            oracle: OracleConfig::default(),
        }
    }
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            matrix_elements: 1 << 24,
            max_degree: 1 << 16,
            lattice: 2000,
            enumeration: 5000,
            max_level: 7,
            wreath_order: 1 << 40,
            max_class: 8,
        }
    }
}

impl Default for MetricConfig {
    fn default() -> Self {
        MetricConfig {
            sample_size: 12,
            max_word_length: 10,
        }
    }
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            smith_samples: 1000,
            smith_max_dim: 6,
            smith_entry_bound: 9,
            magnus_pairs: 1000,
            magnus_cutoff: 5,
        }
    }
}

impl Config {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn load(path: Option<&std::path::Path>) -> Result<Self, CliError> {
        match path {
            None => Ok(Config::default()),
            Some(p) => Self::parse(&crate::read_file(p)?),
        }
    }

    /// Seed for one named entry: FNV-1a of the name mixed into the base seed.
    pub fn entry_seed(&self, name: &str) -> u64 {
        let mut h: u64 = 0xcbf29ce484222325;
        for b in name.bytes() {
            h ^= b as u64;
            h = h.wrapping_mul(0x100000001b3);
        }
        h ^ self.seed
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shipped_file_matches_defaults() {
        assert_eq!(Config::parse(DEFAULT_CONFIG).unwrap(), Config::default());
        assert_eq!(Config::parse("").unwrap(), Config::default());
    }

    #[test]
    fn unknown_keys_rejected() {
        assert!(Config::parse("sed = 3").is_err());
        let c = Config::parse("[caps]\nlattice = 10").unwrap();
        assert_eq!(c.caps.lattice, 10);
        assert_eq!(c.caps.enumeration, 5000);
    }
}
