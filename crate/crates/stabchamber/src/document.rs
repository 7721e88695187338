//! The JSON configuration document accepted by the CLI.
//!
//! ```json
//! {
//!   "n": 3,
//!   "on": { "1": [3], "2": [3] },
//!   "extra_curves": [[1, -1, -1, 0]],
//!   "labels": { "1": "first point" }
//! }
//! ```
//!
//! `on` maps a point index to the later exceptional curves it lies on; JSON
//! object keys are strings and are parsed as indices. `extra_curves` lists
//! integral classes in the (H, Chat_1, ..., Chat_n) basis for special
//! position declarations.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::configuration::BlowUpConfig;
use crate::error::{EngineError, Result};
use crate::lattice::NSClass;

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigDocument {
    pub n: usize,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub on: BTreeMap<String, Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub extra_curves: Option<Vec<Vec<i64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<BTreeMap<String, String>>,
}

impl ConfigDocument {
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text)
            .map_err(|e| EngineError::Argument(format!("malformed configuration document: {e}")))
    }

    /// Build the blow-up configuration. Key-shape problems are argument
    /// errors (parse class); rule violations are left to `validate()`.
    pub fn to_config(&self) -> Result<BlowUpConfig> {
        let mut on: BTreeMap<usize, BTreeSet<usize>> = BTreeMap::new();
        for (key, carriers) in &self.on {
            let i: usize = key.parse().map_err(|_| {
                EngineError::Argument(format!("on-relation key {key:?} is not an index"))
            })?;
            on.insert(i, carriers.iter().copied().collect());
        }
        let mut extra = Vec::new();
        if let Some(rows) = &self.extra_curves {
            for row in rows {
                if row.len() != self.n + 1 {
                    return Err(EngineError::Argument(format!(
                        "extra curve {row:?} has length {}, expected {}",
                        row.len(),
                        self.n + 1
                    )));
                }
                extra.push(NSClass::from_integers(row));
            }
        }
        Ok(BlowUpConfig::new(self.n, on, extra))
    }
}

/// Name of the bundled fixture structurally equal to this configuration, if
/// any. Lets reports self-describe when run on the shipped examples.
pub fn builtin_fixture_name(cfg: &BlowUpConfig) -> Option<&'static str> {
    if !cfg.extra_curves().is_empty() {
        return None;
    }
    let shape: Vec<(usize, Vec<usize>)> = cfg
        .on_relation()
        .iter()
        .map(|(&i, c)| (i, c.iter().copied().collect()))
        .collect();
    type OnShape = &'static [(usize, &'static [usize])];
    let named: &[(&str, usize, OnShape)] = &[
        ("plane", 0, &[]),
        ("one_point", 1, &[]),
        ("two_disjoint", 2, &[]),
        ("three_disjoint", 3, &[]),
        ("chain_two", 2, &[(1, &[2])]),
        ("chain_three", 3, &[(1, &[2]), (2, &[3])]),
        ("two_points_on_one_curve", 3, &[(1, &[3]), (2, &[3])]),
    ];
    for (name, n, on) in named {
        if cfg.n() == *n
            && shape.len() == on.len()
            && shape
                .iter()
                .zip(on.iter())
                .all(|((i, c), (j, d))| i == j && c.as_slice() == *d)
        {
            return Some(name);
        }
    }
    None
}
