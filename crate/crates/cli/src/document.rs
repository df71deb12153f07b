//! JSON document holding one MDP.
//!
//! ```json
//! {
//!   "format_version": 1,
//!   "n_states": 2,
//!   "actions": ["stay"],
//!   "rewards": [[0.0], [1.0]],
//!   "transitions": [[[1.0, 0.0]], [[0.0, 1.0]]],
//!   "state_labels": ["low", "high"]
//! }
//! ```
//!
//! `rewards` is indexed `[state][action]` and `transitions`
//! `[state][action][target]`. `state_labels` may be omitted.

use std::fs;
use std::path::Path;

use bisim_core::FiniteMdp;
use serde::{Deserialize, Serialize};

use crate::commands::CliError;

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MdpDocument {
    pub format_version: u32,
    pub n_states: usize,
    pub actions: Vec<String>,
    pub rewards: Vec<Vec<f64>>,
    pub transitions: Vec<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub state_labels: Option<Vec<String>>,
}

impl MdpDocument {
    pub fn from_mdp(mdp: &FiniteMdp) -> Self {
        MdpDocument {
            format_version: FORMAT_VERSION,
            n_states: mdp.n_states(),
            actions: mdp.actions().to_vec(),
            rewards: mdp.rewards(),
            transitions: mdp.transitions(),
            state_labels: None,
        }
    }

    /// Converts to an MDP after checking version and shapes. Probabilities
    /// are not validated here; see [`bisim_core::validate_mdp`].
    pub fn to_mdp(&self) -> Result<FiniteMdp, CliError> {
        if self.format_version != FORMAT_VERSION {
            return Err(CliError::Parse(format!(
                "unsupported format_version {} (expected {FORMAT_VERSION})",
                self.format_version
            )));
        }
        if self.rewards.len() != self.n_states {
            return Err(CliError::Parse(format!(
                "n_states is {} but rewards has {} rows",
                self.n_states,
                self.rewards.len()
            )));
        }
        if let Some(labels) = &self.state_labels {
            if labels.len() != self.n_states {
                return Err(CliError::Parse(format!(
                    "{} state labels for {} states",
                    labels.len(),
                    self.n_states
                )));
            }
        }
        FiniteMdp::from_parts(
            self.actions.clone(),
            self.rewards.clone(),
            self.transitions.clone(),
        )
        .map_err(|e| CliError::Parse(e.to_string()))
    }

    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Parse(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("documents always serialize");
        text.push('\n');
        text
    }

    pub fn read(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        Self::from_json(&text).map_err(|e| match e {
            CliError::Parse(msg) => CliError::Parse(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    pub fn write(&self, path: &Path) -> Result<(), CliError> {
        fs::write(path, self.to_json())
            .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
    }
}
