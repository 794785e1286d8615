use std::time::{Instant, SystemTime, UNIX_EPOCH};

use qleak_core::leakage::AscentConfig;
use serde::{Deserialize, Serialize};

use crate::input::LoadedEnsemble;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InputRecord {
    pub path: String,
    pub sha256: String,
}

/// Wall-clock fields; the only part of a result that differs between identical runs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Timings {
    pub started_unix_ms: u128,
    pub elapsed_ms: u128,
}

/// Everything needed to reproduce a result file from the file alone.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    pub tool_version: String,
    pub config: AscentConfig,
    pub input: InputRecord,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub channel: Option<InputRecord>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    pub timings: Timings,
}

pub struct Clock {
    started_unix_ms: u128,
    start: Instant,
}

impl Clock {
    pub fn start() -> Self {
        let started_unix_ms = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_millis()).unwrap_or(0);
        Clock { started_unix_ms, start: Instant::now() }
    }

    pub fn timings(&self) -> Timings {
        Timings { started_unix_ms: self.started_unix_ms, elapsed_ms: self.start.elapsed().as_millis() }
    }
}

impl RunManifest {
    pub fn new(command: &str, config: &AscentConfig, input: &LoadedEnsemble, clock: &Clock) -> Self {
        RunManifest {
            command: command.to_string(),
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            config: config.clone(),
            input: InputRecord { path: input.source.clone(), sha256: input.sha256.clone() },
            channel: None,
            notes: input.notes.clone(),
            timings: clock.timings(),
        }
    }
}
