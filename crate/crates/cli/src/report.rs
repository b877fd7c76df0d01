use serde::{Deserialize, Serialize};
use serde_json::Value;

/// Bumped whenever a field of the envelope or a payload changes meaning.
pub const SCHEMA_VERSION: &str = "1.0";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CommandEcho {
    pub name: String,
    /// The parsed arguments of the subcommand.
    pub args: Value,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReportEnvelope {
    pub schema_version: String,
    pub tool_version: String,
    pub command: CommandEcho,
    /// Zero under `--reproducible`.
    pub wall_time_ms: u64,
    pub result: Value,
    pub warnings: Vec<String>,
}

impl ReportEnvelope {
    pub fn new(command: CommandEcho, result: Value, warnings: Vec<String>, wall_time_ms: u64) -> Self {
        Self {
            schema_version: SCHEMA_VERSION.into(),
            tool_version: env!("CARGO_PKG_VERSION").into(),
            command,
            wall_time_ms,
            result,
            warnings,
        }
    }

    /// Pretty JSON with a trailing newline. Floats use the shortest
    /// representation that round-trips; object keys come out sorted.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("envelope serializes");
        s.push('\n');
        s
    }
}

/// JSON Schema (draft 2020-12) for [`ReportEnvelope`] and every payload.
pub const REPORT_SCHEMA: &str = include_str!("../schema/report.schema.json");
