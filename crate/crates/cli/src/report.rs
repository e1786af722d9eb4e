//! Machine-readable run reports.
//!
//! A report is a pure function of the command, its options and the bytes of
//! its input files, so repeated runs produce identical files. Wall-clock
//! timings are only written with `--timings`.

use std::path::Path;
use std::process::ExitCode;

use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Decided,
    Unknown,
    /// A corpus run with failing criteria.
    Failed,
}

impl Status {
    pub fn exit_code(self) -> ExitCode {
        match self {
            Status::Decided => ExitCode::SUCCESS,
            Status::Unknown => ExitCode::from(2),
            Status::Failed => ExitCode::from(1),
        }
    }

    /// `Unknown` absorbs `Decided`; `Failed` absorbs both.
    pub fn and(self, other: Status) -> Status {
        match (self, other) {
            (Status::Failed, _) | (_, Status::Failed) => Status::Failed,
            (Status::Unknown, _) | (_, Status::Unknown) => Status::Unknown,
            _ => Status::Decided,
        }
    }
}

/// Everything the report digest covers.
#[derive(Default)]
pub struct Inputs {
    hasher: Sha256,
}

impl Inputs {
    pub fn add(&mut self, label: &str, bytes: &[u8]) {
        for part in [label.as_bytes(), bytes] {
            self.hasher.update((part.len() as u64).to_le_bytes());
            self.hasher.update(part);
        }
    }

    pub fn read(&mut self, path: &Path) -> std::io::Result<String> {
        let text = std::fs::read_to_string(path)?;
        self.add(&path.display().to_string(), text.as_bytes());
        Ok(text)
    }

    pub fn digest(self) -> String {
        hex::encode(self.hasher.finalize())
    }
}

#[derive(Debug, Serialize)]
pub struct RunReport {
    pub schema_version: u32,
    pub command: String,
    /// SHA-256 over the options and input files.
    pub inputs_digest: String,
    pub status: Status,
    pub records: Vec<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u128>,
}

impl RunReport {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }
}
