use std::collections::BTreeMap;

use arrform::Error;
use serde::Serialize;
use serde_json::Value;

/// What every subcommand prints on stdout.
#[derive(Debug, Default, Serialize)]
pub struct Report {
    pub command: String,
    /// SHA-256 of the input bytes, when the command read a file.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub input_digest: Option<String>,
    pub verdicts: BTreeMap<String, Value>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub tables: BTreeMap<String, Value>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub certificates: BTreeMap<String, Value>,
}

impl Report {
    pub fn new(command: &str, input_digest: Option<String>) -> Self {
        Report {
            command: command.to_string(),
            input_digest,
            ..Default::default()
        }
    }

    pub fn verdict(&mut self, key: &str, value: impl Serialize) {
        self.verdicts.insert(key.to_string(), to_value(value));
    }

    pub fn table(&mut self, key: &str, value: impl Serialize) {
        self.tables.insert(key.to_string(), to_value(value));
    }

    pub fn certificate(&mut self, key: &str, value: impl Serialize) {
        self.certificates.insert(key.to_string(), to_value(value));
    }
}

fn to_value(v: impl Serialize) -> Value {
    serde_json::to_value(v).expect("library types serialize")
}

/// A finished command: the JSON it prints, an optional human rendering for
/// `--pretty`, and whether its yes/no verdict held.
pub struct Outcome {
    pub body: Value,
    pub rendering: Option<String>,
    pub holds: bool,
    /// Fail with status 1 on a negative verdict even without `--assert`.
    pub strict: bool,
}

impl Outcome {
    pub fn new(report: Report, holds: bool) -> Self {
        Outcome {
            body: to_value(report),
            rendering: None,
            holds,
            strict: false,
        }
    }

    pub fn raw(body: Value) -> Self {
        Outcome {
            body,
            rendering: None,
            holds: true,
            strict: false,
        }
    }

    pub fn rendered(mut self, text: String) -> Self {
        self.rendering = Some(text);
        self
    }
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("cannot read `{path}`: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("{0}")]
    Input(String),
    #[error(transparent)]
    Library(#[from] Error),
}

impl CliError {
    /// 3 for a violated internal invariant, 2 for anything wrong with the input.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Library(e) if e.is_internal() => 3,
            _ => 2,
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            CliError::Io { .. } => "io",
            CliError::Input(_) => "input",
            CliError::Library(e) if e.is_internal() => "internal_inconsistency",
            CliError::Library(Error::Parse(_)) => "malformed_input",
            CliError::Library(_) => "precondition",
        }
    }

    /// The machine-readable error object printed on stdout.
    pub fn to_json(&self, command: &str) -> Value {
        serde_json::json!({
            "command": command,
            "error": { "kind": self.kind(), "message": self.to_string() },
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes_separate_bugs_from_bad_input() {
        assert_eq!(CliError::Library(Error::Inconsistent("x".into())).exit_code(), 3);
        assert_eq!(CliError::Library(Error::Parse("x".into())).exit_code(), 2);
        assert_eq!(CliError::Input("x".into()).exit_code(), 2);
        let e = CliError::Library(Error::Inconsistent("x".into())).to_json("betti");
        assert_eq!(e["error"]["kind"], "internal_inconsistency");
    }
}
