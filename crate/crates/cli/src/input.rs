use std::io::Read;

use arrform::arrangement::Arrangement;
use arrform::rigidity::{self, Framework};
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::report::CliError;

/// A parsed input file. Frameworks also stand for the arrangement of lines
/// along their bars.
pub struct Input {
    pub digest: String,
    pub arrangement: Arrangement,
    pub framework: Option<Framework>,
}

impl Input {
    pub fn digest(&self) -> Option<String> {
        Some(self.digest.clone())
    }

    pub fn framework(&self) -> Result<&Framework, CliError> {
        self.framework
            .as_ref()
            .ok_or_else(|| CliError::Input("this command needs a framework (vertices and edges)".into()))
    }
}

/// Reads arrangement or framework JSON from a path, or from stdin for `-`.
pub fn read(path: &str) -> Result<Input, CliError> {
    let io = |source| CliError::Io {
        path: path.to_string(),
        source,
    };
    let bytes = if path == "-" {
        let mut buf = Vec::new();
        std::io::stdin().read_to_end(&mut buf).map_err(io)?;
        buf
    } else {
        std::fs::read(path).map_err(io)?
    };
    parse(&bytes)
}

pub fn parse(bytes: &[u8]) -> Result<Input, CliError> {
    let digest = format!("{:x}", Sha256::digest(bytes));
    let value: Value = serde_json::from_slice(bytes).map_err(arrform::Error::from)?;
    let Some(obj) = value.as_object() else {
        return Err(CliError::Input("expected a JSON object".into()));
    };
    if obj.contains_key("forms") {
        let arrangement: Arrangement = serde_json::from_value(value).map_err(arrform::Error::from)?;
        Ok(Input {
            digest,
            arrangement,
            framework: None,
        })
    } else if obj.contains_key("vertices") {
        let framework: Framework = serde_json::from_value(value).map_err(arrform::Error::from)?;
        Ok(Input {
            digest,
            arrangement: rigidity::arrangement_of(&framework)?,
            framework: Some(framework),
        })
    } else {
        Err(CliError::Input(
            "expected an arrangement (`ambient`, `forms`) or a framework (`vertices`, `edges`)".into(),
        ))
    }
}
