use crate::canon::{self, Value};

/// Driver-level failures, all rendered as structured JSON on stderr.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("config error at `{path}`: {message}")]
    Config { path: String, message: String },

    #[error("i/o error on {path}: {message}")]
    Io { path: String, message: String },

    #[error(transparent)]
    Core(#[from] jcsim_core::Error),
}

impl CliError {
    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Config { .. } => "config",
            CliError::Io { .. } => "io",
            CliError::Core(_) => "core",
        }
    }

    /// Structured error document for stderr.
    pub fn to_json(&self) -> String {
        let mut fields = vec![
            ("kind", Value::Str(self.kind().into())),
            ("message", Value::Str(self.to_string())),
        ];
        if let CliError::Config { path, .. } = self {
            fields.push(("path", Value::Str(path.clone())));
        }
        canon::to_json(&Value::object([("error", Value::object(fields))]))
    }
}
