use serde_json::{json, Value};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("unknown identifier '{name}' at line {line}, column {column}")]
    UnknownIdentifier { name: String, line: usize, column: usize },
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Io(#[from] std::io::Error),
    #[error("{0}")]
    Core(#[from] addilog::Error),
}

impl CliError {
    pub fn kind(&self) -> String {
        match self {
            CliError::Syntax { .. } => "SyntaxError".into(),
            CliError::UnknownIdentifier { .. } => "UnknownIdentifier".into(),
            CliError::Usage(_) => "UsageError".into(),
            CliError::Io(_) => "IoError".into(),
            CliError::Core(e) => {
                let d = format!("{e:?}");
                d.split(|c: char| !c.is_alphanumeric()).next().unwrap_or("Error").to_string()
            }
        }
    }

    pub fn to_json(&self) -> Value {
        let mut err = json!({ "kind": self.kind(), "message": self.to_string() });
        if let CliError::Syntax { line, column, .. } | CliError::UnknownIdentifier { line, column, .. } = self {
            err["line"] = json!(line);
            err["column"] = json!(column);
        }
        json!({ "schema": 1, "error": err })
    }
}
