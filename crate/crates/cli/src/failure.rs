//! Errors surfaced by the command line, with their exit codes.

use std::fmt;
use std::path::Path;

use interlink_core::{
    ConfigError, Diagnostic, EmitError, LayoutError, NotebookParseError, PipelineError, RelationshipParseError,
};
use serde_json::{json, Map, Value};

pub const EXIT_INVALID: u8 = 1;
pub const EXIT_FAILURE: u8 = 2;

/// A failed command, reported as text or as a JSON error object.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub kind: &'static str,
    pub message: String,
    pub fields: Map<String, Value>,
}

impl Failure {
    fn new(code: u8, kind: &'static str, message: impl Into<String>) -> Self {
        Self { code, kind, message: message.into(), fields: Map::new() }
    }

    fn with(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.fields.insert(key.to_owned(), value.into());
        self
    }

    pub fn io(path: &Path, err: &std::io::Error) -> Self {
        Self::new(EXIT_FAILURE, "io", format!("cannot read {}: {err}", path.display()))
            .with("path", path.display().to_string())
    }

    pub fn usage(message: impl Into<String>) -> Self {
        Self::new(EXIT_FAILURE, "usage", message)
    }

    pub fn notebook(path: &Path, err: NotebookParseError) -> Self {
        let f = Self::new(EXIT_FAILURE, "notebook", format!("{}: {err}", path.display()))
            .with("path", path.display().to_string());
        match err {
            NotebookParseError::Io { .. } => Self { kind: "io", ..f },
            NotebookParseError::Syntax { byte_offset, line, column, .. } => {
                f.with("byteOffset", byte_offset).with("line", line).with("column", column)
            }
            NotebookParseError::Structure { cell_index: Some(i), .. } => f.with("cellIndex", i),
            _ => f,
        }
    }

    pub fn relationships(path: &Path, err: RelationshipParseError) -> Self {
        let mut f = Self::new(EXIT_FAILURE, "relationships", format!("{}: {err}", path.display()))
            .with("path", path.display().to_string());
        if let Some(p) = err.json_path() {
            f = f.with("jsonPath", p);
        }
        match err {
            RelationshipParseError::Io { .. } => Self { kind: "io", ..f },
            RelationshipParseError::Syntax { line, column, .. } => f.with("line", line).with("column", column),
            _ => f,
        }
    }

    pub fn config(path: Option<&Path>, message: impl fmt::Display) -> Self {
        match path {
            Some(p) => Self::new(EXIT_FAILURE, "config", format!("{}: {message}", p.display()))
                .with("path", p.display().to_string()),
            None => Self::new(EXIT_FAILURE, "config", message.to_string()),
        }
    }

    pub fn config_syntax(path: &Path, err: &serde_json::Error) -> Self {
        Self::config(Some(path), err).with("line", err.line()).with("column", err.column())
    }

    pub fn invalid(path: &Path, diagnostics: &[Diagnostic]) -> Self {
        let errors = diagnostics.iter().filter(|d| d.rule.severity() == interlink_core::Severity::Error).count();
        Self::new(EXIT_INVALID, "validation", format!("{}: {errors} error(s) in relationships", path.display()))
            .with("path", path.display().to_string())
            .with("diagnostics", serde_json::to_value(diagnostics).expect("diagnostics serialize"))
    }

    pub fn pipeline(rel_path: &Path, err: PipelineError) -> Self {
        match err {
            PipelineError::Invalid(d) => Self::invalid(rel_path, &d),
            PipelineError::Layout(LayoutError::Config(c)) => Self::from(c),
            PipelineError::Layout(e) => Self::new(EXIT_FAILURE, "layout", e.to_string()),
        }
    }

    pub fn emit(err: EmitError) -> Self {
        match err {
            EmitError::Io { ref path, .. } => {
                let p = path.display().to_string();
                Self::new(EXIT_FAILURE, "io", err.to_string()).with("path", p)
            }
            EmitError::MissingViewerAssets { ref searched } => {
                let f = Self::new(EXIT_FAILURE, "missingViewerAssets", err.to_string());
                match searched {
                    Some(p) => f.with("path", p.display().to_string()),
                    None => f,
                }
            }
        }
    }

    pub fn to_json(&self) -> Value {
        let mut obj = Map::new();
        obj.insert("kind".into(), self.kind.into());
        obj.insert("message".into(), self.message.clone().into());
        obj.extend(self.fields.clone());
        json!({ "error": obj })
    }
}

impl From<ConfigError> for Failure {
    fn from(e: ConfigError) -> Self {
        Self::config(None, e)
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "error: {}", self.message)
    }
}
