use std::io::Write;

use sfc_core::Span;

/// One error report, printed either as `file:line:col: kind: message` or
/// as a JSON object on its own line.
pub struct Diagnostic {
    pub span: Span,
    pub kind: String,
    pub message: String,
    pub names: Vec<String>,
}

impl Diagnostic {
    pub fn new(span: Span, kind: impl Into<String>, message: impl Into<String>) -> Self {
        Diagnostic {
            span,
            kind: kind.into(),
            message: message.into(),
            names: Vec::new(),
        }
    }

    pub fn with_names(mut self, names: impl IntoIterator<Item = String>) -> Self {
        self.names = names.into_iter().collect();
        self
    }

    pub fn emit(&self, file: &str, json: bool) {
        let mut err = std::io::stderr().lock();
        let _ = if json {
            let record = serde_json::json!({
                "file": file,
                "line": self.span.line,
                "col": self.span.col,
                "kind": self.kind,
                "message": self.message,
                "names": self.names,
            });
            writeln!(err, "{record}")
        } else {
            writeln!(
                err,
                "{file}:{}:{}: {}: {}",
                self.span.line, self.span.col, self.kind, self.message
            )
        };
    }
}
