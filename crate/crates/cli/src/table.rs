use std::io::Write;
use std::path::Path;

use optomech::format::sci;

use crate::error::{CliError, CliResult};

/// A CSV document held in memory until it is written out in one go.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    header: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new<S: Into<String>>(header: impl IntoIterator<Item = S>) -> Self {
        Self { header: header.into_iter().map(Into::into).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn push_numbers(&mut self, row: &[f64]) {
        self.push(row.iter().map(|&x| sci(x)).collect());
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for line in std::iter::once(&self.header).chain(&self.rows) {
            out.push_str(&line.join(","));
            out.push('\n');
        }
        out
    }

    /// Writes to `path` through a temporary file in the same directory, or to
    /// stdout when no path is given.
    pub fn write(&self, path: Option<&Path>) -> CliResult<()> {
        let text = self.render();
        let Some(path) = path else {
            let mut stdout = std::io::stdout().lock();
            return stdout.write_all(text.as_bytes()).map_err(|e| CliError::config("OutputWrite", e.to_string()));
        };
        let dir = match path.parent() {
            Some(p) if !p.as_os_str().is_empty() => p,
            _ => Path::new("."),
        };
        let fail = |e: std::io::Error| CliError::config("OutputWrite", format!("{}: {e}", path.display()));
        let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(fail)?;
        tmp.write_all(text.as_bytes()).map_err(fail)?;
        tmp.persist(path).map_err(|e| fail(e.error))?;
        Ok(())
    }
}
