use std::fmt::Write as _;

use crate::scenario::ScenarioFile;

/// CSV document with a `#`-prefixed metadata preamble.
#[derive(Debug, Clone, PartialEq)]
pub struct CsvTable {
    meta: Vec<(String, String)>,
    config: Option<String>,
    header: Vec<String>,
    rows: Vec<Vec<String>>,
}

/// Locale-independent rendering: shortest round-trip decimal for moderate
/// magnitudes, scientific notation otherwise.
pub fn format_number(x: f64) -> String {
    if x == 0.0 {
        "0".to_string()
    } else if x.is_finite() && (1e-4..1e6).contains(&x.abs()) {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

impl CsvTable {
    pub fn new<S: Into<String>>(header: impl IntoIterator<Item = S>) -> Self {
        Self {
            meta: Vec::new(),
            config: None,
            header: header.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn meta(&mut self, key: &str, value: impl ToString) -> &mut Self {
        self.meta.push((key.to_string(), value.to_string()));
        self
    }

    pub fn meta_number(&mut self, key: &str, value: f64) -> &mut Self {
        self.meta(key, format_number(value))
    }

    /// Records the fully resolved scenario in the preamble.
    pub fn config(&mut self, file: &ScenarioFile) -> &mut Self {
        self.config = Some(file.to_toml());
        self
    }

    /// Appends a row; `None` cells are left empty.
    pub fn push(&mut self, cells: &[Option<f64>]) {
        assert_eq!(cells.len(), self.header.len(), "row width");
        self.rows
            .push(cells.iter().map(|c| c.map(format_number).unwrap_or_default()).collect());
    }

    pub fn header(&self) -> &[String] {
        &self.header
    }

    pub fn rows(&self) -> &[Vec<String>] {
        &self.rows
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.meta {
            let _ = writeln!(out, "# {k} = {v}");
        }
        if let Some(config) = &self.config {
            out.push_str("# resolved configuration:\n");
            for line in config.lines() {
                if line.is_empty() {
                    out.push_str("#\n");
                } else {
                    let _ = writeln!(out, "#   {line}");
                }
            }
        }
        out.push_str(&self.header.join(","));
        out.push('\n');
        for row in &self.rows {
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }
}
