//! Structured command output with two renderings (CSV and JSON) and
//! atomic file writes. Floats are always rendered as `{:.8e}` so repeated
//! runs are byte-identical.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::Path;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    F64(f64),
    U64(u64),
    Str(String),
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::F64(v) => format!("{v:.8e}"),
            Cell::U64(v) => v.to_string(),
            Cell::Str(v) => v.clone(),
        }
    }

    fn json(&self) -> String {
        match self {
            Cell::F64(v) => json_number(*v),
            Cell::U64(v) => v.to_string(),
            Cell::Str(v) => json_string(v),
        }
    }
}

/// `{:.8e}` produces e.g. `1.23000000e4`, which is already a valid JSON
/// number; only non-finite values need a textual fallback.
fn json_number(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.8e}")
    } else {
        json_string(&v.to_string())
    }
}

fn json_string(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\t' => out.push_str("\\t"),
            c if (c as u32) < 0x20 => {
                let _ = write!(out, "\\u{:04x}", c as u32);
            }
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

#[derive(Debug, Default)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Table {
        Table {
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push_row(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.columns.len(), "row width mismatch");
        self.rows.push(row);
    }
}

/// One command's result: the resolved configuration, named scalars in
/// insertion order, and an optional table.
#[derive(Debug, Default)]
pub struct Document {
    pub config: Vec<(String, String)>,
    pub scalars: Vec<(String, Cell)>,
    pub table: Option<Table>,
}

impl Document {
    pub fn push_scalar(&mut self, name: &str, cell: Cell) {
        self.scalars.push((name.to_string(), cell));
    }

    pub fn push_f64(&mut self, name: &str, v: f64) {
        self.push_scalar(name, Cell::F64(v));
    }

    pub fn push_u64(&mut self, name: &str, v: u64) {
        self.push_scalar(name, Cell::U64(v));
    }

    pub fn push_str(&mut self, name: &str, v: &str) {
        self.push_scalar(name, Cell::Str(v.to_string()));
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.config {
            let _ = writeln!(out, "# config {k} = {v}");
        }
        for (name, cell) in &self.scalars {
            let _ = writeln!(out, "# {name} = {}", cell.csv());
        }
        if let Some(table) = &self.table {
            let _ = writeln!(out, "{}", table.columns.join(","));
            for row in &table.rows {
                let cells: Vec<String> = row.iter().map(Cell::csv).collect();
                let _ = writeln!(out, "{}", cells.join(","));
            }
        }
        out
    }

    pub fn to_json(&self) -> String {
        let mut out = String::from("{\n  \"config\": {");
        for (i, (k, v)) in self.config.iter().enumerate() {
            let sep = if i == 0 { "" } else { "," };
            let _ = write!(out, "{sep}\n    {}: {}", json_string(k), json_string(v));
        }
        out.push_str("\n  },\n  \"results\": {");
        for (i, (name, cell)) in self.scalars.iter().enumerate() {
            let sep = if i == 0 { "" } else { "," };
            let _ = write!(out, "{sep}\n    {}: {}", json_string(name), cell.json());
        }
        out.push_str("\n  }");
        if let Some(table) = &self.table {
            out.push_str(",\n  \"columns\": [");
            for (i, c) in table.columns.iter().enumerate() {
                let sep = if i == 0 { "" } else { ", " };
                let _ = write!(out, "{sep}{}", json_string(c));
            }
            out.push_str("],\n  \"rows\": [");
            for (i, row) in table.rows.iter().enumerate() {
                let sep = if i == 0 { "" } else { "," };
                let cells: Vec<String> = row.iter().map(Cell::json).collect();
                let _ = write!(out, "{sep}\n    [{}]", cells.join(", "));
            }
            out.push_str("\n  ]");
        }
        out.push_str("\n}\n");
        out
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => self.to_csv(),
            Format::Json => self.to_json(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

/// Write to `path` atomically (temp file in the same directory, then
/// rename), or to stdout when no path is given.
pub fn emit(text: &str, path: Option<&Path>) -> std::io::Result<()> {
    match path {
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()
        }
        Some(path) => {
            let name = format!(
                ".{}.tmp",
                path.file_name().and_then(|n| n.to_str()).unwrap_or("out")
            );
            let tmp = match path.parent().filter(|p| !p.as_os_str().is_empty()) {
                Some(dir) => dir.join(&name),
                None => std::path::PathBuf::from(&name),
            };
            std::fs::write(&tmp, text.as_bytes())?;
            std::fs::rename(&tmp, path)
        }
    }
}
