//! Result tables and their CSV / gnuplot renderings.

use std::fmt::Write as _;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(i64),
    Real(f64),
    Text(String),
    Bool(bool),
}

impl Cell {
    /// Reals carry 17 significant digits so that they round-trip exactly.
    fn render(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Real(v) if v.is_nan() => "nan".into(),
            Cell::Real(v) if v.is_infinite() => if *v > 0.0 { "inf" } else { "-inf" }.into(),
            Cell::Real(v) => format!("{v:.16e}"),
            Cell::Text(s) => s.clone(),
            Cell::Bool(b) => b.to_string(),
        }
    }

    pub fn as_real(&self) -> Option<f64> {
        match self {
            Cell::Real(v) => Some(*v),
            Cell::Int(v) => Some(*v as f64),
            _ => None,
        }
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Real(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<u64> for Cell {
    fn from(v: u64) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
    /// Column whose changes start a new gnuplot data block.
    pub group_by: Option<usize>,
}

impl Table {
    pub fn new(columns: Vec<&'static str>) -> Self {
        Table {
            columns,
            rows: Vec::new(),
            group_by: None,
        }
    }

    pub fn grouped(mut self, column: &str) -> Self {
        self.group_by = self.columns.iter().position(|c| *c == column);
        self
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.columns.len(), "row width must match the header");
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| *c == name)
    }

    /// Comment line `# key=value ...`, header, then rows; LF line endings.
    pub fn to_csv(&self, meta: &[(&str, String)]) -> String {
        let mut out = meta_line(meta);
        out.push_str(&self.columns.join(","));
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(Cell::render).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    /// Whitespace-separated variant with a commented header; blocks separated by
    /// two blank lines so gnuplot's `index` can address each group.
    pub fn to_dat(&self, meta: &[(&str, String)]) -> String {
        let mut out = meta_line(meta);
        let _ = writeln!(out, "# {}", self.columns.join(" "));
        let mut previous: Option<&Cell> = None;
        for row in &self.rows {
            if let Some(g) = self.group_by {
                if previous.is_some_and(|p| *p != row[g]) {
                    out.push_str("\n\n");
                }
                previous = Some(&row[g]);
            }
            let cells: Vec<String> = row
                .iter()
                .map(|c| match c {
                    Cell::Text(s) if s.contains(char::is_whitespace) || s.is_empty() => format!("\"{s}\""),
                    other => other.render(),
                })
                .collect();
            out.push_str(&cells.join(" "));
            out.push('\n');
        }
        out
    }
}

fn meta_line(meta: &[(&str, String)]) -> String {
    let mut line = String::from("#");
    for (k, v) in meta {
        let _ = write!(line, " {k}={v}");
    }
    line.push('\n');
    line
}
