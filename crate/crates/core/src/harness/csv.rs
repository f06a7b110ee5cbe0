//! CSV tables with fixed number formatting.

use std::fmt::Write as _;
use std::io::Write;
use std::path::Path;

use crate::error::Result;

/// Significant digits kept in every numeric cell.
pub const SIG_DIGITS: usize = 10;

/// Shortest decimal that round-trips the value rounded to [`SIG_DIGITS`]
/// significant digits. `-0` prints as `0`, NaN as `NaN`.
pub fn format_number(x: f64) -> String {
    if x.is_nan() {
        return "NaN".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let rounded: f64 = format!("{:.*e}", SIG_DIGITS - 1, x).parse().expect("own output parses");
    if rounded == 0.0 {
        return "0".into();
    }
    let mag = rounded.abs();
    if (1e-5..1e16).contains(&mag) {
        format!("{rounded}")
    } else {
        format!("{rounded:e}")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(i64),
    Text(String),
}

impl Cell {
    fn render(&self, out: &mut String) {
        match self {
            Cell::Num(x) => out.push_str(&format_number(*x)),
            Cell::Int(n) => {
                let _ = write!(out, "{n}");
            }
            Cell::Text(s) => out.push_str(s),
        }
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Num(x)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.into())
    }
}

/// Header plus rows, rendered with `,` separators and `\n` line endings.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new<S: Into<String>>(header: impl IntoIterator<Item = S>) -> Self {
        Self {
            header: header.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.header.iter().position(|h| h == name)
    }

    /// Numeric value at `(row, column name)`, if that cell is a number.
    pub fn num(&self, row: usize, name: &str) -> Option<f64> {
        match self.rows.get(row)?.get(self.column(name)?)? {
            Cell::Num(x) => Some(*x),
            Cell::Int(n) => Some(*n as f64),
            Cell::Text(_) => None,
        }
    }

    pub fn render(&self) -> String {
        let mut writer = ::csv::WriterBuilder::new()
            .terminator(::csv::Terminator::Any(b'\n'))
            .flexible(false)
            .from_writer(Vec::new());
        writer.write_record(&self.header).expect("in-memory write");
        let mut buf = String::new();
        for row in &self.rows {
            let fields: Vec<String> = row
                .iter()
                .map(|cell| {
                    buf.clear();
                    cell.render(&mut buf);
                    buf.clone()
                })
                .collect();
            writer.write_record(&fields).expect("in-memory write");
        }
        let bytes = writer.into_inner().expect("in-memory flush");
        String::from_utf8(bytes).expect("fields are UTF-8")
    }

    /// Writes to `path`, or stdout when `None`. The whole table is rendered
    /// before anything is written.
    pub fn write_to(&self, path: Option<&Path>) -> Result<()> {
        let text = self.render();
        match path {
            Some(p) => std::fs::write(p, text).map_err(|e| crate::Error::Io(format!("{}: {e}", p.display()))),
            None => {
                let mut stdout = std::io::stdout().lock();
                stdout.write_all(text.as_bytes())?;
                stdout.flush()?;
                Ok(())
            }
        }
    }
}
