//! Deterministic CSV emission.

use std::fmt::Write as _;
use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;

/// Rounds `x` to `digits` significant digits and prints the shortest decimal
/// that reads back as the rounded value.
pub fn format_float(x: f64, digits: usize) -> String {
    if x.is_nan() {
        return "NaN".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let digits = digits.clamp(1, 17);
    let rounded: f64 = format!("{:.*e}", digits - 1, x).parse().expect("float round trip");
    if rounded == 0.0 {
        return "0".into();
    }
    let a = rounded.abs();
    if (1e-4..1e15).contains(&a) {
        format!("{rounded}")
    } else {
        format!("{rounded:e}")
    }
}

/// Buffered table: `#` metadata lines, one header row, then data rows.
pub struct Table {
    digits: usize,
    text: String,
}

impl Table {
    pub fn new(digits: usize) -> Self {
        Self { digits, text: String::new() }
    }

    pub fn meta(&mut self, key: &str, value: impl std::fmt::Display) {
        writeln!(self.text, "# {key}={value}").unwrap();
    }

    pub fn comment(&mut self, line: &str) {
        writeln!(self.text, "# {line}").unwrap();
    }

    pub fn header<S: AsRef<str>>(&mut self, columns: &[S]) {
        let cols: Vec<&str> = columns.iter().map(|c| c.as_ref()).collect();
        writeln!(self.text, "{}", cols.join(",")).unwrap();
    }

    /// A row whose first cell is an integer index.
    pub fn indexed_row(&mut self, index: usize, values: &[f64]) {
        self.push_indexed(index, values);
        self.text.push('\n');
    }

    pub fn indexed_row_with_label(&mut self, index: usize, values: &[f64], label: &str) {
        self.push_indexed(index, values);
        writeln!(self.text, ",{label}").unwrap();
    }

    fn push_indexed(&mut self, index: usize, values: &[f64]) {
        write!(self.text, "{index}").unwrap();
        for v in values {
            write!(self.text, ",{}", format_float(*v, self.digits)).unwrap();
        }
    }

    pub fn row(&mut self, values: &[f64]) {
        let cells: Vec<String> = values.iter().map(|v| format_float(*v, self.digits)).collect();
        writeln!(self.text, "{}", cells.join(",")).unwrap();
    }

    pub fn row_with_label(&mut self, values: &[f64], label: &str) {
        for v in values {
            write!(self.text, "{},", format_float(*v, self.digits)).unwrap();
        }
        writeln!(self.text, "{label}").unwrap();
    }

    pub fn as_str(&self) -> &str {
        &self.text
    }
}

/// Where a table goes. Files are created up front so a bad path fails
/// before any computation.
pub enum Sink {
    Stdout,
    File(File),
}

impl Sink {
    pub fn open(path: Option<&PathBuf>) -> io::Result<Self> {
        match path {
            None => Ok(Sink::Stdout),
            Some(p) => Ok(Sink::File(File::create(p)?)),
        }
    }

    pub fn write(self, table: &Table) -> io::Result<()> {
        match self {
            Sink::Stdout => {
                let mut out = io::stdout().lock();
                out.write_all(table.as_str().as_bytes())?;
                out.flush()
            }
            Sink::File(mut f) => {
                f.write_all(table.as_str().as_bytes())?;
                f.sync_all()
            }
        }
    }
}
