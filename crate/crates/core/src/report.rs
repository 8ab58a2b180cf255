//! CSV tables with round-trippable float formatting.

use std::fs::File;
use std::path::Path;

/// Rectangular table of already formatted cells.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new<S: AsRef<str>>(header: &[S]) -> Self {
        Self {
            header: header.iter().map(|s| s.as_ref().to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        self.rows.push(row);
    }
}

/// Shortest decimal string that parses back to exactly `x`.
///
/// Integral values print without a fractional part (`1`, not `1.0`); very
/// large or very small magnitudes switch to exponent form.
pub fn fmt_f64(x: f64) -> String {
    let ax = x.abs();
    if x == 0.0 || !x.is_finite() || (1e-5..1e16).contains(&ax) {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

#[derive(Debug, thiserror::Error)]
pub enum CsvError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Csv {
        path: String,
        #[source]
        source: csv::Error,
    },
    #[error("{path}: row {row} has {got} cells, header has {want}")]
    Ragged {
        path: String,
        row: usize,
        got: usize,
        want: usize,
    },
    #[error("{path}: {msg}")]
    Format { path: String, msg: String },
}

impl CsvError {
    /// True for failures of the underlying file, as opposed to bad content.
    pub fn is_io(&self) -> bool {
        match self {
            CsvError::Io { .. } => true,
            CsvError::Csv { source, .. } => source.is_io_error(),
            _ => false,
        }
    }
}

/// Writes `table` as UTF-8 CSV with LF line endings and a header row.
pub fn write_csv(table: &Table, path: &Path) -> Result<(), CsvError> {
    let p = path.display().to_string();
    for (i, row) in table.rows.iter().enumerate() {
        if row.len() != table.header.len() {
            return Err(CsvError::Ragged {
                path: p,
                row: i + 1,
                got: row.len(),
                want: table.header.len(),
            });
        }
    }
    let file = File::create(path).map_err(|source| CsvError::Io { path: p.clone(), source })?;
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(file);
    let wrap = |source| CsvError::Csv { path: p.clone(), source };
    w.write_record(&table.header).map_err(wrap)?;
    for row in &table.rows {
        w.write_record(row).map_err(wrap)?;
    }
    w.flush().map_err(|source| CsvError::Io { path: p.clone(), source })?;
    Ok(())
}

/// Reads a CSV file written by [`write_csv`] (or any headed CSV).
pub fn read_csv(path: &Path) -> Result<Table, CsvError> {
    let p = path.display().to_string();
    let file = File::open(path).map_err(|source| CsvError::Io { path: p.clone(), source })?;
    let mut r = csv::ReaderBuilder::new().has_headers(true).from_reader(file);
    let wrap = |source| CsvError::Csv { path: p.clone(), source };
    let header = r.headers().map_err(wrap)?.iter().map(str::to_string).collect();
    let mut rows = Vec::new();
    for rec in r.records() {
        rows.push(rec.map_err(wrap)?.iter().map(str::to_string).collect());
    }
    Ok(Table { header, rows })
}
