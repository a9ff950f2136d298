//! Minimal numeric CSV reading and writing shared by the export formats.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use crate::error::{Error, Result};

/// Full-precision float formatting: 17 significant digits.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

pub(crate) fn create(path: &Path) -> Result<BufWriter<File>> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        std::fs::create_dir_all(parent).map_err(|e| Error::io(parent.display().to_string(), e))?;
    }
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| Error::io(path.display().to_string(), e))
}

/// Write a header line and rows of pre-formatted fields.
pub(crate) fn write_rows<I, R>(path: &Path, header: &str, rows: I) -> Result<()>
where
    I: IntoIterator<Item = R>,
    R: AsRef<str>,
{
    let ctx = || path.display().to_string();
    let mut w = create(path)?;
    writeln!(w, "{header}").map_err(|e| Error::io(ctx(), e))?;
    for row in rows {
        writeln!(w, "{}", row.as_ref()).map_err(|e| Error::io(ctx(), e))?;
    }
    w.flush().map_err(|e| Error::io(ctx(), e))
}

/// Read a numeric CSV whose header must start with `expected` columns.
/// Extra trailing columns are ignored.
pub(crate) fn read_numeric(path: &Path, expected: &[&str]) -> Result<Vec<Vec<f64>>> {
    let file = File::open(path).map_err(|e| Error::io(path.display().to_string(), e))?;
    let parse_err = |line: usize, column: usize, message: String| Error::Parse {
        path: path.to_path_buf(),
        line,
        column,
        message,
    };
    let mut rows = Vec::new();
    for (idx, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(|e| Error::io(path.display().to_string(), e))?;
        let lineno = idx + 1;
        if idx == 0 {
            let cols: Vec<&str> = line.trim().split(',').map(str::trim).collect();
            if cols.len() < expected.len() || cols[..expected.len()] != *expected {
                return Err(parse_err(1, 1, format!("expected header starting with `{}`", expected.join(","))));
            }
            continue;
        }
        if line.trim().is_empty() {
            continue;
        }
        let mut values = Vec::with_capacity(expected.len());
        let mut column = 1;
        for field in line.split(',').take(expected.len()) {
            let v: f64 = field
                .trim()
                .parse()
                .map_err(|_| parse_err(lineno, column, format!("not a number: `{}`", field.trim())))?;
            values.push(v);
            column += field.len() + 1;
        }
        if values.len() < expected.len() {
            return Err(parse_err(lineno, column, format!("expected {} fields", expected.len())));
        }
        rows.push(values);
    }
    Ok(rows)
}
