//! Term lists and sample points on disk: CSV with a header row, or JSON.

use fejerlab::Vector;
use serde_json::{json, Value};
use std::fs;
use std::io::Write;
use std::path::Path;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {message}")]
    File { path: String, message: String },
    #[error(transparent)]
    Lab(#[from] fejerlab::LabError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        2
    }

    /// The reader of stdout went away before the output was complete.
    pub fn is_broken_pipe(&self) -> bool {
        let io = match self {
            CliError::Io(e) => Some(e),
            CliError::Csv(e) => match e.kind() {
                csv::ErrorKind::Io(e) => Some(e),
                _ => None,
            },
            _ => None,
        };
        io.is_some_and(|e| e.kind() == std::io::ErrorKind::BrokenPipe)
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

fn file_error(path: &Path, message: impl ToString) -> CliError {
    CliError::File {
        path: path.display().to_string(),
        message: message.to_string(),
    }
}

pub fn dense_width(terms: &[Vector]) -> usize {
    terms.iter().map(Vector::width).max().unwrap_or(0).max(1)
}

/// Writes `n, x0, x1, …` rows, dense up to the widest term.
pub fn write_terms_csv(out: impl Write, terms: &[Vector]) -> CliResult<()> {
    let width = dense_width(terms);
    let mut w = csv::Writer::from_writer(out);
    let mut header = vec!["n".to_string()];
    header.extend((0..width).map(|i| format!("x{i}")));
    w.write_record(&header)?;
    for (n, x) in terms.iter().enumerate() {
        let mut row = vec![n.to_string()];
        row.extend(x.to_dense(width).iter().map(f64::to_string));
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

pub fn terms_json(example: &str, terms: &[Vector]) -> Value {
    let width = dense_width(terms);
    json!({
        "example": example,
        "width": width,
        "terms": terms.iter().map(|x| x.to_dense(width)).collect::<Vec<_>>(),
    })
}

fn rows_from_csv(path: &Path, text: &str) -> CliResult<Vec<Vec<f64>>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_reader(text.as_bytes());
    let skip = usize::from(reader.headers()?.get(0).is_some_and(|h| h.trim() == "n"));
    let mut rows = Vec::new();
    for rec in reader.records() {
        let rec = rec?;
        let row = rec
            .iter()
            .skip(skip)
            .map(|f| {
                f.trim()
                    .parse::<f64>()
                    .map_err(|_| file_error(path, format!("bad number `{f}`")))
            })
            .collect::<CliResult<Vec<f64>>>()?;
        rows.push(row);
    }
    Ok(rows)
}

fn rows_from_json(path: &Path, text: &str) -> CliResult<Vec<Vec<f64>>> {
    let value: Value = serde_json::from_str(text)?;
    let list = match &value {
        Value::Object(map) => map.get("terms").or_else(|| map.get("points")),
        Value::Array(_) => Some(&value),
        _ => None,
    }
    .ok_or_else(|| file_error(path, "expected an array or an object with `terms`/`points`"))?;
    Ok(serde_json::from_value(list.clone())?)
}

/// Reads a list of dense rows from a `.json` file, or CSV otherwise.
pub fn read_rows(path: &Path) -> CliResult<Vec<Vector>> {
    let text = fs::read_to_string(path).map_err(|e| file_error(path, e))?;
    let rows = if path.extension().is_some_and(|e| e == "json") {
        rows_from_json(path, &text)?
    } else {
        rows_from_csv(path, &text)?
    };
    if rows.is_empty() {
        return Err(file_error(path, "no rows"));
    }
    for row in &rows {
        if row.iter().any(|v| !v.is_finite()) {
            return Err(file_error(path, "non-finite entry"));
        }
    }
    Ok(rows.iter().map(|r| Vector::from_dense(r)).collect())
}

/// Reads an argument that is either inline JSON or a path to a JSON file.
pub fn inline_or_file(arg: &str) -> CliResult<String> {
    if arg.trim_start().starts_with('{') {
        Ok(arg.to_string())
    } else {
        fs::read_to_string(arg).map_err(|e| file_error(Path::new(arg), e))
    }
}

pub fn emit(text: &str, report: Option<&Path>) -> CliResult<()> {
    match report {
        Some(path) => fs::write(path, text).map_err(|e| file_error(path, e)),
        None => match writeln!(std::io::stdout().lock(), "{text}") {
            Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(e.into()),
            _ => Ok(()),
        },
    }
}
