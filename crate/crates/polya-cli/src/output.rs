//! Deterministic table and file emission.

use std::io::Write;
use std::path::Path;

use clap::ValueEnum;
use serde::Serialize;

use crate::CliError;

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

/// 17 significant digits, enough to round-trip any f64.
pub fn g17(x: f64) -> String {
    format!("{x:.16e}")
}

fn csv_field(field: &str) -> String {
    if field.contains(',') || field.contains('"') || field.contains('\n') || field.contains('\r') {
        format!("\"{}\"", field.replace('"', "\"\""))
    } else {
        field.to_string()
    }
}

/// RFC-4180-style CSV with a header row and LF line endings.
pub fn csv_table(header: &[&str], rows: Vec<Vec<String>>) -> String {
    let mut text = String::new();
    text.push_str(
        &header
            .iter()
            .map(|h| csv_field(h))
            .collect::<Vec<_>>()
            .join(","),
    );
    text.push('\n');
    for row in rows {
        debug_assert_eq!(row.len(), header.len());
        text.push_str(
            &row.iter()
                .map(|f| csv_field(f))
                .collect::<Vec<_>>()
                .join(","),
        );
        text.push('\n');
    }
    text
}

pub fn json<T: Serialize>(value: &T) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("reports serialize");
    text.push('\n');
    text
}

/// One emitted artifact; `suffix` lands before the file extension when a
/// single invocation produces several files (squeeze without --M).
pub struct Document {
    pub suffix: Option<String>,
    pub text: String,
}

impl Document {
    pub fn single(text: String) -> Self {
        Self { suffix: None, text }
    }
}

pub fn write_documents(docs: Vec<Document>, out: Option<&Path>) -> Result<(), CliError> {
    match out {
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            for doc in &docs {
                lock.write_all(doc.text.as_bytes())
                    .map_err(|e| CliError::Io(e.to_string()))?;
            }
            Ok(())
        }
        Some(path) => {
            for doc in &docs {
                let target = match &doc.suffix {
                    None => path.to_path_buf(),
                    Some(suffix) => {
                        let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("out");
                        let ext = path.extension().and_then(|s| s.to_str());
                        let name = match ext {
                            Some(ext) => format!("{stem}{suffix}.{ext}"),
                            None => format!("{stem}{suffix}"),
                        };
                        path.with_file_name(name)
                    }
                };
                std::fs::write(&target, doc.text.as_bytes())
                    .map_err(|e| CliError::Io(format!("{}: {e}", target.display())))?;
            }
            Ok(())
        }
    }
}
