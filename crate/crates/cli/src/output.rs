//! CSV and JSON emission.
//!
//! Tables become one CSV row per record. Single reports become pretty JSON,
//! or a two-column `key,value` CSV with nested keys joined by `.` and arrays
//! by `;`.

use std::fs::File;
use std::io::{self, Write};
use std::path::Path;

use serde::Serialize;
use serde_json::Value;

use crate::config::Format;
use crate::CliError;

fn sink(out: Option<&Path>) -> Result<Box<dyn Write>, CliError> {
    Ok(match out {
        Some(path) => Box::new(io::BufWriter::new(File::create(path)?)),
        None => Box::new(io::stdout().lock()),
    })
}

fn out_err(e: impl std::fmt::Display) -> CliError {
    CliError::Output(e.to_string())
}

pub fn write_table<T: Serialize, W: Write>(rows: &[T], format: Format, w: W) -> Result<(), CliError> {
    match format {
        Format::Csv => {
            let mut writer = csv::Writer::from_writer(w);
            for row in rows {
                writer.serialize(row).map_err(out_err)?;
            }
            writer.flush()?;
        }
        Format::Structured => write_json(rows, w)?,
    }
    Ok(())
}

pub fn write_record<T: Serialize, W: Write>(record: &T, format: Format, w: W) -> Result<(), CliError> {
    match format {
        Format::Structured => write_json(record, w),
        Format::Csv => {
            let value = serde_json::to_value(record).map_err(out_err)?;
            let mut pairs = Vec::new();
            flatten("", &value, &mut pairs);
            let mut writer = csv::Writer::from_writer(w);
            writer.write_record(["key", "value"]).map_err(out_err)?;
            for (k, v) in pairs {
                writer.write_record([k, v]).map_err(out_err)?;
            }
            writer.flush()?;
            Ok(())
        }
    }
}

fn write_json<T: Serialize + ?Sized, W: Write>(value: &T, mut w: W) -> Result<(), CliError> {
    serde_json::to_writer_pretty(&mut w, value).map_err(out_err)?;
    writeln!(w)?;
    Ok(())
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        other => other.to_string(),
    }
}

fn flatten(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
    let join = |k: &str| if prefix.is_empty() { k.to_string() } else { format!("{prefix}.{k}") };
    match v {
        Value::Object(map) => {
            for (k, child) in map {
                flatten(&join(k), child, out);
            }
        }
        Value::Array(items) if items.iter().all(|i| !i.is_object()) => {
            out.push((prefix.to_string(), items.iter().map(scalar).collect::<Vec<_>>().join(";")));
        }
        Value::Array(items) => {
            for (i, child) in items.iter().enumerate() {
                flatten(&join(&i.to_string()), child, out);
            }
        }
        other => out.push((prefix.to_string(), scalar(other))),
    }
}

pub fn emit_table<T: Serialize>(rows: &[T], format: Format, out: Option<&Path>) -> Result<(), CliError> {
    write_table(rows, format, sink(out)?)
}

pub fn emit_record<T: Serialize>(record: &T, format: Format, out: Option<&Path>) -> Result<(), CliError> {
    write_record(record, format, sink(out)?)
}
