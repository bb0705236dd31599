//! CSV and JSON emission to a file or standard output.

use std::io::Write;
use std::path::Path;

use serde::Serialize;

use crate::CliError;

fn sink(out: Option<&Path>) -> Result<Box<dyn Write>, CliError> {
    Ok(match out {
        Some(p) => Box::new(std::io::BufWriter::new(std::fs::File::create(p)?)),
        None => Box::new(std::io::stdout().lock()),
    })
}

pub fn write_csv<T: Serialize>(rows: &[T], out: Option<&Path>) -> Result<(), CliError> {
    let mut w = csv::Writer::from_writer(sink(out)?);
    for r in rows {
        w.serialize(r).map_err(|e| CliError::Resource(e.to_string()))?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_json(value: &serde_json::Value, out: Option<&Path>) -> Result<(), CliError> {
    let mut w = sink(out)?;
    serde_json::to_writer_pretty(&mut w, value).map_err(|e| CliError::Resource(e.to_string()))?;
    writeln!(w)?;
    w.flush()?;
    Ok(())
}
