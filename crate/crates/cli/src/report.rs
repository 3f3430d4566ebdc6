use std::fs::File;
use std::path::Path;

use anyhow::{Context, Result};
use serde::Serialize;

pub fn write_csv<T: Serialize>(path: &Path, rows: &[T]) -> Result<()> {
    let mut w = csv::Writer::from_path(path).with_context(|| format!("creating {}", path.display()))?;
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let f = File::create(path).with_context(|| format!("creating {}", path.display()))?;
    serde_json::to_writer_pretty(f, value)?;
    Ok(())
}

/// `report.csv` -> `report.json`.
pub fn summary_path(report: &Path) -> std::path::PathBuf {
    report.with_extension("json")
}
