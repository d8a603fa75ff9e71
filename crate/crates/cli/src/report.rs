//! Report files. Tables go to CSV, nested results to JSON; the only
//! run-dependent field is `generated_at_unix` in the JSON header.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::Serialize;

use crate::error::CliResult;

#[derive(Debug, Serialize)]
pub struct Header<'a, C: Serialize> {
    pub experiment: &'a str,
    pub generated_at_unix: u64,
    pub tool_version: &'static str,
    pub config: &'a C,
}

impl<'a, C: Serialize> Header<'a, C> {
    pub fn new(experiment: &'a str, config: &'a C) -> Self {
        Header {
            experiment,
            generated_at_unix: SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0),
            tool_version: env!("CARGO_PKG_VERSION"),
            config,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct Document<'a, C: Serialize, B: Serialize> {
    pub header: Header<'a, C>,
    #[serde(flatten)]
    pub body: &'a B,
}

pub fn write_csv<R: Serialize>(path: &Path, rows: &[R]) -> CliResult<()> {
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent)?;
    }
    let mut w = csv::Writer::from_path(path)?;
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> CliResult<()> {
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent)?;
    }
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    fs::write(path, text)?;
    Ok(())
}

/// Paths written by one experiment run.
#[derive(Clone, Debug, Default, Serialize)]
pub struct Written {
    pub csv: Option<PathBuf>,
    pub json: PathBuf,
}
