//! Loading and validating command inputs before any algebra runs.

use std::fs;
use std::path::{Path, PathBuf};

use polar_core::{ConstMatrix, Point, PolySystem, PrimeField};

use crate::CliError;

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn located(path: &Path, e: polar_core::Error) -> CliError {
    CliError::Located {
        path: path.to_path_buf(),
        source: e,
    }
}

pub fn system(path: &Path, field: PrimeField) -> Result<PolySystem, CliError> {
    let text = read(path)?;
    let sys = PolySystem::parse(&text, field).map_err(|e| located(path, e))?;
    if sys.is_empty() {
        return Err(CliError::Input(format!("{}: no equations", path.display())));
    }
    Ok(sys)
}

pub fn matrix(path: &Path, field: PrimeField) -> Result<ConstMatrix, CliError> {
    let text = read(path)?;
    ConstMatrix::from_json(&text, field).map_err(|e| located(path, e))
}

/// A JSON array of integers.
pub fn vector(path: &Path, field: PrimeField, len: usize) -> Result<Point, CliError> {
    let text = read(path)?;
    let values: Vec<i64> = serde_json::from_str(&text)
        .map_err(|e| CliError::Input(format!("{}: expected an array of integers: {e}", path.display())))?;
    if values.len() != len {
        return Err(CliError::Input(format!(
            "{}: expected {len} entries, found {}",
            path.display(),
            values.len()
        )));
    }
    Ok(Point::from_i64s(&field, &values))
}

/// Comma-separated integers such as `1,0,-2`.
pub fn point(text: &str, field: PrimeField, len: usize) -> Result<Point, CliError> {
    let values = text
        .split(',')
        .map(|v| {
            v.trim()
                .parse::<i64>()
                .map_err(|_| CliError::Input(format!("bad point coordinate '{}'", v.trim())))
        })
        .collect::<Result<Vec<i64>, _>>()?;
    if values.len() != len {
        return Err(CliError::Input(format!(
            "point has {} coordinates, the system has {len} variables",
            values.len()
        )));
    }
    Ok(Point::from_i64s(&field, &values))
}

pub fn required<'a>(value: &'a Option<PathBuf>, flag: &str) -> Result<&'a Path, CliError> {
    value
        .as_deref()
        .ok_or_else(|| CliError::Input(format!("missing --{flag}")))
}
