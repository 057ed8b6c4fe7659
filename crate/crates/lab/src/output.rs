use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::error::{LabError, LabResult};

/// One CSV cell.
pub enum Cell {
    Int(i64),
    Num(f64),
    OptNum(Option<f64>),
    Text(String),
}

impl Cell {
    fn render(&self) -> LabResult<String> {
        let num = |x: f64| {
            if x.is_finite() {
                Ok(format!("{x}"))
            } else {
                Err(LabError::Numeric(format!("non-finite value {x} in CSV output")))
            }
        };
        match self {
            Cell::Int(i) => Ok(i.to_string()),
            Cell::Num(x) => num(*x),
            Cell::OptNum(Some(x)) => num(*x),
            Cell::OptNum(None) => Ok(String::new()),
            Cell::Text(s) => Ok(s.clone()),
        }
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<i64> for Cell {
    fn from(v: i64) -> Self {
        Cell::Int(v)
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<Option<f64>> for Cell {
    fn from(v: Option<f64>) -> Self {
        Cell::OptNum(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Text(v.to_string())
    }
}

/// Serializes to pretty JSON with object keys in sorted order.
pub fn to_sorted_json<T: Serialize>(value: &T) -> LabResult<String> {
    // serde_json::Value keeps objects in a BTreeMap
    let v = serde_json::to_value(value)?;
    let mut s = serde_json::to_string_pretty(&v)?;
    s.push('\n');
    Ok(s)
}

/// Output directory that remembers what was written.
pub struct OutputDir {
    dir: PathBuf,
    files: Vec<String>,
}

impl OutputDir {
    pub fn create(dir: &Path) -> LabResult<Self> {
        fs::create_dir_all(dir)?;
        Ok(OutputDir { dir: dir.to_path_buf(), files: Vec::new() })
    }

    pub fn path(&self) -> &Path {
        &self.dir
    }

    pub fn files(&self) -> &[String] {
        &self.files
    }

    pub fn json<T: Serialize>(&mut self, name: &str, value: &T) -> LabResult<()> {
        fs::write(self.dir.join(name), to_sorted_json(value)?)?;
        self.files.push(name.to_string());
        Ok(())
    }

    /// Writes a header row and data rows with LF line endings.
    pub fn csv(&mut self, name: &str, header: &[&str], rows: Vec<Vec<Cell>>) -> LabResult<()> {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
        w.write_record(header)?;
        for row in rows {
            debug_assert_eq!(row.len(), header.len());
            let cells = row.iter().map(Cell::render).collect::<LabResult<Vec<_>>>()?;
            w.write_record(&cells)?;
        }
        let bytes = w.into_inner().map_err(|e| LabError::Io(std::io::Error::other(e.to_string())))?;
        fs::write(self.dir.join(name), bytes)?;
        self.files.push(name.to_string());
        Ok(())
    }
}
