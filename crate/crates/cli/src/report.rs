use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

/// Stable exit-code contract.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(i32)]
pub enum Exit {
    Ok = 0,
    Inconclusive = 1,
    VerificationFailed = 2,
    UnknownSystem = 3,
    Precondition = 4,
    Numeric = 5,
}

#[derive(Debug)]
pub struct CliError {
    pub code: Exit,
    pub message: String,
}

impl CliError {
    pub fn new(code: Exit, message: impl Into<String>) -> Self {
        CliError {
            code,
            message: message.into(),
        }
    }

    pub fn input(message: impl Into<String>) -> Self {
        CliError::new(Exit::Precondition, message)
    }

    pub fn io(path: &Path, e: std::io::Error) -> Self {
        CliError::new(Exit::Precondition, format!("{}: {e}", path.display()))
    }
}

pub type CliResult = Result<Exit, CliError>;

/// Machine-readable record of one command.
#[derive(Debug, Serialize)]
pub struct RunReport<I: Serialize, O: Serialize> {
    pub command: Vec<String>,
    pub system: String,
    pub inputs: I,
    pub outputs: O,
    pub elapsed_s: f64,
    pub tool_version: String,
    pub exit_status: i32,
}

pub fn tool_version() -> String {
    srint::obstruct::TOOL_VERSION.to_string()
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(value).map_err(|e| CliError::input(e.to_string()))?;
    fs::write(path, text + "\n").map_err(|e| CliError::io(path, e))
}

pub fn create(path: &Path) -> Result<std::io::BufWriter<fs::File>, CliError> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    }
    fs::File::create(path)
        .map(std::io::BufWriter::new)
        .map_err(|e| CliError::io(path, e))
}

/// `out.csv` -> `out.json`.
pub fn sidecar(path: &Path) -> PathBuf {
    path.with_extension("json")
}

/// `out.csv` -> `out<suffix>.csv`.
pub fn suffixed(path: &Path, suffix: &str) -> PathBuf {
    let stem = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    let ext = path
        .extension()
        .map(|e| format!(".{}", e.to_string_lossy()))
        .unwrap_or_default();
    path.with_file_name(format!("{stem}{suffix}{ext}"))
}
