use std::fmt;
use std::path::{Path, PathBuf};

use serde::Serialize;

pub const OUT_DIR_ENV: &str = "ATOMF_OUT_DIR";

#[derive(Debug)]
pub enum CliError {
    Lib(atomic_filters::Error),
    Usage(String),
    Io(PathBuf, std::io::Error),
    /// A written file did not survive re-loading.
    Validation(PathBuf, String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Lib(e) if e.is_precondition() => 2,
            _ => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Lib(e) => write!(f, "{e}"),
            CliError::Usage(msg) => write!(f, "{msg}"),
            CliError::Io(p, e) => write!(f, "{}: {e}", p.display()),
            CliError::Validation(p, msg) => write!(f, "{} failed validation after writing: {msg}", p.display()),
        }
    }
}

impl From<atomic_filters::Error> for CliError {
    fn from(e: atomic_filters::Error) -> Self {
        CliError::Lib(e)
    }
}

pub type CliResult<T> = Result<T, CliError>;

pub fn usage<T>(msg: impl Into<String>) -> CliResult<T> {
    Err(CliError::Usage(msg.into()))
}

/// Relative paths go under `$ATOMF_OUT_DIR` when it is set.
pub fn resolve(path: &Path) -> PathBuf {
    match std::env::var_os(OUT_DIR_ENV) {
        Some(dir) if path.is_relative() && !dir.is_empty() => PathBuf::from(dir).join(path),
        _ => path.to_path_buf(),
    }
}

pub fn read(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|e| CliError::Io(path.to_path_buf(), e))
}

/// Writes `contents`, reads the file back, and runs `check` on what was read.
pub fn write_checked(
    path: &Path,
    contents: &str,
    check: impl FnOnce(&str) -> Result<(), String>,
) -> CliResult<PathBuf> {
    let path = resolve(path);
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        std::fs::create_dir_all(parent).map_err(|e| CliError::Io(parent.to_path_buf(), e))?;
    }
    std::fs::write(&path, contents).map_err(|e| CliError::Io(path.clone(), e))?;
    let back = read(&path)?;
    if back != contents {
        return Err(CliError::Validation(path, "contents differ from what was written".into()));
    }
    check(&back).map_err(|msg| CliError::Validation(path.clone(), msg))?;
    Ok(path)
}

pub fn to_json<T: Serialize>(value: &T) -> CliResult<String> {
    let mut s = serde_json::to_string_pretty(value).map_err(atomic_filters::Error::from)?;
    s.push('\n');
    Ok(s)
}

/// JSON that must deserialize back into `T`.
pub fn write_json<T, F>(path: &Path, value: &T, check: F) -> CliResult<PathBuf>
where
    T: Serialize + serde::de::DeserializeOwned,
    F: FnOnce(T) -> Result<(), String>,
{
    let text = to_json(value)?;
    write_checked(path, &text, |s| {
        let parsed: T = serde_json::from_str(s).map_err(|e| e.to_string())?;
        check(parsed)
    })
}

/// Report JSON: only required to parse as a JSON object.
pub fn write_report<T: Serialize>(path: &Path, value: &T) -> CliResult<PathBuf> {
    let text = to_json(value)?;
    write_checked(path, &text, |s| {
        let v: serde_json::Value = serde_json::from_str(s).map_err(|e| e.to_string())?;
        if v.is_object() {
            Ok(())
        } else {
            Err("report is not a JSON object".into())
        }
    })
}

/// CSV with a known header (after any `#` lines) and `rows` data lines.
pub fn write_csv(path: &Path, text: &str, header: &str, rows: usize) -> CliResult<PathBuf> {
    write_checked(path, text, |s| {
        let mut lines = s.lines().filter(|l| !l.starts_with('#'));
        if lines.next() != Some(header) {
            return Err(format!("expected header {header:?}"));
        }
        let columns = header.split(',').count();
        let mut count = 0;
        for line in lines {
            let fields: Vec<&str> = line.split(',').collect();
            if fields.len() != columns || fields.iter().skip(1).any(|f| f.parse::<f64>().is_err()) {
                return Err(format!("malformed row {line:?}"));
            }
            count += 1;
        }
        if count == rows {
            Ok(())
        } else {
            Err(format!("expected {rows} rows, found {count}"))
        }
    })
}

pub fn write_svg(path: &Path, text: &str) -> CliResult<PathBuf> {
    write_checked(path, text, |s| {
        if s.starts_with("<svg") && s.trim_end().ends_with("</svg>") {
            Ok(())
        } else {
            Err("not an svg document".into())
        }
    })
}
