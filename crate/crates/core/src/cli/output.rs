use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use super::CliError;

/// Shortest decimal string that parses back to the same `f64`; no exponent,
/// `.` as the separator, independent of locale.
pub fn format_f64(x: f64) -> String {
    format!("{x}")
}

/// Rejects a probability table whose total is off by more than `1e-10`.
pub(crate) fn check_normalized(table: &str, probs: &[f64]) -> Result<(), CliError> {
    let sum = crate::pairwise_sum(probs.iter().copied());
    if (sum - 1.0).abs() > 1e-10 || probs.iter().any(|p| !p.is_finite()) {
        return Err(CliError::Normalization {
            table: table.to_string(),
            sum,
        });
    }
    Ok(())
}

pub(crate) struct CsvTable {
    buf: String,
    columns: usize,
}

impl CsvTable {
    pub fn new(header: &[String]) -> Self {
        let mut buf = header.join(",");
        buf.push('\n');
        CsvTable {
            buf,
            columns: header.len(),
        }
    }

    pub fn row(&mut self, cells: &[String]) {
        debug_assert_eq!(cells.len(), self.columns);
        let _ = writeln!(self.buf, "{}", cells.join(","));
    }

    pub fn into_string(self) -> String {
        self.buf
    }
}

/// `<prefix><suffix>`, e.g. `out/run` + `.csv`.
pub(crate) fn with_suffix(prefix: &Path, suffix: &str) -> PathBuf {
    let mut s = prefix.as_os_str().to_owned();
    s.push(suffix);
    PathBuf::from(s)
}

pub(crate) fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    let fail = |source| CliError::Unwritable {
        path: path.display().to_string(),
        source,
    };
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        std::fs::create_dir_all(parent).map_err(fail)?;
    }
    std::fs::write(path, contents).map_err(fail)
}

pub(crate) fn to_json(value: &impl serde::Serialize) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("plain data serializes");
    s.push('\n');
    s
}
