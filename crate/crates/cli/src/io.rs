//! Reading inputs and writing whole outputs.

use std::io::{Read, Write};
use std::path::Path;

use serde_json::Value;
use stabform_core::Gf2Matrix;

use crate::error::{CliError, CliResult};

/// Reads a file, or standard input when the path is `-`.
pub fn read_input(path: &Path) -> CliResult<String> {
    let at = |e: std::io::Error| CliError::domain("io", format!("{}: {e}", path.display()));
    if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(at)?;
        return Ok(s);
    }
    std::fs::read_to_string(path).map_err(at)
}

pub fn read_matrix(path: &Path) -> CliResult<Gf2Matrix> {
    Ok(Gf2Matrix::parse_text(&read_input(path)?)?)
}

pub fn read_json(path: &Path) -> CliResult<Value> {
    Ok(serde_json::from_str(&read_input(path)?)?)
}

/// Writes the complete output in one go, to `out` or standard output.
pub fn write_output(out: Option<&Path>, body: &str) -> CliResult<()> {
    match out {
        Some(path) => std::fs::write(path, body)
            .map_err(|e| CliError::domain("io", format!("{}: {e}", path.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(body.as_bytes())?;
            stdout.flush()?;
            Ok(())
        }
    }
}

pub fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values always serialize");
    s.push('\n');
    s
}
