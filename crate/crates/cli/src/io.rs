//! File input and result output.

use serde::de::DeserializeOwned;
use serde::Serialize;
use std::fs;
use std::io::Write;
use std::path::Path;

use schatten_core::format::{parse_ansatz, parse_circuit, parse_mixed};
use schatten_core::learn::Ansatz;
use schatten_core::{Circuit, MixedOperation};

use crate::error::{CliError, CliResult};

pub fn read_text(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| CliError::io(path, e))
}

pub fn read_circuit(path: &Path) -> CliResult<Circuit> {
    parse_circuit(&read_text(path)?).map_err(|e| CliError::in_file(path, e))
}

pub fn read_mixed(path: &Path) -> CliResult<MixedOperation> {
    parse_mixed(&read_text(path)?).map_err(|e| CliError::in_file(path, e))
}

pub fn read_ansatz(path: &Path) -> CliResult<Ansatz> {
    parse_ansatz(&read_text(path)?).map_err(|e| CliError::in_file(path, e))
}

/// Reads a JSON config; unknown keys are rejected.
pub fn read_config<T: DeserializeOwned>(path: &Path) -> CliResult<T> {
    serde_json::from_str(&read_text(path)?)
        .map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))
}

fn write_bytes(out: Option<&Path>, bytes: &[u8]) -> CliResult<()> {
    match out {
        Some(path) => fs::write(path, bytes).map_err(|e| CliError::io(path, e)),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(bytes)
                .and_then(|_| stdout.flush())
                .map_err(|e| CliError::io(Path::new("<stdout>"), e))
        }
    }
}

/// Pretty JSON with a trailing newline, to `out` or stdout.
pub fn write_json<T: Serialize>(out: Option<&Path>, value: &T) -> CliResult<()> {
    let mut text = serde_json::to_string_pretty(value).expect("report serializes");
    text.push('\n');
    write_bytes(out, text.as_bytes())
}

/// CSV with a header row, to `out` or stdout.
pub fn write_csv<T: Serialize>(out: Option<&Path>, rows: &[T]) -> CliResult<()> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in rows {
        w.serialize(row)?;
    }
    let bytes = w
        .into_inner()
        .map_err(|e| CliError::Domain(format!("csv buffer: {e}")))?;
    write_bytes(out, &bytes)
}
