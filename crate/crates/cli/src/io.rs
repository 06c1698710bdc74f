use std::io::Write;
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};

use crate::error::{CliError, Stage};

/// A whole input file plus its digest; parsing works from these bytes so the
/// digest always describes exactly what was read.
pub struct Input {
    pub path: PathBuf,
    pub bytes: Vec<u8>,
}

impl Input {
    pub fn read(stage: Stage, what: &str, path: &Path) -> Result<Self, CliError> {
        let bytes = std::fs::read(path)
            .map_err(|e| CliError::input(stage, format!("cannot read {what} {}: {e}", path.display())))?;
        Ok(Input { path: path.to_path_buf(), bytes })
    }

    pub fn text(&self, stage: Stage) -> Result<&str, CliError> {
        std::str::from_utf8(&self.bytes)
            .map_err(|e| CliError::input(stage, format!("{}: not valid UTF-8: {e}", self.path.display())))
    }

    pub fn sha256(&self) -> String {
        sha256_hex(&self.bytes)
    }

    /// Wraps a parse error with the file path.
    pub fn invalid(&self, stage: Stage, err: impl std::fmt::Display) -> CliError {
        CliError::input(stage, format!("{}: {err}", self.path.display()))
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Writes through a temporary file in the destination directory, then
/// renames it into place.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    let fail = |e: &dyn std::fmt::Display| CliError::pipeline(Stage::Write, format!("cannot write {}: {e}", path.display()));
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| fail(&e))?;
    tmp.write_all(bytes).map_err(|e| fail(&e))?;
    tmp.as_file().sync_all().map_err(|e| fail(&e))?;
    tmp.persist(path).map_err(|e| fail(&e.error))?;
    Ok(())
}
