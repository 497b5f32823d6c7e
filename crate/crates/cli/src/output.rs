//! Output discipline: claim-then-commit file slots, float formatting, and
//! sidecar metadata.
//!
//! Ordering contract for every command:
//!
//! 1. validate the full configuration (nothing touches the filesystem);
//! 2. *claim* every output slot — this creates the files, so an
//!    unwritable path fails before any computation starts;
//! 3. compute;
//! 4. *commit* the rendered bytes, or *abandon* the claims on a
//!    numerical failure so no partial or empty data file survives.
//!
//! Data files carry no timestamps or environment details; anything a
//! rerun could not reproduce byte-for-byte belongs in the sidecar
//! (`<out>.meta.json`), which itself only records the resolved
//! configuration and schema and is therefore deterministic too.

use std::fs::{self, File};
use std::io::Write;
use std::path::{Path, PathBuf};

use crate::error::CliError;

/// A created-but-unwritten output file.
#[derive(Debug)]
pub struct OutputSlot {
    path: PathBuf,
    file: File,
}

impl OutputSlot {
    /// Create (truncate) the file now, proving the path is writable
    /// before any compute time is spent.
    pub fn claim(path: &Path) -> Result<Self, CliError> {
        let file = File::create(path)
            .map_err(|e| CliError::Io(format!("cannot create {}: {e}", path.display())))?;
        Ok(OutputSlot { path: path.to_path_buf(), file })
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    /// Write the full payload and flush.
    pub fn commit(mut self, bytes: &[u8]) -> Result<(), CliError> {
        self.file
            .write_all(bytes)
            .and_then(|_| self.file.flush())
            .map_err(|e| CliError::Io(format!("cannot write {}: {e}", self.path.display())))
    }

    /// Withdraw the claim: remove the (empty) file. Used when computation
    /// fails after the slot was created.
    pub fn abandon(self) {
        let path = self.path.clone();
        drop(self);
        let _ = fs::remove_file(path);
    }
}

/// Sidecar path for a data file: `<out>.meta.json` alongside it.
pub fn sidecar_path(out: &Path) -> PathBuf {
    let mut name = out.file_name().unwrap_or_default().to_os_string();
    name.push(".meta.json");
    out.with_file_name(name)
}

/// Render a float for the delimited-text tables.
///
/// Both branches print the shortest digit string that parses back to the
/// identical bit pattern — negative zero included, so a table row is a
/// faithful image of the computed value. The exponent form takes over
/// outside `[1e-4, 1e7)` so deep-tail densities do not unroll into
/// hundreds of zeros.
pub fn fmt_float(v: f64) -> String {
    if v.is_nan() {
        return "NaN".to_string();
    }
    if v == 0.0 {
        return if v.is_sign_negative() { "-0" } else { "0" }.to_string();
    }
    let mag = v.abs();
    if (1e-4..1e7).contains(&mag) {
        format!("{v}")
    } else {
        format!("{v:e}")
    }
}

/// Serialize a JSON document with a trailing newline.
pub fn render_json<T: serde::Serialize>(doc: &T) -> Result<Vec<u8>, CliError> {
    let mut bytes = serde_json::to_vec_pretty(doc)
        .map_err(|e| CliError::Io(format!("cannot serialize report: {e}")))?;
    bytes.push(b'\n');
    Ok(bytes)
}

// ---------------------------------------------------------------------------
// Tests
// ---------------------------------------------------------------------------
