//! Configuration, manifests and CSV output shared with external tooling.

mod config;
mod keyvalue;
mod manifest;
mod snapshot;

use std::path::Path;

use crate::error::{Error, Result};

pub use config::{load_config, parse_config, write_config, CONFIG_SECTIONS};
pub use keyvalue::{Document, Writer};
pub use manifest::{config_from_manifest, load_manifest_config, RunManifest, BUILD_ID, TOOL_VERSION};
pub use snapshot::{parse_snapshot, read_snapshot, snapshot_csv, snapshot_name, write_snapshot, SNAPSHOT_HEADER};

/// Writes `text` to `path`, creating parent directories.
pub fn write_text(path: &Path, text: &str) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    }
    std::fs::write(path, text).map_err(|e| Error::io(path, e))
}
