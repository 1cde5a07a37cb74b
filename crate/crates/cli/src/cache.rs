// SPDX-License-Identifier: Apache-2.0

//! On-disk cache of minimal polynomial results.

use std::io::Write;
use std::path::{Path, PathBuf};

use formclass::LevelStructure;
use num_bigint::BigInt;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

/// Bumped whenever the stored layout or the computation behind it changes.
pub const FORMAT_VERSION: &str = "1";

pub fn entry_path(dir: &Path, disc: &BigInt, level: &LevelStructure) -> PathBuf {
    let g = level.g().iter().map(|t| t.to_string()).collect::<Vec<_>>().join(",");
    let digest = Sha256::digest(g.as_bytes());
    let hash: String = digest.iter().take(8).map(|b| format!("{b:02x}")).collect();
    dir.join(format!("minpoly_D{disc}_N{}_G{hash}.json", level.n()))
}

/// The stored command output, if the entry exists and has the current format.
pub fn load(path: &Path) -> Option<Value> {
    let text = std::fs::read_to_string(path).ok()?;
    let entry: Value = serde_json::from_str(&text).ok()?;
    if entry.get("format_version")?.as_str()? != FORMAT_VERSION {
        return None;
    }
    entry.get("output").cloned()
}

/// Writes the entry through a temporary file in the same directory and renames it into place.
pub fn store(path: &Path, digits: u32, output: &Value) -> std::io::Result<()> {
    let dir = path.parent().expect("cache entries live in a directory");
    std::fs::create_dir_all(dir)?;
    let entry = json!({
        "format_version": FORMAT_VERSION,
        "digits": digits.to_string(),
        "output": output,
    });
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(serde_json::to_string_pretty(&entry)?.as_bytes())?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}
