//! Output files (written atomically) and the run manifest.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::Context;
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::CliError;

pub const TOOL: &str = "ablab";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Writes `contents` to `dir/name` via a temp file in the same directory and a rename.
pub fn write_atomic(dir: &Path, name: &str, contents: &[u8]) -> Result<PathBuf, CliError> {
    let run = || -> anyhow::Result<PathBuf> {
        std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        let mut builder = tempfile::Builder::new();
        #[cfg(unix)]
        {
            use std::os::unix::fs::PermissionsExt;
            builder.permissions(std::fs::Permissions::from_mode(0o644));
        }
        let mut tmp = builder.tempfile_in(dir)?;
        tmp.write_all(contents)?;
        tmp.as_file().sync_all()?;
        let target = dir.join(name);
        tmp.persist(&target)
            .with_context(|| format!("renaming into {}", target.display()))?;
        Ok(target)
    };
    run().map_err(|e| CliError::internal("output", e))
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

/// Wall-clock time per stage, in milliseconds.
#[derive(Default)]
pub struct Timings {
    stages: BTreeMap<String, u64>,
}

impl Timings {
    pub fn time<T>(&mut self, stage: &str, f: impl FnOnce() -> T) -> T {
        let start = Instant::now();
        let out = f();
        self.stages
            .insert(stage.to_owned(), start.elapsed().as_millis() as u64);
        out
    }

    pub fn into_map(self) -> BTreeMap<String, u64> {
        self.stages
    }
}

/// Everything needed to rerun a command. Passing this file as `--config`
/// replays the embedded config.
#[derive(Serialize)]
pub struct Manifest<C: Serialize, O: Serialize> {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: &'static str,
    pub config_sha256: String,
    pub config: C,
    pub timings_ms: BTreeMap<String, u64>,
    pub outcome: O,
    /// sha256 of each output file.
    pub outputs: BTreeMap<String, String>,
}

/// Named output files, kept in memory until the run finishes.
#[derive(Default)]
pub struct Outputs {
    pub files: BTreeMap<String, String>,
}

impl Outputs {
    pub fn add(&mut self, name: &str, contents: String) {
        self.files.insert(name.to_owned(), contents);
    }

    pub fn get(&self, name: &str) -> Option<&str> {
        self.files.get(name).map(String::as_str)
    }

    pub fn digests(&self) -> BTreeMap<String, String> {
        self.files
            .iter()
            .map(|(k, v)| (k.clone(), sha256_hex(v.as_bytes())))
            .collect()
    }

    /// Writes every file, then the manifest last.
    pub fn write_all<C: Serialize, O: Serialize>(
        &self,
        dir: &Path,
        command: &'static str,
        config: &C,
        timings: Timings,
        outcome: O,
    ) -> Result<(), CliError> {
        for (name, contents) in &self.files {
            write_atomic(dir, name, contents.as_bytes())?;
        }
        let config_json = serde_json::to_vec(config).expect("serializable");
        let manifest = Manifest {
            tool: TOOL,
            version: VERSION,
            command,
            config_sha256: sha256_hex(&config_json),
            config,
            timings_ms: timings.into_map(),
            outcome,
            outputs: self.digests(),
        };
        write_atomic(dir, "manifest.json", to_json(&manifest).as_bytes())?;
        Ok(())
    }
}
