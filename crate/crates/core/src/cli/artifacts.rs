//! Atomic artifact writing and the run manifest.

use crate::error::Error;
use serde::Serialize;
use sha2::{Digest, Sha256};
use std::io::Write as _;
use std::path::{Path, PathBuf};

pub const MANIFEST_NAME: &str = "manifest.json";
pub const MANIFEST_FORMAT_VERSION: u32 = 1;

pub(crate) fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes)
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ArtifactEntry {
    pub name: String,
    pub bytes: usize,
    pub sha256: String,
}

/// Writes files under one output directory, each via a temp file in the same
/// directory renamed into place, so readers never see a partial file.
#[derive(Debug)]
pub struct ArtifactWriter {
    dir: PathBuf,
    written: Vec<ArtifactEntry>,
}

impl ArtifactWriter {
    pub fn new(dir: impl Into<PathBuf>) -> Result<ArtifactWriter, Error> {
        let dir = dir.into();
        std::fs::create_dir_all(&dir).map_err(|source| Error::Output {
            path: dir.display().to_string(),
            source,
        })?;
        Ok(ArtifactWriter {
            dir,
            written: Vec::new(),
        })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    /// Writes `contents` to `name`, a `/`-separated path relative to the
    /// output directory.
    pub fn write(&mut self, name: &str, contents: &str) -> Result<(), Error> {
        let path = self.dir.join(name);
        let parent = path.parent().unwrap_or(&self.dir).to_path_buf();
        let out_err = |source: std::io::Error| Error::Output {
            path: path.display().to_string(),
            source,
        };
        std::fs::create_dir_all(&parent).map_err(out_err)?;
        let mut tmp = tempfile::NamedTempFile::new_in(&parent).map_err(out_err)?;
        tmp.write_all(contents.as_bytes()).map_err(out_err)?;
        tmp.as_file().sync_all().map_err(out_err)?;
        tmp.persist(&path).map_err(|e| out_err(e.error))?;
        self.written.retain(|a| a.name != name);
        self.written.push(ArtifactEntry {
            name: name.to_string(),
            bytes: contents.len(),
            sha256: sha256_hex(contents.as_bytes()),
        });
        Ok(())
    }

    pub fn entries(&self) -> &[ArtifactEntry] {
        &self.written
    }

    /// Writes the manifest last, listing every artifact sorted by name.
    pub fn finish(mut self, manifest: Manifest) -> Result<Vec<ArtifactEntry>, Error> {
        let mut artifacts = std::mem::take(&mut self.written);
        artifacts.sort_by(|a, b| a.name.cmp(&b.name));
        let doc = ManifestDoc {
            format_version: MANIFEST_FORMAT_VERSION,
            tool: concat!("promoscan ", env!("CARGO_PKG_VERSION")),
            manifest,
            artifacts: &artifacts,
        };
        let mut text = serde_json::to_string_pretty(&doc).expect("manifest serializes");
        text.push('\n');
        self.write(MANIFEST_NAME, &text)?;
        artifacts.extend(self.written);
        Ok(artifacts)
    }
}

/// An input file identified by the path given on the command line and its
/// content digest.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InputEntry {
    pub role: &'static str,
    pub path: String,
    pub sha256: String,
}

/// Everything needed to rerun a command: its name, the master seed, each
/// derived stage seed, the resolved options and the input digests. The
/// output directory is deliberately absent.
#[derive(Debug, Clone, Serialize)]
pub struct Manifest {
    pub command: &'static str,
    pub seed: u64,
    pub stage_seeds: indexmap::IndexMap<String, u64>,
    pub options: serde_json::Value,
    pub inputs: Vec<InputEntry>,
}

#[derive(Serialize)]
struct ManifestDoc<'a> {
    format_version: u32,
    tool: &'static str,
    #[serde(flatten)]
    manifest: Manifest,
    artifacts: &'a [ArtifactEntry],
}
