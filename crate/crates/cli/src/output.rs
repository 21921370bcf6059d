use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use tempfile::NamedTempFile;

use crate::config::ConfigFile;
use crate::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub config_path: Option<String>,
    pub preset: String,
    pub command: String,
    /// Resolved experiments; a valid config file on its own.
    pub config: ConfigFile,
    pub master_seed: u64,
    pub output_dir: String,
    pub tool_version: String,
    /// Seconds; `null` until the run finishes.
    pub wall_time: Option<f64>,
}

/// Output directory with `manifest.json` at the top and results underneath.
pub struct OutDir {
    root: PathBuf,
}

impl OutDir {
    pub fn create(root: &Path) -> Result<Self, CliError> {
        let dir = Self { root: root.to_path_buf() };
        std::fs::create_dir_all(dir.results())
            .map_err(|e| CliError::Runtime(format!("cannot create {}: {e}", dir.results().display())))?;
        Ok(dir)
    }

    pub fn results(&self) -> PathBuf {
        self.root.join("results")
    }

    pub fn write_manifest(&self, manifest: &RunManifest) -> Result<(), CliError> {
        let mut text = serde_json::to_string_pretty(manifest).expect("manifest serializes");
        text.push('\n');
        write_atomic(&self.root.join("manifest.json"), |w| w.write_all(text.as_bytes()).map_err(Into::into))
    }

    /// Writes `results/<name>` through `fill`.
    pub fn write_result<F>(&self, name: &str, fill: F) -> Result<PathBuf, CliError>
    where
        F: FnOnce(&mut dyn Write) -> Result<(), CliError>,
    {
        let path = self.results().join(name);
        write_atomic(&path, fill)?;
        Ok(path)
    }

    pub fn write_json<T: Serialize>(&self, name: &str, value: &T) -> Result<PathBuf, CliError> {
        self.write_result(name, |w| {
            serde_json::to_writer_pretty(&mut *w, value).map_err(|e| CliError::Runtime(e.to_string()))?;
            w.write_all(b"\n").map_err(Into::into)
        })
    }
}

/// Fills a temp file next to `path`, then renames it into place, so an error
/// never leaves a truncated file behind.
pub fn write_atomic<F>(path: &Path, fill: F) -> Result<(), CliError>
where
    F: FnOnce(&mut dyn Write) -> Result<(), CliError>,
{
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let mut tmp = NamedTempFile::new_in(dir)?;
    {
        let mut buf = std::io::BufWriter::new(tmp.as_file_mut());
        fill(&mut buf)?;
        buf.flush()?;
    }
    tmp.persist(path)
        .map_err(|e| CliError::Runtime(format!("cannot write {}: {}", path.display(), e.error)))?;
    Ok(())
}
