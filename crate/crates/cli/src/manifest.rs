//! Run manifests: every file-producing command writes `<out>.manifest.json`
//! recording the command, its flags, the seed, the tool version, and digests
//! of every input and output. Identical command cores imply bit-identical
//! outputs.

use serde::Serialize;
use sha2::{Digest, Sha256};
use std::fs;
use std::path::{Path, PathBuf};

use crate::CliError;

#[derive(Serialize)]
pub struct FileDigest {
    pub path: String,
    pub sha256: String,
}

#[derive(Serialize)]
pub struct RunManifest {
    pub command: String,
    pub argv: Vec<String>,
    pub seed: Option<u64>,
    pub version: &'static str,
    pub inputs: Vec<FileDigest>,
    pub outputs: Vec<FileDigest>,
    pub elapsed_seconds: f64,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    let mut hasher = Sha256::new();
    hasher.update(bytes);
    let digest = hasher.finalize();
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

fn digest_file(path: &Path) -> Result<FileDigest, CliError> {
    let bytes = fs::read(path)?;
    Ok(FileDigest {
        path: path.display().to_string(),
        sha256: sha256_hex(&bytes),
    })
}

/// Write `bytes` to `path` atomically (temp file, then rename).
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    let mut tmp: PathBuf = path.to_path_buf();
    let mut name = path
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_else(|| "out".to_string());
    name.push_str(".tmp");
    tmp.set_file_name(name);
    fs::write(&tmp, bytes)?;
    fs::rename(&tmp, path)?;
    Ok(())
}

pub fn manifest_path(out: &Path) -> PathBuf {
    let mut name = out
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_else(|| "out".to_string());
    name.push_str(".manifest.json");
    let mut p = out.to_path_buf();
    p.set_file_name(name);
    p
}

/// Emit the manifest for a finished command next to its primary output.
pub fn emit(
    command: &str,
    seed: Option<u64>,
    inputs: &[&Path],
    outputs: &[&Path],
    elapsed_seconds: f64,
) -> Result<(), CliError> {
    let manifest = RunManifest {
        command: command.to_string(),
        argv: std::env::args().collect(),
        seed,
        version: env!("CARGO_PKG_VERSION"),
        inputs: inputs
            .iter()
            .map(|p| digest_file(p))
            .collect::<Result<_, _>>()?,
        outputs: outputs
            .iter()
            .map(|p| digest_file(p))
            .collect::<Result<_, _>>()?,
        elapsed_seconds,
    };
    let primary = outputs
        .first()
        .expect("manifest requires at least one output");
    let json = serde_json::to_vec_pretty(&manifest)?;
    write_atomic(&manifest_path(primary), &json)
}
