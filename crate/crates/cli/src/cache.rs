//! Content-addressed on-disk cache. Entries are keyed by the artifact version and the full
//! request; each stores a hash of its payload and is recomputed if the hash fails.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::SystemTime;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

/// Bumped whenever an algorithm change alters any cached payload.
pub const ARTIFACT_VERSION: &str = concat!(env!("CARGO_PKG_VERSION"), "+1");

#[derive(Serialize, Deserialize)]
struct Entry {
    key: String,
    hash: String,
    payload: String,
}

#[derive(Debug, Serialize)]
pub struct GcSummary {
    pub bytes_before: u64,
    pub bytes_after: u64,
    pub kept: usize,
    pub evicted: Vec<String>,
}

#[derive(Debug, Serialize)]
pub struct CacheStat {
    pub dir: String,
    pub entries: usize,
    pub bytes: u64,
    pub artifact_version: &'static str,
}

pub struct Cache {
    dir: PathBuf,
}

fn sha256_hex(s: &str) -> String {
    hex::encode(Sha256::digest(s.as_bytes()))
}

impl Cache {
    pub fn open(dir: &Path) -> std::io::Result<Self> {
        fs::create_dir_all(dir)?;
        Ok(Cache {
            dir: dir.to_path_buf(),
        })
    }

    fn path_for(&self, key: &str) -> PathBuf {
        self.dir.join(format!("{}.json", sha256_hex(key)))
    }

    /// Payload for `key`, if present and intact. A hit refreshes the entry's recency.
    pub fn get(&self, key: &str) -> Option<String> {
        let path = self.path_for(key);
        let text = fs::read_to_string(&path).ok()?;
        let entry: Entry = serde_json::from_str(&text).ok()?;
        if entry.key != key || entry.hash != sha256_hex(&entry.payload) {
            return None;
        }
        if let Ok(f) = fs::File::options().write(true).open(&path) {
            let _ = f.set_modified(SystemTime::now());
        }
        Some(entry.payload)
    }

    /// Write-temp-then-rename, so readers never see a partial entry.
    pub fn put(&self, key: &str, payload: &str) -> std::io::Result<()> {
        let entry = Entry {
            key: key.to_string(),
            hash: sha256_hex(payload),
            payload: payload.to_string(),
        };
        let mut tmp = tempfile::NamedTempFile::new_in(&self.dir)?;
        tmp.write_all(
            serde_json::to_string(&entry)
                .expect("entry serializes")
                .as_bytes(),
        )?;
        tmp.persist(self.path_for(key)).map_err(|e| e.error)?;
        Ok(())
    }

    fn entries(&self) -> std::io::Result<Vec<(SystemTime, u64, PathBuf)>> {
        let mut out = Vec::new();
        for item in fs::read_dir(&self.dir)? {
            let item = item?;
            let path = item.path();
            if path.extension().and_then(|e| e.to_str()) != Some("json") {
                continue;
            }
            let meta = item.metadata()?;
            out.push((meta.modified()?, meta.len(), path));
        }
        out.sort();
        Ok(out)
    }

    pub fn stat(&self) -> std::io::Result<CacheStat> {
        let entries = self.entries()?;
        Ok(CacheStat {
            dir: self.dir.display().to_string(),
            entries: entries.len(),
            bytes: entries.iter().map(|e| e.1).sum(),
            artifact_version: ARTIFACT_VERSION,
        })
    }

    /// Least recently used first, until the total size fits in `max_bytes`.
    pub fn gc(&self, max_bytes: u64) -> std::io::Result<GcSummary> {
        let entries = self.entries()?;
        let bytes_before: u64 = entries.iter().map(|e| e.1).sum();
        let mut total = bytes_before;
        let mut evicted = Vec::new();
        for (_, len, path) in &entries {
            if total <= max_bytes {
                break;
            }
            let key = fs::read_to_string(path)
                .ok()
                .and_then(|t| serde_json::from_str::<Entry>(&t).ok())
                .map(|e| e.key)
                .unwrap_or_else(|| path.display().to_string());
            fs::remove_file(path)?;
            total -= len;
            evicted.push(key);
        }
        Ok(GcSummary {
            bytes_before,
            bytes_after: total,
            kept: entries.len() - evicted.len(),
            evicted,
        })
    }
}
