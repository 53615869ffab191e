//! Content-addressed table cache. A key hashes everything a table depends
//! on; a stored value is only trusted when its recorded key fields match.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{de::DeserializeOwned, Deserialize, Serialize};
use sha2::{Digest, Sha256};

/// Bumped whenever any table algorithm changes its output.
pub const ALGORITHM_VERSION: &str = "antisph-tables-1";
/// Bumped whenever the stored JSON layout changes.
pub const FORMAT_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CacheKey {
    pub table: String,
    pub matrix: String,
    pub subset: u64,
    pub cap: usize,
    pub algorithm: String,
}

impl CacheKey {
    pub fn new(table: &str, matrix: String, subset: u64, cap: usize) -> Self {
        CacheKey { table: table.into(), matrix, subset, cap, algorithm: ALGORITHM_VERSION.into() }
    }

    pub fn digest(&self) -> String {
        let canonical = serde_json::to_string(self).expect("key serializes");
        hex::encode(&Sha256::digest(canonical.as_bytes())[..])
    }
}

#[derive(Serialize, Deserialize)]
struct Stored<T> {
    format: u32,
    key: CacheKey,
    value: T,
}

pub struct Cache {
    dir: PathBuf,
}

impl Cache {
    pub fn new(dir: &Path) -> std::io::Result<Self> {
        fs::create_dir_all(dir)?;
        Ok(Cache { dir: dir.to_path_buf() })
    }

    fn path(&self, key: &CacheKey) -> PathBuf {
        self.dir.join(format!("{}.json", key.digest()))
    }

    /// A miss on absence, unreadable JSON, a format bump or a key collision.
    pub fn load<T: DeserializeOwned>(&self, key: &CacheKey) -> Option<T> {
        let text = fs::read_to_string(self.path(key)).ok()?;
        let stored: Stored<T> = serde_json::from_str(&text).ok()?;
        (stored.format == FORMAT_VERSION && stored.key == *key).then_some(stored.value)
    }

    /// Writes to a sibling temporary file and renames it into place, so a
    /// reader sees either the old value or the complete new one.
    pub fn store<T: Serialize>(&self, key: &CacheKey, value: &T) -> std::io::Result<()> {
        let stored = Stored { format: FORMAT_VERSION, key: key.clone(), value };
        let target = self.path(key);
        let tmp = self.dir.join(format!(".{}.{}.tmp", key.digest(), std::process::id()));
        {
            let mut f = fs::File::create(&tmp)?;
            f.write_all(serde_json::to_string(&stored)?.as_bytes())?;
            f.sync_all()?;
        }
        fs::rename(&tmp, &target)
    }
}
