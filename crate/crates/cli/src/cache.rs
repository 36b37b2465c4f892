//! On-disk cache of expensive results, one JSON file per content hash.
//!
//! Writers take `<key>.lock` with an exclusive create before computing, so two
//! processes asking for the same slice compute it once. Files are written to a
//! temporary name and renamed into place; readers never see partial output.

use std::fs::{self, OpenOptions};
use std::io::{ErrorKind, Write};
use std::path::{Path, PathBuf};
use std::thread::sleep;
use std::time::{Duration, SystemTime};

use serde::de::DeserializeOwned;
use serde::Serialize;
use sha2::{Digest, Sha256};

pub const CACHE_ENV: &str = "KHOXOTIC_CACHE_DIR";

/// A lock older than this is assumed to belong to a dead process.
const STALE_LOCK: Duration = Duration::from_secs(6 * 3600);
const POLL: Duration = Duration::from_millis(50);

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

/// Key of a computation: the hash of its kind, the convention version and
/// its canonical inputs.
pub fn key(kind: &str, parts: &[&str]) -> String {
    let mut h = Sha256::new();
    h.update(kind.as_bytes());
    h.update(khoxotic::CONVENTION_VERSION.to_le_bytes());
    for p in parts {
        h.update((p.len() as u64).to_le_bytes());
        h.update(p.as_bytes());
    }
    h.finalize().iter().map(|b| format!("{b:02x}")).collect()
}

pub fn default_dir() -> PathBuf {
    let home = std::env::var_os("HOME").map(PathBuf::from).unwrap_or_else(std::env::temp_dir);
    home.join(".cache").join("khoxotic")
}

pub struct Cache {
    dir: Option<PathBuf>,
    hits: std::cell::Cell<usize>,
}

struct LockGuard(PathBuf);

impl Drop for LockGuard {
    fn drop(&mut self) {
        let _ = fs::remove_file(&self.0);
    }
}

impl Cache {
    /// A cache rooted at `dir`; `None` disables caching.
    pub fn open(dir: Option<&Path>) -> std::io::Result<Self> {
        if let Some(d) = dir {
            fs::create_dir_all(d)?;
        }
        Ok(Cache { dir: dir.map(Path::to_path_buf), hits: 0.into() })
    }

    pub fn hits(&self) -> usize {
        self.hits.get()
    }

    fn path(&self, key: &str, ext: &str) -> Option<PathBuf> {
        self.dir.as_ref().map(|d| d.join(format!("{key}.{ext}")))
    }

    fn read<T: DeserializeOwned>(&self, key: &str) -> Option<T> {
        let text = fs::read_to_string(self.path(key, "json")?).ok()?;
        serde_json::from_str(&text).ok()
    }

    fn write<T: Serialize>(&self, key: &str, value: &T) -> std::io::Result<()> {
        let Some(path) = self.path(key, "json") else { return Ok(()) };
        let tmp = self.path(key, &format!("tmp{}", std::process::id())).expect("cache dir is set");
        let mut f = fs::File::create(&tmp)?;
        f.write_all(serde_json::to_string(value).expect("cached values serialize").as_bytes())?;
        f.sync_all()?;
        fs::rename(tmp, path)
    }

    fn lock(&self, key: &str) -> std::io::Result<Option<LockGuard>> {
        let Some(path) = self.path(key, "lock") else { return Ok(None) };
        loop {
            match OpenOptions::new().write(true).create_new(true).open(&path) {
                Ok(mut f) => {
                    let _ = writeln!(f, "{}", std::process::id());
                    return Ok(Some(LockGuard(path)));
                }
                Err(e) if e.kind() == ErrorKind::AlreadyExists => {
                    let age = fs::metadata(&path)
                        .and_then(|m| m.modified())
                        .ok()
                        .and_then(|t| SystemTime::now().duration_since(t).ok());
                    if age.is_some_and(|a| a > STALE_LOCK) {
                        let _ = fs::remove_file(&path);
                    } else {
                        sleep(POLL);
                    }
                }
                Err(e) => return Err(e),
            }
        }
    }

    /// The cached value under `key`, computing and storing it on a miss.
    pub fn get_or_compute<T, E>(&self, key: &str, compute: impl FnOnce() -> Result<T, E>) -> Result<T, E>
    where
        T: Serialize + DeserializeOwned,
        E: From<std::io::Error>,
    {
        if let Some(v) = self.read(key) {
            self.hits.set(self.hits.get() + 1);
            return Ok(v);
        }
        let _guard = self.lock(key)?;
        // another process may have finished while we waited
        if let Some(v) = self.read(key) {
            self.hits.set(self.hits.get() + 1);
            return Ok(v);
        }
        let v = compute()?;
        self.write(key, &v)?;
        Ok(v)
    }
}
