//! Content-addressed count cache on disk.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Mutex;

use hallforge::CountStore;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

#[derive(Serialize, Deserialize)]
struct Entry {
    key: String,
    value: String,
    digest: String,
}

fn sha256_hex(s: &str) -> String {
    format!("{:x}", Sha256::digest(s.as_bytes()))
}

/// One file per key, named by the hash of the key. Entries carry the key and a
/// digest of the value; anything that fails to match is reported and ignored.
pub struct FileStore {
    dir: PathBuf,
    writer: Mutex<()>,
    corrupt: AtomicU64,
}

impl FileStore {
    pub fn open(dir: &Path) -> std::io::Result<Self> {
        fs::create_dir_all(dir)?;
        Ok(FileStore { dir: dir.to_path_buf(), writer: Mutex::new(()), corrupt: AtomicU64::new(0) })
    }

    pub fn path_for(&self, key: &str) -> PathBuf {
        self.dir.join(format!("{}.json", sha256_hex(key)))
    }

    pub fn corrupt_entries(&self) -> u64 {
        self.corrupt.load(Ordering::Relaxed)
    }
}

impl CountStore for FileStore {
    fn load(&self, key: &str) -> Option<String> {
        let path = self.path_for(key);
        let text = fs::read_to_string(&path).ok()?;
        match serde_json::from_str::<Entry>(&text) {
            Ok(e) if e.key == key && e.digest == sha256_hex(&e.value) => Some(e.value),
            _ => {
                self.corrupt.fetch_add(1, Ordering::Relaxed);
                eprintln!("warning: corrupt cache entry {}, recomputing", path.display());
                None
            }
        }
    }

    fn store(&self, key: &str, value: &str) {
        let entry = Entry { key: key.to_string(), value: value.to_string(), digest: sha256_hex(value) };
        let text = serde_json::to_string(&entry).expect("serializable");
        let path = self.path_for(key);
        let _guard = self.writer.lock().unwrap();
        let tmp = path.with_extension("tmp");
        let written = fs::File::create(&tmp)
            .and_then(|mut f| f.write_all(text.as_bytes()))
            .and_then(|_| fs::rename(&tmp, &path));
        if let Err(e) = written {
            eprintln!("warning: cannot write cache entry {}: {e}", path.display());
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_and_corruption() {
        let dir = tempfile::tempdir().unwrap();
        let store = FileStore::open(dir.path()).unwrap();
        assert_eq!(store.load("k"), None);
        store.store("k", "[1,2]");
        assert_eq!(store.load("k").as_deref(), Some("[1,2]"));
        let path = store.path_for("k");
        let text = fs::read_to_string(&path).unwrap().replace("[1,2]", "[1,3]");
        fs::write(&path, text).unwrap();
        assert_eq!(store.load("k"), None);
        assert_eq!(store.corrupt_entries(), 1);
        fs::write(&path, "garbage").unwrap();
        assert_eq!(store.load("k"), None);
        store.store("k", "[1,2]");
        assert_eq!(store.load("k").as_deref(), Some("[1,2]"));
    }
}
