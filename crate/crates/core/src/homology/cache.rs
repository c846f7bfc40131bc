//! Content-addressed on-disk cache of chain complexes.
//!
//! A complex stored under key `K` occupies `K-meta.json` (degrees, flags)
//! and one `K-d<k>.json` triplet file per differential.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::{ChainComplex, Orientation};
use crate::error::Result;
use crate::linalg::SparseIntMatrix;

#[derive(Serialize, Deserialize)]
struct Meta {
    orientation: Orientation,
    dims: Vec<usize>,
    augmented: bool,
    trusted_top: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct CacheStats {
    pub entries: usize,
    pub files: usize,
    pub bytes: u64,
}

#[derive(Clone, Debug)]
pub struct MatrixCache {
    dir: PathBuf,
}

impl MatrixCache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        Self { dir: dir.into() }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    /// Hex sha256 of the parts, separated so that concatenations differ.
    pub fn key(parts: &[&str]) -> String {
        let mut h = Sha256::new();
        for p in parts {
            h.update((p.len() as u64).to_le_bytes());
            h.update(p.as_bytes());
        }
        h.finalize().iter().map(|b| format!("{b:02x}")).collect()
    }

    fn meta_path(&self, key: &str) -> PathBuf {
        self.dir.join(format!("{key}-meta.json"))
    }

    fn matrix_path(&self, key: &str, k: usize) -> PathBuf {
        self.dir.join(format!("{key}-d{k}.json"))
    }

    /// A stored complex, or `None` when absent or unreadable.
    pub fn get(&self, key: &str) -> Option<ChainComplex> {
        let meta: Meta = serde_json::from_slice(&fs::read(self.meta_path(key)).ok()?).ok()?;
        let count = match meta.orientation {
            Orientation::Chain => meta.dims.len(),
            Orientation::Cochain => meta.dims.len().checked_sub(1)?,
        };
        let mut differentials = Vec::with_capacity(count);
        for k in 0..count {
            let m: SparseIntMatrix =
                serde_json::from_slice(&fs::read(self.matrix_path(key, k)).ok()?).ok()?;
            differentials.push(m);
        }
        let c = match meta.orientation {
            Orientation::Chain => {
                ChainComplex::new_chain(meta.dims, differentials, meta.augmented, meta.trusted_top)
            }
            Orientation::Cochain => {
                ChainComplex::new_cochain(meta.dims, differentials, meta.trusted_top)
            }
        };
        c.ok()
    }

    pub fn put(&self, key: &str, c: &ChainComplex) -> Result<()> {
        fs::create_dir_all(&self.dir)?;
        for (k, m) in c.differentials.iter().enumerate() {
            self.write_atomic(
                &self.matrix_path(key, k),
                &serde_json::to_vec(m).expect("matrices serialize"),
            )?;
        }
        let meta = Meta {
            orientation: c.orientation,
            dims: c.dims.clone(),
            augmented: c.augmented,
            trusted_top: c.trusted_top,
        };
        // meta last: a complex is visible only once all matrices are in place
        self.write_atomic(
            &self.meta_path(key),
            &serde_json::to_vec(&meta).expect("meta serializes"),
        )
    }

    fn write_atomic(&self, path: &Path, bytes: &[u8]) -> Result<()> {
        let name = path.file_name().and_then(|n| n.to_str()).unwrap_or("entry");
        let tmp = self.dir.join(format!(".{name}.{}.tmp", std::process::id()));
        {
            let mut f = fs::File::create(&tmp)?;
            f.write_all(bytes)?;
            f.sync_all()?;
        }
        fs::rename(&tmp, path)?;
        Ok(())
    }

    fn cache_files(&self) -> Result<Vec<PathBuf>> {
        if !self.dir.exists() {
            return Ok(Vec::new());
        }
        let mut files = Vec::new();
        for entry in fs::read_dir(&self.dir)? {
            let path = entry?.path();
            let is_ours = path.file_name().and_then(|n| n.to_str()).is_some_and(|n| {
                n.ends_with(".json")
                    && n.len() > 64
                    && n[..64].bytes().all(|b| b.is_ascii_hexdigit())
            });
            if is_ours && path.is_file() {
                files.push(path);
            }
        }
        files.sort();
        Ok(files)
    }

    pub fn stats(&self) -> Result<CacheStats> {
        let files = self.cache_files()?;
        let mut stats = CacheStats::default();
        for f in &files {
            stats.files += 1;
            stats.bytes += fs::metadata(f)?.len();
            if f.to_string_lossy().ends_with("-meta.json") {
                stats.entries += 1;
            }
        }
        Ok(stats)
    }

    /// Removes every cache file; returns how many were deleted.
    pub fn clear(&self) -> Result<usize> {
        let files = self.cache_files()?;
        for f in &files {
            fs::remove_file(f)?;
        }
        Ok(files.len())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::homology::normalized_complex;
    use crate::simplicial::sphere_model;

    #[test]
    fn round_trip_and_clear() {
        let dir = tempfile::tempdir().unwrap();
        let cache = MatrixCache::new(dir.path());
        assert_eq!(cache.stats().unwrap(), CacheStats::default());
        let c = normalized_complex(&sphere_model(2, 4).space, true, 3);
        let key = MatrixCache::key(&["sphere", "2"]);
        assert!(cache.get(&key).is_none());
        cache.put(&key, &c).unwrap();
        assert_eq!(cache.get(&key).unwrap(), c);
        let stats = cache.stats().unwrap();
        assert_eq!(stats.entries, 1);
        assert_eq!(stats.files, 1 + c.differentials.len());
        assert_eq!(cache.clear().unwrap(), stats.files);
        assert_eq!(cache.stats().unwrap().entries, 0);
    }

    #[test]
    fn keys_separate_parts() {
        assert_ne!(
            MatrixCache::key(&["ab", "c"]),
            MatrixCache::key(&["a", "bc"])
        );
    }
}
