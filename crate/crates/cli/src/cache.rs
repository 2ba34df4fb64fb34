//! On-disk cache of exact polynomials, one JSON file per `(family, n)`.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use twistcs::exactpoly::BiPoly;

/// Bumped whenever the stored representation changes; stale files are ignored.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Serialize, Deserialize)]
struct Entry {
    schema: u32,
    family: String,
    n: i64,
    poly: BiPoly,
}

pub struct Cache {
    dir: PathBuf,
}

impl Cache {
    pub fn new(dir: &Path) -> Self {
        Cache {
            dir: dir.to_path_buf(),
        }
    }

    fn path(&self, family: &str, n: i64) -> PathBuf {
        self.dir.join(format!("{family}_{n}.json"))
    }

    /// A cached polynomial, or `None` on a miss, stale schema or unreadable file.
    pub fn load(&self, family: &str, n: i64) -> Option<BiPoly> {
        let text = fs::read_to_string(self.path(family, n)).ok()?;
        let e: Entry = serde_json::from_str(&text).ok()?;
        (e.schema == SCHEMA_VERSION && e.family == family && e.n == n).then_some(e.poly)
    }

    /// Best effort: a read-only or missing directory only costs recomputation.
    pub fn store(&self, family: &str, n: i64, poly: &BiPoly) {
        let e = Entry {
            schema: SCHEMA_VERSION,
            family: family.to_string(),
            n,
            poly: poly.clone(),
        };
        if fs::create_dir_all(&self.dir).is_ok() {
            if let Ok(text) = serde_json::to_string(&e) {
                let _ = fs::write(self.path(family, n), text);
            }
        }
    }

    /// Load, or compute and store.
    pub fn get_or_compute<E>(
        cache: Option<&Cache>,
        family: &str,
        n: i64,
        compute: impl FnOnce() -> Result<BiPoly, E>,
    ) -> Result<BiPoly, E> {
        if let Some(p) = cache.and_then(|c| c.load(family, n)) {
            return Ok(p);
        }
        let p = compute()?;
        if let Some(c) = cache {
            c.store(family, n, &p);
        }
        Ok(p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use twistcs::exactpoly::Vars;

    #[test]
    fn round_trip_and_schema_guard() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::new(dir.path());
        let p = BiPoly::from_terms(Vars::lm(), [(0u32, 0u32, 1), (1, 6, 1)]);
        assert!(cache.load("apoly", -1).is_none());
        cache.store("apoly", -1, &p);
        assert_eq!(cache.load("apoly", -1), Some(p));
        assert!(cache.load("pdist", -1).is_none());

        let path = cache.path("apoly", -1);
        let stale = fs::read_to_string(&path)
            .unwrap()
            .replace(&format!("\"schema\":{SCHEMA_VERSION}"), "\"schema\":0");
        fs::write(&path, stale).unwrap();
        assert!(cache.load("apoly", -1).is_none());
    }
}
