//! Content-addressed result cache.
//!
//! Entries live at `<root>/<algebra hash>/<operation>_<parameters>.json` and
//! carry a format version; entries with another version are ignored. Writes
//! go to a temporary file in the same directory which is then renamed over
//! the target.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::algebra::AlgebraSpec;
use crate::codim::{codim, CodimOptions, CodimResult};
use crate::error::Result;

pub const CACHE_VERSION: u32 = 1;
pub const CACHE_ENV: &str = "PI_CODIM_CACHE";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CacheKey {
    pub algebra_hash: String,
    pub operation: String,
    pub parameters: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CacheEntry<T> {
    pub version: u32,
    pub key: CacheKey,
    pub seed: u64,
    pub payload: T,
}

#[derive(Clone, Debug)]
pub struct Cache {
    root: PathBuf,
}

impl Cache {
    pub fn new(root: impl Into<PathBuf>) -> Self {
        Cache { root: root.into() }
    }

    /// The flag value if given, else `PI_CODIM_CACHE`, else `./cache`.
    pub fn resolve(flag: Option<&Path>) -> Self {
        match flag {
            Some(p) => Cache::new(p),
            None => Cache::new(
                std::env::var_os(CACHE_ENV).map_or_else(|| PathBuf::from("cache"), PathBuf::from),
            ),
        }
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    pub fn path(&self, key: &CacheKey) -> PathBuf {
        self.root
            .join(&key.algebra_hash)
            .join(format!("{}_{}.json", key.operation, key.parameters))
    }

    /// The cached entry, or `None` when absent or of another version.
    pub fn get<T: DeserializeOwned>(&self, key: &CacheKey) -> Result<Option<CacheEntry<T>>> {
        let path = self.path(key);
        let text = match fs::read_to_string(&path) {
            Ok(t) => t,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
            Err(e) => return Err(e.into()),
        };
        let entry: CacheEntry<T> = serde_json::from_str(&text)?;
        Ok((entry.version == CACHE_VERSION && &entry.key == key).then_some(entry))
    }

    pub fn put<T: Serialize>(&self, key: &CacheKey, seed: u64, payload: &T) -> Result<PathBuf> {
        let path = self.path(key);
        let dir = path.parent().expect("entry path has a parent");
        fs::create_dir_all(dir)?;
        let entry = CacheEntry {
            version: CACHE_VERSION,
            key: key.clone(),
            seed,
            payload,
        };
        let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
        tmp.write_all(serde_json::to_string_pretty(&entry)?.as_bytes())?;
        tmp.as_file().sync_all()?;
        tmp.persist(&path).map_err(|e| e.error)?;
        Ok(path)
    }
}

pub fn codim_key(spec: &AlgebraSpec, n: usize, primes: &[u64]) -> CacheKey {
    let ps: Vec<String> = primes.iter().map(u64::to_string).collect();
    CacheKey {
        algebra_hash: spec.content_hash(),
        operation: "codim".into(),
        parameters: format!("n{n}_p{}", ps.join("-")),
    }
}

/// `codim` through the cache; the flag is `true` on a hit.
pub fn cached_codim(
    cache: &Cache,
    spec: &AlgebraSpec,
    n: usize,
    primes: &[u64],
    opts: &CodimOptions,
) -> Result<(CodimResult, bool)> {
    let key = codim_key(spec, n, primes);
    if let Some(entry) = cache.get::<CodimResult>(&key)? {
        return Ok((entry.payload, true));
    }
    let result = codim(spec, n, primes, opts)?;
    cache.put(&key, opts.seed, &result)?;
    Ok((result, false))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::build_w;
    use crate::field::DEFAULT_PRIMES;

    #[test]
    fn round_trip_and_version() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::new(dir.path());
        let w = build_w();
        let opts = CodimOptions::default();
        let (cold, hit) = cached_codim(&cache, &w, 3, &DEFAULT_PRIMES, &opts).unwrap();
        assert!(!hit);
        let (warm, hit) = cached_codim(&cache, &w, 3, &DEFAULT_PRIMES, &opts).unwrap();
        assert!(hit);
        assert_eq!(
            serde_json::to_string(&cold).unwrap(),
            serde_json::to_string(&warm).unwrap()
        );

        let key = codim_key(&w, 3, &DEFAULT_PRIMES);
        let path = cache.path(&key);
        assert!(path.ends_with(format!(
            "codim_n3_p{}-{}.json",
            DEFAULT_PRIMES[0], DEFAULT_PRIMES[1]
        )));
        let text = fs::read_to_string(&path)
            .unwrap()
            .replace("\"version\": 1", "\"version\": 0");
        fs::write(&path, text).unwrap();
        assert!(cache.get::<CodimResult>(&key).unwrap().is_none());
    }
}
