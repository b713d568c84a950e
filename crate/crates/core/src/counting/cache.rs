use std::collections::{BTreeMap, HashMap};
use std::path::Path;
use std::sync::RwLock;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use super::MultiplicityVector;

pub const CACHE_FORMAT: &str = "gzcount-cache";
pub const CACHE_VERSION: u32 = 1;

#[derive(Debug, thiserror::Error)]
pub enum CacheError {
    #[error("cache i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("cache is not valid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("unsupported cache format {format:?} version {version}")]
    Version { format: String, version: u32 },
    #[error("non-canonical cache key {0:?}")]
    NonCanonicalKey(String),
    #[error("cache value for {key:?} is not a decimal count: {value:?}")]
    BadValue { key: String, value: String },
}

#[derive(Serialize, Deserialize)]
struct CacheFile {
    format: String,
    version: u32,
    entries: BTreeMap<String, String>,
}

/// Shared memo table of `A^infinity` values keyed by compressed
/// multiplicity vectors.
///
/// Readers run concurrently; inserts are insert-if-absent, so the first
/// value written for a key is the one every caller sees.
#[derive(Default, Debug)]
pub struct CountCache {
    map: RwLock<HashMap<Vec<u32>, BigUint>>,
}

impl CountCache {
    pub fn new() -> Self {
        CountCache::default()
    }

    pub fn get(&self, key: &[u32]) -> Option<BigUint> {
        self.map.read().expect("cache lock").get(key).cloned()
    }

    /// Stores `value` unless the key is present; returns the stored value.
    pub fn insert_if_absent(&self, key: Vec<u32>, value: BigUint) -> BigUint {
        let mut map = self.map.write().expect("cache lock");
        map.entry(key).or_insert(value).clone()
    }

    /// Overwrites an entry. Only meant for tests and negative controls.
    pub fn force_insert(&self, key: Vec<u32>, value: BigUint) {
        self.map.write().expect("cache lock").insert(key, value);
    }

    pub fn len(&self) -> usize {
        self.map.read().expect("cache lock").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Largest entry total among stored keys; 0 for an empty cache.
    pub fn max_total(&self) -> u32 {
        self.map
            .read()
            .expect("cache lock")
            .keys()
            .map(|k| k.iter().sum())
            .max()
            .unwrap_or(0)
    }

    pub fn snapshot(&self) -> BTreeMap<MultiplicityVector, BigUint> {
        self.map
            .read()
            .expect("cache lock")
            .iter()
            .map(|(k, v)| (MultiplicityVector::new(k.clone()), v.clone()))
            .collect()
    }

    pub fn to_json(&self) -> String {
        let entries = self
            .snapshot()
            .into_iter()
            .map(|(k, v)| (k.to_string(), v.to_string()))
            .collect();
        let file = CacheFile {
            format: CACHE_FORMAT.to_string(),
            version: CACHE_VERSION,
            entries,
        };
        serde_json::to_string_pretty(&file).expect("cache serializes")
    }

    /// Parses a cache file, refusing unknown versions and keys that are not
    /// nonempty comma-separated positive integers.
    pub fn from_json(text: &str) -> Result<CountCache, CacheError> {
        let file: CacheFile = serde_json::from_str(text)?;
        if file.format != CACHE_FORMAT || file.version != CACHE_VERSION {
            return Err(CacheError::Version {
                format: file.format,
                version: file.version,
            });
        }
        let cache = CountCache::new();
        {
            let mut map = cache.map.write().expect("cache lock");
            for (key, value) in file.entries {
                let mv: MultiplicityVector = key
                    .parse()
                    .map_err(|_| CacheError::NonCanonicalKey(key.clone()))?;
                if mv.is_empty() || !mv.is_compressed() || mv.to_string() != key {
                    return Err(CacheError::NonCanonicalKey(key));
                }
                let digits_ok = !value.is_empty() && value.bytes().all(|b| b.is_ascii_digit());
                let count = digits_ok
                    .then(|| value.parse::<BigUint>().ok())
                    .flatten()
                    .ok_or_else(|| CacheError::BadValue {
                        key: key.clone(),
                        value: value.clone(),
                    })?;
                map.insert(mv.parts().to_vec(), count);
            }
        }
        Ok(cache)
    }

    pub fn load(path: &Path) -> Result<CountCache, CacheError> {
        CountCache::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn save(&self, path: &Path) -> Result<(), CacheError> {
        std::fs::write(path, self.to_json())?;
        Ok(())
    }
}
