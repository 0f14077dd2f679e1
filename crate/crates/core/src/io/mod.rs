//! On-disk cache of correlator tables.
//!
//! Entries are canonical JSON with rationals as `"p/q"` strings and a
//! SHA-256 over every semantic field. Writes go to a temporary file in the
//! cache directory and are renamed into place.

use crate::exact::rat::{fmt_rat, parse_rat};
use crate::group::Family;
use crate::mckay::CorrelatorTable;
use crate::{Error, Result};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};

pub const SCHEMA_VERSION: u32 = 1;

/// Environment variable overriding the default cache directory.
pub const CACHE_ENV: &str = "QMCKAY_CACHE_DIR";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TableKind {
    Conjectural,
    WdvvSolved,
    Untwisted,
}

impl TableKind {
    pub fn tag(self) -> &'static str {
        match self {
            TableKind::Conjectural => "conjectural",
            TableKind::WdvvSolved => "wdvv-solved",
            TableKind::Untwisted => "untwisted",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CacheRow {
    pub key: Vec<u32>,
    pub value: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CacheEntry {
    pub schema_version: u32,
    pub family: Family,
    pub n: u32,
    pub kind: TableKind,
    pub max_len: u32,
    pub class_names: Vec<String>,
    pub rows: Vec<CacheRow>,
    pub hash: String,
}

/// The hashed payload: every field but the hash, in a fixed order.
#[derive(Serialize)]
struct Payload<'a> {
    schema_version: u32,
    family: Family,
    n: u32,
    kind: TableKind,
    max_len: u32,
    class_names: &'a [String],
    rows: &'a [CacheRow],
}

impl CacheEntry {
    pub fn from_table(t: &CorrelatorTable, kind: TableKind, max_len: u32) -> CacheEntry {
        let rows = t.entries.iter().map(|(k, v)| CacheRow { key: k.clone(), value: fmt_rat(v) }).collect();
        let mut e = CacheEntry {
            schema_version: SCHEMA_VERSION,
            family: t.family,
            n: t.n,
            kind,
            max_len,
            class_names: t.class_names.clone(),
            rows,
            hash: String::new(),
        };
        e.hash = e.content_hash();
        e
    }

    pub fn content_hash(&self) -> String {
        let p = Payload {
            schema_version: self.schema_version,
            family: self.family,
            n: self.n,
            kind: self.kind,
            max_len: self.max_len,
            class_names: &self.class_names,
            rows: &self.rows,
        };
        let bytes = serde_json::to_vec(&p).expect("payload serializes");
        hex::encode(Sha256::digest(&bytes))
    }

    pub fn verify(&self) -> Result<()> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(Error::CorruptCache(format!(
                "schema version {} (expected {SCHEMA_VERSION})",
                self.schema_version
            )));
        }
        let h = self.content_hash();
        if h != self.hash {
            return Err(Error::CorruptCache(format!("hash mismatch: stored {}, computed {h}", self.hash)));
        }
        Ok(())
    }

    pub fn to_table(&self) -> Result<CorrelatorTable> {
        let mut entries = BTreeMap::new();
        for r in &self.rows {
            let v = parse_rat(&r.value)
                .ok_or_else(|| Error::CorruptCache(format!("bad rational {:?} at key {:?}", r.value, r.key)))?;
            entries.insert(r.key.clone(), v);
        }
        Ok(CorrelatorTable { family: self.family, n: self.n, class_names: self.class_names.clone(), entries })
    }

    pub fn file_name(&self) -> String {
        file_name(self.family, self.n, self.kind, self.max_len)
    }
}

pub fn file_name(family: Family, n: u32, kind: TableKind, max_len: u32) -> String {
    format!("{}-{n}-{}-len{max_len}.json", family.tag(), kind.tag())
}

/// Writes `entry` into `dir` atomically; returns the final path.
pub fn cache_store(dir: &Path, entry: &CacheEntry) -> Result<PathBuf> {
    std::fs::create_dir_all(dir)?;
    let path = dir.join(entry.file_name());
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    serde_json::to_writer_pretty(&mut tmp, entry)?;
    tmp.write_all(b"\n")?;
    tmp.as_file().sync_all()?;
    tmp.persist(&path).map_err(|e| Error::Io(e.error))?;
    Ok(path)
}

/// Reads and verifies an entry.
pub fn cache_load(path: &Path) -> Result<CacheEntry> {
    let text = std::fs::read(path)?;
    let entry: CacheEntry = serde_json::from_slice(&text)
        .map_err(|e| Error::CorruptCache(format!("{}: {e}", path.display())))?;
    entry.verify()?;
    Ok(entry)
}

/// The cached table if present and valid (a corrupt entry is an error),
/// otherwise `compute` and store. The flag reports a cache hit.
pub fn load_or_compute(
    dir: Option<&Path>,
    family: Family,
    n: u32,
    kind: TableKind,
    max_len: u32,
    compute: impl FnOnce() -> Result<CorrelatorTable>,
) -> Result<(CorrelatorTable, bool)> {
    let Some(dir) = dir else {
        return Ok((compute()?, false));
    };
    let path = dir.join(file_name(family, n, kind, max_len));
    if path.exists() {
        let e = cache_load(&path)?;
        if e.family != family || e.n != n || e.kind != kind || e.max_len != max_len {
            return Err(Error::CorruptCache(format!("{} holds a different table", path.display())));
        }
        return Ok((e.to_table()?, true));
    }
    let t = compute()?;
    cache_store(dir, &CacheEntry::from_table(&t, kind, max_len))?;
    Ok((t, false))
}
