//! On-disk distance tables.
//!
//! Layout, multi-byte fields little-endian:
//!
//! | field                | size            |
//! |----------------------|-----------------|
//! | magic `CAYD`         | 4               |
//! | format version       | 1               |
//! | descriptor length    | 4 (u32)         |
//! | descriptor bytes     | variable, UTF-8 |
//! | generator-set hash   | 8 (FNV-1a 64)   |
//! | degree `n`           | 1               |
//! | distances            | `n!`, Lehmer-rank order |

use std::hash::Hasher;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use fnv::FnvHasher;

use super::table::DistanceTable;
use crate::error::{Error, Result};
use crate::group::GroupModel;
use crate::perm::factorial;

pub const MAGIC: &[u8; 4] = b"CAYD";
pub const VERSION: u8 = 1;

/// FNV-1a over the canonical generator text (`;`-joined cycle notation).
pub fn generator_hash(model: &GroupModel) -> u64 {
    let mut h = FnvHasher::default();
    h.write(model.generators().canonical_text().as_bytes());
    h.finish()
}

/// File name for a model inside a cache directory.
pub fn cache_path(dir: &Path, model: &GroupModel) -> PathBuf {
    let stem: String = model
        .descriptor()
        .chars()
        .map(|c| {
            if c.is_ascii_alphanumeric() || c == '-' {
                c
            } else {
                '_'
            }
        })
        .collect();
    dir.join(format!("{stem}-{:016x}.cayd", generator_hash(model)))
}

pub fn encode(model: &GroupModel, table: &DistanceTable) -> Result<Vec<u8>> {
    let n = model
        .degree()
        .ok_or_else(|| Error::Unsupported(format!("cache files for {}", model.descriptor())))?;
    if table.descriptor() != model.descriptor() || table.len() as u64 != factorial(n) {
        return Err(Error::Invariant(
            "table does not belong to this model".into(),
        ));
    }
    let desc = model.descriptor().as_bytes();
    let mut out = Vec::with_capacity(18 + desc.len() + table.len());
    out.extend_from_slice(MAGIC);
    out.push(VERSION);
    out.extend_from_slice(&(desc.len() as u32).to_le_bytes());
    out.extend_from_slice(desc);
    out.extend_from_slice(&generator_hash(model).to_le_bytes());
    out.push(n as u8);
    out.extend_from_slice(table.entries());
    Ok(out)
}

fn take<'a>(buf: &mut &'a [u8], len: usize) -> Result<&'a [u8]> {
    if buf.len() < len {
        return Err(Error::Cache("file truncated".into()));
    }
    let (head, rest) = buf.split_at(len);
    *buf = rest;
    Ok(head)
}

/// Parses a cache image and checks it against `model`. Only the header is
/// validated here; see [`DistanceTable::verify`] for the content sweep.
pub fn decode(model: &GroupModel, bytes: &[u8]) -> Result<DistanceTable> {
    let mut buf = bytes;
    if take(&mut buf, 4)? != MAGIC {
        return Err(Error::Cache("bad magic".into()));
    }
    let version = take(&mut buf, 1)?[0];
    if version != VERSION {
        return Err(Error::Cache(format!(
            "unsupported format version {version}"
        )));
    }
    let len = u32::from_le_bytes(take(&mut buf, 4)?.try_into().unwrap()) as usize;
    let desc = std::str::from_utf8(take(&mut buf, len)?)
        .map_err(|_| Error::Cache("descriptor is not UTF-8".into()))?;
    if desc != model.descriptor() {
        return Err(Error::Cache(format!(
            "file is for {desc}, expected {}",
            model.descriptor()
        )));
    }
    let hash = u64::from_le_bytes(take(&mut buf, 8)?.try_into().unwrap());
    if hash != generator_hash(model) {
        return Err(Error::Cache("generator-set hash mismatch".into()));
    }
    let n = take(&mut buf, 1)?[0] as usize;
    if Some(n) != model.degree() {
        return Err(Error::Cache(format!("degree {n} does not match the model")));
    }
    let body = take(&mut buf, factorial(n) as usize)?;
    if !buf.is_empty() {
        return Err(Error::Cache("trailing bytes after the table".into()));
    }
    Ok(DistanceTable {
        descriptor: desc.to_string(),
        dist: body.to_vec(),
    })
}

pub fn write(path: &Path, model: &GroupModel, table: &DistanceTable) -> Result<()> {
    if let Some(dir) = path.parent() {
        std::fs::create_dir_all(dir)?;
    }
    let mut f = std::fs::File::create(path)?;
    f.write_all(&encode(model, table)?)?;
    Ok(())
}

pub fn read(path: &Path, model: &GroupModel) -> Result<DistanceTable> {
    let mut bytes = Vec::new();
    std::fs::File::open(path)?.read_to_end(&mut bytes)?;
    decode(model, &bytes)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fnv1a_reference_vectors() {
        let hash = |s: &str| {
            let mut h = FnvHasher::default();
            h.write(s.as_bytes());
            h.finish()
        };
        assert_eq!(hash(""), 0xcbf29ce484222325);
        assert_eq!(hash("a"), 0xaf63dc4c8601ec8c);
    }

    #[test]
    fn header_layout() {
        let m = GroupModel::sym_circular(4).unwrap();
        let t = DistanceTable::build(&m).unwrap();
        let bytes = encode(&m, &t).unwrap();
        assert_eq!(&bytes[..4], b"CAYD");
        assert_eq!(bytes[4], 1);
        assert_eq!(&bytes[5..9], &14u32.to_le_bytes());
        assert_eq!(&bytes[9..23], b"sym-circular:4");
        assert_eq!(&bytes[23..31], &generator_hash(&m).to_le_bytes());
        assert_eq!(bytes[31], 4);
        assert_eq!(bytes.len(), 32 + 24);
        assert_eq!(decode(&m, &bytes).unwrap(), t);
    }

    #[test]
    fn rejects_other_models_and_damage() {
        let m = GroupModel::sym_circular(4).unwrap();
        let t = DistanceTable::build(&m).unwrap();
        let bytes = encode(&m, &t).unwrap();
        let other = GroupModel::sym_adjacent(4).unwrap();
        assert!(matches!(decode(&other, &bytes), Err(Error::Cache(_))));
        let mut bad = bytes.clone();
        bad[25] ^= 0x40;
        assert!(matches!(decode(&m, &bad), Err(Error::Cache(_))));
        assert!(decode(&m, &bytes[..bytes.len() - 1]).is_err());
        let mut extra = bytes.clone();
        extra.push(0);
        assert!(decode(&m, &extra).is_err());
    }
}
