//! On-disk form of a [`SieveTable`].
//!
//! Layout, all integers little-endian:
//!
//! | bytes      | content                                    |
//! |------------|--------------------------------------------|
//! | 8          | magic `PSIBARV1`                           |
//! | 8          | limit N (u64)                              |
//! | 4 * N      | D(1), ..., D(N) (u32 each)                 |
//! | 8          | checksum: sum of the D-values mod 2^64     |

use std::fs;
use std::io::Write;
use std::path::Path;

use crate::atlas::{SieveTable, MAX_SIEVE_LIMIT};
use crate::error::{Error, Result};

pub const MAGIC: &[u8; 8] = b"PSIBARV1";
const MAGIC_STEM: &[u8; 7] = b"PSIBARV";

/// Serializes a table to its file image.
pub fn encode(table: &SieveTable) -> Vec<u8> {
    let values = table.d_values();
    let mut out = Vec::with_capacity(24 + 4 * values.len());
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&table.limit().to_le_bytes());
    for v in values {
        out.extend_from_slice(&v.to_le_bytes());
    }
    out.extend_from_slice(&table.checksum().to_le_bytes());
    out
}

fn read_u64(bytes: &[u8]) -> u64 {
    u64::from_le_bytes(bytes.try_into().unwrap())
}

/// Parses a file image, rejecting wrong magic, wrong version, truncation
/// and checksum mismatches.
pub fn decode(bytes: &[u8]) -> Result<SieveTable> {
    if bytes.len() < 16 {
        return Err(Error::Format("file shorter than its header".into()));
    }
    if &bytes[..8] != MAGIC {
        return Err(Error::Format(if bytes[..7] == MAGIC_STEM[..] {
            format!("unsupported version byte {:?}", bytes[7] as char)
        } else {
            "bad magic".into()
        }));
    }
    let limit = read_u64(&bytes[8..16]);
    if !(2..=MAX_SIEVE_LIMIT).contains(&limit) {
        return Err(Error::Format(format!("limit {limit} out of range")));
    }
    let expected = 16 + 4 * limit as usize + 8;
    if bytes.len() != expected {
        return Err(Error::Format(format!(
            "expected {expected} bytes for limit {limit}, found {}",
            bytes.len()
        )));
    }
    let payload = &bytes[16..expected - 8];
    let values: Vec<u32> = payload
        .chunks_exact(4)
        .map(|c| u32::from_le_bytes(c.try_into().unwrap()))
        .collect();
    let table = SieveTable::from_d_values(values)?;
    let stored = read_u64(&bytes[expected - 8..]);
    if stored != table.checksum() {
        return Err(Error::Format(format!(
            "checksum mismatch: stored {stored}, computed {}",
            table.checksum()
        )));
    }
    Ok(table)
}

/// Writes the table atomically: a sibling temporary file is written in full
/// and then renamed over `path`.
pub fn save(table: &SieveTable, path: &Path) -> Result<()> {
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp = Path::new(&tmp);
    let mut file = fs::File::create(tmp)?;
    file.write_all(&encode(table))?;
    file.sync_all()?;
    drop(file);
    fs::rename(tmp, path)?;
    Ok(())
}

pub fn load(path: &Path) -> Result<SieveTable> {
    decode(&fs::read(path)?)
}
