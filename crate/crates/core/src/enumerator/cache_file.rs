//! On-disk form of an [`OrderCache`].
//!
//! Layout, all integers little-endian:
//!
//! ```text
//! "BRUH"                 magic
//! u16                    format version
//! u8                     degree n
//! u64                    n!
//! n! x (u32 len, len x u32)   up-cover ranks per element, in rank order
//! n! x (ceil(n!/64) x u64)    reachability rows
//! u32                    CRC-32 of every preceding byte
//! ```

use std::fs;
use std::path::Path;

use super::{BitMatrix, OrderCache};
use crate::error::{CacheError, Result};
use crate::perm::factorial;

pub const CACHE_MAGIC: &[u8; 4] = b"BRUH";
pub const CACHE_VERSION: u16 = 1;

const HEADER_LEN: usize = 4 + 2 + 1 + 8;

pub fn encode(cache: &OrderCache) -> Vec<u8> {
    let size = cache.size();
    let matrix = cache.matrix();
    let mut out = Vec::with_capacity(HEADER_LEN + size * 8 + matrix.words().len() * 8 + 4);
    out.extend_from_slice(CACHE_MAGIC);
    out.extend_from_slice(&CACHE_VERSION.to_le_bytes());
    out.push(cache.degree() as u8);
    out.extend_from_slice(&(size as u64).to_le_bytes());
    for r in 0..size as u32 {
        let covers = cache.covers_up(r);
        out.extend_from_slice(&(covers.len() as u32).to_le_bytes());
        for &c in covers {
            out.extend_from_slice(&c.to_le_bytes());
        }
    }
    for w in matrix.words() {
        out.extend_from_slice(&w.to_le_bytes());
    }
    let crc = crc32fast::hash(&out);
    out.extend_from_slice(&crc.to_le_bytes());
    out
}

struct Reader<'a> {
    buf: &'a [u8],
    pos: usize,
}

impl Reader<'_> {
    fn take(&mut self, len: usize) -> Result<&[u8], CacheError> {
        let end = self
            .pos
            .checked_add(len)
            .filter(|&e| e <= self.buf.len())
            .ok_or_else(|| {
                CacheError::Malformed(format!("section overruns at byte {}", self.pos))
            })?;
        let out = &self.buf[self.pos..end];
        self.pos = end;
        Ok(out)
    }

    fn u32(&mut self) -> Result<u32, CacheError> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().unwrap()))
    }

    fn u64(&mut self) -> Result<u64, CacheError> {
        Ok(u64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }
}

/// Decodes and validates a cache for degree `expected_n`.
pub fn decode(bytes: &[u8], expected_n: usize) -> Result<OrderCache, CacheError> {
    if bytes.len() < HEADER_LEN + 4 {
        return Err(CacheError::Truncated(bytes.len()));
    }
    if &bytes[..4] != CACHE_MAGIC {
        return Err(CacheError::Magic);
    }
    let (body, tail) = bytes.split_at(bytes.len() - 4);
    let stored = u32::from_le_bytes(tail.try_into().unwrap());
    let computed = crc32fast::hash(body);
    if stored != computed {
        return Err(CacheError::Checksum { stored, computed });
    }

    let mut r = Reader { buf: body, pos: 4 };
    let version = u16::from_le_bytes(r.take(2)?.try_into().unwrap());
    if version != CACHE_VERSION {
        return Err(CacheError::Version(version));
    }
    let n = r.take(1)?[0] as usize;
    if n != expected_n {
        return Err(CacheError::DegreeMismatch {
            expected: expected_n,
            found: n,
        });
    }
    let size = r.u64()?;
    let expected_size = factorial(n).map_err(|e| CacheError::Malformed(e.to_string()))?;
    if size != expected_size as u64 {
        return Err(CacheError::Malformed(format!(
            "element count {size} is not {n}!"
        )));
    }
    let size = size as usize;
    let mut covers_up = Vec::with_capacity(size);
    for _ in 0..size {
        let len = r.u32()? as usize;
        if len > n * (n - 1) / 2 {
            return Err(CacheError::Malformed(format!("cover list of length {len}")));
        }
        let mut list = Vec::with_capacity(len);
        for _ in 0..len {
            let c = r.u32()?;
            if c as usize >= size {
                return Err(CacheError::Malformed(format!(
                    "cover rank {c} out of range"
                )));
            }
            list.push(c);
        }
        covers_up.push(list);
    }
    let words_per_row = size.div_ceil(64);
    let raw = r.take(size * words_per_row * 8)?;
    let words = raw
        .chunks_exact(8)
        .map(|c| u64::from_le_bytes(c.try_into().unwrap()))
        .collect();
    if r.pos != body.len() {
        return Err(CacheError::Malformed(format!(
            "{} trailing bytes",
            body.len() - r.pos
        )));
    }
    let leq = BitMatrix::from_words(size, size, words)
        .ok_or_else(|| CacheError::Malformed("bitmatrix size".into()))?;
    Ok(OrderCache::from_parts(n, covers_up, leq))
}

pub fn save_cache(cache: &OrderCache, path: &Path) -> Result<()> {
    fs::write(path, encode(cache)).map_err(CacheError::from)?;
    Ok(())
}

pub fn load_cache(path: &Path, expected_n: usize) -> Result<OrderCache> {
    let bytes = fs::read(path).map_err(CacheError::from)?;
    Ok(decode(&bytes, expected_n)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enumerator::build_order_cache;
    use crate::error::Error;

    #[test]
    fn round_trip_and_layout() {
        let cache = build_order_cache(5, false).unwrap();
        let bytes = encode(&cache);
        assert_eq!(&bytes[..4], b"BRUH");
        assert_eq!(u16::from_le_bytes([bytes[4], bytes[5]]), 1);
        assert_eq!(bytes[6], 5);
        assert_eq!(u64::from_le_bytes(bytes[7..15].try_into().unwrap()), 120);
        let back = decode(&bytes, 5).unwrap();
        assert_eq!(back, cache);
        assert_eq!(encode(&back), bytes);
    }

    #[test]
    fn file_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("s4.cache");
        let cache = build_order_cache(4, false).unwrap();
        save_cache(&cache, &path).unwrap();
        assert_eq!(load_cache(&path, 4).unwrap(), cache);
        assert!(matches!(
            load_cache(&path, 5),
            Err(Error::Cache(CacheError::DegreeMismatch {
                expected: 5,
                found: 4
            }))
        ));
        assert!(matches!(
            load_cache(&dir.path().join("missing"), 4),
            Err(Error::Cache(CacheError::Io(_)))
        ));
    }

    #[test]
    fn corruption_is_detected() {
        let bytes = encode(&build_order_cache(4, false).unwrap());
        let truncated = &bytes[..bytes.len() - 9];
        assert!(matches!(
            decode(truncated, 4),
            Err(CacheError::Checksum { .. })
        ));
        let mut flipped = bytes.clone();
        flipped[40] ^= 0x10;
        assert!(matches!(
            decode(&flipped, 4),
            Err(CacheError::Checksum { .. })
        ));
        let mut magic = bytes.clone();
        magic[0] = b'X';
        assert!(matches!(decode(&magic, 4), Err(CacheError::Magic)));
        assert!(matches!(
            decode(&bytes[..10], 4),
            Err(CacheError::Truncated(10))
        ));
    }

    #[test]
    fn version_checked_after_checksum() {
        let mut bytes = encode(&build_order_cache(3, false).unwrap());
        bytes[4] = 9;
        let body_len = bytes.len() - 4;
        let crc = crc32fast::hash(&bytes[..body_len]);
        bytes[body_len..].copy_from_slice(&crc.to_le_bytes());
        assert!(matches!(decode(&bytes, 3), Err(CacheError::Version(9))));
    }
}
