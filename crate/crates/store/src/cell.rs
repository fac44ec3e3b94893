//! Versioned cell records: the unit shared by the memtable, the journal and
//! segment files.
//!
//! On-disk record layout (all integers big-endian):
//!
//! ```text
//! [family u8][row key (width fixed by family)][qualifier len u16][qualifier]
//! [timestamp u64][value len u32][value][checksum u32]
//! ```
//!
//! A value length of `0xFFFF_FFFF` marks a tombstone (no value bytes). The
//! checksum is CRC-32 over every preceding byte of the record.

use std::io::Read;

use crate::codec::Family;
use crate::StoreError;

pub const TOMBSTONE_LEN: u32 = u32::MAX;

/// Memtable/segment key. Timestamps are stored bitwise-negated so that
/// ascending key order walks versions newest first.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct CellKey {
    pub family: u8,
    pub row: Vec<u8>,
    pub qualifier: Vec<u8>,
    pub ts_rev: u64,
}

impl CellKey {
    pub fn new(family: Family, row: Vec<u8>, qualifier: Vec<u8>, ts: u64) -> CellKey {
        CellKey {
            family: family as u8,
            row,
            qualifier,
            ts_rev: !ts,
        }
    }

    pub fn ts(&self) -> u64 {
        !self.ts_rev
    }

    pub fn family(&self) -> Family {
        Family::from_u8(self.family).expect("constructed from a valid family")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CellRecord {
    pub key: CellKey,
    /// `None` is a tombstone.
    pub value: Option<Vec<u8>>,
}

impl CellRecord {
    pub fn encode(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(
            1 + self.key.row.len()
                + 2
                + self.key.qualifier.len()
                + 8
                + 4
                + self.value.as_ref().map_or(0, |v| v.len())
                + 4,
        );
        out.push(self.key.family);
        out.extend_from_slice(&self.key.row);
        out.extend_from_slice(&(self.key.qualifier.len() as u16).to_be_bytes());
        out.extend_from_slice(&self.key.qualifier);
        out.extend_from_slice(&self.key.ts().to_be_bytes());
        match &self.value {
            Some(value) => {
                out.extend_from_slice(&(value.len() as u32).to_be_bytes());
                out.extend_from_slice(value);
            }
            None => out.extend_from_slice(&TOMBSTONE_LEN.to_be_bytes()),
        }
        let crc = crc32fast::hash(&out);
        out.extend_from_slice(&crc.to_be_bytes());
        out
    }
}

/// Outcome of pulling one record off a reader.
pub enum ReadRecord {
    Record(CellRecord),
    /// Clean end of input before any byte of a record.
    Eof,
    /// Input ended midway through a record (an unsynced torn write).
    Torn,
}

/// Read one record starting at `offset` (used only for error reporting).
pub fn read_record(reader: &mut impl Read, offset: u64) -> Result<ReadRecord, StoreError> {
    let mut family_byte = [0u8; 1];
    match reader.read(&mut family_byte) {
        Ok(0) => return Ok(ReadRecord::Eof),
        Ok(_) => {}
        Err(e) => return Err(StoreError::Io(e)),
    }
    let mut hashed: Vec<u8> = vec![family_byte[0]];
    let family = match Family::from_u8(family_byte[0]) {
        Some(f) => f,
        None => return Err(StoreError::CorruptJournal { offset }),
    };

    let mut read_exact = |buf: &mut [u8], hashed: &mut Vec<u8>| -> Result<bool, StoreError> {
        match reader.read_exact(buf) {
            Ok(()) => {
                hashed.extend_from_slice(buf);
                Ok(true)
            }
            Err(e) if e.kind() == std::io::ErrorKind::UnexpectedEof => Ok(false),
            Err(e) => Err(StoreError::Io(e)),
        }
    };

    let mut row = vec![0u8; family.row_key_len()];
    if !read_exact(&mut row, &mut hashed)? {
        return Ok(ReadRecord::Torn);
    }
    let mut qlen = [0u8; 2];
    if !read_exact(&mut qlen, &mut hashed)? {
        return Ok(ReadRecord::Torn);
    }
    let mut qualifier = vec![0u8; u16::from_be_bytes(qlen) as usize];
    if !read_exact(&mut qualifier, &mut hashed)? {
        return Ok(ReadRecord::Torn);
    }
    let mut ts_bytes = [0u8; 8];
    if !read_exact(&mut ts_bytes, &mut hashed)? {
        return Ok(ReadRecord::Torn);
    }
    let ts = u64::from_be_bytes(ts_bytes);
    let mut vlen_bytes = [0u8; 4];
    if !read_exact(&mut vlen_bytes, &mut hashed)? {
        return Ok(ReadRecord::Torn);
    }
    let vlen = u32::from_be_bytes(vlen_bytes);
    let value = if vlen == TOMBSTONE_LEN {
        None
    } else {
        let mut value = vec![0u8; vlen as usize];
        if !read_exact(&mut value, &mut hashed)? {
            return Ok(ReadRecord::Torn);
        }
        Some(value)
    };
    let mut crc_bytes = [0u8; 4];
    match reader.read_exact(&mut crc_bytes) {
        Ok(()) => {}
        Err(e) if e.kind() == std::io::ErrorKind::UnexpectedEof => return Ok(ReadRecord::Torn),
        Err(e) => return Err(StoreError::Io(e)),
    }
    let expected = u32::from_be_bytes(crc_bytes);
    if crc32fast::hash(&hashed) != expected {
        return Err(StoreError::CorruptJournal { offset });
    }
    Ok(ReadRecord::Record(CellRecord {
        key: CellKey::new(family, row, qualifier, ts),
        value,
    }))
}
