//! Append-only write-ahead journal. Every cell write is journaled before it
//! lands in the memtable; replay restores the memtable after a crash.

use std::fs::{File, OpenOptions};
use std::io::{BufReader, BufWriter, Seek, SeekFrom, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::cell::{read_record, CellRecord, ReadRecord};
use crate::StoreError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SyncMode {
    /// Fsync after every record; nothing acknowledged is ever lost.
    Always,
    /// Flush to the OS after every record, fsync at flush points. A crash
    /// may lose a torn tail record, which replay truncates.
    #[default]
    Batched,
}

pub struct Journal {
    writer: BufWriter<File>,
    sync: SyncMode,
}

impl Journal {
    pub fn open(path: impl Into<PathBuf>, sync: SyncMode) -> Result<Journal, StoreError> {
        let file = OpenOptions::new()
            .create(true)
            .append(true)
            .open(path.into())?;
        Ok(Journal {
            writer: BufWriter::new(file),
            sync,
        })
    }

    pub fn append(&mut self, record: &CellRecord) -> Result<(), StoreError> {
        self.writer.write_all(&record.encode())?;
        match self.sync {
            SyncMode::Always => {
                self.writer.flush()?;
                self.writer.get_ref().sync_data()?;
            }
            SyncMode::Batched => self.writer.flush()?,
        }
        Ok(())
    }

    pub fn sync(&mut self) -> Result<(), StoreError> {
        self.writer.flush()?;
        self.writer.get_ref().sync_data()?;
        Ok(())
    }

    /// Drop all journal content after its records have been flushed into a
    /// segment.
    pub fn truncate(&mut self) -> Result<(), StoreError> {
        self.writer.flush()?;
        let file = self.writer.get_mut();
        file.set_len(0)?;
        file.seek(SeekFrom::Start(0))?;
        file.sync_data()?;
        Ok(())
    }
}

/// Replay a journal file in write order. A torn tail record (possible after
/// a crash in batched mode) ends the replay silently; a checksum mismatch on
/// a complete record is corruption and reported with its byte offset.
pub fn replay(path: &Path) -> Result<Vec<CellRecord>, StoreError> {
    let file = match File::open(path) {
        Ok(f) => f,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(Vec::new()),
        Err(e) => return Err(StoreError::Io(e)),
    };
    let mut reader = BufReader::new(file);
    let mut records = Vec::new();
    let mut offset = 0u64;
    loop {
        match read_record(&mut reader, offset)? {
            ReadRecord::Eof => break,
            ReadRecord::Torn => break,
            ReadRecord::Record(record) => {
                offset += record.encode().len() as u64;
                records.push(record);
            }
        }
    }
    Ok(records)
}
