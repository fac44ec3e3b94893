//! Immutable sorted segment files, produced by flushing the memtable and by
//! compaction. Segments load fully into memory at open; the files carry the
//! same checksummed record format as the journal behind a small header.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use crate::cell::{read_record, CellKey, CellRecord, ReadRecord};
use crate::StoreError;

const MAGIC: &[u8; 8] = b"EPGMSEG1";

#[derive(Debug)]
pub struct Segment {
    pub path: PathBuf,
    pub cells: BTreeMap<CellKey, Option<Vec<u8>>>,
}

/// Write cells (already sorted by the map) to a new segment file.
pub fn write_segment(
    path: &Path,
    cells: &BTreeMap<CellKey, Option<Vec<u8>>>,
) -> Result<(), StoreError> {
    let file = File::create(path)?;
    let mut writer = BufWriter::new(file);
    writer.write_all(MAGIC)?;
    writer.write_all(&(cells.len() as u32).to_be_bytes())?;
    for (key, value) in cells {
        let record = CellRecord {
            key: key.clone(),
            value: value.clone(),
        };
        writer.write_all(&record.encode())?;
    }
    writer.flush()?;
    writer.get_ref().sync_data()?;
    Ok(())
}

pub fn load_segment(path: &Path) -> Result<Segment, StoreError> {
    let file = File::open(path)?;
    let mut reader = BufReader::new(file);
    let mut header = [0u8; 12];
    std::io::Read::read_exact(&mut reader, &mut header).map_err(|_| {
        StoreError::CorruptSegment {
            path: path.to_path_buf(),
            offset: 0,
        }
    })?;
    if &header[0..8] != MAGIC {
        return Err(StoreError::CorruptSegment {
            path: path.to_path_buf(),
            offset: 0,
        });
    }
    let count = u32::from_be_bytes(header[8..12].try_into().unwrap()) as usize;
    let mut cells = BTreeMap::new();
    let mut offset = 12u64;
    for _ in 0..count {
        match read_record(&mut reader, offset)? {
            ReadRecord::Record(record) => {
                offset += record.encode().len() as u64;
                cells.insert(record.key, record.value);
            }
            _ => {
                return Err(StoreError::CorruptSegment {
                    path: path.to_path_buf(),
                    offset,
                })
            }
        }
    }
    Ok(Segment {
        path: path.to_path_buf(),
        cells,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codec::Family;

    #[test]
    fn segments_round_trip_sorted() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("000001.seg");
        let mut cells = BTreeMap::new();
        for id in [3u64, 1, 2] {
            let row = crate::codec::vertex_row_key(0, id);
            cells.insert(
                CellKey::new(Family::VertexMeta, row, b"type".to_vec(), 1),
                Some(vec![0, 0]),
            );
        }
        cells.insert(
            CellKey::new(
                Family::VertexMeta,
                crate::codec::vertex_row_key(0, 1),
                b"type".to_vec(),
                2,
            ),
            None,
        );
        write_segment(&path, &cells).unwrap();
        let segment = load_segment(&path).unwrap();
        assert_eq!(segment.cells, cells);
        // Keys iterate in sorted order with newest versions first per cell.
        let keys: Vec<&CellKey> = segment.cells.keys().collect();
        assert!(keys.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn bad_magic_is_corruption() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bogus.seg");
        std::fs::write(&path, b"NOTASEGMENT!").unwrap();
        assert!(matches!(
            load_segment(&path),
            Err(StoreError::CorruptSegment { .. })
        ));
    }
}
