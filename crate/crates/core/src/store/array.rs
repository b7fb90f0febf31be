//! Binary array files.
//!
//! Every record in a store is one array file:
//!
//! ```text
//! offset  size      field
//! 0       4         magic "SGTA"
//! 4       4         format version, u32 little-endian, currently 1
//! 8       4         element width in bytes, u32 little-endian, currently 4
//! 12      4         rank, u32 little-endian, 1 to 3
//! 16      8 * rank  extents, u64 little-endian
//! ...     payload   elements, little-endian, row-major (last axis fastest)
//! ```

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Seek, SeekFrom, Write};
use std::path::Path;

use crate::error::{Error, Result};

const MAGIC: [u8; 4] = *b"SGTA";
const VERSION: u32 = 1;

pub fn write_array(path: &Path, extents: &[u64], data: &[u32]) -> Result<()> {
    let expected: u64 = extents.iter().product();
    assert_eq!(
        expected,
        data.len() as u64,
        "array payload does not match extents"
    );
    assert!((1..=3).contains(&extents.len()));
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = BufWriter::new(file);
    let io = |e| Error::io(path, e);
    w.write_all(&MAGIC).map_err(io)?;
    w.write_all(&VERSION.to_le_bytes()).map_err(io)?;
    w.write_all(&4u32.to_le_bytes()).map_err(io)?;
    w.write_all(&(extents.len() as u32).to_le_bytes()).map_err(io)?;
    for &e in extents {
        w.write_all(&e.to_le_bytes()).map_err(io)?;
    }
    // One pass over the payload; on little-endian hosts this is a plain copy.
    let mut buf = Vec::with_capacity(data.len().min(1 << 16) * 4);
    for chunk in data.chunks(1 << 14) {
        buf.clear();
        for &v in chunk {
            buf.extend_from_slice(&v.to_le_bytes());
        }
        w.write_all(&buf).map_err(io)?;
    }
    w.flush().map_err(io)
}

pub struct ArrayHeader {
    pub extents: Vec<u64>,
}

impl ArrayHeader {
    pub fn len(&self) -> u64 {
        self.extents.iter().product()
    }

    pub fn payload_offset(&self) -> u64 {
        16 + 8 * self.extents.len() as u64
    }
}

fn read_header(path: &Path, r: &mut impl Read) -> Result<ArrayHeader> {
    let mut head = [0u8; 16];
    r.read_exact(&mut head).map_err(|e| Error::io(path, e))?;
    if head[0..4] != MAGIC {
        return Err(Error::format(path, "bad magic"));
    }
    let version = u32::from_le_bytes(head[4..8].try_into().unwrap());
    if version != VERSION {
        return Err(Error::format(path, format!("unsupported version {version}")));
    }
    let width = u32::from_le_bytes(head[8..12].try_into().unwrap());
    if width != 4 {
        return Err(Error::format(path, format!("unsupported element width {width}")));
    }
    let rank = u32::from_le_bytes(head[12..16].try_into().unwrap());
    if !(1..=3).contains(&rank) {
        return Err(Error::format(path, format!("unsupported rank {rank}")));
    }
    let mut extents = Vec::with_capacity(rank as usize);
    for _ in 0..rank {
        let mut b = [0u8; 8];
        r.read_exact(&mut b).map_err(|e| Error::io(path, e))?;
        extents.push(u64::from_le_bytes(b));
    }
    Ok(ArrayHeader { extents })
}

pub fn read_array(path: &Path) -> Result<(ArrayHeader, Vec<u32>)> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut r = BufReader::new(file);
    let header = read_header(path, &mut r)?;
    let n = header.len();
    if n > (isize::MAX / 4) as u64 {
        return Err(Error::format(path, "array too large"));
    }
    let mut bytes = vec![0u8; n as usize * 4];
    r.read_exact(&mut bytes).map_err(|e| Error::io(path, e))?;
    let mut trailing = [0u8; 1];
    if r.read(&mut trailing).map_err(|e| Error::io(path, e))? != 0 {
        return Err(Error::format(path, "trailing bytes after payload"));
    }
    let data = bytes
        .chunks_exact(4)
        .map(|c| u32::from_le_bytes(c.try_into().unwrap()))
        .collect();
    Ok((header, data))
}

/// Reads the extents without touching the payload.
pub fn read_extents(path: &Path) -> Result<Vec<u64>> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut r = BufReader::new(file);
    Ok(read_header(path, &mut r)?.extents)
}

/// Reads a single element at a flat row-major index. Constant time: one
/// seek into the payload.
pub fn read_element(path: &Path, flat_index: u64) -> Result<u32> {
    let mut file = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut head = BufReader::new(&mut file);
    let header = read_header(path, &mut head)?;
    if flat_index >= header.len() {
        return Err(Error::format(
            path,
            format!("index {flat_index} beyond extent {}", header.len()),
        ));
    }
    drop(head);
    file.seek(SeekFrom::Start(header.payload_offset() + flat_index * 4))
        .map_err(|e| Error::io(path, e))?;
    let mut b = [0u8; 4];
    file.read_exact(&mut b).map_err(|e| Error::io(path, e))?;
    Ok(u32::from_le_bytes(b))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tmp(name: &str) -> std::path::PathBuf {
        let dir = std::env::temp_dir().join(format!("segtopo-array-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        dir.join(name)
    }

    #[test]
    fn roundtrip_rank1_and_rank3() {
        let p = tmp("r1.arr");
        write_array(&p, &[5], &[1, 2, 3, 4, 5]).unwrap();
        let (h, data) = read_array(&p).unwrap();
        assert_eq!(h.extents, vec![5]);
        assert_eq!(data, vec![1, 2, 3, 4, 5]);

        let p = tmp("r3.arr");
        let data: Vec<u32> = (0..24).collect();
        write_array(&p, &[2, 3, 4], &data).unwrap();
        let (h, back) = read_array(&p).unwrap();
        assert_eq!(h.extents, vec![2, 3, 4]);
        assert_eq!(back, data);
    }

    #[test]
    fn empty_arrays_are_valid() {
        let p = tmp("empty.arr");
        write_array(&p, &[0, 2], &[]).unwrap();
        let (h, data) = read_array(&p).unwrap();
        assert_eq!(h.extents, vec![0, 2]);
        assert!(data.is_empty());
    }

    #[test]
    fn random_element_access() {
        let p = tmp("elem.arr");
        let data: Vec<u32> = (100..160).collect();
        write_array(&p, &[3, 4, 5], &data).unwrap();
        assert_eq!(read_element(&p, 0).unwrap(), 100);
        assert_eq!(read_element(&p, 37).unwrap(), 137);
        assert_eq!(read_element(&p, 59).unwrap(), 159);
        assert!(read_element(&p, 60).is_err());
    }

    #[test]
    fn rejects_corrupt_headers() {
        let p = tmp("bad.arr");
        std::fs::write(&p, b"NOPE00000000000000000000").unwrap();
        assert!(read_array(&p).is_err());
    }
}
