//! Sources of segment labels: where the input volume is read from.
//!
//! Block-wise processing never needs the whole volume in memory, only one
//! voxel box at a time, so sources hand out sub-volumes on demand. File
//! sources open their own handle per read and are safe to share across
//! worker threads.

use std::fs::File;
use std::io::{BufReader, Read, Seek, SeekFrom};
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::labeling::SegmentLabelMap;
use crate::store::array;
use crate::topogrid::GridShape;

pub trait VolumeSource: Sync {
    fn shape(&self) -> GridShape;

    /// Reads the voxel box `start..=end` (1-based, inclusive per axis).
    fn read_box(&self, start: [u32; 3], end: [u32; 3]) -> Result<SegmentLabelMap>;
}

/// A volume already in memory.
pub struct InMemorySource<'a> {
    sigma: &'a SegmentLabelMap,
}

impl<'a> InMemorySource<'a> {
    pub fn new(sigma: &'a SegmentLabelMap) -> Self {
        InMemorySource { sigma }
    }
}

impl VolumeSource for InMemorySource<'_> {
    fn shape(&self) -> GridShape {
        *self.sigma.shape()
    }

    fn read_box(&self, start: [u32; 3], end: [u32; 3]) -> Result<SegmentLabelMap> {
        self.sigma.extract_box(start, end)
    }
}

/// Common seek-and-read over a file of little-endian u32 labels, row-major
/// with the third axis fastest, starting at `payload_offset`.
struct FileVolume {
    path: PathBuf,
    shape: GridShape,
    payload_offset: u64,
}

impl FileVolume {
    fn read_box(&self, start: [u32; 3], end: [u32; 3]) -> Result<SegmentLabelMap> {
        for a in 0..3 {
            let n = self.shape.voxel_extents()[a];
            if start[a] < 1 || end[a] > n || start[a] > end[a] {
                return Err(Error::OutOfBounds(start[0], start[1], start[2]));
            }
        }
        let [_, n2, n3] = self.shape.voxel_extents();
        let sub = GridShape::new(
            end[0] - start[0] + 1,
            end[1] - start[1] + 1,
            end[2] - start[2] + 1,
        )?;
        let run = (end[2] - start[2] + 1) as usize;
        let mut labels: Vec<u32> = Vec::with_capacity(sub.voxel_count());
        let file = File::open(&self.path).map_err(|e| Error::io(&self.path, e))?;
        let mut r = BufReader::new(file);
        let mut bytes = vec![0u8; run * 4];
        for r1 in start[0]..=end[0] {
            for r2 in start[1]..=end[1] {
                let flat = ((r1 - 1) as u64 * n2 as u64 + (r2 - 1) as u64) * n3 as u64
                    + (start[2] - 1) as u64;
                r.seek(SeekFrom::Start(self.payload_offset + flat * 4))
                    .map_err(|e| Error::io(&self.path, e))?;
                r.read_exact(&mut bytes).map_err(|e| Error::io(&self.path, e))?;
                labels.extend(
                    bytes
                        .chunks_exact(4)
                        .map(|c| u32::from_le_bytes(c.try_into().unwrap())),
                );
            }
        }
        SegmentLabelMap::new(sub, labels)
    }
}

/// A volume stored as a rank-3 array file.
pub struct ArrFileSource {
    inner: FileVolume,
}

impl ArrFileSource {
    pub fn open(path: &Path) -> Result<Self> {
        let extents = array::read_extents(path)?;
        if extents.len() != 3 {
            return Err(Error::format(path, "input volume must be a rank-3 array"));
        }
        if extents.iter().any(|&e| e == 0 || e > u32::MAX as u64) {
            return Err(Error::format(path, "invalid volume extents"));
        }
        let shape = GridShape::new(extents[0] as u32, extents[1] as u32, extents[2] as u32)?;
        Ok(ArrFileSource {
            inner: FileVolume {
                path: path.to_path_buf(),
                shape,
                payload_offset: 16 + 8 * 3,
            },
        })
    }
}

impl VolumeSource for ArrFileSource {
    fn shape(&self) -> GridShape {
        self.inner.shape
    }

    fn read_box(&self, start: [u32; 3], end: [u32; 3]) -> Result<SegmentLabelMap> {
        self.inner.read_box(start, end)
    }
}

/// A headerless binary volume with extents supplied by the caller.
pub struct RawFileSource {
    inner: FileVolume,
}

impl RawFileSource {
    pub fn open(path: &Path, shape: GridShape, element_width: u32) -> Result<Self> {
        if element_width != 4 {
            return Err(Error::format(
                path,
                format!("unsupported element width {element_width}; only 4 is supported"),
            ));
        }
        let meta = std::fs::metadata(path).map_err(|e| Error::io(path, e))?;
        let expected = shape.voxel_count() as u64 * 4;
        if meta.len() != expected {
            return Err(Error::format(
                path,
                format!(
                    "file holds {} bytes but shape needs {expected}",
                    meta.len()
                ),
            ));
        }
        Ok(RawFileSource {
            inner: FileVolume {
                path: path.to_path_buf(),
                shape,
                payload_offset: 0,
            },
        })
    }
}

impl VolumeSource for RawFileSource {
    fn shape(&self) -> GridShape {
        self.inner.shape
    }

    fn read_box(&self, start: [u32; 3], end: [u32; 3]) -> Result<SegmentLabelMap> {
        self.inner.read_box(start, end)
    }
}

/// Writes a volume as a rank-3 array file, the inverse of [`ArrFileSource`].
pub fn write_volume(path: &Path, sigma: &SegmentLabelMap) -> Result<()> {
    let [n1, n2, n3] = sigma.shape().voxel_extents();
    array::write_array(path, &[n1 as u64, n2 as u64, n3 as u64], sigma.as_slice())
}
