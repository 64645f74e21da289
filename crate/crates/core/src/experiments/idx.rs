//! IDX files as distributed for MNIST: a big-endian `u32` magic number, one
//! `u32` per dimension, then the `u8` payload.

use std::fs;
use std::io::Write;
use std::path::Path;

use crate::error::{Error, Result};
use crate::matrix::Matrix;

pub const IMAGES_MAGIC: u32 = 0x0000_0803;
pub const LABELS_MAGIC: u32 = 0x0000_0801;

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl Cursor<'_> {
    fn u32_be(&mut self, what: &str) -> Result<u32> {
        let b = self.take(4, what)?;
        Ok(u32::from_be_bytes([b[0], b[1], b[2], b[3]]))
    }

    fn take(&mut self, len: usize, what: &str) -> Result<&[u8]> {
        if self.bytes.len() - self.pos < len {
            return Err(Error::format(
                self.bytes.len() as u64,
                format!(
                    "truncated {what}: needed {len} bytes at offset {}, file has {}",
                    self.pos,
                    self.bytes.len()
                ),
            ));
        }
        let out = &self.bytes[self.pos..self.pos + len];
        self.pos += len;
        Ok(out)
    }

    fn magic(&mut self, expect: u32) -> Result<()> {
        let m = self.u32_be("magic number")?;
        if m != expect {
            return Err(Error::format(
                0,
                format!("bad magic 0x{m:08x}, expected 0x{expect:08x}"),
            ));
        }
        Ok(())
    }

    fn finish(&self) -> Result<()> {
        if self.pos != self.bytes.len() {
            return Err(Error::format(
                self.pos as u64,
                format!("{} trailing bytes", self.bytes.len() - self.pos),
            ));
        }
        Ok(())
    }
}

/// One row per image, pixel intensities 0..=255 as reals.
pub fn parse_idx_images(bytes: &[u8]) -> Result<Matrix> {
    let mut cur = Cursor { bytes, pos: 0 };
    cur.magic(IMAGES_MAGIC)?;
    let count = cur.u32_be("image count")? as usize;
    let rows = cur.u32_be("row count")? as usize;
    let cols = cur.u32_be("column count")? as usize;
    let pixels = cur.take(count * rows * cols, "pixel data")?;
    let data = pixels.iter().map(|&p| f64::from(p)).collect();
    cur.finish()?;
    Matrix::from_row_major(count, rows * cols, data)
}

pub fn parse_idx_labels(bytes: &[u8]) -> Result<Vec<u8>> {
    let mut cur = Cursor { bytes, pos: 0 };
    cur.magic(LABELS_MAGIC)?;
    let count = cur.u32_be("label count")? as usize;
    let labels = cur.take(count, "label data")?.to_vec();
    cur.finish()?;
    if let Some(i) = labels.iter().position(|&l| l > 9) {
        return Err(Error::format(
            8 + i as u64,
            format!("label {} is not a digit", labels[i]),
        ));
    }
    Ok(labels)
}

/// Reads an image file and its label file; the counts must agree.
pub fn load_idx(images: &Path, labels: &Path) -> Result<(Matrix, Vec<u8>)> {
    let x = parse_idx_images(&fs::read(images)?)?;
    let y = parse_idx_labels(&fs::read(labels)?)?;
    if x.rows() != y.len() {
        return Err(Error::invalid(format!(
            "{} images but {} labels",
            x.rows(),
            y.len()
        )));
    }
    Ok((x, y))
}

/// Rows whose label is in `digits`, with their labels.
pub fn filter_digits(x: &Matrix, y: &[u8], digits: &[u8]) -> (Matrix, Vec<u8>) {
    let idx: Vec<usize> = (0..y.len()).filter(|&i| digits.contains(&y[i])).collect();
    let labels = idx.iter().map(|&i| y[i]).collect();
    (x.select_rows(&idx), labels)
}

/// Encodes `count` images of `rows x cols` pixels.
pub fn write_idx_images<W: Write>(
    pixels: &[u8],
    count: usize,
    rows: usize,
    cols: usize,
    mut out: W,
) -> Result<()> {
    if pixels.len() != count * rows * cols {
        return Err(Error::invalid("pixel buffer does not match dimensions"));
    }
    out.write_all(&IMAGES_MAGIC.to_be_bytes())?;
    for d in [count, rows, cols] {
        out.write_all(&(d as u32).to_be_bytes())?;
    }
    out.write_all(pixels)?;
    Ok(())
}

pub fn write_idx_labels<W: Write>(labels: &[u8], mut out: W) -> Result<()> {
    out.write_all(&LABELS_MAGIC.to_be_bytes())?;
    out.write_all(&(labels.len() as u32).to_be_bytes())?;
    out.write_all(labels)?;
    Ok(())
}
