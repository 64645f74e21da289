//! Binary greymap output.

use std::io::Write;

use crate::error::{Error, Result};

/// Writes a P5 image with maxval 255; `values` are row-major in `[0, 1]`.
pub fn write_pgm<W: Write>(values: &[f64], width: usize, height: usize, mut out: W) -> Result<()> {
    if values.len() != width * height {
        return Err(Error::invalid(format!(
            "{} values for a {width}x{height} image",
            values.len()
        )));
    }
    if let Some(v) = values.iter().find(|v| !(0.0..=1.0).contains(*v)) {
        return Err(Error::invalid(format!("pixel value {v} outside [0, 1]")));
    }
    write!(out, "P5\n{width} {height}\n255\n")?;
    let bytes: Vec<u8> = values.iter().map(|v| (255.0 * v).round() as u8).collect();
    out.write_all(&bytes)?;
    Ok(())
}
