//! Flat binary and CSV files for fields.
//!
//! Binary layout, all little-endian: `dim: u64`, `points_per_axis: u64`,
//! `box_half_width: f64`, then the samples as `f64` in row-major order
//! (`x1` fastest).

use std::fs::File;
use std::io::{self, BufReader, BufWriter, Read, Write};
use std::path::Path;

use crate::error::Error;
use crate::field::Field;
use crate::grid::UniformPeriodicGrid;

#[derive(Debug, thiserror::Error)]
pub enum FieldFileError {
    #[error(transparent)]
    Io(#[from] io::Error),

    #[error("malformed field file: {0}")]
    Malformed(String),

    #[error(transparent)]
    Grid(#[from] Error),
}

const HEADER_BYTES: usize = 24;

pub fn write_binary(field: &Field, mut out: impl Write) -> Result<(), FieldFileError> {
    let g = field.grid();
    out.write_all(&(g.dim() as u64).to_le_bytes())?;
    out.write_all(&(g.points_per_axis() as u64).to_le_bytes())?;
    out.write_all(&g.box_half_width().to_le_bytes())?;
    for v in field.samples() {
        out.write_all(&v.to_le_bytes())?;
    }
    out.flush()?;
    Ok(())
}

pub fn read_binary(mut input: impl Read) -> Result<Field, FieldFileError> {
    let mut header = [0u8; HEADER_BYTES];
    input.read_exact(&mut header).map_err(|e| match e.kind() {
        io::ErrorKind::UnexpectedEof => FieldFileError::Malformed("header shorter than 24 bytes".into()),
        _ => e.into(),
    })?;
    let word = |i: usize| -> [u8; 8] { header[8 * i..8 * i + 8].try_into().expect("8 bytes") };
    let dim = u64::from_le_bytes(word(0));
    let points = u64::from_le_bytes(word(1));
    let half_width = f64::from_le_bytes(word(2));
    let grid = UniformPeriodicGrid::new(
        usize::try_from(dim).map_err(|_| FieldFileError::Malformed(format!("dim {dim}")))?,
        usize::try_from(points).map_err(|_| FieldFileError::Malformed(format!("points {points}")))?,
        half_width,
    )?;
    let mut bytes = Vec::with_capacity(grid.len() * 8);
    input.read_to_end(&mut bytes)?;
    if bytes.len() != grid.len() * 8 {
        return Err(FieldFileError::Malformed(format!(
            "expected {} sample bytes for {}, found {}",
            grid.len() * 8,
            grid.describe(),
            bytes.len()
        )));
    }
    let samples = bytes.chunks_exact(8).map(|c| f64::from_le_bytes(c.try_into().expect("8 bytes"))).collect();
    Ok(Field::new(grid, samples)?)
}

/// One row per sample: `i,value` in 1D and `i1,i2,value` in 2D.
pub fn write_csv(field: &Field, out: impl Write) -> Result<(), FieldFileError> {
    let mut out = BufWriter::new(out);
    let n = field.grid().points_per_axis();
    if field.grid().dim() == 1 {
        writeln!(out, "i,value")?;
        for (i, v) in field.samples().iter().enumerate() {
            writeln!(out, "{i},{v:e}")?;
        }
    } else {
        writeln!(out, "i1,i2,value")?;
        for (k, v) in field.samples().iter().enumerate() {
            writeln!(out, "{},{},{v:e}", k % n, k / n)?;
        }
    }
    out.flush()?;
    Ok(())
}

pub fn save_binary(field: &Field, path: impl AsRef<Path>) -> Result<(), FieldFileError> {
    write_binary(field, BufWriter::new(File::create(path)?))
}

pub fn load_binary(path: impl AsRef<Path>) -> Result<Field, FieldFileError> {
    read_binary(BufReader::new(File::open(path)?))
}

pub fn save_csv(field: &Field, path: impl AsRef<Path>) -> Result<(), FieldFileError> {
    write_csv(field, File::create(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn header_layout() {
        let g = UniformPeriodicGrid::new(2, 16, 3.5).unwrap();
        let f = Field::from_fn_2d(g, |x, y| x - 2.0 * y).unwrap();
        let mut buf = Vec::new();
        write_binary(&f, &mut buf).unwrap();
        assert_eq!(buf.len(), 24 + 8 * 256);
        assert_eq!(&buf[..8], &2u64.to_le_bytes());
        assert_eq!(&buf[8..16], &16u64.to_le_bytes());
        assert_eq!(&buf[16..24], &3.5f64.to_le_bytes());
        assert_eq!(&buf[24..32], &f.samples()[0].to_le_bytes());
    }

    #[test]
    fn truncated_input_is_malformed() {
        let f = Field::zeros(UniformPeriodicGrid::line(16).unwrap());
        let mut buf = Vec::new();
        write_binary(&f, &mut buf).unwrap();
        assert!(matches!(read_binary(&buf[..10]), Err(FieldFileError::Malformed(_))));
        assert!(matches!(read_binary(&buf[..buf.len() - 3]), Err(FieldFileError::Malformed(_))));
        buf[0] = 3;
        assert!(matches!(read_binary(&buf[..]), Err(FieldFileError::Grid(_))));
    }
}
