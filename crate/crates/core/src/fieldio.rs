//! The "HYCO" binary container and the nodal field format (version 1).
//!
//! Field file layout, all little-endian:
//!
//! ```text
//! magic  b"HYCO"                      4 bytes
//! format version u32   = 1            4 bytes
//! nx, ny u32                          8 bytes
//! x_min, x_max, y_min, y_max f64     32 bytes
//! boundary flag u8  (0 = periodic, 1 = dirichlet_zero)
//! values f64 * nx * ny
//! ```
//!
//! Round-trips are bit-exact on the value array. Other HYCO container types
//! (parameter checkpoints) share the magic and the little-endian helpers but
//! use their own version numbers.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use crate::error::CoreError;
use crate::grid::{BoundaryKind, Grid2D, ScalarField};

/// Magic bytes shared by every HYCO container.
pub const MAGIC: [u8; 4] = *b"HYCO";
/// Version number of the nodal field format.
pub const FIELD_FORMAT_VERSION: u32 = 1;

pub fn write_u32(w: &mut impl Write, v: u32) -> Result<(), CoreError> {
    w.write_all(&v.to_le_bytes())?;
    Ok(())
}

pub fn write_f64(w: &mut impl Write, v: f64) -> Result<(), CoreError> {
    w.write_all(&v.to_le_bytes())?;
    Ok(())
}

pub fn write_f64_slice(w: &mut impl Write, vs: &[f64]) -> Result<(), CoreError> {
    for v in vs {
        w.write_all(&v.to_le_bytes())?;
    }
    Ok(())
}

pub fn read_u32(r: &mut impl Read) -> Result<u32, CoreError> {
    let mut buf = [0u8; 4];
    r.read_exact(&mut buf).map_err(|_| CoreError::Truncated)?;
    Ok(u32::from_le_bytes(buf))
}

pub fn read_f64(r: &mut impl Read) -> Result<f64, CoreError> {
    let mut buf = [0u8; 8];
    r.read_exact(&mut buf).map_err(|_| CoreError::Truncated)?;
    Ok(f64::from_le_bytes(buf))
}

pub fn read_f64_vec(r: &mut impl Read, n: usize) -> Result<Vec<f64>, CoreError> {
    let mut out = Vec::with_capacity(n);
    for _ in 0..n {
        out.push(read_f64(r)?);
    }
    Ok(out)
}

/// Checks the magic bytes and returns the container version.
pub fn read_header(r: &mut impl Read) -> Result<u32, CoreError> {
    let mut magic = [0u8; 4];
    r.read_exact(&mut magic).map_err(|_| CoreError::Truncated)?;
    if magic != MAGIC {
        return Err(CoreError::BadMagic);
    }
    read_u32(r)
}

pub fn write_header(w: &mut impl Write, version: u32) -> Result<(), CoreError> {
    w.write_all(&MAGIC)?;
    write_u32(w, version)
}

/// Serializes a field to the version-1 format.
pub fn write_field(field: &ScalarField, path: &Path) -> Result<(), CoreError> {
    let mut w = BufWriter::new(File::create(path)?);
    let g = field.grid();
    write_header(&mut w, FIELD_FORMAT_VERSION)?;
    write_u32(&mut w, g.nx as u32)?;
    write_u32(&mut w, g.ny as u32)?;
    for b in [g.x_min, g.x_max, g.y_min, g.y_max] {
        write_f64(&mut w, b)?;
    }
    let flag = match g.boundary {
        BoundaryKind::Periodic => 0u8,
        BoundaryKind::DirichletZero => 1u8,
    };
    w.write_all(&[flag])?;
    write_f64_slice(&mut w, field.values())?;
    w.flush()?;
    Ok(())
}

/// Reads a version-1 field file. Bad magic, an unknown version and a
/// truncated payload produce distinct errors.
pub fn read_field(path: &Path) -> Result<ScalarField, CoreError> {
    let mut r = BufReader::new(File::open(path)?);
    let version = read_header(&mut r)?;
    if version != FIELD_FORMAT_VERSION {
        return Err(CoreError::UnsupportedVersion(version));
    }
    let nx = read_u32(&mut r)? as usize;
    let ny = read_u32(&mut r)? as usize;
    let x_min = read_f64(&mut r)?;
    let x_max = read_f64(&mut r)?;
    let y_min = read_f64(&mut r)?;
    let y_max = read_f64(&mut r)?;
    let mut flag = [0u8; 1];
    r.read_exact(&mut flag).map_err(|_| CoreError::Truncated)?;
    let boundary = match flag[0] {
        0 => BoundaryKind::Periodic,
        1 => BoundaryKind::DirichletZero,
        other => {
            return Err(CoreError::InvalidGrid(format!(
                "unknown boundary flag {other}"
            )))
        }
    };
    let grid = Grid2D::new(nx, ny, x_min, x_max, y_min, y_max, boundary)?;
    let values = read_f64_vec(&mut r, grid.n_nodes())?;
    // Trailing bytes mean the header lied about the payload size.
    let mut extra = [0u8; 1];
    if r.read(&mut extra)? != 0 {
        return Err(CoreError::Truncated);
    }
    ScalarField::new(grid, values)
}
