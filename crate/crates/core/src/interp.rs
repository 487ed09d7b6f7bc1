//! Bilinear interpolation of nodal fields.

use crate::error::CoreError;
use crate::grid::{BoundaryKind, Grid2D, ScalarField};

/// Cell lookup for a query coordinate: lower node index, neighbor index and
/// the fractional offset in `[0, 1]`.
#[inline]
fn locate(
    coord: f64,
    min: f64,
    max: f64,
    n: usize,
    h: f64,
    boundary: BoundaryKind,
) -> Option<(usize, usize, f64)> {
    match boundary {
        BoundaryKind::Periodic => {
            let period = max - min;
            let mut s = (coord - min).rem_euclid(period) / h;
            // rem_euclid can return `period` through rounding.
            if s >= n as f64 {
                s -= n as f64;
            }
            let i = (s.floor() as usize).min(n - 1);
            Some((i, (i + 1) % n, s - i as f64))
        }
        BoundaryKind::DirichletZero => {
            if coord < min || coord > max {
                return None;
            }
            let s = (coord - min) / h;
            let i = (s.floor() as usize).min(n - 2);
            Some((i, i + 1, s - i as f64))
        }
    }
}

/// Standard bilinear blend of the four surrounding node values; exact at
/// nodes. Periodic grids wrap the query modulo the period; on Dirichlet
/// grids a query outside the domain is an error.
pub fn bilinear_interpolate(field: &ScalarField, x: f64, y: f64) -> Result<f64, CoreError> {
    let g = field.grid();
    interpolate_values(g, field.values(), x, y)
}

/// Same blend over a raw value slice (row-major on `grid`); used by callers
/// that keep several fields on one grid without wrapping each in a
/// [`ScalarField`].
pub fn interpolate_values(
    grid: &Grid2D,
    values: &[f64],
    x: f64,
    y: f64,
) -> Result<f64, CoreError> {
    debug_assert_eq!(values.len(), grid.n_nodes());
    let (ix0, ix1, fx) = locate(x, grid.x_min, grid.x_max, grid.nx, grid.hx(), grid.boundary)
        .ok_or(CoreError::OutOfDomain { x, y })?;
    let (iy0, iy1, fy) = locate(y, grid.y_min, grid.y_max, grid.ny, grid.hy(), grid.boundary)
        .ok_or(CoreError::OutOfDomain { x, y })?;
    let v00 = values[grid.idx(ix0, iy0)];
    let v10 = values[grid.idx(ix1, iy0)];
    let v01 = values[grid.idx(ix0, iy1)];
    let v11 = values[grid.idx(ix1, iy1)];
    Ok(v00 * (1.0 - fx) * (1.0 - fy)
        + v10 * fx * (1.0 - fy)
        + v01 * (1.0 - fx) * fy
        + v11 * fx * fy)
}

/// Adjoint of [`interpolate_values`]: distributes `weight` onto the four
/// nodes surrounding `(x, y)` with the bilinear blend coefficients.
///
/// `acc` is a full-grid accumulator (row-major on `grid`).
pub fn scatter_bilinear(
    grid: &Grid2D,
    x: f64,
    y: f64,
    weight: f64,
    acc: &mut [f64],
) -> Result<(), CoreError> {
    debug_assert_eq!(acc.len(), grid.n_nodes());
    let (ix0, ix1, fx) = locate(x, grid.x_min, grid.x_max, grid.nx, grid.hx(), grid.boundary)
        .ok_or(CoreError::OutOfDomain { x, y })?;
    let (iy0, iy1, fy) = locate(y, grid.y_min, grid.y_max, grid.ny, grid.hy(), grid.boundary)
        .ok_or(CoreError::OutOfDomain { x, y })?;
    acc[grid.idx(ix0, iy0)] += weight * (1.0 - fx) * (1.0 - fy);
    acc[grid.idx(ix1, iy0)] += weight * fx * (1.0 - fy);
    acc[grid.idx(ix0, iy1)] += weight * (1.0 - fx) * fy;
    acc[grid.idx(ix1, iy1)] += weight * fx * fy;
    Ok(())
}
