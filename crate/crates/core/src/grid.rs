//! Uniform rectangular grids and nodal scalar fields.

use serde::{Deserialize, Serialize};

use crate::error::CoreError;

/// Boundary treatment of a grid.
///
/// Periodic grids store one full period without the duplicate seam node, so
/// the node spacing is `(x_max - x_min) / nx`; Dirichlet grids include both
/// boundary rows/columns and use `(x_max - x_min) / (nx - 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundaryKind {
    Periodic,
    DirichletZero,
}

/// Uniform rectangular grid of `nx * ny` nodes on `[x_min, x_max] x [y_min, y_max]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid2D {
    pub nx: usize,
    pub ny: usize,
    pub x_min: f64,
    pub x_max: f64,
    pub y_min: f64,
    pub y_max: f64,
    pub boundary: BoundaryKind,
}

impl Grid2D {
    pub fn new(
        nx: usize,
        ny: usize,
        x_min: f64,
        x_max: f64,
        y_min: f64,
        y_max: f64,
        boundary: BoundaryKind,
    ) -> Result<Self, CoreError> {
        if nx < 3 || ny < 3 {
            return Err(CoreError::InvalidGrid(format!(
                "need nx >= 3 and ny >= 3, got {nx} x {ny}"
            )));
        }
        if !(x_max > x_min) || !(y_max > y_min) {
            return Err(CoreError::InvalidGrid(format!(
                "bounds must satisfy x_max > x_min and y_max > y_min, got [{x_min}, {x_max}] x [{y_min}, {y_max}]"
            )));
        }
        if ![x_min, x_max, y_min, y_max].iter().all(|v| v.is_finite()) {
            return Err(CoreError::InvalidGrid("bounds must be finite".into()));
        }
        Ok(Self {
            nx,
            ny,
            x_min,
            x_max,
            y_min,
            y_max,
            boundary,
        })
    }

    /// Node spacing along x (period-based for periodic grids).
    pub fn hx(&self) -> f64 {
        match self.boundary {
            BoundaryKind::Periodic => (self.x_max - self.x_min) / self.nx as f64,
            BoundaryKind::DirichletZero => (self.x_max - self.x_min) / (self.nx - 1) as f64,
        }
    }

    /// Node spacing along y.
    pub fn hy(&self) -> f64 {
        match self.boundary {
            BoundaryKind::Periodic => (self.y_max - self.y_min) / self.ny as f64,
            BoundaryKind::DirichletZero => (self.y_max - self.y_min) / (self.ny - 1) as f64,
        }
    }

    /// x-coordinate of node column `ix`.
    pub fn x(&self, ix: usize) -> f64 {
        self.x_min + ix as f64 * self.hx()
    }

    /// y-coordinate of node row `iy`.
    pub fn y(&self, iy: usize) -> f64 {
        self.y_min + iy as f64 * self.hy()
    }

    /// Row-major node index (y-major rows, x varies fastest).
    #[inline]
    pub fn idx(&self, ix: usize, iy: usize) -> usize {
        iy * self.nx + ix
    }

    pub fn n_nodes(&self) -> usize {
        self.nx * self.ny
    }

    /// Spatial measure of the domain.
    pub fn area(&self) -> f64 {
        (self.x_max - self.x_min) * (self.y_max - self.y_min)
    }
}

/// Nodal values on a [`Grid2D`], row-major with x varying fastest.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarField {
    grid: Grid2D,
    values: Vec<f64>,
}

impl ScalarField {
    /// Wraps a value vector, checking length and finiteness.
    pub fn new(grid: Grid2D, values: Vec<f64>) -> Result<Self, CoreError> {
        if values.len() != grid.n_nodes() {
            return Err(CoreError::InvalidField(format!(
                "expected {} values for a {} x {} grid, got {}",
                grid.n_nodes(),
                grid.nx,
                grid.ny,
                values.len()
            )));
        }
        if !values.iter().all(|v| v.is_finite()) {
            return Err(CoreError::NonFinite("field values".into()));
        }
        Ok(Self { grid, values })
    }

    pub fn zeros(grid: Grid2D) -> Self {
        Self {
            values: vec![0.0; grid.n_nodes()],
            grid,
        }
    }

    /// Builds a field by evaluating `f(x, y)` at every node.
    pub fn from_fn(grid: Grid2D, f: impl Fn(f64, f64) -> f64) -> Result<Self, CoreError> {
        let mut values = Vec::with_capacity(grid.n_nodes());
        for iy in 0..grid.ny {
            for ix in 0..grid.nx {
                values.push(f(grid.x(ix), grid.y(iy)));
            }
        }
        Self::new(grid, values)
    }

    pub fn grid(&self) -> &Grid2D {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    #[inline]
    pub fn at(&self, ix: usize, iy: usize) -> f64 {
        self.values[self.grid.idx(ix, iy)]
    }

    pub fn min_max(&self) -> (f64, f64) {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for &v in &self.values {
            lo = lo.min(v);
            hi = hi.max(v);
        }
        (lo, hi)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spacing_depends_on_boundary_kind() {
        let p = Grid2D::new(64, 64, 0.0, 1.0, 0.0, 1.0, BoundaryKind::Periodic).unwrap();
        assert_eq!(p.hx(), 1.0 / 64.0);
        let d = Grid2D::new(65, 65, 0.0, 1.0, 0.0, 1.0, BoundaryKind::DirichletZero).unwrap();
        assert_eq!(d.hx(), 1.0 / 64.0);
    }

    #[test]
    fn rejects_tiny_grids_and_bad_bounds() {
        assert!(Grid2D::new(2, 8, 0.0, 1.0, 0.0, 1.0, BoundaryKind::Periodic).is_err());
        assert!(Grid2D::new(8, 8, 1.0, 1.0, 0.0, 1.0, BoundaryKind::Periodic).is_err());
        assert!(Grid2D::new(8, 8, 2.0, 1.0, 0.0, 1.0, BoundaryKind::Periodic).is_err());
    }

    #[test]
    fn field_validates_length_and_finiteness() {
        let g = Grid2D::new(3, 3, 0.0, 1.0, 0.0, 1.0, BoundaryKind::DirichletZero).unwrap();
        assert!(ScalarField::new(g, vec![0.0; 8]).is_err());
        assert!(ScalarField::new(g, vec![f64::NAN; 9]).is_err());
        assert!(ScalarField::new(g, vec![1.0; 9]).is_ok());
    }

    #[test]
    fn row_major_indexing_x_fastest() {
        let g = Grid2D::new(3, 4, 0.0, 1.0, 0.0, 2.0, BoundaryKind::DirichletZero).unwrap();
        assert_eq!(g.idx(0, 0), 0);
        assert_eq!(g.idx(2, 0), 2);
        assert_eq!(g.idx(0, 1), 3);
        let f = ScalarField::from_fn(g, |x, y| x + 10.0 * y).unwrap();
        assert_eq!(f.at(2, 1), g.x(2) + 10.0 * g.y(1));
    }
}
