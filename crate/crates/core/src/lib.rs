//! Shared numerics substrate for the HYCO crates: uniform 2-D grids and nodal
//! fields, scattered space-time datasets, seeded uniform sampling, bilinear
//! interpolation, normalized error metrics and the binary field format.
//!
//! Everything here is a plain value type: construction validates invariants,
//! after which instances are immutable and safe to share across threads. All
//! arithmetic is f64.

pub mod dataset;
pub mod error;
pub mod fieldio;
pub mod grid;
pub mod interp;
pub mod metrics;
pub mod point;
pub mod sampling;

pub use dataset::{build_dataset, read_dataset_csv, write_dataset_csv, Dataset, Evaluable};
pub use error::CoreError;
pub use fieldio::{read_field, write_field};
pub use grid::{BoundaryKind, Grid2D, ScalarField};
pub use interp::{bilinear_interpolate, interpolate_values, scatter_bilinear};
pub use metrics::{normalized_l2_error, parameter_error, MetricsRecord};
pub use point::{Rect, Region, SpaceTimePoint};
pub use sampling::{derive_seed, sample_uniform_points, SeedRng};
