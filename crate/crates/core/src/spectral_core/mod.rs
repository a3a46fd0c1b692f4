//! Periodic grids, transforms, and sampled fields.

mod fft;
mod field;
mod grid;
mod snapshot;

pub use field::{forward_transform, inverse_transform, ScalarField2D, VectorField2D, HERMITIAN_TOLERANCE};
pub use grid::{make_grid, Grid};
pub use snapshot::{load_snapshot, read_snapshot, save_snapshot, write_snapshot, SNAPSHOT_MAGIC};

pub(crate) use fft::{forward_real, inverse_complex};
