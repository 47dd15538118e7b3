//! Numerical laboratory for planar incompressible cavitation maps.
//!
//! The crate builds explicit two-cavity incompressible deformations of the
//! plane, evaluates their elastic energy with singularity-aware quadrature,
//! and provides the lower-bound machinery (ball construction, distortion
//! solver, Fraenkel asymmetry on rasters) needed to sandwich that energy
//! between closed-form bounds.

pub mod cavmap;
pub mod energy;
pub mod geom2d;
pub mod lowerbound;
pub mod raster;
pub mod transition;
pub mod twoball;
pub mod util;

pub use cavmap::{CavityMap, PiecewiseCavityMap, RadialCavityMap, Region};
pub use geom2d::{Circle, Mat2, PolarShape, Vec2};
pub use twoball::TwoBallGeometry;

/// Errors surfaced by the numerical kernels.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("degenerate configuration: {0}")]
    Degenerate(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("evaluation at a singular point: {0}")]
    Singular(String),
    #[error("evaluation too close to an interface (distance {distance:.3e})")]
    InterfaceProximity { distance: f64 },
    #[error("incompatible raster grids: {0}")]
    GridMismatch(String),
    #[error("configuration rejected: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;
