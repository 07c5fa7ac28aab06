//! Disk geometry in the three constant-curvature planes.
//!
//! Linear models (hyperboloid sheet, affine chart, round sphere) keep every
//! isometry a 3x3 matrix and every geodesic a linear incidence constraint.
//! On top of the kernel sit convex hulls of disks, intersections of disks,
//! their medial trees, and contraction certificates.

pub mod central;
pub mod chart;
pub mod cocentral;
pub mod contraction;
pub mod disk;
pub mod duality;
pub mod error;
pub mod geodesic;
pub mod hull;
pub mod intersect;
pub mod isometry;
pub mod minimax;
pub mod oracle;
pub mod plane;
pub mod sampling;
pub mod tangent;

pub use disk::Disk;
pub use error::{GeomError, Result};
pub use geodesic::Geodesic;
pub use central::{DecompositionReport, GeodesicTree, TreeVertex};
pub use cocentral::{CoveringDisk, Spindle};
pub use contraction::{ContractionPair, ContractionReport, Generator};
pub use duality::{ChartDisk, ChartTree, ChartVertex, DualityReport};
pub use hull::{BoundaryChain, ChainPiece, Configuration};
pub use isometry::Isometry;
pub use plane::{ModelKind, Plane, Point};
