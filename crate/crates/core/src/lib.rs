//! Learning spatial loss fields and predicting integrated pathloss with an
//! antiderivative network trained in Radon coordinates.
//!
//! The network `NN(z, α, s)` is supervised two ways: its derivative along the
//! line coordinate `z` is fitted to point samples of the spatial loss field,
//! and signed differences `NN(z1) − NN(z0)` are fitted to measured line
//! integrals between transmitter/receiver pairs. At inference time the
//! integrated loss of any path is two network evaluations.

pub mod dataset;
pub mod error;
pub mod floorplan;
pub mod geometry;
pub mod net;
pub mod predict;
pub mod propagation;
pub mod raster;
pub mod train;

pub use error::{Error, Result};
pub use floorplan::{FloorPlan, Frequency, Material, Region, WallSegment};
pub use geometry::{CartesianPair, Point, RadonSegment};
pub use propagation::{LinkBudget, WeightKind, WeightModel};
