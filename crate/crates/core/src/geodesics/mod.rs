//! Closed curves, saddle connections and flat geodesics.

pub mod curve;
pub mod develop;
pub mod flow;
pub mod funnel;
pub mod geodesic;
pub mod saddle;
pub mod stability;
pub mod tighten;

pub use curve::{CurveClass, Keep};
pub use geodesic::{check_angle_conditions, Geodesic, GeodesicKind, Junction, Piece};
pub use saddle::{enumerate_saddle_connections, enumerate_segments, SaddleConnection};
pub use stability::{length_gradient, stability_radius, StabilityRadius};
pub use tighten::{length, spectrum, tighten};
