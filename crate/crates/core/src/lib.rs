//! Flat geometry of semi-translation surfaces.

pub mod cli;
pub mod corpus;
pub mod deformation;
pub mod error;
pub mod format;
pub mod geodesics;
pub mod linalg;
pub mod numeric;
pub mod periods;
pub mod polygon;
pub mod rigidity;
pub mod surface;
pub mod traintrack;

pub use error::{Error, Result};
pub use surface::{Corner, Slot, StratumSignature, Surface};
