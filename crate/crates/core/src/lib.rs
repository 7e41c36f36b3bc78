//! Jet arithmetic and differential-geometric invariants of cuspidal edges with boundary,
//! singular space curves and flat ruled surfaces.

pub mod boundary;
pub mod curves;
pub mod error;
pub mod frame;
pub mod jets;
pub mod oracle;
pub mod parabola;
pub mod ruled;
pub mod scalar;
pub mod surface;
pub mod synth;

pub use error::{Error, Result};
