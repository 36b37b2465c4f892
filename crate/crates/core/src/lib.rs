//! Khovanov homology over the integers, cobordism maps between link
//! diagrams, ribbon-disk functionals and the CP2 surface map.

pub mod cobordism;
pub mod cp2;
pub mod diagram;
pub mod error;
pub mod families;
pub mod jones;
pub mod khovanov;
pub mod ribbon;

pub use diagram::{ArcId, Crossing, OrientedDiagram, Sign};
pub use error::{DiagramError, KhError, Result};

/// Bumped whenever a sign or grading convention changes; part of every cache
/// key and report.
pub const CONVENTION_VERSION: u32 = 1;
