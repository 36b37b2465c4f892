//! Khovanov homology over the integers and the Lee deformation.

pub mod complex;
pub mod cube;
pub mod homology;
pub mod lee;
pub mod matrix;
pub mod reduce;

pub use complex::{build_block, build_complex, KhComplex, QBlock, Window};
pub use cube::{Algebra, Cube, Generator, Resolution};
pub use homology::{homology, BigradedGroup, HomologyGroup, ReducedBlock};
pub use reduce::{simplify, Reduction};
