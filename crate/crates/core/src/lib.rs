//! Curve similarity under the Fréchet distance and its variants: classical,
//! weak, and discrete distances, speed-constrained traversal, the free-space
//! map with its partial-matching applications, curve-pointset matching, and
//! a 3SAT reduction generator for the all-points matching problem.

pub mod classic;
pub mod cpm;
pub mod error;
pub mod geometry;
pub mod fsmap;
pub mod oracles;
pub mod speed;

pub use error::{Error, Result};
pub use geometry::{Point, Polyline};
