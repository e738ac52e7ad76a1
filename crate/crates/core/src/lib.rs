pub mod funcspec;

pub use funcspec::{FunctionExpression, ParseError};
pub mod cli;
pub mod curve;
pub mod domain;
pub mod geometry;
pub mod modulus;
pub mod orbits;
pub mod output;
pub mod raster;
pub mod scenario;
pub mod surround;
