pub mod certify;
pub mod channels;
pub mod cli;
pub mod combinatorics;
pub mod error;
pub mod groups;
pub mod harmonic;
mod sampling;

pub use error::{Error, Result};
pub use groups::{Capped, Element, FiniteTable, GroupSpec};

/// Complex scalar used throughout.
pub type C64 = nalgebra::Complex<f64>;
