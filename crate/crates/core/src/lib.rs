pub mod algebra;
pub mod classify;
pub mod cli;
pub mod error;
pub mod generate;
pub mod grid;
pub mod signature;
pub mod tractable;
pub mod transforms;

pub use algebra::{vandermonde_solve, ExactValue, RootOrder};
pub use error::{Error, Result};
pub use grid::{Grid, Slot};
pub use signature::{BinaryDiseq, LoopOrientation, PinPattern, Signature};
