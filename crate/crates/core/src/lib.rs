pub mod error;
pub mod fgab;
pub mod homotopy;
pub mod invariants;
pub mod projective;
pub mod selfcoincidence;
pub mod stable;

pub use error::{Error, Result};
