pub mod bodies;
pub mod cli;
pub mod ellipsoids;
pub mod logconcave;
pub mod io;
pub mod isotropic;
pub mod lyz;
pub mod verify;
pub mod error;
pub mod numeric;

pub use error::{Error, Result};
