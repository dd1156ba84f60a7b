pub mod arrangement;
pub mod constructions;
pub mod error;
pub mod exactlin;
pub mod persp;
pub mod polyjac;
pub mod resolution;
pub mod rigidity;

pub use error::{Error, Result};
