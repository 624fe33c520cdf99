pub mod error;
pub mod modring;
pub mod unitri;
pub mod groups;
pub mod fixtures;
pub mod cohom;
pub mod massey;
pub mod sweep;
pub mod formation;

pub use error::{Error, Result};
