//! Sesquiads, their modules, congruence schemes over finite spaces and sheaf
//! cohomology, computed exactly over the integers.

pub mod cohomology;
pub mod error;
pub mod intlin;
pub mod scheme;
pub mod sesquiad;
pub mod smodule;

pub use error::{Error, Result};
