pub mod bipartite;
pub mod chamber;
pub mod error;
pub mod exact;
pub mod fan;
pub mod groebner;

pub use error::{Error, Result};
