//! Codensity and terminal monads over finite concrete categories.

pub mod caps;
pub mod category;
pub mod codensity;
pub mod error;
pub mod finset;
pub mod monad;
pub mod operadic;
pub mod report;
pub mod scorecard;
pub mod ultra;

pub use caps::Caps;
pub use error::{Error, Result};
pub use finset::{FinMap, FinSet};
