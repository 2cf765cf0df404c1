//! Verification, bounds and exhaustive search for frameproof codes and the
//! cover-free set systems behind them.

pub mod bitset;
pub mod code;
pub mod error;

pub use bitset::BitSet;
pub use code::{CanonLevel, Canonical, Code, CoincidenceProfile, Mode, PositionSet, Symbol};
pub use error::{Error, Result};
pub mod bounds;
pub mod family;
pub mod frameproof;
pub mod disjunct;
pub mod io;
pub mod search;
