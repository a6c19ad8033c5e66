//! Exact q-series machinery for rank, crank, number-of-parts and
//! number-of-ones statistics of partitions, their dissections, and the
//! Appell-function identities that describe them.

pub mod appell;
pub mod error;
pub mod exact;
pub mod modular;
pub mod numeric;
pub mod partitions;
pub mod qseries;
pub mod theorems;
pub mod verify;

pub use error::{Error, Result};
pub use exact::{Cyc, Rat};
pub use qseries::PSeries;
