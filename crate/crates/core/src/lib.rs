//! Exact computations with free differential graded Lie algebras over Q.

pub mod budget;
pub mod certificate;
pub mod constructions;
pub mod dgl;
pub mod error;
pub mod format;
pub mod lie;
pub mod linalg;
pub mod quillen;

pub use budget::Budget;
pub use error::{Error, Result};
