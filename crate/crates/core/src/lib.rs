//! Stable-model semantics for first-order logic programs over finite
//! structures, with the ordered-completion and program translations built on
//! top of it.

pub mod completion;
pub mod error;
pub mod random;
pub mod semantics;
pub mod structures;
pub mod syntax;
pub mod translators;

pub use error::{Error, Result};
