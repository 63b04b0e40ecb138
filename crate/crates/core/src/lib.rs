pub mod algebra;
pub mod classify;
pub mod digraph;
pub mod error;
pub mod generate;
pub mod homsolver;
pub mod minpath;
pub mod polysearch;
pub mod spectree;
pub mod vset;

pub use error::{Error, Result};
