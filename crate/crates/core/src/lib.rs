//! Exact counting of Eulerian tours and A-trails, the gadget reductions that
//! make those counts hard, and the signature algebra of four-terminal gadgets.

pub mod chain;
pub mod counting;
pub mod error;
pub mod gadgets;
pub mod graph;
pub mod kotzig;
pub mod reductions;
pub mod signature;

pub use error::{Error, Result};
