//! Exact counting: brute-force route tables, closed counts, and composition
//! of gadget networks from component tables.

mod engine;
mod network;
mod vr;

pub use network::{compose_vr, count_closed_network, flatten, Component, GadgetNetwork, Leaf};
pub use vr::{count_closed, count_vr, TableEntry, VRTable};
