//! Logic-synthesis dataset generation toolkit.
//!
//! The crate is organized around a universal [`ir::Circuit`] model and a
//! seven-stage flow: frontend loading, generic-gate conversion, AIG
//! construction, recipe-driven optimization, logic blasting into six
//! functionally complete network types, LUT/cell technology mapping with
//! static timing analysis, and packing of verified, labeled dataset
//! bundles with per-task extractors.

pub mod blast;
pub mod error;
pub mod gen;
pub mod io;
pub mod ir;
pub mod map;
pub mod opt;
pub mod pipeline;
pub mod rng;
pub mod sim;
pub mod tt;

pub use error::{Error, Result};
pub use ir::{Circuit, CircuitStats, FeatureVector, GateType, LogicType};
