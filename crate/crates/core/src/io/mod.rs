//! Readers and writers for every on-disk format: GraphML, AIGER
//! (ascii and binary), structural Verilog, QoR JSON and recipe text.
//! All writers are byte-deterministic; text formats are UTF-8 with LF
//! newlines.

mod aiger;
mod graphml;
mod qor;
mod recipe;
mod verilog;
mod xml;

pub use aiger::{read_aiger, write_aiger};
pub use graphml::{read_graphml, write_graphml};
pub use qor::{read_qor, write_qor, Backend, QorRecord};
pub use recipe::{read_recipe, write_recipe};
pub use verilog::{read_verilog, write_verilog};
