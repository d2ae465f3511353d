//! Technology mapping and timing: cut enumeration, LUT-6 FPGA mapping,
//! standard-cell ASIC mapping against a mini library, and static timing
//! analysis.

mod asic;
mod cell;
mod cuts;
mod lut;
mod sta;

pub use asic::{map_asic, AsicMode, ASIC_CUT_K};
pub use cell::{
    mini_library, npn_canonical, read_library, write_library, Cell, CellLibrary, CellMatch,
    Transform, MAX_CELL_PINS,
};
pub use cuts::{enumerate_cuts, Cut, DEFAULT_CUT_LIMIT};
pub use lut::{map_lut, LutMode, DEFAULT_LUT_K};
pub use sta::{fpga_qor, sta};
