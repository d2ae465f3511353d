//! Mini standard-cell library: JSON load/save, validation, and an NPN
//! index built by exhaustive permutation/negation search (cheap at ≤4
//! inputs: at most 4!·2^5 transforms per function).

use crate::error::{Error, Result};
use crate::tt;
use std::collections::HashMap;
use std::fmt::Write as _;

pub const MAX_CELL_PINS: usize = 4;

const INV_TT: u64 = 0b01;
const NAND2_TT: u64 = 0b0111;

#[derive(Clone, PartialEq, Debug)]
pub struct Cell {
    pub name: String,
    /// Untiled function value over the low `2^inputs` bits.
    pub function: u64,
    pub area: f64,
    pub pin_delays: Vec<f64>,
}

impl Cell {
    pub fn inputs(&self) -> usize {
        self.pin_delays.len()
    }

    /// The function tiled to a full 64-bit node table.
    pub fn tiled(&self) -> u64 {
        tt::tile(self.function, self.inputs())
    }
}

/// An input permutation plus input/output negations: the matched
/// function f satisfies f(x) = output_neg ^ cell(y) where cell pin j
/// reads y_j = x[perm[j]] ^ input_neg bit j.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Transform {
    pub perm: Vec<usize>,
    pub input_neg: u32,
    pub output_neg: bool,
}

/// A library cell that realizes a cut function under a transform.
#[derive(Clone, Debug)]
pub struct CellMatch {
    pub cell: usize,
    pub transform: Transform,
}

#[derive(Clone, Debug)]
pub struct CellLibrary {
    pub name: String,
    pub cells: Vec<Cell>,
    /// (inputs, NPN-canonical function) -> cells in that class.
    index: HashMap<(usize, u64), Vec<usize>>,
}

fn transform_table(function: u64, k: usize, perm: &[usize], input_neg: u32, output_neg: bool) -> u64 {
    let mut out = 0u64;
    for m in 0..(1usize << k) {
        let mut y = 0usize;
        for (j, &p) in perm.iter().enumerate() {
            if ((m >> p) & 1 == 1) != ((input_neg >> j) & 1 == 1) {
                y |= 1 << j;
            }
        }
        if ((function >> y) & 1 == 1) != output_neg {
            out |= 1 << m;
        }
    }
    out
}

fn permutations(k: usize) -> Vec<Vec<usize>> {
    fn rec(acc: &mut Vec<Vec<usize>>, cur: &mut Vec<usize>, rest: &mut Vec<usize>) {
        if rest.is_empty() {
            acc.push(cur.clone());
            return;
        }
        for i in 0..rest.len() {
            let v = rest.remove(i);
            cur.push(v);
            rec(acc, cur, rest);
            cur.pop();
            rest.insert(i, v);
        }
    }
    let mut acc = Vec::new();
    rec(&mut acc, &mut Vec::new(), &mut (0..k).collect());
    acc
}

/// NPN-canonical representative: the minimum value over all input
/// permutations and input/output negations.
pub fn npn_canonical(function: u64, k: usize) -> u64 {
    let mut best = u64::MAX;
    for perm in permutations(k) {
        for input_neg in 0..(1u32 << k) {
            for output_neg in [false, true] {
                let t = transform_table(function, k, &perm, input_neg, output_neg);
                best = best.min(t);
            }
        }
    }
    best
}

impl CellLibrary {
    pub fn new(name: impl Into<String>, cells: Vec<Cell>) -> Result<CellLibrary> {
        let mut seen = std::collections::HashSet::new();
        for cell in &cells {
            if !seen.insert(cell.name.clone()) {
                return Err(Error::format(format!("duplicate cell name `{}`", cell.name)));
            }
            let k = cell.inputs();
            if k == 0 || k > MAX_CELL_PINS {
                return Err(Error::format(format!(
                    "cell `{}`: pin count must be 1..={MAX_CELL_PINS}",
                    cell.name
                )));
            }
            if !(cell.area > 0.0) {
                return Err(Error::format(format!(
                    "cell `{}`: area must be positive",
                    cell.name
                )));
            }
            if cell.pin_delays.iter().any(|d| !(*d >= 0.0)) {
                return Err(Error::format(format!(
                    "cell `{}`: pin delays must be non-negative",
                    cell.name
                )));
            }
            if cell.function >> (1u64 << k) != 0 && k < 6 {
                return Err(Error::format(format!(
                    "cell `{}`: function wider than 2^{k} bits",
                    cell.name
                )));
            }
        }
        if !cells
            .iter()
            .any(|c| c.inputs() == 1 && c.function == INV_TT)
        {
            return Err(Error::format("library has no INV cell"));
        }
        let nand2_class = npn_canonical(NAND2_TT, 2);
        if !cells
            .iter()
            .any(|c| c.inputs() == 2 && npn_canonical(c.function, 2) == nand2_class)
        {
            return Err(Error::format("library has no NAND2-equivalent cell"));
        }
        let mut index: HashMap<(usize, u64), Vec<usize>> = HashMap::new();
        for (i, cell) in cells.iter().enumerate() {
            index
                .entry((cell.inputs(), npn_canonical(cell.function, cell.inputs())))
                .or_default()
                .push(i);
        }
        Ok(CellLibrary {
            name: name.into(),
            cells,
            index,
        })
    }

    /// Index of the INV cell (guaranteed present).
    pub fn inv(&self) -> usize {
        self.cells
            .iter()
            .position(|c| c.inputs() == 1 && c.function == INV_TT)
            .unwrap()
    }

    pub fn cell_by_name(&self, name: &str) -> Option<&Cell> {
        self.cells.iter().find(|c| c.name == name)
    }

    /// All cells that can realize `function` (untiled, over `k` support
    /// variables), each with a concrete witnessing transform.
    pub fn matches(&self, function: u64, k: usize) -> Vec<CellMatch> {
        if k == 0 || k > MAX_CELL_PINS {
            return Vec::new();
        }
        let canon = npn_canonical(function, k);
        let Some(candidates) = self.index.get(&(k, canon)) else {
            return Vec::new();
        };
        let mut out = Vec::new();
        'cells: for &ci in candidates {
            let cell = &self.cells[ci];
            for perm in permutations(k) {
                for input_neg in 0..(1u32 << k) {
                    for output_neg in [false, true] {
                        if transform_table(cell.function, k, &perm, input_neg, output_neg)
                            == function
                        {
                            out.push(CellMatch {
                                cell: ci,
                                transform: Transform {
                                    perm,
                                    input_neg,
                                    output_neg,
                                },
                            });
                            continue 'cells;
                        }
                    }
                }
            }
            unreachable!("same NPN class implies a transform exists");
        }
        out
    }
}

// ------------------------------------------------------------ JSON I/O

pub fn read_library(text: &str) -> Result<CellLibrary> {
    let v: serde_json::Value = serde_json::from_str(text)
        .map_err(|e| Error::format(format!("library JSON: {e}")))?;
    let name = v
        .get("name")
        .and_then(|n| n.as_str())
        .ok_or_else(|| Error::format("library missing `name`"))?;
    let cells_v = v
        .get("cells")
        .and_then(|c| c.as_array())
        .ok_or_else(|| Error::format("library missing `cells` array"))?;
    let mut cells = Vec::new();
    for cv in cells_v {
        let get = |key: &str| {
            cv.get(key)
                .ok_or_else(|| Error::format(format!("cell missing `{key}`")))
        };
        let cname = get("name")?
            .as_str()
            .ok_or_else(|| Error::format("cell `name` must be a string"))?;
        let inputs = get("inputs")?
            .as_u64()
            .ok_or_else(|| Error::format("cell `inputs` must be an integer"))?
            as usize;
        let fstr = get("function")?
            .as_str()
            .ok_or_else(|| Error::format("cell `function` must be a hex string"))?;
        let function = u64::from_str_radix(fstr.trim_start_matches("0x"), 16)
            .map_err(|_| Error::format(format!("cell `{cname}`: malformed function `{fstr}`")))?;
        let area = get("area")?
            .as_f64()
            .ok_or_else(|| Error::format("cell `area` must be a number"))?;
        let delays = get("pin_delays")?
            .as_array()
            .ok_or_else(|| Error::format("cell `pin_delays` must be an array"))?;
        let pin_delays: Vec<f64> = delays
            .iter()
            .map(|d| {
                d.as_f64()
                    .ok_or_else(|| Error::format("pin delay must be a number"))
            })
            .collect::<Result<_>>()?;
        if pin_delays.len() != inputs {
            return Err(Error::format(format!(
                "cell `{cname}`: {inputs} inputs but {} pin delays",
                pin_delays.len()
            )));
        }
        cells.push(Cell {
            name: cname.to_string(),
            function,
            area,
            pin_delays,
        });
    }
    CellLibrary::new(name, cells)
}

pub fn write_library(lib: &CellLibrary) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "{{");
    let _ = writeln!(s, "  \"name\": {},", serde_json::Value::from(lib.name.clone()));
    let _ = writeln!(s, "  \"cells\": [");
    for (i, cell) in lib.cells.iter().enumerate() {
        let delays: Vec<String> = cell.pin_delays.iter().map(|d| format!("{d:?}")).collect();
        let comma = if i + 1 < lib.cells.len() { "," } else { "" };
        let _ = writeln!(
            s,
            "    {{\"name\": {}, \"inputs\": {}, \"function\": \"0x{:x}\", \"area\": {:?}, \"pin_delays\": [{}]}}{comma}",
            serde_json::Value::from(cell.name.clone()),
            cell.inputs(),
            cell.function,
            cell.area,
            delays.join(", ")
        );
    }
    let _ = writeln!(s, "  ]");
    let _ = writeln!(s, "}}");
    s
}

/// The bundled 12-cell mini library. Area and delay values are invented
/// configuration, roughly ordered by transistor count.
pub fn mini_library() -> CellLibrary {
    read_library(include_str!("../../data/mini_lib.json")).expect("bundled library is valid")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ir::GateType;

    #[test]
    fn bundled_library_loads_and_round_trips() {
        let lib = mini_library();
        assert_eq!(lib.cells.len(), 12);
        let text = include_str!("../../data/mini_lib.json");
        assert_eq!(write_library(&lib), text);
        // bundled functions agree with the canonical gate tables
        for (name, gate) in [
            ("INV", GateType::Not),
            ("NAND2", GateType::Nand2),
            ("XOR2", GateType::Xor2),
            ("MUX21", GateType::Mux21),
            ("AOI21", GateType::Aoi21),
            ("OAI21", GateType::Oai21),
            ("MAJ3", GateType::Maj3),
        ] {
            let cell = lib.cell_by_name(name).unwrap();
            assert_eq!(cell.tiled(), gate.canonical_tt().unwrap(), "{name}");
        }
    }

    #[test]
    fn completeness_checks() {
        let nand = Cell {
            name: "NAND2".into(),
            function: NAND2_TT,
            area: 1.33,
            pin_delays: vec![1.0, 1.0],
        };
        let inv = Cell {
            name: "INV".into(),
            function: INV_TT,
            area: 1.0,
            pin_delays: vec![1.0],
        };
        assert!(CellLibrary::new("no-inv", vec![nand.clone()]).is_err());
        assert!(CellLibrary::new("no-nand", vec![inv.clone()]).is_err());
        assert!(CellLibrary::new("ok", vec![inv.clone(), nand.clone()]).is_ok());
        let mut dup = inv.clone();
        dup.area = 2.0;
        assert!(CellLibrary::new("dup", vec![inv, dup, nand]).is_err());
    }

    #[test]
    fn npn_matching_realizes_functions() {
        let lib = mini_library();
        // AND2 = NAND2 with output negated, among others
        for m in lib.matches(0x8, 2) {
            let cell = &lib.cells[m.cell];
            assert_eq!(
                transform_table(
                    cell.function,
                    2,
                    &m.transform.perm,
                    m.transform.input_neg,
                    m.transform.output_neg
                ),
                0x8
            );
        }
        assert!(!lib.matches(0x8, 2).is_empty());
        // 3-input parity is not in the library
        assert!(lib.matches(0x96, 3).is_empty());
    }
}
