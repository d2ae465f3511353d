//! Cut-based standard-cell mapping for the ASIC backend.
//!
//! Every gate node gets candidate realizations from its ≤4-feasible
//! cuts: each cut function (compressed to its true support) is matched
//! against the library's NPN index, with negations realized by inverter
//! insertion. A choose phase picks the cheapest candidate per node in
//! area or delay terms, and a cover phase traces from the POs and emits
//! one cell per chosen cut. Nodes with no matching cut fall back to a
//! node-wise Shannon decomposition over INV/NAND2-class cells.

use super::cell::{CellLibrary, CellMatch};
use super::cuts::{enumerate_cuts, Cut, DEFAULT_CUT_LIMIT};
use crate::error::{Error, Result};
use crate::ir::{Circuit, GateType, LogicType, NETWORK_TYPES};
use crate::sim::check_equivalence;
use crate::tt;
use std::collections::HashMap;

pub const ASIC_CUT_K: usize = 4;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum AsicMode {
    Area,
    Delay,
}

impl AsicMode {
    pub fn name(self) -> &'static str {
        match self {
            AsicMode::Area => "area",
            AsicMode::Delay => "delay",
        }
    }

    pub fn from_name(s: &str) -> Result<AsicMode> {
        match s {
            "area" => Ok(AsicMode::Area),
            "delay" => Ok(AsicMode::Delay),
            other => Err(Error::usage(format!("unknown ASIC mapping mode `{other}`"))),
        }
    }
}

/// One way to realize a node.
enum Candidate {
    /// The node is a constant.
    Const(bool),
    /// The node equals another node's signal (buffers, vacuous cuts).
    Alias(u32),
    /// A library cell over the cut's support leaves.
    Cell { leaves: Vec<u32>, m: CellMatch },
}

pub fn map_asic(c: &Circuit, lib: &CellLibrary, mode: AsicMode) -> Result<Circuit> {
    if !NETWORK_TYPES.contains(&c.logic_type) {
        return Err(Error::usage(format!(
            "ASIC mapping requires one of the six network types, got {}",
            c.logic_type
        )));
    }
    let cuts = enumerate_cuts(c, ASIC_CUT_K, DEFAULT_CUT_LIMIT)?;
    let order = c.topo_order()?;
    let inv = &lib.cells[lib.inv()];
    let (inv_area, inv_delay) = (inv.area, inv.pin_delays[0]);

    // candidate generation, memoizing NPN matches per cut function
    let mut match_memo: HashMap<(usize, u64), Vec<CellMatch>> = HashMap::new();
    let mut candidates: Vec<Vec<Candidate>> = Vec::with_capacity(c.len());
    for i in 0..c.len() as u32 {
        let node = c.node(i);
        let mut list = Vec::new();
        if !matches!(
            node.gate,
            GateType::Pi | GateType::Po | GateType::Const0 | GateType::Const1
        ) {
            for cut in &cuts[i as usize] {
                if cut.is_trivial(i) {
                    continue;
                }
                list.extend(cut_candidates(cut, lib, &mut match_memo));
            }
        }
        candidates.push(list);
    }

    // choose phase: cheapest candidate per node, bottom-up
    let mut cost: Vec<f64> = vec![0.0; c.len()];
    let mut chosen: Vec<Option<usize>> = vec![None; c.len()];
    for &i in &order {
        let node = c.node(i);
        if matches!(
            node.gate,
            GateType::Pi | GateType::Po | GateType::Const0 | GateType::Const1
        ) {
            continue;
        }
        let mut best: Option<(f64, usize)> = None;
        for (ci, cand) in candidates[i as usize].iter().enumerate() {
            let estimate = match cand {
                Candidate::Const(_) => 0.0,
                Candidate::Alias(l) => cost[*l as usize],
                Candidate::Cell { leaves, m } => {
                    let cell = &lib.cells[m.cell];
                    match mode {
                        AsicMode::Area => {
                            let negs = m.transform.input_neg.count_ones() as f64
                                + if m.transform.output_neg { 1.0 } else { 0.0 };
                            cell.area
                                + negs * inv_area
                                + leaves.iter().map(|&l| cost[l as usize]).sum::<f64>()
                        }
                        AsicMode::Delay => {
                            let mut arr: f64 = 0.0;
                            for (pin, &p) in m.transform.perm.iter().enumerate() {
                                let leaf = leaves[p];
                                let extra = if (m.transform.input_neg >> pin) & 1 == 1 {
                                    inv_delay
                                } else {
                                    0.0
                                };
                                arr = arr
                                    .max(cost[leaf as usize] + extra + cell.pin_delays[pin]);
                            }
                            if m.transform.output_neg {
                                arr += inv_delay;
                            }
                            arr
                        }
                    }
                }
            };
            if best.is_none() || estimate < best.unwrap().0 {
                best = Some((estimate, ci));
            }
        }
        if let Some((estimate, ci)) = best {
            chosen[i as usize] = Some(ci);
            cost[i as usize] = estimate;
        } else {
            // node-wise INV/NAND2 fallback; crude fixed estimate
            cost[i as usize] = 8.0 * inv_area
                + node
                    .fanins
                    .iter()
                    .map(|&f| cost[f as usize])
                    .fold(0.0, f64::max);
        }
    }

    // cover phase
    let mut needed = vec![false; c.len()];
    let mut stack: Vec<u32> = c.pos().iter().map(|&p| c.node(p).fanins[0]).collect();
    while let Some(i) = stack.pop() {
        if needed[i as usize] {
            continue;
        }
        needed[i as usize] = true;
        match chosen[i as usize].map(|ci| &candidates[i as usize][ci]) {
            Some(Candidate::Const(_)) => {}
            Some(Candidate::Alias(l)) => stack.push(*l),
            Some(Candidate::Cell { leaves, .. }) => stack.extend(leaves.iter().copied()),
            None => stack.extend(c.node(i).fanins.iter().copied()),
        }
    }

    let mut emitter = Emitter {
        out: Circuit::new(LogicType::AsicNetlist, c.name.clone()),
        lib,
        inv_cache: HashMap::new(),
        nand_match: lib
            .matches(0b0111, 2)
            .into_iter()
            .min_by(|a, b| {
                lib.cells[a.cell]
                    .area
                    .partial_cmp(&lib.cells[b.cell].area)
                    .unwrap()
            })
            .expect("library completeness guarantees a NAND2 class cell"),
    };
    let mut map: HashMap<u32, u32> = HashMap::new();
    for &i in &order {
        let node = c.node(i);
        match node.gate {
            GateType::Pi => {
                map.insert(i, emitter.out.add_pi(node.name.clone()));
            }
            GateType::Po => {
                emitter
                    .out
                    .add_po(map[&node.fanins[0]], node.name.clone());
            }
            GateType::Const0 if needed[i as usize] => {
                map.insert(i, emitter.out.add_const(false));
            }
            GateType::Const1 if needed[i as usize] => {
                map.insert(i, emitter.out.add_const(true));
            }
            _ if needed[i as usize] => {
                let idx = match chosen[i as usize].map(|ci| &candidates[i as usize][ci]) {
                    Some(Candidate::Const(v)) => emitter.out.add_const(*v),
                    Some(Candidate::Alias(l)) => map[l],
                    Some(Candidate::Cell { leaves, m }) => {
                        let mapped: Vec<u32> = leaves.iter().map(|l| map[l]).collect();
                        emitter.instantiate(&mapped, m)?
                    }
                    None => {
                        let fanins: Vec<u32> =
                            node.fanins.iter().map(|f| map[f]).collect();
                        emitter.synth(node.tt, node.arity(), &fanins)?
                    }
                };
                map.insert(i, idx);
            }
            _ => {}
        }
    }
    let out = emitter.out;
    match check_equivalence(c, &out, 64)? {
        v if v.holds() => Ok(out),
        _ => Err(Error::Verification(
            "ASIC mapping changed the function".into(),
        )),
    }
}

/// Compresses the cut function to its support and looks it up in the
/// library; vacuous functions become constants or aliases.
fn cut_candidates(
    cut: &Cut,
    lib: &CellLibrary,
    memo: &mut HashMap<(usize, u64), Vec<CellMatch>>,
) -> Vec<Candidate> {
    let k = cut.leaves.len();
    let (value, m, support) = tt::compress(cut.tt, k);
    let value = value & low_mask(m);
    if m == 0 {
        return vec![Candidate::Const(value & 1 == 1)];
    }
    let leaves: Vec<u32> = support.iter().map(|&s| cut.leaves[s]).collect();
    if m == 1 && value == 0b10 {
        return vec![Candidate::Alias(leaves[0])];
    }
    let matches = memo
        .entry((m, value))
        .or_insert_with(|| lib.matches(value, m))
        .clone();
    matches
        .into_iter()
        .map(|m| Candidate::Cell {
            leaves: leaves.clone(),
            m,
        })
        .collect()
}

fn low_mask(k: usize) -> u64 {
    if k >= 6 {
        u64::MAX
    } else {
        (1u64 << (1usize << k)) - 1
    }
}

struct Emitter<'a> {
    out: Circuit,
    lib: &'a CellLibrary,
    inv_cache: HashMap<u32, u32>,
    nand_match: CellMatch,
}

impl<'a> Emitter<'a> {
    fn invert(&mut self, idx: u32) -> Result<u32> {
        if let Some(&n) = self.inv_cache.get(&idx) {
            return Ok(n);
        }
        let inv = &self.lib.cells[self.lib.inv()];
        let n = self
            .out
            .add_cell(vec![idx], inv.function, inv.name.clone())?;
        self.inv_cache.insert(idx, n);
        Ok(n)
    }

    /// Emits one cell instance plus the inverters its transform needs.
    fn instantiate(&mut self, leaves: &[u32], m: &CellMatch) -> Result<u32> {
        let cell = &self.lib.cells[m.cell];
        let mut fanins = Vec::with_capacity(cell.inputs());
        for (pin, &p) in m.transform.perm.iter().enumerate() {
            let mut s = leaves[p];
            if (m.transform.input_neg >> pin) & 1 == 1 {
                s = self.invert(s)?;
            }
            fanins.push(s);
        }
        let mut idx = self
            .out
            .add_cell(fanins, cell.function, cell.name.clone())?;
        if m.transform.output_neg {
            idx = self.invert(idx)?;
        }
        Ok(idx)
    }

    /// Shannon-decomposes an arbitrary local function into library
    /// cells; always terminates because every ≤2-input non-degenerate
    /// function outside the XOR class matches the mandatory NAND2-class
    /// cell, and AND/OR primitives cover the recursion.
    fn synth(&mut self, table: u64, k: usize, fanins: &[u32]) -> Result<u32> {
        let (value, m, support) = tt::compress(table, k);
        let value = value & low_mask(m);
        if m == 0 {
            return Ok(self.out.add_const(value & 1 == 1));
        }
        let leaves: Vec<u32> = support.iter().map(|&s| fanins[s]).collect();
        if m == 1 {
            return if value == 0b10 {
                Ok(leaves[0])
            } else {
                self.invert(leaves[0])
            };
        }
        if let Some(best) = self
            .lib
            .matches(value, m)
            .into_iter()
            .min_by(|a, b| {
                self.lib.cells[a.cell]
                    .area
                    .partial_cmp(&self.lib.cells[b.cell].area)
                    .unwrap()
            })
        {
            return self.instantiate(&leaves, &best);
        }
        // f = (~x & f0) | (x & f1) = NAND(NAND(~x, f0), NAND(x, f1))
        let top = m - 1;
        let tiled = tt::tile(value, m);
        let cof0 = cofactor_u64(tiled, m, top, false);
        let cof1 = cofactor_u64(tiled, m, top, true);
        let x = leaves[top];
        let n0 = self.synth(cof0, m, &leaves)?;
        let n1 = self.synth(cof1, m, &leaves)?;
        let nx = self.invert(x)?;
        let a = self.nand(nx, n0)?;
        let b = self.nand(x, n1)?;
        self.nand(a, b)
    }

    fn nand(&mut self, a: u32, b: u32) -> Result<u32> {
        let m = self.nand_match.clone();
        self.instantiate(&[a, b], &m)
    }
}

/// Cofactor of a tiled k-var table with respect to variable `i`.
fn cofactor_u64(tiled: u64, k: usize, i: usize, value: bool) -> u64 {
    tt::from_fn(k, |j| {
        let idx = if value { j | (1 << i) } else { j & !(1 << i) };
        (tiled >> idx) & 1 == 1
    })
}
